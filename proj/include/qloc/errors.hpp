#ifndef QLOC_ERRORS_HPP_
#define QLOC_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace qloc {

// Input/spec errors (CLI exit code 2)
struct InvalidSpec : std::runtime_error {
    explicit InvalidSpec(const std::string& what) : std::runtime_error("InvalidSpec: " + what) {}
};
struct GeometryDegenerate : std::runtime_error {
    explicit GeometryDegenerate(const std::string& what)
        : std::runtime_error("GeometryDegenerate: " + what) {}
};
struct TooCoarse : std::runtime_error {
    explicit TooCoarse(const std::string& what) : std::runtime_error("TooCoarse: " + what) {}
};
struct KExceedsN : std::runtime_error {
    explicit KExceedsN(const std::string& what) : std::runtime_error("KExceedsN: " + what) {}
};
struct TooLargeForDense : std::runtime_error {
    explicit TooLargeForDense(const std::string& what)
        : std::runtime_error("TooLargeForDense: " + what) {}
};
struct InsufficientModes : std::runtime_error {
    explicit InsufficientModes(const std::string& what)
        : std::runtime_error("InsufficientModes: " + what) {}
};
struct NonPositiveTime : std::runtime_error {
    explicit NonPositiveTime(const std::string& what)
        : std::runtime_error("NonPositiveTime: " + what) {}
};
struct TruncationTooSevere : std::runtime_error {
    explicit TruncationTooSevere(const std::string& what)
        : std::runtime_error("TruncationTooSevere: " + what) {}
};
struct MaskMismatch : std::runtime_error {
    explicit MaskMismatch(const std::string& what)
        : std::runtime_error("MaskMismatch: " + what) {}
};
struct EmptyIndicator : std::runtime_error {
    explicit EmptyIndicator(const std::string& what)
        : std::runtime_error("EmptyIndicator: " + what) {}
};
struct NoInteriorCells : std::runtime_error {
    explicit NoInteriorCells(const std::string& what)
        : std::runtime_error("NoInteriorCells: " + what) {}
};

// Numerical failures (CLI exit code 3)
struct NoConvergence : std::runtime_error {
    explicit NoConvergence(const std::string& what)
        : std::runtime_error("NoConvergence: " + what) {}
};
struct WalkRunaway : std::runtime_error {
    explicit WalkRunaway(const std::string& what) : std::runtime_error("WalkRunaway: " + what) {}
};

// I/O failures (CLI exit code 4)
struct IoError : std::runtime_error {
    explicit IoError(const std::string& what) : std::runtime_error("IoError: " + what) {}
};

}  // namespace qloc

#endif
