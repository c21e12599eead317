#ifndef QLOC_EIGENSOLVER_HPP_
#define QLOC_EIGENSOLVER_HPP_

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "qloc/grid.hpp"

namespace qloc {

// Ascending eigenpairs of a NeumannOperator. Eigenvectors are columns of phi,
// normalized to sum phi^2 * h^2 = 1, sign-fixed so the entry of largest
// magnitude is positive (ties -> lowest dof index wins).
struct Spectrum {
    int K = 0;
    std::vector<double> mu;
    Eigen::MatrixXd phi;  // N x K
    double cell_area = 0.0;
    std::vector<double> residual_norms;  // ||L phi - mu phi|| in the L2(h^2) norm
};

// Lowest K eigenpairs by Lanczos with full reorthogonalization. The constant
// kernel vector is deflated explicitly and returned as the exact pair
// (0, 1/sqrt(N h^2)); the remaining pairs are computed on a shift-inverted
// operator (L + sI)^{-1} applied by conjugate gradients, so no sparse
// factorization is ever formed. Deterministic given seed.
// max_iter = 0 picks an automatic cap. Throws KExceedsN / NoConvergence.
Spectrum lowest_eigenpairs(const NeumannOperator& op, int K, double tol = 1e-8,
                           int max_iter = 0, std::uint64_t seed = 1);

// Full spectrum by dense symmetric eigendecomposition; N <= 4096 or
// TooLargeForDense. Same normalization and sign convention.
Spectrum dense_oracle(const NeumannOperator& op);

struct WeylFit {
    double fitted_c = 0.0;     // LS slope of mu_k vs k over k in [K/2, K)
    double predicted_c = 0.0;  // 4 pi / |Omega|
    double rel_deviation = 0.0;
    double fit_residual = 0.0;  // rms residual of the linear fit
};

// Requires K >= 20 computed modes, else InsufficientModes.
WeylFit weyl_fit(const Spectrum& spectrum, double domain_area);

// Slope of mu_k vs k over the top half of whatever modes are present; falls
// back to 4 pi / (N h^2) when too few modes are available. Used for spectral
// tail estimates.
double spectral_slope_estimate(const Spectrum& spectrum);

}  // namespace qloc

#endif
