#ifndef QLOC_ANALYSIS_HPP_
#define QLOC_ANALYSIS_HPP_

#include <cstdint>
#include <vector>

#include <json.hpp>

#include "qloc/eigensolver.hpp"
#include "qloc/grid.hpp"
#include "qloc/heat.hpp"

namespace qloc {

struct ScalingRow {
    double parameter = 0.0;
    double measured = 0.0;
    double predicted = 0.0;
    double ratio = 0.0;  // measured / predicted
};

struct ScalingTable {
    std::vector<ScalingRow> rows;  // sorted by parameter
    double slope = 0.0;
    double intercept = 0.0;
    double fit_residual = 0.0;
    nlohmann::json metadata;  // h, t, K, seeds, per-row extras
};

struct LocalizationEntry {
    int k = 0;
    double mu = 0.0;
    double participation_area = 0.0;  // 1 / sum phi^4 h^2
    double sup_norm = 0.0;
    Point max_location;
    bool localized = false;  // participation_area < theta * |Omega_h|
};

struct LocalizationReport {
    std::vector<LocalizationEntry> entries;
    double theta = 0.1;
    double domain_area = 0.0;  // N h^2
    int lowest_localized = -1;
};

LocalizationReport localization_report(const Spectrum& spectrum, const GridMask& mask,
                                       double theta = 0.1);

// ---- cone -------------------------------------------------------------------

struct ConeOptions {
    double t = 0.005;
    double h = 1.0 / 128;
    bool richardson = true;  // also run at h/2
    double tol = 1e-8;
    std::uint64_t seed = 1;
};

struct ConeResult {
    // rows: parameter = alpha, measured = Q_apex/Q_interior, predicted = 2 pi / alpha
    ScalingTable coarse;
    ScalingTable fine;  // empty unless richardson
    double slope_agreement = 0.0;  // |slope_h - slope_h/2| / |slope_h/2|
};

// One wedge per opening angle; side length scales with sqrt(t)/sin(alpha/2) so
// a deep-interior reference point at distance >= 3 sqrt(t) from the boundary
// exists. Table slope = log-log slope of Q_apex vs alpha.
ConeResult cone_experiment(const std::vector<double>& angles, const ConeOptions& opt);

// ---- slit -------------------------------------------------------------------

// The corridor between the slits leaks only through its ends, at rate
// ~ pi^2/slit_length^2; at t = 1 the trapped mass is O(1) only when the slits
// are several units long, hence the elongated default box.
struct SlitOptions {
    double h = 1.0 / 128;  // delta = 0.05 needs >= 6 cells across the corridor
    double box_width = 8.0;
    double box_height = 1.0;
    double slit_length = 6.0;
    double slit_thickness = 0.05;
    long n_walks = 20000;  // walker stay-probability sample count; 0 disables
    double tol = 1e-8;
    std::uint64_t seed = 1;
};

struct SlitResult {
    // rows: parameter = gap, measured = Q(1, center), predicted = 1/gap
    ScalingTable table;           // slope = LS slope of Q vs 1/gap
    std::vector<double> stay_probability;  // per gap, walkers still in R at t=1
};

// t = 1 throughout.
SlitResult slit_experiment(const std::vector<double>& gaps, const SlitOptions& opt);

// ---- disk chain -------------------------------------------------------------

struct DiskChainOptions {
    int n_disks = 5;
    double h = 1.0 / 64;
    double neck_floor = 1.0 / 32;
    double r0 = 2.0;
    double neck_length = 1.2;
    double t = 1.0;
    double tol = 1e-8;
    std::uint64_t seed = 1;
};

struct DiskChainResult {
    // rows: parameter = n (ball index), measured = S_n, predicted = S_1 2^{n-1};
    // slope = LS slope of log2 S_n vs n over n >= 1
    ScalingTable table;
    std::vector<double> chi_norm;       // ||chi_n||_{L2} per ball, n = 0..D-1
    std::vector<double> heat_min;       // min over ball n of e^{-tL} chi_n
    std::vector<double> chain_constant; // ||chi_n|| 2^n per ball (the proof's c)
};

DiskChainResult disk_chain_experiment(const DiskChainOptions& opt);

// ---- non-localization -------------------------------------------------------

struct NonLocalizationReport {
    int n_interior = 0;
    int n_failed = 0;
    double worst_scaled = 0.0;  // max |8 pi t Q - 1| over interior cells
    double eps = 0.15;
    // pointwise cap per low mode (mu_k <= 1/t): max phi_k^2 vs e^{2 mu_k t} max Q
    std::vector<double> mode_bound;
    bool passed = false;
};

// Checks 8 pi t Q(t, x) in [1-eps, 1+eps] for all cells at boundary distance
// >= interior_margin; requires interior_margin >= 3 sqrt(t).
NonLocalizationReport non_localization_check(const Spectrum& spectrum, const GridMask& mask,
                                             double t, double interior_margin,
                                             double eps = 0.15);

nlohmann::json scaling_table_to_json(const ScalingTable& table);
nlohmann::json localization_report_to_json(const LocalizationReport& report);
nlohmann::json non_localization_to_json(const NonLocalizationReport& report);

// least squares y = slope x + intercept
void linear_fit(const std::vector<double>& x, const std::vector<double>& y, double& slope,
                double& intercept, double& rms_residual);

}  // namespace qloc

#endif
