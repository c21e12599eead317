#include "qloc/heat.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "qloc/errors.hpp"

namespace qloc {

namespace {

constexpr double kPi = 3.14159265358979323846;

void require_time(double t) {
    if (!(t > 0)) throw NonPositiveTime("t = " + std::to_string(t));
}

// Geometric remainder of sum_{j>=1} e^{-rate*(mu_last + j*slope)} with per-mode
// amplitude cap `amp`; slope comes from the computed part of the spectrum.
double geometric_tail(double amp, double mu_last, double slope, double rate) {
    const double q = std::exp(-rate * std::max(slope, 1e-300));
    if (q >= 1.0) return std::numeric_limits<double>::infinity();
    return amp * std::exp(-rate * mu_last) * q / (1.0 - q);
}

void check_budget(const HeatParams& p) {
    if (p.tail_bound > p.tail_budget)
        throw TruncationTooSevere("tail_bound " + std::to_string(p.tail_bound) +
                                  " exceeds budget " + std::to_string(p.tail_budget));
}

}  // namespace

double ScalarField::mass() const {
    double s = 0.0;
    for (double v : values) s += v;
    return s * cell_area;
}

double ScalarField::min() const { return *std::min_element(values.begin(), values.end()); }
double ScalarField::max() const { return *std::max_element(values.begin(), values.end()); }

double ScalarField::norm() const {
    double s = 0.0;
    for (double v : values) s += v * v;
    return std::sqrt(s * cell_area);
}

ScalarField make_field(const GridMask& mask, double fill) {
    return ScalarField{std::vector<double>(mask.N, fill), &mask, mask.cell_area()};
}

ScalarField heat_kernel_row(const Spectrum& spectrum, const GridMask& mask, int x,
                            HeatParams& params) {
    require_time(params.t);
    if (x < 0 || x >= mask.N) throw InvalidSpec("x out of range");
    const double h = std::sqrt(spectrum.cell_area);
    params.K_used = spectrum.K;
    params.tail_bound = geometric_tail(1.0 / (h * h), spectrum.mu[spectrum.K - 1],
                                       spectral_slope_estimate(spectrum), params.t);
    check_budget(params);

    ScalarField f = make_field(mask);
    Eigen::VectorXd w(spectrum.K);
    for (int k = 0; k < spectrum.K; ++k)
        w[k] = std::exp(-spectrum.mu[k] * params.t) * spectrum.phi(x, k);
    Eigen::Map<Eigen::VectorXd>(f.values.data(), mask.N).noalias() = spectrum.phi * w;
    return f;
}

double concentration(const Spectrum& spectrum, int x, HeatParams& params) {
    require_time(params.t);
    params.K_used = spectrum.K;
    const double h2 = spectrum.cell_area;
    params.tail_bound = geometric_tail(1.0 / h2, spectrum.mu[spectrum.K - 1],
                                       spectral_slope_estimate(spectrum), 2.0 * params.t);
    check_budget(params);
    double q = 0.0;
    for (int k = 0; k < spectrum.K; ++k) {
        const double a = std::exp(-2.0 * spectrum.mu[k] * params.t);
        q += a * spectrum.phi(x, k) * spectrum.phi(x, k);
    }
    return q;
}

ScalarField concentration_field(const Spectrum& spectrum, const GridMask& mask,
                                HeatParams& params) {
    require_time(params.t);
    params.K_used = spectrum.K;
    params.tail_bound = geometric_tail(1.0 / spectrum.cell_area,
                                       spectrum.mu[spectrum.K - 1],
                                       spectral_slope_estimate(spectrum), 2.0 * params.t);
    check_budget(params);
    ScalarField f = make_field(mask);
    std::vector<double> w(spectrum.K);
    for (int k = 0; k < spectrum.K; ++k) w[k] = std::exp(-2.0 * spectrum.mu[k] * params.t);
    for (int x = 0; x < mask.N; ++x) {
        double q = 0.0;
        for (int k = 0; k < spectrum.K; ++k)  // fixed ascending-k order
            q += w[k] * spectrum.phi(x, k) * spectrum.phi(x, k);
        f.values[x] = q;
    }
    return f;
}

WeightedAbsSum weighted_abs_sum(const Spectrum& spectrum, int x, double t) {
    require_time(t);
    const double h = std::sqrt(spectrum.cell_area);
    WeightedAbsSum s;
    s.K_used = spectrum.K;
    // sup-norm cap |phi_k| <= ||phi_k||_2 = 1/h on the missing modes
    s.tail_bound = geometric_tail(1.0 / h, spectrum.mu[spectrum.K - 1],
                                  spectral_slope_estimate(spectrum), t);
    for (int k = 0; k < spectrum.K; ++k)
        s.value += std::exp(-spectrum.mu[k] * t) * std::abs(spectrum.phi(x, k));
    return s;
}

ScalarField heat_apply(const Spectrum& spectrum, const ScalarField& field, double t,
                       double* tail_bound) {
    require_time(t);
    if (!field.mask || static_cast<int>(field.values.size()) != spectrum.phi.rows())
        throw MaskMismatch("field size does not match spectrum");
    const int N = static_cast<int>(field.values.size());
    const double h2 = spectrum.cell_area;
    Eigen::Map<const Eigen::VectorXd> f(field.values.data(), N);
    Eigen::VectorXd coeff = h2 * (spectrum.phi.transpose() * f);
    for (int k = 0; k < spectrum.K; ++k) coeff[k] *= std::exp(-spectrum.mu[k] * t);
    ScalarField out = make_field(*field.mask);
    Eigen::Map<Eigen::VectorXd>(out.values.data(), N).noalias() = spectrum.phi * coeff;
    if (tail_bound)
        *tail_bound = geometric_tail(field.norm() / std::sqrt(h2),
                                     spectrum.mu[spectrum.K - 1],
                                     spectral_slope_estimate(spectrum), t);
    return out;
}

ScalarField indicator(const GridMask& mask, const PolygonDomain& region) {
    ScalarField f = make_field(mask);
    int count = 0;
    for (int d = 0; d < mask.N; ++d)
        if (contains(region, mask.dof_center(d))) {
            f.values[d] = 1.0;
            ++count;
        }
    if (count == 0) throw EmptyIndicator("region covers no cells");
    return f;
}

namespace {
int weyl_mode_count(const GridMask& mask, double mu_req) {
    const double area = mask.N * mask.cell_area();
    const int K = static_cast<int>(std::ceil(area * mu_req / (4.0 * kPi))) + 8;
    return std::clamp(K, 2, mask.N);
}
}  // namespace

int modes_for_concentration(const GridMask& mask, double t) {
    require_time(t);
    return weyl_mode_count(mask, std::log(1e12) / (2.0 * t));
}

int modes_for_weighted_abs(const GridMask& mask, double t) {
    require_time(t);
    return weyl_mode_count(mask, (std::log(1e6) + 0.5 * std::log(double(mask.N))) / t);
}

}  // namespace qloc
