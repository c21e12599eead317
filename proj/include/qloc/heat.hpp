#ifndef QLOC_HEAT_HPP_
#define QLOC_HEAT_HPP_

#include <limits>
#include <vector>

#include "qloc/eigensolver.hpp"
#include "qloc/grid.hpp"

namespace qloc {

// Real value per included cell of a mask.
struct ScalarField {
    std::vector<double> values;
    const GridMask* mask = nullptr;
    double cell_area = 0.0;

    double mass() const;  // sum v * h^2
    double min() const;
    double max() const;
    // L2(h^2) norm
    double norm() const;
};

ScalarField make_field(const GridMask& mask, double fill = 0.0);

struct HeatParams {
    double t = 1.0;
    int K_used = 0;           // out
    double tail_bound = 0.0;  // out: truncation estimate for the computed functional
    double tail_budget = std::numeric_limits<double>::infinity();  // optional cap
};

// Truncated heat-kernel row p(t, x, .) = sum_k e^{-mu_k t} phi_k(x) phi_k(.).
ScalarField heat_kernel_row(const Spectrum& spectrum, const GridMask& mask, int x,
                            HeatParams& params);

// Q(t, x) = sum_k e^{-2 mu_k t} phi_k(x)^2.
double concentration(const Spectrum& spectrum, int x, HeatParams& params);

// Q(t, .) for every dof, fixed ascending-k summation order per dof.
ScalarField concentration_field(const Spectrum& spectrum, const GridMask& mask,
                                HeatParams& params);

struct WeightedAbsSum {
    double value = 0.0;
    double tail_bound = 0.0;
    int K_used = 0;
};

// S(x) = sum_k e^{-mu_k t} |phi_k(x)|; converges more slowly than Q.
WeightedAbsSum weighted_abs_sum(const Spectrum& spectrum, int x, double t);

// e^{-tL} field = sum_k e^{-mu_k t} <field, phi_k>_{h^2} phi_k.
ScalarField heat_apply(const Spectrum& spectrum, const ScalarField& field, double t,
                       double* tail_bound = nullptr);

// 1 on dofs whose cell centers lie in region, else 0; EmptyIndicator if none.
ScalarField indicator(const GridMask& mask, const PolygonDomain& region);

// Modes needed so the stated truncation rules hold: for Q require
// e^{-2 mu t} <= 1e-12 past the last mode; for the weighted absolute sum
// require e^{-mu t} sqrt(N) <= 1e-6. Weyl-based estimate from the mask area.
int modes_for_concentration(const GridMask& mask, double t);
int modes_for_weighted_abs(const GridMask& mask, double t);

}  // namespace qloc

#endif
