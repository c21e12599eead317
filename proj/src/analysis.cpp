#include "qloc/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "qloc/errors.hpp"
#include "qloc/walker.hpp"

namespace qloc {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

void linear_fit(const std::vector<double>& x, const std::vector<double>& y, double& slope,
                double& intercept, double& rms_residual) {
    const int n = static_cast<int>(x.size());
    if (n < 2) throw InsufficientModes("linear fit needs at least 2 points");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (int i = 0; i < n; ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    intercept = (sy - slope * sx) / n;
    double rss = 0;
    for (int i = 0; i < n; ++i) {
        const double r = y[i] - slope * x[i] - intercept;
        rss += r * r;
    }
    rms_residual = std::sqrt(rss / n);
}

LocalizationReport localization_report(const Spectrum& spectrum, const GridMask& mask,
                                       double theta) {
    LocalizationReport rep;
    rep.theta = theta;
    rep.domain_area = mask.N * mask.cell_area();
    const double h2 = mask.cell_area();
    for (int k = 0; k < spectrum.K; ++k) {
        LocalizationEntry e;
        e.k = k;
        e.mu = spectrum.mu[k];
        double p4 = 0.0, sup = 0.0;
        int arg = 0;
        for (int d = 0; d < mask.N; ++d) {
            const double v = spectrum.phi(d, k);
            p4 += v * v * v * v;
            if (std::abs(v) > sup) {
                sup = std::abs(v);
                arg = d;
            }
        }
        e.participation_area = 1.0 / (p4 * h2);
        e.sup_norm = sup;
        e.max_location = mask.dof_center(arg);
        e.localized = e.participation_area < theta * rep.domain_area;
        if (e.localized && rep.lowest_localized < 0) rep.lowest_localized = k;
        rep.entries.push_back(e);
    }
    return rep;
}

namespace {

struct ConePoint {
    double alpha, q_apex, q_interior, interior_clearance;
    int K, N;
};

ConePoint cone_point(double alpha, double t, double h, double tol, std::uint64_t seed) {
    const double sqt = std::sqrt(t);
    const double side = 3.4 * sqt / std::sin(0.5 * alpha) + 3.2 * sqt;
    WedgeParams wp;
    wp.angle = alpha;
    wp.side = side;
    wp.m_arc = std::clamp(static_cast<int>(alpha * side / (2.0 * h)), 32, 1024);
    const PolygonDomain domain = build_domain(DomainSpec{wp});
    const GridMask mask = rasterize(domain, h);
    const NeumannOperator op = assemble_neumann_laplacian(mask);
    const int K = std::min(modes_for_concentration(mask, t), mask.N);
    const Spectrum sp = lowest_eigenpairs(op, K, tol, 0, seed);

    ConePoint cp;
    cp.alpha = alpha;
    cp.K = K;
    cp.N = mask.N;
    const int apex = mask.nearest_dof({0.0, 0.0});
    const int interior = mask.deepest_dof();
    cp.interior_clearance = distance_to_boundary(domain, mask.dof_center(interior));
    HeatParams hp;
    hp.t = t;
    cp.q_apex = concentration(sp, apex, hp);
    hp = HeatParams{};
    hp.t = t;
    cp.q_interior = concentration(sp, interior, hp);
    return cp;
}

ScalingTable cone_table(const std::vector<double>& angles, double t, double h, double tol,
                        std::uint64_t seed) {
    std::vector<double> sorted = angles;
    std::sort(sorted.begin(), sorted.end());
    ScalingTable table;
    std::vector<double> log_a, log_q;
    nlohmann::json extras = nlohmann::json::array();
    for (double a : sorted) {
        if (!(a > 0 && a <= kPi)) throw InvalidSpec("angle must be in (0, pi]");
        const ConePoint cp = cone_point(a, t, h, tol, seed);
        ScalingRow row;
        row.parameter = a;
        row.measured = cp.q_apex / cp.q_interior;
        row.predicted = 2.0 * kPi / a;
        row.ratio = row.measured / row.predicted;
        table.rows.push_back(row);
        log_a.push_back(std::log(a));
        log_q.push_back(std::log(cp.q_apex));
        extras.push_back({{"alpha", a},
                          {"q_apex", cp.q_apex},
                          {"q_interior", cp.q_interior},
                          {"interior_clearance", cp.interior_clearance},
                          {"K", cp.K},
                          {"N", cp.N}});
    }
    linear_fit(log_a, log_q, table.slope, table.intercept, table.fit_residual);
    table.metadata = {{"t", t}, {"h", h}, {"tol", tol}, {"seed", seed}, {"points", extras}};
    return table;
}

}  // namespace

ConeResult cone_experiment(const std::vector<double>& angles, const ConeOptions& opt) {
    if (angles.size() < 2) throw InvalidSpec("angles: need at least 2");
    ConeResult res;
    res.coarse = cone_table(angles, opt.t, opt.h, opt.tol, opt.seed);
    if (opt.richardson) {
        res.fine = cone_table(angles, opt.t, 0.5 * opt.h, opt.tol, opt.seed);
        res.slope_agreement =
            std::abs(res.coarse.slope - res.fine.slope) / std::abs(res.fine.slope);
    }
    return res;
}

SlitResult slit_experiment(const std::vector<double>& gaps, const SlitOptions& opt) {
    if (gaps.empty()) throw InvalidSpec("gaps");
    std::vector<double> sorted = gaps;
    std::sort(sorted.begin(), sorted.end());
    const double t = 1.0;

    SlitResult res;
    std::vector<double> inv_gap, q_vals;
    nlohmann::json extras = nlohmann::json::array();
    for (double gap : sorted) {
        SlitBoxParams sb;
        sb.width = opt.box_width;
        sb.height = opt.box_height;
        sb.slit_length = opt.slit_length;
        sb.slit_thickness = opt.slit_thickness;
        sb.gap = gap;
        const PolygonDomain domain = build_domain(DomainSpec{sb});
        const GridMask mask = rasterize(domain, opt.h);
        const NeumannOperator op = assemble_neumann_laplacian(mask);
        const int K = std::min(modes_for_concentration(mask, t), mask.N);
        const Spectrum sp = lowest_eigenpairs(op, K, opt.tol, 0, opt.seed);

        const Point center{0.5 * sb.width, 0.5 * sb.height};
        const int x = mask.nearest_dof(center);
        HeatParams hp;
        hp.t = t;
        const double q = concentration(sp, x, hp);

        double stay = -1.0;
        if (opt.n_walks > 0) {
            RawPolygonParams rp;
            const double x0 = 0.5 * (sb.width - sb.slit_length);
            const double x1 = x0 + sb.slit_length;
            const double ylo = 0.5 * sb.height - 0.5 * gap;
            const double yhi = ylo + gap;
            rp.outer = {{x0, ylo}, {x1, ylo}, {x1, yhi}, {x0, yhi}};
            const PolygonDomain region = build_domain(DomainSpec{rp});
            stay = stay_probability(mask, x, t, region, opt.n_walks, opt.seed);
        }
        res.stay_probability.push_back(stay);

        ScalingRow row;
        row.parameter = gap;
        row.measured = q;
        row.predicted = 1.0 / gap;
        row.ratio = q * gap;
        res.table.rows.push_back(row);
        inv_gap.push_back(1.0 / gap);
        q_vals.push_back(q);
        extras.push_back({{"gap", gap},
                          {"Q", q},
                          {"stay_probability", stay},
                          {"K", K},
                          {"N", mask.N},
                          {"tail_bound", hp.tail_bound}});
    }
    linear_fit(inv_gap, q_vals, res.table.slope, res.table.intercept,
               res.table.fit_residual);
    res.table.metadata = {{"t", t},
                          {"h", opt.h},
                          {"slit_thickness", opt.slit_thickness},
                          {"n_walks", opt.n_walks},
                          {"seed", opt.seed},
                          {"points", extras}};
    return res;
}

DiskChainResult disk_chain_experiment(const DiskChainOptions& opt) {
    if (opt.n_disks < 3) throw InvalidSpec("n_disks: need at least 3");
    DiskChainParams dc;
    dc.n_disks = opt.n_disks;
    dc.r0 = opt.r0;
    dc.neck_floor = opt.neck_floor;
    dc.neck_length = opt.neck_length;
    dc.m_poly = 256;
    const auto layout = disk_chain_layout(dc);
    // smallest disk must span >= 8 cells
    if (2.0 * layout.back().r < 8.0 * opt.h)
        throw TooCoarse("smallest disk spans fewer than 8 cells");

    const PolygonDomain domain = build_domain(DomainSpec{dc});
    const GridMask mask = rasterize(domain, opt.h, opt.neck_floor);
    const NeumannOperator op = assemble_neumann_laplacian(mask);
    const int K = std::min(modes_for_weighted_abs(mask, opt.t), mask.N);
    const Spectrum sp = lowest_eigenpairs(op, K, opt.tol, 0, opt.seed);

    DiskChainResult res;
    std::vector<double> s_vals(opt.n_disks);
    for (int n = 0; n < opt.n_disks; ++n) {
        PolygonDomain ball{disk_polygon(layout[n].cx, layout[n].r, 256), {}, {}};
        finalize_domain(ball);
        const ScalarField chi = indicator(mask, ball);
        res.chi_norm.push_back(chi.norm());
        res.chain_constant.push_back(chi.norm() * std::pow(2.0, n));
        const ScalarField heated = heat_apply(sp, chi, opt.t);
        double hmin = std::numeric_limits<double>::max();
        for (int d = 0; d < mask.N; ++d)
            if (chi.values[d] > 0.5) hmin = std::min(hmin, heated.values[d]);
        res.heat_min.push_back(hmin);
        const int center = mask.nearest_dof({layout[n].cx, 0.0});
        s_vals[n] = weighted_abs_sum(sp, center, opt.t).value;
    }

    std::vector<double> ns, log2s;
    for (int n = 1; n < opt.n_disks; ++n) {
        ScalingRow row;
        row.parameter = n;
        row.measured = s_vals[n];
        row.predicted = s_vals[1] * std::pow(2.0, n - 1);
        row.ratio = row.measured / row.predicted;
        res.table.rows.push_back(row);
        ns.push_back(n);
        log2s.push_back(std::log2(s_vals[n]));
    }
    linear_fit(ns, log2s, res.table.slope, res.table.intercept, res.table.fit_residual);
    res.table.metadata = {{"t", opt.t},      {"h", opt.h},
                          {"K", K},          {"N", mask.N},
                          {"r0", opt.r0},    {"neck_floor", opt.neck_floor},
                          {"neck_length", opt.neck_length},
                          {"seed", opt.seed},
                          {"S", s_vals},     {"chi_norm", res.chi_norm},
                          {"heat_min", res.heat_min},
                          {"warnings", mask.warnings}};
    return res;
}

NonLocalizationReport non_localization_check(const Spectrum& spectrum, const GridMask& mask,
                                             double t, double interior_margin, double eps) {
    if (!(t > 0)) throw NonPositiveTime("t = " + std::to_string(t));
    if (interior_margin < 3.0 * std::sqrt(t))
        throw InvalidSpec("interior_margin below 3 sqrt(t)");
    NonLocalizationReport rep;
    rep.eps = eps;
    HeatParams hp;
    hp.t = t;
    const ScalarField q = concentration_field(spectrum, mask, hp);
    double qmax = 0.0;
    for (int d = 0; d < mask.N; ++d) {
        qmax = std::max(qmax, q.values[d]);
        if (distance_to_boundary(mask.domain, mask.dof_center(d)) < interior_margin)
            continue;
        ++rep.n_interior;
        const double scaled = 8.0 * kPi * t * q.values[d];
        rep.worst_scaled = std::max(rep.worst_scaled, std::abs(scaled - 1.0));
        if (scaled < 1.0 - eps || scaled > 1.0 + eps) ++rep.n_failed;
    }
    if (rep.n_interior == 0) throw NoInteriorCells("no cells at the requested margin");
    for (int k = 0; k < spectrum.K; ++k) {
        if (spectrum.mu[k] > 1.0 / t) break;
        rep.mode_bound.push_back(std::exp(2.0 * spectrum.mu[k] * t) * qmax);
    }
    rep.passed = rep.n_failed == 0;
    return rep;
}

nlohmann::json scaling_table_to_json(const ScalingTable& table) {
    nlohmann::json rows = nlohmann::json::array();
    for (const ScalingRow& r : table.rows)
        rows.push_back({{"parameter", r.parameter},
                        {"measured", r.measured},
                        {"predicted", r.predicted},
                        {"ratio", r.ratio}});
    return {{"rows", rows},
            {"slope", table.slope},
            {"intercept", table.intercept},
            {"fit_residual", table.fit_residual},
            {"metadata", table.metadata}};
}

nlohmann::json localization_report_to_json(const LocalizationReport& report) {
    nlohmann::json entries = nlohmann::json::array();
    for (const auto& e : report.entries)
        entries.push_back({{"k", e.k},
                           {"mu", e.mu},
                           {"participation_area", e.participation_area},
                           {"sup_norm", e.sup_norm},
                           {"max_x", e.max_location.x},
                           {"max_y", e.max_location.y},
                           {"localized", e.localized}});
    return {{"entries", entries},
            {"theta", report.theta},
            {"domain_area", report.domain_area},
            {"lowest_localized", report.lowest_localized}};
}

nlohmann::json non_localization_to_json(const NonLocalizationReport& report) {
    return {{"n_interior", report.n_interior},
            {"n_failed", report.n_failed},
            {"worst_scaled_deviation", report.worst_scaled},
            {"eps", report.eps},
            {"mode_bound", report.mode_bound},
            {"passed", report.passed}};
}

}  // namespace qloc
