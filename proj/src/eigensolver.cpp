#include "qloc/eigensolver.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "qloc/errors.hpp"
#include "qloc/rng.hpp"

namespace qloc {

namespace {

constexpr double kPi = 3.14159265358979323846;

void fix_sign(Eigen::Ref<Eigen::VectorXd> v) {
    int arg = 0;
    double best = -1.0;
    for (int i = 0; i < v.size(); ++i) {
        const double a = std::abs(v[i]);
        if (a > best) {  // strict: ties keep the lowest index
            best = a;
            arg = i;
        }
    }
    if (v[arg] < 0) v = -v;
}

// CG for (L + sI) x = b, s > 0 so the system is SPD.
void shifted_cg(const NeumannOperator& op, double s, const Eigen::VectorXd& b,
                Eigen::VectorXd& x, double rel_tol, int max_cg) {
    const int n = op.N;
    x.setZero(n);
    Eigen::VectorXd r = b, p = b, ap(n);
    double rr = r.squaredNorm();
    const double stop = rel_tol * rel_tol * b.squaredNorm();
    for (int it = 0; it < max_cg && rr > stop; ++it) {
        op.apply(p.data(), ap.data());
        ap += s * p;
        const double alpha = rr / p.dot(ap);
        x += alpha * p;
        r -= alpha * ap;
        const double rr_new = r.squaredNorm();
        p = r + (rr_new / rr) * p;
        rr = rr_new;
    }
}

Spectrum finalize(const NeumannOperator& op, std::vector<double> mu, Eigen::MatrixXd phi) {
    // sort ascending, normalize to L2(h^2), fix signs, record residuals
    const int K = static_cast<int>(mu.size());
    std::vector<int> order(K);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return mu[a] < mu[b]; });

    Spectrum sp;
    sp.K = K;
    sp.cell_area = op.h2;
    sp.mu.resize(K);
    sp.phi.resize(phi.rows(), K);
    sp.residual_norms.resize(K);
    const double h = std::sqrt(op.h2);
    Eigen::VectorXd tmp(op.N);
    for (int k = 0; k < K; ++k) {
        sp.mu[k] = mu[order[k]];
        Eigen::VectorXd v = phi.col(order[k]);
        v /= (v.norm() * h);  // sum v^2 h^2 = 1
        fix_sign(v);
        sp.phi.col(k) = v;
        op.apply(v.data(), tmp.data());
        tmp -= sp.mu[k] * v;
        sp.residual_norms[k] = tmp.norm() * h;  // L2(h^2) norm, v has norm 1/h
    }
    return sp;
}

}  // namespace

Spectrum dense_oracle(const NeumannOperator& op) {
    if (op.N > 4096)
        throw TooLargeForDense("N = " + std::to_string(op.N) + " exceeds 4096");
    Eigen::MatrixXd L = Eigen::MatrixXd::Zero(op.N, op.N);
    for (int i = 0; i < op.N; ++i)
        for (std::int64_t k = op.row_ptr[i]; k < op.row_ptr[i + 1]; ++k)
            L(i, op.col[k]) = op.val[k];
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(L);
    std::vector<double> mu(es.eigenvalues().data(), es.eigenvalues().data() + op.N);
    return finalize(op, std::move(mu), es.eigenvectors());
}

Spectrum lowest_eigenpairs(const NeumannOperator& op, int K, double tol, int max_iter,
                           std::uint64_t seed) {
    const int n = op.N;
    if (K < 1 || K > n)
        throw KExceedsN("K = " + std::to_string(K) + ", N = " + std::to_string(n));
    if (!(tol > 0)) throw InvalidSpec("tol");

    const double h = std::sqrt(op.h2);
    Spectrum sp;
    sp.cell_area = op.h2;
    Eigen::VectorXd ones = Eigen::VectorXd::Constant(n, 1.0 / (std::sqrt(double(n)) * h));
    if (K == 1) {
        sp.K = 1;
        sp.mu = {0.0};
        sp.phi = ones;
        sp.residual_norms = {0.0};
        return sp;
    }

    const int nev = K - 1;  // beyond the deflated constant mode
    const double gersh = op.max_row_sum_abs();
    // Weyl-scale shift keeps the wanted pairs extreme after inversion
    const double area = n * op.h2;
    double shift = std::max(4.0 * kPi * K / area, gersh * 1e-10);
    shift = std::min(shift, gersh);
    // ~ (1/2) sqrt(cond) ln(2/eps) with headroom
    const int max_cg =
        15 * static_cast<int>(std::ceil(std::sqrt(gersh / shift + 1.0))) + 50;

    const int m_max = max_iter > 0
                          ? std::min(n - 1, max_iter)
                          : std::min(n - 1, std::max({240, 3 * nev + 120}));
    if (m_max < nev)
        throw NoConvergence("max_iter " + std::to_string(m_max) +
                            " below requested pair count");

    Eigen::MatrixXd V(n, m_max + 1);
    Eigen::MatrixXd H = Eigen::MatrixXd::Zero(m_max + 1, m_max);
    const Eigen::VectorXd e = Eigen::VectorXd::Constant(n, 1.0 / std::sqrt(double(n)));

    Xoshiro256 rng(seed, 0);
    Eigen::VectorXd v0(n);
    for (int i = 0; i < n; ++i) v0[i] = rng.uniform() - 0.5;
    v0 -= e.dot(v0) * e;
    v0.normalize();
    V.col(0) = v0;

    Eigen::VectorXd w(n), coeffs;
    int m = 0;
    double attained = 1e300;
    double verify_gate = 1e300;  // throttles the exact residual verification
    int check_at = std::min(m_max, std::max(nev + 10, 2 * nev));
    while (m < m_max) {
        // w = (L + shift)^{-1} v_m, kept orthogonal to the constant kernel vector
        shifted_cg(op, shift, V.col(m), w, 1e-12, max_cg);
        w -= e.dot(w) * e;
        // full reorthogonalization, two passes
        coeffs = V.leftCols(m + 1).transpose() * w;
        w.noalias() -= V.leftCols(m + 1) * coeffs;
        Eigen::VectorXd c2 = V.leftCols(m + 1).transpose() * w;
        w.noalias() -= V.leftCols(m + 1) * c2;
        coeffs += c2;
        H.col(m).head(m + 1) = coeffs;
        const double beta = w.norm();
        ++m;
        if (beta < 1e-13) {
            // invariant subspace; restart direction
            for (int i = 0; i < n; ++i) w[i] = rng.uniform() - 0.5;
            w -= e.dot(w) * e;
            w.noalias() -= V.leftCols(m) * (V.leftCols(m).transpose() * w);
            if (w.norm() < 1e-13) break;  // space exhausted
            w.normalize();
            H(m, m - 1) = 0.0;
        } else {
            w /= beta;
            H(m, m - 1) = beta;
        }
        V.col(m) = w;

        if (m < check_at && m < m_max) continue;
        check_at = std::min(m_max, m + std::max(10, nev / 4));
        if (m < nev) continue;

        Eigen::MatrixXd Hm = H.topLeftCorner(m, m);
        Hm = 0.5 * (Hm + Hm.transpose()).eval();
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Hm);
        // largest theta of the inverted operator = smallest mu
        const double beta_m = H(m, m - 1);
        double worst_gap = 0.0;  // est residual mapped back to the L metric
        for (int i = 0; i < nev; ++i) {
            const int idx = m - 1 - i;
            const double est = std::abs(beta_m * es.eigenvectors()(m - 1, idx));
            const double theta = std::max(es.eigenvalues()[idx], 1e-300);
            const double mu_i = 1.0 / theta - shift;
            // heuristic back-map: unconverged directions sit near the shift scale
            const double mapped = est * (std::abs(mu_i) + shift) * 3.0 * shift /
                                  (tol * (1.0 + std::abs(mu_i)));
            worst_gap = std::max(worst_gap, mapped);
        }
        const bool promising = worst_gap < 1.0 && worst_gap < verify_gate;
        if (!promising && m < m_max) continue;
        verify_gate = worst_gap * 0.1;

        // verify true residuals of the candidate Ritz pairs
        Eigen::MatrixXd X = V.leftCols(m) * es.eigenvectors().rightCols(nev);
        std::vector<double> mu(nev);
        Eigen::VectorXd r(n);
        double worst = 0.0;
        bool ok = true;
        for (int i = 0; i < nev; ++i) {
            Eigen::VectorXd x = X.col(nev - 1 - i);  // ascending mu
            x.normalize();
            op.apply(x.data(), r.data());
            mu[i] = x.dot(r);
            r -= mu[i] * x;
            const double res = r.norm();
            worst = std::max(worst, res / (1.0 + std::abs(mu[i])));
            if (res > tol * (1.0 + std::abs(mu[i]))) ok = false;
            X.col(nev - 1 - i) = x;
        }
        attained = worst;
        if (ok) {
            Eigen::MatrixXd phi(n, K);
            std::vector<double> all_mu(K);
            all_mu[0] = 0.0;
            phi.col(0) = e;
            for (int i = 0; i < nev; ++i) {
                all_mu[i + 1] = std::max(mu[i], 0.0);
                phi.col(i + 1) = X.col(nev - 1 - i);
            }
            return finalize(op, std::move(all_mu), std::move(phi));
        }
    }
    throw NoConvergence("after " + std::to_string(m) + " Lanczos steps, worst relative residual " +
                        std::to_string(attained) + " vs tol " + std::to_string(tol));
}

WeylFit weyl_fit(const Spectrum& spectrum, double domain_area) {
    if (spectrum.K < 20)
        throw InsufficientModes("K = " + std::to_string(spectrum.K) + " < 20");
    const int lo = spectrum.K / 2;
    const int hi = spectrum.K;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const int n = hi - lo;
    for (int k = lo; k < hi; ++k) {
        sx += k;
        sy += spectrum.mu[k];
        sxx += double(k) * k;
        sxy += double(k) * spectrum.mu[k];
    }
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    const double icept = (sy - slope * sx) / n;
    double rss = 0;
    for (int k = lo; k < hi; ++k) {
        const double r = spectrum.mu[k] - (slope * k + icept);
        rss += r * r;
    }
    WeylFit f;
    f.fitted_c = slope;
    f.predicted_c = 4.0 * kPi / domain_area;
    f.rel_deviation = std::abs(f.fitted_c - f.predicted_c) / f.predicted_c;
    f.fit_residual = std::sqrt(rss / n);
    return f;
}

double spectral_slope_estimate(const Spectrum& spectrum) {
    const int n = static_cast<int>(spectrum.phi.rows());
    const double fallback = 4.0 * kPi / (n * spectrum.cell_area);
    if (spectrum.K < 8) return fallback;
    const int lo = spectrum.K / 2;
    const double slope =
        (spectrum.mu[spectrum.K - 1] - spectrum.mu[lo]) / double(spectrum.K - 1 - lo);
    return slope > 0 ? slope : fallback;
}

}  // namespace qloc
