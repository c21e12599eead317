#include <doctest.h>

#include <cmath>

#include "qloc/eigensolver.hpp"
#include "qloc/heat.hpp"
#include "qloc/walker.hpp"

using namespace qloc;

namespace {
PolygonDomain rect(double w, double h) {
    PolygonDomain d;
    d.outer = {{0, 0}, {w, 0}, {w, h}, {0, h}};
    finalize_domain(d);
    return d;
}

double spectral_q(const NeumannOperator& op, int x, double t) {
    const Spectrum sp = dense_oracle(op);
    HeatParams hp;
    hp.t = t;
    return concentration(sp, x, hp);
}
}  // namespace

TEST_CASE("walk endpoint law matches the dense heat row") {
    const int n = 16;
    const double h = 1.0 / n;
    const GridMask m = rasterize(rect(1, h), h);  // 1 x 16 strip
    REQUIRE(m.N == n);
    const NeumannOperator op = assemble_neumann_laplacian(m);
    const Spectrum sp = dense_oracle(op);
    const double t = 0.002;
    const int x = 3;

    HeatParams hp;
    hp.t = t;
    const ScalarField row = heat_kernel_row(sp, m, x, hp);  // density, / h^2

    const WalkerLattice lat(m);
    const long n_walks = 200000;
    std::vector<long> count(m.N, 0);
    for (long i = 0; i < n_walks; ++i) {
        Xoshiro256 rng(42, static_cast<std::uint64_t>(i));
        ++count[lat.walk(x, t, rng)];
    }
    for (int d = 0; d < m.N; ++d) {
        const double p = row.values[d] * m.cell_area();
        const double se = std::sqrt(std::max(p * (1 - p), 1e-12) / double(n_walks));
        CHECK(std::abs(double(count[d]) / double(n_walks) - p) < 5 * se + 1e-6);
    }
}

TEST_CASE("collision estimate is unbiased against the spectral value") {
    const GridMask m = rasterize(rect(1, 1), 1.0 / 8);
    const NeumannOperator op = assemble_neumann_laplacian(m);
    WalkConfig cfg;
    cfg.t = 0.05;
    cfg.n_pairs = 200000;
    cfg.seed = 7;
    cfg.x = m.deepest_dof();
    const CollisionEstimate est = collision_estimate(m, cfg);
    const double q = spectral_q(op, cfg.x, cfg.t);
    CHECK(std::abs(est.q_hat - q) < 3.5 * est.std_error);
    CHECK(est.n_pairs == cfg.n_pairs);
    CHECK(est.collisions > 0);
}

TEST_CASE("long-time estimate approaches the uniform floor") {
    const GridMask m = rasterize(rect(1, 1), 0.25);  // 16 cells
    WalkConfig cfg;
    cfg.t = 20.0;  // far past mixing: Q = 1/(N h^2) = 1
    cfg.n_pairs = 50000;
    cfg.seed = 3;
    cfg.x = 0;
    const CollisionEstimate est = collision_estimate(m, cfg);
    CHECK(std::abs(est.q_hat - 1.0) < 3.5 * est.std_error);
}

TEST_CASE("worker count never changes the estimate") {
    const GridMask m = rasterize(rect(1.5, 1), 1.0 / 8);
    WalkConfig cfg;
    cfg.t = 0.1;
    cfg.n_pairs = 30000;
    cfg.seed = 99;
    cfg.x = m.deepest_dof();
    const CollisionEstimate a = collision_estimate(m, cfg, 1);
    const CollisionEstimate b = collision_estimate(m, cfg, 3);
    const CollisionEstimate c = collision_estimate(m, cfg, 8);
    CHECK(a.collisions == b.collisions);
    CHECK(a.collisions == c.collisions);
    CHECK(a.q_hat == b.q_hat);
    CHECK(a.q_hat == c.q_hat);
}

TEST_CASE("seed changes the sample, deterministically") {
    const GridMask m = rasterize(rect(1, 1), 1.0 / 8);
    WalkConfig cfg;
    cfg.t = 0.05;
    cfg.n_pairs = 20000;
    cfg.x = 0;
    cfg.seed = 1;
    const CollisionEstimate a1 = collision_estimate(m, cfg);
    const CollisionEstimate a2 = collision_estimate(m, cfg);
    CHECK(a1.collisions == a2.collisions);
    cfg.seed = 2;
    const CollisionEstimate b = collision_estimate(m, cfg);
    CHECK(a1.collisions != b.collisions);
}

TEST_CASE("stay probability of the whole domain is one") {
    const GridMask m = rasterize(rect(1, 1), 0.25);
    const double p = stay_probability(m, 0, 0.5, m.domain, 2000, 5);
    CHECK(p == 1.0);
}

TEST_CASE("stay probability matches the heat mass in a subregion") {
    const GridMask m = rasterize(rect(2, 1), 1.0 / 8);
    const NeumannOperator op = assemble_neumann_laplacian(m);
    const Spectrum sp = dense_oracle(op);
    PolygonDomain left;
    left.outer = {{0, 0}, {1, 0}, {1, 1}, {0, 1}};
    finalize_domain(left);
    const int x = m.nearest_dof({0.5, 0.5});
    const double t = 0.3;
    HeatParams hp;
    hp.t = t;
    const ScalarField row = heat_kernel_row(sp, m, x, hp);
    const ScalarField chi = indicator(m, left);
    double expect = 0.0;
    for (int d = 0; d < m.N; ++d) expect += row.values[d] * chi.values[d] * m.cell_area();
    const long n = 100000;
    const double got = stay_probability(m, x, t, left, n, 11, 2);
    const double se = std::sqrt(expect * (1 - expect) / double(n));
    CHECK(std::abs(got - expect) < 4 * se + 1e-4);
}
