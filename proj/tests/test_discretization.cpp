#include <doctest.h>

#include <cmath>

#include "qloc/errors.hpp"
#include "qloc/grid.hpp"
#include "qloc/rng.hpp"

using namespace qloc;

namespace {
PolygonDomain rect(double w, double h) {
    PolygonDomain d;
    d.outer = {{0, 0}, {w, 0}, {w, h}, {0, h}};
    finalize_domain(d);
    return d;
}
}  // namespace

TEST_CASE("unit square rasterization counts") {
    const GridMask m = rasterize(rect(1, 1), 0.5);
    CHECK(m.N == 4);
    CHECK(m.nx == 2);
    CHECK(m.ny == 2);
    const GridMask fine = rasterize(rect(1, 1), 1.0 / 16);
    CHECK(fine.N == 256);
    CHECK(fine.discarded_cells == 0);
    // dof indices are contiguous and invertible
    for (int d = 0; d < fine.N; ++d) {
        const auto [i, j] = fine.cells[d];
        CHECK(fine.dof_at(i, j) == d);
    }
}

TEST_CASE("too coarse throws") {
    CHECK_THROWS_AS(rasterize(rect(1, 1), 2.0), TooCoarse);
}

TEST_CASE("path-graph Laplacian matches the closed form") {
    const GridMask m = rasterize(rect(2, 0.5), 0.5);  // 4 x 1 cells
    REQUIRE(m.N == 4);
    const NeumannOperator op = assemble_neumann_laplacian(m);
    const double w = 1.0 / (0.5 * 0.5);
    // end cell has a single neighbor, interior cells two
    std::vector<double> y = op.apply({1.0, 0.0, 0.0, 0.0});
    CHECK(y[0] == doctest::Approx(w));
    CHECK(y[1] == doctest::Approx(-w));
    CHECK(y[2] == 0.0);
    y = op.apply({0.0, 1.0, 0.0, 0.0});
    CHECK(y[0] == doctest::Approx(-w));
    CHECK(y[1] == doctest::Approx(2 * w));
    CHECK(y[2] == doctest::Approx(-w));
    CHECK(y[3] == 0.0);
}

TEST_CASE("row sums vanish exactly") {
    const GridMask m = rasterize(rect(1, 1), 1.0 / 16);
    const NeumannOperator op = assemble_neumann_laplacian(m);
    const std::vector<double> ones(m.N, 1.0);
    for (double v : op.apply(ones)) CHECK(v == 0.0);  // exact, not approximate
}

TEST_CASE("quadratic form is nonnegative and symmetric") {
    const GridMask m = rasterize(rect(1, 1), 1.0 / 8);
    const NeumannOperator op = assemble_neumann_laplacian(m);
    Xoshiro256 rng(5, 0);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<double> x(m.N), z(m.N);
        for (int i = 0; i < m.N; ++i) {
            x[i] = rng.uniform() - 0.5;
            z[i] = rng.uniform() - 0.5;
        }
        const auto Lx = op.apply(x);
        const auto Lz = op.apply(z);
        double xLx = 0, zLx = 0, xLz = 0;
        for (int i = 0; i < m.N; ++i) {
            xLx += x[i] * Lx[i];
            zLx += z[i] * Lx[i];
            xLz += x[i] * Lz[i];
        }
        CHECK(xLx >= -1e-14);
        CHECK(zLx == doctest::Approx(xLz).epsilon(1e-12));
    }
}

TEST_CASE("largest component is kept") {
    // dumbbell whose neck is thinner than a cell: only one square survives
    RawPolygonParams p;
    p.outer = {{0, 0},    {1, 0},    {1, 0.45}, {2, 0.45}, {2, 0},
               {3.5, 0},  {3.5, 1},  {2, 1},    {2, 0.55}, {1, 0.55},
               {1, 1},    {0, 1}};
    const PolygonDomain d = build_domain(p);
    const GridMask m = rasterize(d, 0.25);
    // right block is 1.5 x 1 = 24 cells, left is 16; neck row contains no centers
    CHECK(m.N == 24);
    CHECK(m.discarded_cells == 16);
}

TEST_CASE("thin features produce a warning") {
    const GridMask thin = rasterize(rect(2, 0.3), 0.25);  // one cell tall
    bool flagged = false;
    for (const auto& w : thin.warnings)
        if (w.find("ThinFeature") != std::string::npos) flagged = true;
    CHECK(flagged);
    const GridMask fat = rasterize(rect(2, 1), 0.25);
    CHECK(fat.warnings.empty());
}

TEST_CASE("deepest dof is the most interior cell") {
    const GridMask m = rasterize(rect(1, 1), 1.0 / 8);
    const Point c = m.dof_center(m.deepest_dof());
    CHECK(std::abs(c.x - 0.5) <= 0.0626);
    CHECK(std::abs(c.y - 0.5) <= 0.0626);
    // ties in boundary distance resolve to the lowest dof: cell (3, 3)
    CHECK(m.nearest_dof({0.45, 0.42}) == m.deepest_dof());
}
