#include <doctest.h>

#include <cmath>

#include "qloc/eigensolver.hpp"
#include "qloc/errors.hpp"
#include "qloc/grid.hpp"

using namespace qloc;

namespace {
constexpr double kPi = 3.14159265358979323846;

PolygonDomain rect(double w, double h) {
    PolygonDomain d;
    d.outer = {{0, 0}, {w, 0}, {w, h}, {0, h}};
    finalize_domain(d);
    return d;
}

// largest principal angle (radians) between the spans of two N x m blocks
double subspace_angle(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B) {
    const Eigen::MatrixXd Qa = Eigen::HouseholderQR<Eigen::MatrixXd>(A)
                                   .householderQ()
                                   .setLength(A.cols()) *
                               Eigen::MatrixXd::Identity(A.rows(), A.cols());
    const Eigen::MatrixXd Qb = Eigen::HouseholderQR<Eigen::MatrixXd>(B)
                                   .householderQ()
                                   .setLength(B.cols()) *
                               Eigen::MatrixXd::Identity(B.rows(), B.cols());
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(Qa.transpose() * Qb);
    const double c = std::min(1.0, svd.singularValues().minCoeff());
    return std::acos(c);
}
}  // namespace

TEST_CASE("constant kernel mode is exact") {
    const GridMask m = rasterize(rect(1, 1), 1.0 / 8);
    const NeumannOperator op = assemble_neumann_laplacian(m);
    const Spectrum sp = lowest_eigenpairs(op, 4);
    CHECK(sp.mu[0] == 0.0);
    const double c = 1.0 / std::sqrt(m.N * m.cell_area());
    for (int d = 0; d < m.N; ++d) CHECK(sp.phi(d, 0) == doctest::Approx(c).epsilon(1e-12));
}

TEST_CASE("strip eigenvalues match the cosine formula") {
    const int n = 64;
    const double h = 1.0 / n;
    const GridMask m = rasterize(rect(1, h), h);
    REQUIRE(m.N == n);
    const NeumannOperator op = assemble_neumann_laplacian(m);
    const int K = 8;
    const Spectrum sp = lowest_eigenpairs(op, K);
    for (int k = 0; k < K; ++k) {
        const double exact = (2.0 / (h * h)) * (1.0 - std::cos(kPi * k / n));
        CHECK(sp.mu[k] == doctest::Approx(exact).epsilon(1e-8));
        CHECK(sp.residual_norms[k] <= 1e-8 * (1.0 + sp.mu[k]));
    }
    // discrete modes converge to pi^2 k^2 as h -> 0; k = 1 is already close
    CHECK(sp.mu[1] == doctest::Approx(kPi * kPi).epsilon(5e-4));
}

TEST_CASE("iterative solver matches the dense oracle, degeneracies included") {
    const GridMask m = rasterize(rect(1, 1), 1.0 / 32);
    REQUIRE(m.N == 1024);
    const NeumannOperator op = assemble_neumann_laplacian(m);
    const int K = 10;
    const Spectrum it = lowest_eigenpairs(op, K);
    const Spectrum dn = dense_oracle(op);
    for (int k = 0; k < K; ++k)
        CHECK(it.mu[k] == doctest::Approx(dn.mu[k]).epsilon(1e-8));
    // mu_1 = mu_2 is a symmetry-forced degenerate pair
    CHECK(it.mu[1] == doctest::Approx(it.mu[2]).epsilon(1e-10));
    CHECK(subspace_angle(it.phi.middleCols(1, 2), dn.phi.middleCols(1, 2)) < 1e-6);
    // nondegenerate vectors agree up to sign (the magnitude-tie rule can land on
    // different corners of a symmetric mode across solvers)
    for (int k : {0, 3}) {
        const double h = std::sqrt(it.cell_area);
        const double err = std::min((it.phi.col(k) - dn.phi.col(k)).norm(),
                                    (it.phi.col(k) + dn.phi.col(k)).norm()) * h;
        CHECK(err < 1e-6);
    }
}

TEST_CASE("seed does not change the spectrum") {
    const GridMask m = rasterize(rect(1.3, 0.8), 1.0 / 16);
    const NeumannOperator op = assemble_neumann_laplacian(m);
    const Spectrum a = lowest_eigenpairs(op, 6, 1e-10, 0, 1);
    const Spectrum b = lowest_eigenpairs(op, 6, 1e-10, 0, 999);
    for (int k = 0; k < 6; ++k)
        CHECK(a.mu[k] == doctest::Approx(b.mu[k]).epsilon(1e-9));
}

TEST_CASE("requesting more modes keeps the earlier ones") {
    const GridMask m = rasterize(rect(1, 0.7), 1.0 / 16);
    const NeumannOperator op = assemble_neumann_laplacian(m);
    const Spectrum small = lowest_eigenpairs(op, 5);
    const Spectrum big = lowest_eigenpairs(op, 12);
    for (int k = 0; k < 5; ++k)
        CHECK(small.mu[k] == doctest::Approx(big.mu[k]).epsilon(1e-8));
}

TEST_CASE("K beyond N is rejected") {
    const GridMask m = rasterize(rect(1, 1), 0.5);
    const NeumannOperator op = assemble_neumann_laplacian(m);
    CHECK_THROWS_AS(lowest_eigenpairs(op, 5), KExceedsN);
    CHECK_THROWS_AS(lowest_eigenpairs(op, 0), KExceedsN);
}

TEST_CASE("weyl fit recovers 4 pi / area on a square") {
    // the fitted slope sits ~10% below 4 pi: the Neumann counting function has a
    // +perimeter*sqrt(mu) boundary term this linear fit absorbs
    const GridMask m = rasterize(rect(1, 1), 1.0 / 32);
    const NeumannOperator op = assemble_neumann_laplacian(m);
    const Spectrum sp = dense_oracle(op);
    Spectrum head = sp;
    head.K = 60;
    head.mu.resize(60);
    head.phi = sp.phi.leftCols(60).eval();
    head.residual_norms.resize(60);
    const WeylFit wf = weyl_fit(head, 1.0);
    CHECK(wf.predicted_c == doctest::Approx(4 * kPi));
    CHECK(wf.rel_deviation < 0.2);

    Spectrum tiny = head;
    tiny.K = 10;
    tiny.mu.resize(10);
    CHECK_THROWS_AS(weyl_fit(tiny, 1.0), InsufficientModes);
}

TEST_CASE("sign convention: largest-magnitude entry is positive") {
    const GridMask m = rasterize(rect(1.1, 0.6), 1.0 / 16);
    const NeumannOperator op = assemble_neumann_laplacian(m);
    const Spectrum sp = lowest_eigenpairs(op, 8);
    for (int k = 0; k < sp.K; ++k) {
        int arg = 0;
        for (int d = 1; d < m.N; ++d)
            if (std::abs(sp.phi(d, k)) > std::abs(sp.phi(arg, k))) arg = d;
        CHECK(sp.phi(arg, k) > 0.0);
    }
}
