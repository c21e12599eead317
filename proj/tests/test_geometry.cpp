#include <doctest.h>

#include <cmath>

#include "qloc/errors.hpp"
#include "qloc/geometry.hpp"
#include "qloc/rng.hpp"

using namespace qloc;

namespace {
constexpr double kPi = 3.14159265358979323846;

Ring unit_square() { return {{0, 0}, {1, 0}, {1, 1}, {0, 1}}; }

// Monte Carlo area via uniform bbox sampling; returns (estimate, std error).
std::pair<double, double> mc_area(const PolygonDomain& d, long n, std::uint64_t seed) {
    Xoshiro256 rng(seed, 0);
    long hits = 0;
    for (long i = 0; i < n; ++i) {
        const Point p{d.bbox.xmin + rng.uniform() * d.bbox.width(),
                      d.bbox.ymin + rng.uniform() * d.bbox.height()};
        if (contains(d, p)) ++hits;
    }
    const double box = d.bbox.width() * d.bbox.height();
    const double f = double(hits) / double(n);
    return {f * box, box * std::sqrt(f * (1 - f) / double(n))};
}
}  // namespace

TEST_CASE("signed area and orientation") {
    CHECK(signed_area(unit_square()) == doctest::Approx(1.0));
    Ring cw = unit_square();
    std::reverse(cw.begin(), cw.end());
    CHECK(signed_area(cw) == doctest::Approx(-1.0));
    CHECK(ring_length(unit_square()) == doctest::Approx(4.0));
}

TEST_CASE("containment basics") {
    PolygonDomain d;
    d.outer = unit_square();
    finalize_domain(d);
    CHECK(contains(d, {0.5, 0.5}));
    CHECK(!contains(d, {1.5, 0.5}));
    CHECK(!contains(d, {-0.01, 0.5}));
    // on the outer edge counts as inside
    CHECK(contains(d, {0.5, 0.0}));
    CHECK(distance_to_boundary(d, {0.5, 0.5}) == doctest::Approx(0.5));
}

TEST_CASE("holes are excluded, including their edges") {
    RawPolygonParams p;
    p.outer = {{0, 0}, {4, 0}, {4, 4}, {0, 4}};
    p.holes = {{{1, 1}, {1, 3}, {3, 3}, {3, 1}}};  // CW
    const PolygonDomain d = build_domain(p);
    CHECK(area(d) == doctest::Approx(16.0 - 4.0));
    CHECK(contains(d, {0.5, 0.5}));
    CHECK(!contains(d, {2, 2}));
    CHECK(!contains(d, {1, 2}));  // on hole edge
}

TEST_CASE("degenerate input is rejected") {
    PolygonDomain d;
    d.outer = {{0, 0}, {1, 0}};  // not a polygon
    CHECK_THROWS_AS(finalize_domain(d), GeometryDegenerate);

    PolygonDomain bow;
    bow.outer = {{0, 0}, {1, 1}, {1, 0}, {0, 1}};  // self-intersecting
    CHECK_THROWS_AS(finalize_domain(bow), GeometryDegenerate);

    RawPolygonParams outside_hole;
    outside_hole.outer = unit_square();
    outside_hole.holes = {{{2, 2}, {2, 3}, {3, 3}, {3, 2}}};
    CHECK_THROWS_AS(build_domain(outside_hole), GeometryDegenerate);
}

TEST_CASE("slit box areas") {
    SlitBoxParams p;  // 2 x 1 box, two 1.0 x 0.05 slits
    const PolygonDomain d = build_domain(p);
    REQUIRE(d.holes.size() == 2);
    CHECK(signed_area(d.holes[0]) == doctest::Approx(-0.05));
    CHECK(signed_area(d.holes[1]) == doctest::Approx(-0.05));
    CHECK(area(d) == doctest::Approx(2.0 - 0.1));
    // clear gap between the inner slit faces
    double lo = 1e9, hi = -1e9;
    for (const auto& hole : d.holes)
        for (const Point& v : hole) {
            lo = std::min(lo, v.y);
            hi = std::max(hi, v.y);
        }
    CHECK(hi - lo == doctest::Approx(p.gap + 2 * p.slit_thickness));
}

TEST_CASE("wedge area and apex") {
    WedgeParams p;
    p.angle = kPi / 3;
    p.m_arc = 512;
    const PolygonDomain d = build_domain(p);
    CHECK(area(d) == doctest::Approx(0.5 * p.angle * p.side * p.side).epsilon(1e-4));
    // apex vertex at the origin
    bool has_origin = false;
    for (const Point& v : d.outer)
        if (std::abs(v.x) < 1e-12 && std::abs(v.y) < 1e-12) has_origin = true;
    CHECK(has_origin);
}

TEST_CASE("disk chain layout and area") {
    DiskChainParams p;
    p.n_disks = 3;
    p.m_poly = 512;
    const auto layout = disk_chain_layout(p);
    REQUIRE(layout.size() == 3);
    CHECK(layout[0].r == doctest::Approx(1.0));
    CHECK(layout[1].r == doctest::Approx(0.5));
    CHECK(layout[2].r == doctest::Approx(0.25));
    CHECK(layout[0].cx < layout[1].cx);
    CHECK(layout[1].cx < layout[2].cx);

    const PolygonDomain d = build_domain(p);
    const double disks = kPi * (1.0 + 0.25 + 0.0625);
    CHECK(area(d) == doctest::Approx(disks).epsilon(0.02));
    // every disk center is inside the chain
    for (const auto& disk : layout) CHECK(contains(d, {disk.cx, 0.0}));
}

TEST_CASE("disk chain neck widths clamp") {
    DiskChainParams p;
    p.n_disks = 4;
    auto w = disk_chain_neck_widths(p);
    REQUIRE(w.size() == 3);
    CHECK(w[0] == doctest::Approx(std::pow(2.0, -4.0)));
    CHECK(w[1] == doctest::Approx(std::pow(2.0, -16.0)));
    p.neck_floor = 1.0 / 32;
    w = disk_chain_neck_widths(p);
    CHECK(w[0] == doctest::Approx(1.0 / 16));
    CHECK(w[1] == doctest::Approx(1.0 / 32));
    CHECK(w[2] == doctest::Approx(1.0 / 32));
}

TEST_CASE("builders are deterministic") {
    SpikedSquareParams p;
    p.jitter_seed = 77;
    const PolygonDomain a = build_domain(p);
    const PolygonDomain b = build_domain(p);
    REQUIRE(a.outer.size() == b.outer.size());
    for (std::size_t i = 0; i < a.outer.size(); ++i) {
        CHECK(a.outer[i].x == b.outer[i].x);
        CHECK(a.outer[i].y == b.outer[i].y);
    }
    p.jitter_seed = 78;
    const PolygonDomain c = build_domain(p);
    bool differs = c.outer.size() != a.outer.size();
    for (std::size_t i = 0; !differs && i < a.outer.size(); ++i)
        differs = a.outer[i].x != c.outer[i].x || a.outer[i].y != c.outer[i].y;
    CHECK(differs);
}

TEST_CASE("monte carlo area agrees for every builder") {
    const std::vector<DomainSpec> specs = {
        RawPolygonParams{{{0, 0}, {2, 0}, {2, 1}, {0, 1}}, {}},
        SpikedSquareParams{},
        SlitBoxParams{},
        DiskChainParams{},
        WedgeParams{},
    };
    std::uint64_t seed = 11;
    for (const auto& spec : specs) {
        const PolygonDomain d = build_domain(spec);
        const auto [est, se] = mc_area(d, 200000, seed++);
        INFO("spec ", variant_name(spec));
        CHECK(std::abs(est - area(d)) < 4.0 * se + 1e-9);
    }
}
