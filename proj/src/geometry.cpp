#include "qloc/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "qloc/errors.hpp"
#include "qloc/rng.hpp"

namespace qloc {

namespace {

constexpr double kPi = 3.14159265358979323846;

double cross(Point o, Point a, Point b) {
    return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

bool segments_properly_intersect(Point a, Point b, Point c, Point d) {
    const double d1 = cross(c, d, a);
    const double d2 = cross(c, d, b);
    const double d3 = cross(a, b, c);
    const double d4 = cross(a, b, d);
    return ((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) &&
           ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0));
}

void check_simple(const Ring& ring, const std::string& label) {
    const std::size_t n = ring.size();
    if (n < 3) throw GeometryDegenerate(label + ": fewer than 3 vertices");
    for (std::size_t i = 0; i < n; ++i) {
        const Point a = ring[i];
        const Point b = ring[(i + 1) % n];
        if (a.x == b.x && a.y == b.y)
            throw GeometryDegenerate(label + ": repeated consecutive vertex");
        for (std::size_t j = i + 1; j < n; ++j) {
            // skip adjacent edges (they share a vertex)
            if (j == i || (j + 1) % n == i || (i + 1) % n == j) continue;
            if (segments_properly_intersect(a, b, ring[j], ring[(j + 1) % n]))
                throw GeometryDegenerate(label + ": self-intersection");
        }
    }
}

void check_rings_disjoint(const Ring& a, const Ring& b, const std::string& label) {
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j)
            if (segments_properly_intersect(a[i], a[(i + 1) % a.size()], b[j],
                                            b[(j + 1) % b.size()]))
                throw GeometryDegenerate(label + ": rings intersect");
}

double dist_point_segment(Point p, Point a, Point b) {
    const double vx = b.x - a.x, vy = b.y - a.y;
    const double wx = p.x - a.x, wy = p.y - a.y;
    const double vv = vx * vx + vy * vy;
    double s = vv > 0 ? (wx * vx + wy * vy) / vv : 0.0;
    s = std::clamp(s, 0.0, 1.0);
    const double dx = p.x - (a.x + s * vx), dy = p.y - (a.y + s * vy);
    return std::hypot(dx, dy);
}

void require(bool ok, const std::string& param) {
    if (!ok) throw InvalidSpec(param);
}

}  // namespace

double signed_area(const Ring& ring) {
    double a = 0.0;
    const std::size_t n = ring.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Point p = ring[i], q = ring[(i + 1) % n];
        a += p.x * q.y - q.x * p.y;
    }
    return 0.5 * a;
}

double ring_length(const Ring& ring) {
    double l = 0.0;
    for (std::size_t i = 0; i < ring.size(); ++i) {
        const Point p = ring[i], q = ring[(i + 1) % ring.size()];
        l += std::hypot(q.x - p.x, q.y - p.y);
    }
    return l;
}

BBox ring_bbox(const Ring& ring) {
    BBox b{std::numeric_limits<double>::max(), std::numeric_limits<double>::max(),
           std::numeric_limits<double>::lowest(), std::numeric_limits<double>::lowest()};
    for (const Point& p : ring) {
        b.xmin = std::min(b.xmin, p.x);
        b.ymin = std::min(b.ymin, p.y);
        b.xmax = std::max(b.xmax, p.x);
        b.ymax = std::max(b.ymax, p.y);
    }
    return b;
}

double area(const PolygonDomain& domain) {
    double a = signed_area(domain.outer);
    for (const Ring& h : domain.holes) a += signed_area(h);  // holes are CW (negative)
    return a;
}

bool point_on_ring_edge(const Ring& ring, Point p, double eps) {
    for (std::size_t i = 0; i < ring.size(); ++i)
        if (dist_point_segment(p, ring[i], ring[(i + 1) % ring.size()]) <= eps) return true;
    return false;
}

bool point_in_ring(const Ring& ring, Point p) {
    // even-odd ray crossing, ray towards +x
    bool inside = false;
    const std::size_t n = ring.size();
    for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
        const Point a = ring[i], b = ring[j];
        if ((a.y > p.y) != (b.y > p.y)) {
            const double xint = a.x + (p.y - a.y) / (b.y - a.y) * (b.x - a.x);
            if (p.x < xint) inside = !inside;
        }
    }
    return inside;
}

bool contains(const PolygonDomain& domain, Point p) {
    const double scale =
        std::max({std::abs(domain.bbox.xmax), std::abs(domain.bbox.xmin),
                  std::abs(domain.bbox.ymax), std::abs(domain.bbox.ymin), 1.0});
    const double eps = 1e-12 * scale;
    if (p.x < domain.bbox.xmin - eps || p.x > domain.bbox.xmax + eps ||
        p.y < domain.bbox.ymin - eps || p.y > domain.bbox.ymax + eps)
        return false;
    // on-edge rule: on the outer ring counts as inside; on a hole ring counts as
    // inside the hole, hence excluded
    for (const Ring& h : domain.holes) {
        if (point_on_ring_edge(h, p, eps)) return false;
        if (point_in_ring(h, p)) return false;
    }
    if (point_on_ring_edge(domain.outer, p, eps)) return true;
    return point_in_ring(domain.outer, p);
}

double distance_to_boundary(const PolygonDomain& domain, Point p) {
    double d = std::numeric_limits<double>::max();
    auto scan = [&](const Ring& ring) {
        for (std::size_t i = 0; i < ring.size(); ++i)
            d = std::min(d, dist_point_segment(p, ring[i], ring[(i + 1) % ring.size()]));
    };
    scan(domain.outer);
    for (const Ring& h : domain.holes) scan(h);
    return d;
}

void finalize_domain(PolygonDomain& domain) {
    check_simple(domain.outer, "outer");
    if (signed_area(domain.outer) <= 0.0)
        throw GeometryDegenerate("outer ring must be CCW with positive area");
    domain.bbox = ring_bbox(domain.outer);
    for (std::size_t k = 0; k < domain.holes.size(); ++k) {
        const Ring& h = domain.holes[k];
        const std::string label = "hole " + std::to_string(k);
        check_simple(h, label);
        if (signed_area(h) >= 0.0)
            throw GeometryDegenerate(label + ": must be CW with negative area");
        for (const Point& p : h)
            if (!point_in_ring(domain.outer, p))
                throw GeometryDegenerate(label + ": vertex outside outer ring");
        check_rings_disjoint(domain.outer, h, label + " vs outer");
        for (std::size_t j = 0; j < k; ++j)
            check_rings_disjoint(domain.holes[j], h,
                                 "hole " + std::to_string(j) + " vs " + label);
    }
}

std::string variant_name(const DomainSpec& spec) {
    struct V {
        std::string operator()(const RawPolygonParams&) const { return "raw_polygon"; }
        std::string operator()(const SpikedSquareParams&) const { return "spiked_square"; }
        std::string operator()(const SlitBoxParams&) const { return "slit_box"; }
        std::string operator()(const DiskChainParams&) const { return "disk_chain"; }
        std::string operator()(const WedgeParams&) const { return "wedge"; }
    };
    return std::visit(V{}, spec);
}

namespace {

PolygonDomain build_raw(const RawPolygonParams& p) {
    PolygonDomain d{p.outer, p.holes, {}};
    finalize_domain(d);
    return d;
}

PolygonDomain build_spiked_square(const SpikedSquareParams& p) {
    require(p.side > 0, "side");
    require(p.n_spikes >= 1, "n_spikes");
    require(p.spike_depth > 0, "spike_depth");
    require(p.spike_angle > 0 && p.spike_angle < kPi, "spike_angle");

    // Spikes are congruent isoceles teeth protruding outward from the top edge,
    // apex angle spike_angle at the tip: near each tip the domain locally is a
    // cone of opening spike_angle.
    const double s = p.side;
    const double pitch = s / p.n_spikes;
    std::vector<double> depth(p.n_spikes, p.spike_depth);
    if (p.jitter_seed != 0) {
        std::uint64_t st = p.jitter_seed;
        for (auto& d : depth) {
            const double u = static_cast<double>(splitmix64(st) >> 11) * 0x1.0p-53;
            d *= 1.0 + 0.4 * (u - 0.5);  // +-20 percent
        }
    }
    const double tan_half = std::tan(0.5 * p.spike_angle);
    for (double d : depth)
        if (2.0 * d * tan_half >= pitch)
            throw GeometryDegenerate("spikes overlap: base width >= pitch");

    Ring outer{{0, 0}, {s, 0}, {s, s}};
    // top edge traversed right-to-left (keeps CCW orientation)
    for (int i = p.n_spikes - 1; i >= 0; --i) {
        const double cx = (i + 0.5) * pitch;
        const double half_base = depth[i] * tan_half;
        outer.push_back({cx + half_base, s});
        outer.push_back({cx, s + depth[i]});
        outer.push_back({cx - half_base, s});
    }
    outer.push_back({0, s});
    PolygonDomain d{std::move(outer), {}, {}};
    finalize_domain(d);
    return d;
}

PolygonDomain build_slit_box(const SlitBoxParams& p) {
    require(p.width > 0, "width");
    require(p.height > 0, "height");
    require(p.slit_length > 0 && p.slit_length < p.width, "slit_length");
    require(p.slit_thickness > 0, "slit_thickness");
    require(p.gap > 0, "gap");
    const double total = 2.0 * p.slit_thickness + p.gap;
    require(total < p.height, "gap");

    Ring outer{{0, 0}, {p.width, 0}, {p.width, p.height}, {0, p.height}};
    const double x0 = 0.5 * (p.width - p.slit_length);
    const double x1 = x0 + p.slit_length;
    const double mid = 0.5 * p.height;
    auto slit = [&](double ylo) {  // CW rectangle
        return Ring{{x0, ylo}, {x0, ylo + p.slit_thickness},
                    {x1, ylo + p.slit_thickness}, {x1, ylo}};
    };
    PolygonDomain d{std::move(outer),
                    {slit(mid - 0.5 * p.gap - p.slit_thickness), slit(mid + 0.5 * p.gap)},
                    {}};
    finalize_domain(d);
    return d;
}

PolygonDomain build_wedge(const WedgeParams& p) {
    // angle = pi is allowed: the sector degenerates to a half disk whose apex
    // is a flat boundary point
    require(p.angle > 0 && p.angle <= kPi, "angle");
    require(p.side > 0, "side");
    require(p.m_arc >= 2, "m_arc");
    // Sector with apex at the origin, bisector along +x, capped by a polygonal arc.
    Ring outer;
    outer.push_back({0, 0});
    for (int i = 0; i <= p.m_arc; ++i) {
        const double a = -0.5 * p.angle + p.angle * i / p.m_arc;
        outer.push_back({p.side * std::cos(a), p.side * std::sin(a)});
    }
    PolygonDomain d{std::move(outer), {}, {}};
    finalize_domain(d);
    return d;
}

PolygonDomain build_disk_chain(const DiskChainParams& p) {
    require(p.m_poly >= 16, "m_poly");
    const int D = p.n_disks;
    const auto layout = disk_chain_layout(p);
    std::vector<double> r(D), cx(D);
    for (int n = 0; n < D; ++n) {
        r[n] = layout[n].r;
        cx[n] = layout[n].cx;
    }
    const std::vector<double> w = disk_chain_neck_widths(p);
    for (int n = 0; n + 1 < D; ++n)
        if (!(w[n] < 2.0 * std::min(r[n], r[n + 1])))
            throw InvalidSpec("neck_floor: w_" + std::to_string(n) +
                              " >= 2*min(r_n, r_n+1)");

    // Attachment half-angles where a circle meets the neck lines y = +-w/2.
    auto phiL = [&](int n) {  // left neck of disk n (width w[n-1])
        return n == 0 ? 0.0 : std::asin(0.5 * w[n - 1] / r[n]);
    };
    auto phiR = [&](int n) {  // right neck of disk n (width w[n])
        return n == D - 1 ? 0.0 : std::asin(0.5 * w[n] / r[n]);
    };

    Ring outer;
    auto arc = [&](int n, double a0, double a1) {
        // sample [a0, a1] on disk n, endpoints included, resolution from m_poly
        const int steps =
            std::max(2, static_cast<int>(std::ceil(p.m_poly * (a1 - a0) / (2.0 * kPi))));
        for (int i = 0; i <= steps; ++i) {
            const double a = a0 + (a1 - a0) * i / steps;
            outer.push_back({cx[n] + r[n] * std::cos(a), r[n] * std::sin(a)});
        }
    };
    // lower chain left to right, then upper chain right to left; straight neck
    // edges arise from consecutive arc endpoints at matching y = -+w/2
    for (int n = 0; n < D; ++n) arc(n, kPi + phiL(n), 2.0 * kPi - phiR(n));
    for (int n = D - 1; n >= 0; --n) arc(n, phiR(n), kPi - phiL(n));
    // drop duplicated junction points
    Ring dedup;
    for (const Point& q : outer) {
        if (!dedup.empty() && std::hypot(q.x - dedup.back().x, q.y - dedup.back().y) <
                                  1e-12 * p.r0)
            continue;
        dedup.push_back(q);
    }
    while (dedup.size() > 1 &&
           std::hypot(dedup.front().x - dedup.back().x, dedup.front().y - dedup.back().y) <
               1e-12 * p.r0)
        dedup.pop_back();

    PolygonDomain d{std::move(dedup), {}, {}};
    finalize_domain(d);
    return d;
}

}  // namespace

std::vector<DiskPlacement> disk_chain_layout(const DiskChainParams& p) {
    if (p.n_disks < 1) throw InvalidSpec("n_disks");
    if (!(p.r0 > 0)) throw InvalidSpec("r0");
    if (p.neck_floor < 0) throw InvalidSpec("neck_floor");
    const double neck_len = p.neck_length < 0 ? 0.6 * p.r0 : p.neck_length;
    if (p.n_disks > 1 && !(neck_len > 0)) throw InvalidSpec("neck_length");
    std::vector<DiskPlacement> out(p.n_disks);
    for (int n = 0; n < p.n_disks; ++n) {
        out[n].r = p.r0 * std::pow(2.0, -n);
        out[n].cx = n == 0 ? 0.0 : out[n - 1].cx + out[n - 1].r + neck_len + out[n].r;
    }
    return out;
}

Ring disk_polygon(double cx, double r, int m) {
    Ring ring;
    for (int i = 0; i < m; ++i) {
        const double a = 2.0 * kPi * i / m;
        ring.push_back({cx + r * std::cos(a), r * std::sin(a)});
    }
    return ring;
}

std::vector<double> disk_chain_neck_widths(const DiskChainParams& p) {
    std::vector<double> w;
    for (int n = 0; n + 1 < p.n_disks; ++n) {
        const double nominal = std::pow(2.0, -std::pow(4.0, n + 1));
        w.push_back(std::max(nominal, p.neck_floor));
    }
    return w;
}

PolygonDomain build_domain(const DomainSpec& spec) {
    struct V {
        PolygonDomain operator()(const RawPolygonParams& p) const { return build_raw(p); }
        PolygonDomain operator()(const SpikedSquareParams& p) const {
            return build_spiked_square(p);
        }
        PolygonDomain operator()(const SlitBoxParams& p) const { return build_slit_box(p); }
        PolygonDomain operator()(const DiskChainParams& p) const { return build_disk_chain(p); }
        PolygonDomain operator()(const WedgeParams& p) const { return build_wedge(p); }
    };
    return std::visit(V{}, spec);
}

}  // namespace qloc
