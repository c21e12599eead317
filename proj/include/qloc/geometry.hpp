#ifndef QLOC_GEOMETRY_HPP_
#define QLOC_GEOMETRY_HPP_

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

namespace qloc {

struct Point {
    double x = 0.0;
    double y = 0.0;
};

using Ring = std::vector<Point>;

struct BBox {
    double xmin = 0.0, ymin = 0.0, xmax = 0.0, ymax = 0.0;
    double width() const { return xmax - xmin; }
    double height() const { return ymax - ymin; }
};

// Planar region bounded by a simple CCW outer ring minus simple CW hole rings.
struct PolygonDomain {
    Ring outer;
    std::vector<Ring> holes;
    BBox bbox;  // derived; kept in sync by finalize_domain / build_domain
};

double signed_area(const Ring& ring);
double ring_length(const Ring& ring);
BBox ring_bbox(const Ring& ring);

// Shoelace area of outer minus holes.
double area(const PolygonDomain& domain);

// Even-odd rule against outer and hole rings. Points exactly on an edge count
// as inside that ring (so on a hole edge -> excluded).
bool contains(const PolygonDomain& domain, Point p);

bool point_in_ring(const Ring& ring, Point p);
bool point_on_ring_edge(const Ring& ring, Point p, double eps);

// Distance from p to the union of all ring edges.
double distance_to_boundary(const PolygonDomain& domain, Point p);

// Recomputes bbox and checks all PolygonDomain invariants; throws
// GeometryDegenerate on violation.
void finalize_domain(PolygonDomain& domain);

// ---- domain specs -----------------------------------------------------------

struct RawPolygonParams {
    Ring outer;
    std::vector<Ring> holes;
};

struct SpikedSquareParams {
    double side = 1.0;
    int n_spikes = 8;
    double spike_depth = 0.15;  // leaves headroom for +-20% jitter at 8 spikes
    double spike_angle = 0.5235987755982988;  // pi/6
    std::uint64_t jitter_seed = 0;            // 0 = regular spikes
};

struct SlitBoxParams {
    double width = 2.0;
    double height = 1.0;
    double slit_length = 1.0;
    double slit_thickness = 0.05;
    double gap = 0.1;  // clear gap between the two slits
};

struct DiskChainParams {
    int n_disks = 4;
    double r0 = 1.0;
    double neck_floor = 0.0;    // clamp for the 2^(-4^n) widths; 0 = no clamp
    double neck_length = -1.0;  // < 0 -> default 0.6 * r0
    int m_poly = 128;           // segments approximating each full disk
};

struct WedgeParams {
    double angle = 1.5707963267948966;  // apex opening, radians
    double side = 1.0;                  // straight-side length = cap radius
    int m_arc = 64;                     // segments on the far arc
};

using DomainSpec = std::variant<RawPolygonParams, SpikedSquareParams, SlitBoxParams,
                                DiskChainParams, WedgeParams>;

std::string variant_name(const DomainSpec& spec);

// Deterministic: identical specs (including jitter_seed) give identical vertices.
// Throws InvalidSpec / GeometryDegenerate.
PolygonDomain build_domain(const DomainSpec& spec);

// Effective (clamped) neck widths of a disk chain, w_n for n = 0..n_disks-2.
std::vector<double> disk_chain_neck_widths(const DiskChainParams& p);

struct DiskPlacement {
    double cx = 0.0;  // center on the chain axis (y = 0)
    double r = 0.0;
};

// Disk centers and radii as placed by build_domain.
std::vector<DiskPlacement> disk_chain_layout(const DiskChainParams& p);

// Regular m-gon approximating the circle (cx, 0, r), CCW.
Ring disk_polygon(double cx, double r, int m);

}  // namespace qloc

#endif
