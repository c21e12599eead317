#ifndef QLOC_GRID_HPP_
#define QLOC_GRID_HPP_

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "qloc/geometry.hpp"

namespace qloc {

// Rasterization of a PolygonDomain at spacing h. Cell (i, j) has center
// (x0 + (i+1/2)h, y0 + (j+1/2)h); included cells carry contiguous dof indices.
struct GridMask {
    PolygonDomain domain;
    double x0 = 0.0, y0 = 0.0;
    double h = 0.0;
    int nx = 0, ny = 0;
    std::vector<std::int32_t> dof;           // nx*ny, -1 for excluded, else dof index
    std::vector<std::pair<int, int>> cells;  // dof -> (i, j)
    int N = 0;
    int discarded_cells = 0;                 // cells dropped with smaller components
    std::vector<std::string> warnings;       // ThinFeatureWarning / NeckPinchOff

    double cell_area() const { return h * h; }
    Point center(int i, int j) const { return {x0 + (i + 0.5) * h, y0 + (j + 0.5) * h}; }
    std::int32_t dof_at(int i, int j) const {
        if (i < 0 || j < 0 || i >= nx || j >= ny) return -1;
        return dof[static_cast<std::size_t>(j) * nx + i];
    }
    Point dof_center(int d) const { return center(cells[d].first, cells[d].second); }
    // included cell nearest to p (euclidean distance between p and cell centers)
    int nearest_dof(Point p) const;
    // included cell with the largest distance to the polygon boundary,
    // ties broken by lowest dof index
    int deepest_dof() const;
};

// Cell included iff contains(domain, center); keeps the largest 4-connected
// component. neck_floor is only used to phrase the NeckPinchOff diagnostic for
// disk chains; pass 0 when not applicable. Throws TooCoarse below 4 cells.
GridMask rasterize(const PolygonDomain& domain, double h, double neck_floor = 0.0);

// Sparse symmetric positive-semidefinite finite-volume Laplacian on a mask:
// L[i][j] = -1/h^2 for included 4-neighbors, diagonal = degree/h^2.
// Row sums vanish, which is the discrete zero-flux condition.
struct NeumannOperator {
    int N = 0;
    double h2 = 0.0;  // cell area
    std::vector<std::int64_t> row_ptr;
    std::vector<std::int32_t> col;
    std::vector<double> val;
    std::vector<std::int32_t> degree;  // included-neighbor count per dof

    void apply(const double* x, double* y) const;
    std::vector<double> apply(const std::vector<double>& x) const;
    double max_row_sum_abs() const;  // Gershgorin bound on the spectral radius
};

NeumannOperator assemble_neumann_laplacian(const GridMask& mask);

}  // namespace qloc

#endif
