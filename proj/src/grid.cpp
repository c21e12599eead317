#include "qloc/grid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>

#include "qloc/errors.hpp"

namespace qloc {

int GridMask::nearest_dof(Point p) const {
    int best = -1;
    double best_d = std::numeric_limits<double>::max();
    for (int d = 0; d < N; ++d) {
        const Point c = dof_center(d);
        const double dist = std::hypot(c.x - p.x, c.y - p.y);
        if (dist < best_d) {
            best_d = dist;
            best = d;
        }
    }
    return best;
}

int GridMask::deepest_dof() const {
    int best = -1;
    double best_d = -1.0;
    for (int d = 0; d < N; ++d) {
        const double dist = distance_to_boundary(domain, dof_center(d));
        if (dist > best_d + 1e-15) {
            best_d = dist;
            best = d;
        }
    }
    return best;
}

GridMask rasterize(const PolygonDomain& domain, double h, double neck_floor) {
    if (!(h > 0)) throw InvalidSpec("h");
    GridMask m;
    m.domain = domain;
    m.h = h;
    m.x0 = domain.bbox.xmin;
    m.y0 = domain.bbox.ymin;
    m.nx = std::max(1, static_cast<int>(std::ceil(domain.bbox.width() / h)));
    m.ny = std::max(1, static_cast<int>(std::ceil(domain.bbox.height() / h)));
    const std::size_t ncell = static_cast<std::size_t>(m.nx) * m.ny;
    m.dof.assign(ncell, -1);

    std::vector<char> in(ncell, 0);
    std::size_t total = 0;
    for (int j = 0; j < m.ny; ++j)
        for (int i = 0; i < m.nx; ++i)
            if (contains(domain, m.center(i, j))) {
                in[static_cast<std::size_t>(j) * m.nx + i] = 1;
                ++total;
            }
    if (total < 4) throw TooCoarse("only " + std::to_string(total) + " cells included");

    // keep the largest 4-connected component
    std::vector<std::int32_t> comp(ncell, -1);
    std::int32_t ncomp = 0;
    std::vector<std::size_t> comp_size;
    for (std::size_t start = 0; start < ncell; ++start) {
        if (!in[start] || comp[start] >= 0) continue;
        std::size_t size = 0;
        std::queue<std::size_t> q;
        q.push(start);
        comp[start] = ncomp;
        while (!q.empty()) {
            const std::size_t c = q.front();
            q.pop();
            ++size;
            const int i = static_cast<int>(c % m.nx), j = static_cast<int>(c / m.nx);
            const int di[4] = {1, -1, 0, 0}, dj[4] = {0, 0, 1, -1};
            for (int k = 0; k < 4; ++k) {
                const int ii = i + di[k], jj = j + dj[k];
                if (ii < 0 || jj < 0 || ii >= m.nx || jj >= m.ny) continue;
                const std::size_t cc = static_cast<std::size_t>(jj) * m.nx + ii;
                if (in[cc] && comp[cc] < 0) {
                    comp[cc] = ncomp;
                    q.push(cc);
                }
            }
        }
        comp_size.push_back(size);
        ++ncomp;
    }
    const std::int32_t keep = static_cast<std::int32_t>(
        std::max_element(comp_size.begin(), comp_size.end()) - comp_size.begin());

    for (int j = 0; j < m.ny; ++j)
        for (int i = 0; i < m.nx; ++i) {
            const std::size_t c = static_cast<std::size_t>(j) * m.nx + i;
            if (in[c] && comp[c] == keep) {
                m.dof[c] = m.N++;
                m.cells.push_back({i, j});
            } else if (in[c]) {
                ++m.discarded_cells;
            }
        }
    if (m.N < 4) throw TooCoarse("largest component has fewer than 4 cells");

    if (m.discarded_cells > 0) {
        std::string w = "discarded " + std::to_string(m.discarded_cells) +
                        " cells in smaller components";
        if (neck_floor > 0 && neck_floor >= 2.0 * h)
            w = "NeckPinchOff: " + w + " despite neck_floor >= 2h";
        m.warnings.push_back(w);
    }

    // thin-feature scan: included runs of width 1 in either direction
    int thin = 0;
    for (int d = 0; d < m.N; ++d) {
        const auto [i, j] = m.cells[d];
        const bool thin_x = m.dof_at(i - 1, j) < 0 && m.dof_at(i + 1, j) < 0;
        const bool thin_y = m.dof_at(i, j - 1) < 0 && m.dof_at(i, j + 1) < 0;
        if (thin_x || thin_y) ++thin;
    }
    if (thin > 0)
        m.warnings.push_back("ThinFeatureWarning: " + std::to_string(thin) +
                             " cells lie in features one cell wide");
    return m;
}

void NeumannOperator::apply(const double* x, double* y) const {
    for (int i = 0; i < N; ++i) {
        double acc = 0.0;
        for (std::int64_t k = row_ptr[i]; k < row_ptr[i + 1]; ++k) acc += val[k] * x[col[k]];
        y[i] = acc;
    }
}

std::vector<double> NeumannOperator::apply(const std::vector<double>& x) const {
    std::vector<double> y(N);
    apply(x.data(), y.data());
    return y;
}

double NeumannOperator::max_row_sum_abs() const {
    double best = 0.0;
    for (int i = 0; i < N; ++i) {
        double s = 0.0;
        for (std::int64_t k = row_ptr[i]; k < row_ptr[i + 1]; ++k) s += std::abs(val[k]);
        best = std::max(best, s);
    }
    return best;
}

NeumannOperator assemble_neumann_laplacian(const GridMask& mask) {
    NeumannOperator op;
    op.N = mask.N;
    op.h2 = mask.cell_area();
    const double w = 1.0 / op.h2;
    op.row_ptr.assign(op.N + 1, 0);
    op.degree.assign(op.N, 0);

    // fixed neighbor order (diag, -x, +x, -y, +y) keeps assembly deterministic
    const int di[4] = {-1, 1, 0, 0}, dj[4] = {0, 0, -1, 1};
    for (int d = 0; d < op.N; ++d) {
        const auto [i, j] = mask.cells[d];
        int deg = 0;
        for (int k = 0; k < 4; ++k)
            if (mask.dof_at(i + di[k], j + dj[k]) >= 0) ++deg;
        op.degree[d] = deg;
        op.row_ptr[d + 1] = op.row_ptr[d] + deg + 1;
    }
    op.col.resize(op.row_ptr[op.N]);
    op.val.resize(op.row_ptr[op.N]);
    for (int d = 0; d < op.N; ++d) {
        std::int64_t k = op.row_ptr[d];
        const auto [i, j] = mask.cells[d];
        op.col[k] = d;
        op.val[k] = op.degree[d] * w;
        ++k;
        for (int t = 0; t < 4; ++t) {
            const std::int32_t nb = mask.dof_at(i + di[t], j + dj[t]);
            if (nb >= 0) {
                op.col[k] = nb;
                op.val[k] = -w;
                ++k;
            }
        }
    }
    return op;
}

}  // namespace qloc
