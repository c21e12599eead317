#include "qloc/walker.hpp"

#include <cmath>
#include <thread>

#include "qloc/errors.hpp"

namespace qloc {

WalkerLattice::WalkerLattice(const GridMask& mask_in) : mask(&mask_in), h2(mask_in.cell_area()) {
    const int N = mask_in.N;
    nbr.assign(static_cast<std::size_t>(N) * 4, -1);
    degree.assign(N, 0);
    const int di[4] = {-1, 1, 0, 0}, dj[4] = {0, 0, -1, 1};
    for (int d = 0; d < N; ++d) {
        const auto [i, j] = mask_in.cells[d];
        for (int k = 0; k < 4; ++k) {
            const std::int32_t n = mask_in.dof_at(i + di[k], j + dj[k]);
            if (n >= 0) nbr[static_cast<std::size_t>(d) * 4 + degree[d]++] = n;
        }
    }
}

int WalkerLattice::walk(int x, double t, Xoshiro256& rng) const {
    if (x < 0 || x >= mask->N) throw InvalidSpec("x out of range");
    if (!(t > 0)) throw NonPositiveTime("t = " + std::to_string(t));
    // hard cap: 100x the expected jump count for the max degree
    const long cap = 100 * static_cast<long>(std::ceil(4.0 * t / h2)) + 100;
    long jumps = 0;
    double remaining = t;
    int pos = x;
    while (true) {
        const int deg = degree[pos];
        if (deg == 0) return pos;  // isolated cell: no jumps ever
        const double rate = deg / h2;
        const double hold = -std::log1p(-rng.uniform()) / rate;
        remaining -= hold;
        if (remaining <= 0.0) return pos;
        pos = nbr[static_cast<std::size_t>(pos) * 4 +
                  static_cast<std::size_t>(rng.uniform_below(deg))];
        if (++jumps > cap)
            throw WalkRunaway("exceeded " + std::to_string(cap) + " jumps");
    }
}

namespace {

template <typename PerPair>
long parallel_count(long n_items, int n_threads, PerPair&& body) {
    n_threads = std::max(1, n_threads);
    if (n_threads == 1) {
        long count = 0;
        for (long i = 0; i < n_items; ++i) count += body(i);
        return count;
    }
    std::vector<long> partial(n_threads, 0);
    std::vector<std::thread> pool;
    for (int w = 0; w < n_threads; ++w)
        pool.emplace_back([&, w] {
            long c = 0;
            for (long i = w; i < n_items; i += n_threads) c += body(i);
            partial[w] = c;
        });
    for (auto& th : pool) th.join();
    long count = 0;  // order-independent integer reduction
    for (long c : partial) count += c;
    return count;
}

}  // namespace

CollisionEstimate collision_estimate(const GridMask& mask, const WalkConfig& config,
                                     int n_threads) {
    if (config.n_pairs < 1) throw InvalidSpec("n_pairs");
    if (!(config.t > 0)) throw NonPositiveTime("t = " + std::to_string(config.t));
    const WalkerLattice lattice(mask);
    const long collisions = parallel_count(config.n_pairs, n_threads, [&](long i) -> long {
        Xoshiro256 rng(config.seed, static_cast<std::uint64_t>(i));
        const int a = lattice.walk(config.x, config.t, rng);
        const int b = lattice.walk(config.x, config.t, rng);
        return a == b ? 1 : 0;
    });
    CollisionEstimate est;
    est.n_pairs = config.n_pairs;
    est.collisions = collisions;
    const double f = static_cast<double>(collisions) / config.n_pairs;
    est.q_hat = f / mask.cell_area();
    est.std_error = std::sqrt(f * (1.0 - f) / config.n_pairs) / mask.cell_area();
    return est;
}

double stay_probability(const GridMask& mask, int x, double t, const PolygonDomain& region,
                        long n_walks, std::uint64_t seed, int n_threads) {
    if (n_walks < 1) throw InvalidSpec("n_walks");
    const WalkerLattice lattice(mask);
    const long stayed = parallel_count(n_walks, n_threads, [&](long i) -> long {
        Xoshiro256 rng(seed, static_cast<std::uint64_t>(i) | (1ULL << 62));
        const int end = lattice.walk(x, t, rng);
        return contains(region, mask.dof_center(end)) ? 1 : 0;
    });
    return static_cast<double>(stayed) / n_walks;
}

}  // namespace qloc
