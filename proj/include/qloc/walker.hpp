#ifndef QLOC_WALKER_HPP_
#define QLOC_WALKER_HPP_

#include <cstdint>

#include "qloc/grid.hpp"
#include "qloc/rng.hpp"

namespace qloc {

struct WalkConfig {
    double t = 1.0;
    long n_pairs = 100000;
    std::uint64_t seed = 1;
    int x = 0;
};

struct CollisionEstimate {
    double q_hat = 0.0;
    double std_error = 0.0;
    long n_pairs = 0;
    long collisions = 0;
};

// Continuous-time random walk on the included cells: jump rate 1/h^2 along
// each included edge (total rate deg/h^2, exponential holding times, uniform
// neighbor choice). The time-t law is exactly row x of e^{-tL} for the
// assembled NeumannOperator; excluded neighbors are simply never jump targets.
struct WalkerLattice {
    const GridMask* mask = nullptr;
    std::vector<std::int32_t> nbr;      // flattened, 4 slots per dof
    std::vector<std::int32_t> degree;
    double h2 = 0.0;

    explicit WalkerLattice(const GridMask& mask);
    int walk(int x, double t, Xoshiro256& rng) const;
};

// Monte Carlo estimate of Q(t, x) from n_pairs pairs of independent walkers:
// q_hat = collision fraction / h^2. Per-pair RNG substreams derive from
// (seed, pair index), so the estimate is identical for any worker count.
CollisionEstimate collision_estimate(const GridMask& mask, const WalkConfig& config,
                                     int n_threads = 1);

// Fraction of n_walks walkers from x that sit inside `region` at time t.
double stay_probability(const GridMask& mask, int x, double t,
                        const PolygonDomain& region, long n_walks, std::uint64_t seed,
                        int n_threads = 1);

}  // namespace qloc

#endif
