#pragma once

#include <cstdint>
#include <vector>

#include "rhosum/geom.hpp"

namespace rhosum {

/// Exact circular sweeps over closed halfplanes through a fixed center.
/// A site at offset d from the center is inside the halfplane with outward
/// normal u iff <u, d> >= 0; as u rotates, membership toggles at the two
/// directions perpendicular to d. All comparisons are integer-exact.
namespace sweep {

struct Site {
    int64_t dx = 0, dy = 0;
    // (channel, weight) pairs; a channel is one constraint counter
    std::vector<std::pair<uint32_t, int64_t>> weights;
};

/// Minimum over all closed halfplanes through the center of the total
/// single-channel weight inside (baseline added to every position).
int64_t min_halfplane_weight(const std::vector<Site>& sites, int64_t baseline);

/// Channel counts at one fixed direction u (closed boundary through center).
void counts_at_direction(const std::vector<Site>& sites, int64_t ux, int64_t uy,
                         std::vector<int64_t>& counters);

/// True when some direction keeps every channel strictly below its limit
/// (count_c < limit[c]). baselines feed all positions; a found direction is
/// written to dir_out for reuse as a warm start next round.
bool feasible_direction(const std::vector<Site>& sites, const std::vector<int64_t>& baselines,
                        const std::vector<int64_t>& limits,
                        std::pair<int64_t, int64_t>& dir_out);

} // namespace sweep

/// Per-point minimum |X ∩ h| over closed halfplanes covering the point
/// (h ranging over the full 2D halfplane family). Equals the minimum
/// canonical-trace size covering each point; O(n^2 log n) overall.
std::vector<int64_t> min_cover_sweep(const PointSet& ps);

} // namespace rhosum
