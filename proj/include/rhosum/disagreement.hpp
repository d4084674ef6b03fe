#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rhosum/rangespace.hpp"

namespace rhosum {

enum class ThetaMode : uint8_t {
    Exact, // supremum evaluated exactly on the step breakpoints
    Eq8,   // doubled grid-maximum upper bound; exact <= eq8 <= 2 * exact
};

struct DisagreementQuery {
    Rational sigma;
    std::optional<uint32_t> base_range; // theta^h when set, theta_X otherwise
    ThetaMode mode = ThetaMode::Exact;
};

struct DisagreementProfile {
    Rational sigma;
    Rational theta{1};
    Rational witness_r{0};       // r attaining the supremum (easy cases: 0)
    uint32_t grid_lo = 0;        // grid S = { i/n : grid_lo <= i <= n }
    std::vector<int64_t> dis_sizes;  // |X ∩ DIS(B(h, i/n))| for i in S
    std::vector<int64_t> ball_sizes; // |B(h, i/n)| for i in S (empty in profile mode)
    std::string mode = "exhaustive";
};

/// min_h |X ∩ h| / n over the canonical family (0 whenever some halfspace
/// misses X entirely, which always holds for the full family).
Rational sigma_min(const RangeSpace& rs);

/// Ranges whose symmetric difference with h covers at most r*n points.
std::vector<uint32_t> r_ball(const RangeSpace& rs, uint32_t h, const Rational& r);

/// Disagreement coefficient of one range, exact over the canonical family.
/// Returns 1 for sigma >= 1 and for sigma < 1/n.
DisagreementProfile theta_h(const RangeSpace& rs, uint32_t h, const Rational& sigma,
                            ThetaMode mode = ThetaMode::Exact);

struct ThetaXResult {
    Rational theta;
    uint32_t witness_range = 0;
    DisagreementProfile profile;
};

/// min over ranges with fraction <= sigma of theta_h. sigma below
/// sigma_min is outside the domain and rejected.
ThetaXResult theta_X(const RangeSpace& rs, const Rational& sigma, ThetaMode mode = ThetaMode::Exact);

/// Per point, the minimum |trace| over canonical ranges covering it.
/// Refused when the family lacks the empty trace (the fast path below is
/// then meaningless for theta of the empty range).
std::vector<int64_t> min_cover_profile(const RangeSpace& rs);

/// theta of the empty-trace range from a min-cover profile (the fast path
/// for large n; see min_cover_sweep). Exactly equals the exhaustive value.
DisagreementProfile theta_empty_from_mu(const std::vector<int64_t>& mu, size_t n,
                                        const Rational& sigma, ThetaMode mode = ThetaMode::Exact);

/// Profile CSV row block: sigma, theta_num, theta_den, witness_r, mode.
std::string profile_csv(const std::vector<DisagreementProfile>& rows);

} // namespace rhosum
