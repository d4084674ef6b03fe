#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "rhosum/rangespace.hpp"
#include "rhosum/rng.hpp"

namespace rhosum {

/// Default hidden-constant multiplier for the sample-size formulas, fixed
/// by the calibration run (see the `calibrate` experiment): the smallest
/// power of two where a single random sample of the prescribed size passes
/// verify_relative_approx in at least 90% of 100 seeded trials.
constexpr double kDefaultCSample = 1.0;

struct SampleSpec {
    Rational rho;
    Rational eps;
    Rational delta;
    int lambda = 3;
    double c_sample = kDefaultCSample;

    void validate() const;
};

/// ceil(c * (1/rho) * (1/eps^2) * (lambda*log2(1/rho) + log2(1/delta))).
int64_t li_sample_size(const SampleSpec& spec);

/// Per-round size: ceil(c * (x_size/n) * (2^i/eps^2) *
/// (lambda*log2(1/rho) + log2(ceil(log2(1/rho))/delta))), capped at x_size.
/// `rho` is the effective rho of the build the round belongs to.
int64_t round_sample_size(const SampleSpec& spec, size_t x_size, size_t n, int i,
                          const Rational& rho);

/// Index drawn with multiplicity.
struct WeightedIndex {
    uint32_t index;
    uint32_t mult;
};

/// `size` draws uniformly with replacement from the set bits of `subset`,
/// returned as (index, multiplicity) sorted by index.
std::vector<WeightedIndex> draw_sample(const Bitset& subset, size_t size, Rng& rng);
std::vector<WeightedIndex> draw_sample_indices(const std::vector<uint32_t>& indices, size_t size,
                                               Rng& rng);

struct VerifyResult {
    bool ok = true;
    int64_t worst_range = -1;     // index into rs.ranges
    Rational worst_error;         // |base(h) - Z(h)| at the worst range
    Rational worst_allowance;     // eps * max(rho, base(h)) there
};

/// Exhaustive check of |base(h) - Z(h)| <= eps * max(rho, base(h)) over
/// every canonical range. Fractions are relative to `base` when given
/// (the X_i of a round), otherwise to the whole ground set.
VerifyResult verify_relative_approx(const std::vector<WeightedIndex>& z, const RangeSpace& rs,
                                    const Rational& rho, const Rational& eps,
                                    const Bitset* base = nullptr);

} // namespace rhosum
