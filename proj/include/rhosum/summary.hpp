#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rhosum/approx.hpp"
#include "rhosum/rangespace.hpp"

namespace rhosum {

struct SummaryParams {
    Rational rho;
    Rational eps;
    Rational delta{1, 10};
    int lambda = 3;
    double c_sample = kDefaultCSample;
    bool verified_build = false;
    bool sample_based_fix = true;
    int max_retries = 50;

    void validate() const;
};

/// One stored sample point: grid coordinates plus draw multiplicity.
/// `index` is the source point index when the summary was built in
/// process (-1 after deserialization).
struct StoredPoint {
    std::array<int64_t, 3> coords{0, 0, 0};
    uint32_t mult = 1;
    int64_t index = -1;
};

struct SummaryLevel {
    int i = 0;              // round index, 1-based
    uint64_t m = 0;         // points common to every surviving range
    uint64_t x_size = 0;    // |X_i|, size of the disagreement region
    std::vector<StoredPoint> sample;
    std::optional<StoredPoint> witness_point; // one point counted by m
    uint64_t sample_weight() const {
        uint64_t w = 0;
        for (const auto& s : sample) w += s.mult;
        return w;
    }
};

struct Summary {
    uint64_t n = 0;
    int t = 0;
    int dim = 2;
    int64_t grid_scale = kDefaultGridScale;
    Rational eps_internal;   // min(eps, 1/3), used by the construction
    Rational rho_effective;  // max(rho, sigma_min)
    std::vector<SummaryLevel> levels; // indexed 1..t (levels[0] is round 1)
    SummaryParams params;

    // Test introspection, populated only by the materialized build path:
    // surviving-range mask after each round. Never serialized.
    std::vector<Bitset> alive_after;

    const SummaryLevel& level(int i) const { return levels.at(static_cast<size_t>(i) - 1); }
};

/// Multi-round shrinking build over a materialized range space. Exact:
/// every per-round quantity is derived from the canonical traces.
Summary build(const RangeSpace& rs, const SummaryParams& params, Rng& rng);

/// Equivalent build for large point sets where the canonical family is not
/// materialized. Valid for the full 2D halfplane family (where some
/// halfplane always misses X, so every m_i is zero); per-round
/// disagreement regions are computed by exact rotational sweeps.
/// verified_build is not available on this path.
Summary build_from_points(const PointSet& ps, const SummaryParams& params, Rng& rng);

/// Whether h is in the surviving family after round i, by the sequential
/// sample-count rule. Works on any halfspace; only the stored samples and
/// the 2t+1 integers are consulted.
bool membership(const Summary& s, const Halfspace& h, int i);
bool membership(const Summary& s, const CanonicalRange& h, int i);

/// Estimate of the covered fraction for h. j is the deepest surviving
/// round (round 1 when h is already removed there).
Rational estimate(const Summary& s, const Halfspace& h);
Rational estimate(const Summary& s, const CanonicalRange& h);

/// Total stored sample points, with multiplicity (witness points excluded).
uint64_t stored_point_count(const Summary& s);

/// Versioned binary format with trailing CRC32; bit-exact round trip.
std::vector<uint8_t> serialize(const Summary& s);
Summary deserialize(const std::vector<uint8_t>& bytes);

/// Human-readable JSON mirror (diagnostics only; not bit-exact).
std::string to_json(const Summary& s);

} // namespace rhosum
