#pragma once

#include <string>
#include <vector>

#include "rhosum/geom.hpp"

namespace rhosum {

/// Finite range space (X, R|_X): the ground points plus one canonical
/// representative per distinct halfspace trace. Immutable after
/// construction; safe to share read-only across workers.
struct RangeSpace {
    PointSet ps;
    std::vector<CanonicalRange> ranges;
    int vc_dim = 3;
    bool complete = true; // false when built from a sampled 3D family

    size_t n() const { return ps.n(); }
    size_t range_count() const { return ranges.size(); }
};

RangeSpace make_range_space(PointSet ps, const EnumerateOptions& opts = {});

/// Exact |trace| / n.
Rational fraction(const RangeSpace& rs, const CanonicalRange& range);

/// |trace(h1) xor trace(h2)|.
size_t symdiff_count(const RangeSpace& rs, const CanonicalRange& h1, const CanonicalRange& h2);

/// Points covered by at least one but not all ranges of the subset.
Bitset dis_region(const RangeSpace& rs, const std::vector<uint32_t>& subset);

/// Number of points inside every trace of the subset (the m_i of a round).
size_t common_intersection_count(const RangeSpace& rs, const std::vector<uint32_t>& subset);

/// Diagnostic dump: one hex-encoded trace bitset per line.
std::string dump_traces_hex(const RangeSpace& rs);

} // namespace rhosum
