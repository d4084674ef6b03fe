#include "rhosum/rangespace.hpp"

#include <stdexcept>

namespace rhosum {

RangeSpace make_range_space(PointSet ps, const EnumerateOptions& opts) {
    RangeSpace rs;
    auto res = enumerate_canonical_ranges(ps, opts);
    rs.ps = std::move(ps);
    rs.ranges = std::move(res.ranges);
    rs.complete = res.complete;
    rs.vc_dim = rs.ps.dim + 1;
    return rs;
}

Rational fraction(const RangeSpace& rs, const CanonicalRange& range) {
    if (rs.n() == 0) throw std::invalid_argument("fraction: empty ground set");
    return Rational(static_cast<int64_t>(range.popcount), static_cast<int64_t>(rs.n()));
}

size_t symdiff_count(const RangeSpace&, const CanonicalRange& h1, const CanonicalRange& h2) {
    return h1.trace.count_xor(h2.trace);
}

Bitset dis_region(const RangeSpace& rs, const std::vector<uint32_t>& subset) {
    if (subset.empty()) throw std::invalid_argument("dis_region: empty subset (DIS undefined)");
    Bitset covered_any(rs.n());
    Bitset covered_all(rs.n());
    covered_all.set_all();
    for (uint32_t id : subset) {
        covered_any |= rs.ranges[id].trace;
        covered_all &= rs.ranges[id].trace;
    }
    covered_any.and_not(covered_all);
    return covered_any;
}

size_t common_intersection_count(const RangeSpace& rs, const std::vector<uint32_t>& subset) {
    if (subset.empty()) throw std::invalid_argument("common_intersection_count: empty subset");
    Bitset covered_all(rs.n());
    covered_all.set_all();
    for (uint32_t id : subset) covered_all &= rs.ranges[id].trace;
    return covered_all.count();
}

std::string dump_traces_hex(const RangeSpace& rs) {
    std::string out;
    for (const auto& r : rs.ranges) {
        out += r.trace.to_hex();
        out += '\n';
    }
    return out;
}

} // namespace rhosum
