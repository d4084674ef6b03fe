#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "rhosum/bitset.hpp"
#include "rhosum/rational.hpp"

namespace rhosum {

using Int256 = boost::multiprecision::int256_t;

/// Coordinate magnitudes stay below 2^40 grid units so 2D orientation
/// determinants are exact in 128-bit arithmetic.
constexpr int64_t kCoordLimit = int64_t(1) << 40;
constexpr int64_t kDefaultGridScale = int64_t(1) << 20;

/// Snapped integer-grid point multiset; real coordinate = grid / grid_scale.
/// Duplicate points are allowed and preserved.
struct PointSet {
    int dim = 2;
    int64_t grid_scale = kDefaultGridScale;
    std::vector<std::array<int64_t, 3>> coords; // [0..dim) used

    size_t n() const { return coords.size(); }
    double real(size_t i, int axis) const {
        return static_cast<double>(coords[i][axis]) / static_cast<double>(grid_scale);
    }
};

/// Closed or open halfspace {x : <normal, x> >= offset} (resp. >).
/// Components are wide integers so that canonical-range witnesses built
/// from lexicographically perturbed directions stay exactly representable.
struct Halfspace {
    int dim = 2;
    std::array<Int256, 3> normal{};
    Int256 offset = 0;
    bool closed = true;

    static Halfspace make2(int64_t a, int64_t b, int64_t c, bool closed = true) {
        Halfspace h;
        h.dim = 2;
        h.normal[0] = a;
        h.normal[1] = b;
        h.offset = c;
        h.closed = closed;
        return h;
    }
};

enum class RangeKind : uint8_t { Empty, Full, Pivoted };

/// One distinct halfspace trace on a point set. `witness` realizes the
/// trace; `pivots` name boundary points that define the cut.
struct CanonicalRange {
    RangeKind kind = RangeKind::Pivoted;
    std::array<int32_t, 3> pivots{-1, -1, -1};
    int8_t side = +1;
    uint8_t include_mask = 0;
    Bitset trace;
    uint32_t popcount = 0;
    Halfspace witness;
};

struct EnumerateOptions {
    bool sampled = false;        // request the sampled family (3D fallback)
    size_t cap3d = 300;          // exact 3D enumeration refuses above this
    size_t sample_directions = 4096;
    uint64_t sample_seed = 1;
};

struct EnumerateResult {
    std::vector<CanonicalRange> ranges;
    bool complete = true;        // false for the sampled family
};

PointSet snap_points(const std::vector<std::vector<double>>& raw, int dim, int64_t grid_scale);

/// Sign of det(q - p, r - p), exact. 2D only.
int orientation(size_t p, size_t q, size_t r, const PointSet& ps);

bool halfspace_contains(const Halfspace& h, size_t x, const PointSet& ps);
bool halfspace_contains_coords(const Halfspace& h, const std::array<int64_t, 3>& c, int dim);

/// All distinct halfspace traces on ps, deduplicated, empty and full first.
/// 2D is exact for every input (including collinear and duplicated points).
/// 3D exact mode enumerates triple/pair directions and is capped at cap3d.
EnumerateResult enumerate_canonical_ranges(const PointSet& ps, const EnumerateOptions& opts = {});

PointSet affine_transform(const PointSet& ps, const std::vector<std::vector<double>>& matrix,
                          const std::vector<double>& shift, int64_t grid_scale);

/// PointSet text format: header "d=<dim> scale=<scale> n=<count>", then one
/// line of space-separated grid integers per point. Bit-exact round trip.
void save_pointset(const PointSet& ps, const std::string& path);
PointSet load_pointset(const std::string& path);
void write_pointset(const PointSet& ps, std::ostream& os);
PointSet read_pointset(std::istream& is);

} // namespace rhosum
