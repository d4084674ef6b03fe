#pragma once

#include <istream>
#include <optional>
#include <string>
#include <vector>

#include "rhosum/continuum.hpp"
#include "rhosum/geom.hpp"
#include "rhosum/rng.hpp"

namespace rhosum {

struct AffineMap {
    std::vector<std::vector<double>> matrix; // d x d, row major
    std::vector<double> shift;               // d
};

struct AtomicSpec {
    ShapeKind shape = ShapeKind::UnitBox;
    std::optional<AffineMap> affine;
};

/// Stochastic generator description: a single atomic component or a
/// positive mixture of them (weights sum to 1).
struct DistributionSpec {
    int dim = 2;
    size_t n = 0;
    uint64_t seed = 0;
    int64_t grid_scale = kDefaultGridScale;
    std::vector<std::pair<double, AtomicSpec>> components{{1.0, AtomicSpec{}}};

    void validate() const;
};

/// Stacked-vertex family: k outer points high above the unit arc and
/// eta stacks of q/eta coincident inner points at arc vertices.
struct LowerBoundSpec {
    int64_t eta = 4;
    int64_t q = 16;
    int64_t k = 1;
    std::vector<double> vertex_angles; // default: equally spaced in [pi/6, 5pi/6]
    int64_t outer_height = int64_t(1) << 30; // grid units; doubled until validated
    int64_t grid_scale = kDefaultGridScale;

    void validate() const;
    int64_t n() const { return q + k; }
};

PointSet gen_box(size_t n, int dim, Rng& rng, int64_t grid_scale = kDefaultGridScale);
PointSet gen_ball(size_t n, int dim, Rng& rng, int64_t grid_scale = kDefaultGridScale);
PointSet gen_mixture(const DistributionSpec& spec);

/// Equally spaced points on a grid-aligned segment (exactly collinear).
PointSet gen_line(size_t n, int64_t grid_scale = kDefaultGridScale);

/// Equally spaced angles on the unit circle, snapped.
PointSet gen_circle(size_t n, int64_t grid_scale = kDefaultGridScale);

struct LowerBoundResult {
    PointSet points;
    int64_t outer_height_used = 0; // after validation doubling
    Rational theta;                // validated theta_X(k/n)
};

/// Generates the family and certifies the placement: the outer height is
/// doubled until the exactly computed theta_X(k/n) equals n/(k + q/eta).
LowerBoundResult gen_lower_bound(const LowerBoundSpec& spec);

/// key=value configuration (one pair per line, '#' comments). Fields:
///   kind=box|ball|mixture|line|circle|lowerbound
///   dim=2|3  n=<count>  seed=<u64>  scale=<power of two>
///   component=<weight>:box|ball[:affine=m00,m01,m10,m11,sx,sy]  (mixture rows)
///   eta= q= k= outer_height=  angles=a1,a2,...   (lowerbound)
struct GenSpec {
    std::string kind = "box";
    DistributionSpec dist;
    LowerBoundSpec lb;
    size_t n = 0;
    int64_t grid_scale = kDefaultGridScale;
};

GenSpec parse_gen_config(std::istream& is, GenSpec base = GenSpec{});
PointSet run_generator(const GenSpec& spec);

} // namespace rhosum
