#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "rhosum/rational.hpp"
#include "rhosum/rng.hpp"

namespace rhosum {

enum class ShapeKind : uint8_t { UnitBox, UnitBall };

struct SupportShape {
    ShapeKind kind = ShapeKind::UnitBall;
    int dim = 2;
};

struct ContinuumTheta {
    double sigma = 0;
    double theta = 1;
    std::vector<std::pair<double, double>> F_curve; // (r, F(r) = Pr[mu(x) <= r])
};

/// Fraction of the unit ball occupied by the smallest cap containing a
/// point at distance x_norm from the center (cap height 1 - x_norm).
double mu_ball(double x_norm, int dim);

/// Minimal measure over halfspaces containing x, for the unit box.
/// d=2: 1D numerical minimization over the boundary normal angle with
/// polygon clipping, angle bracket tolerance 1e-9.
double mu_box(const std::vector<double>& x, int dim);

/// Like mu_box but restricted to halfplanes monotone to the origin corner
/// (normals with nonpositive components). d=2.
double mu_box_monotone_origin(const std::vector<double>& x);

struct ThetaDOptions {
    int grid_size = 64;           // log-spaced r values in (sigma, 1]
    size_t box_mc_samples = 200000; // Monte-Carlo F(r) sample count for the box
    uint64_t seed = 1;
};

/// Disagreement coefficient of a halfspace disjoint from the support, for
/// the uniform law on the shape: theta = max(1, max_r F(r)/r). Ball F is
/// exact (radial integration via cap inversion); box F is Monte-Carlo.
ContinuumTheta theta_D(const SupportShape& shape, double sigma, const ThetaDOptions& opts = {});

/// Volume of {prod_i x_i <= r} inside the unit box. d=2 closed form
/// r + r ln(1/r); d=3 by 1D numeric integration.
double volume_I(double r, int dim);
double volume_I_mc(double r, int dim, size_t samples, Rng& rng);

struct BridgingTrialRow {
    uint64_t trial = 0;
    double theta_finite = 0;
    double theta_continuum = 0;
    bool holds = false;
};

struct BridgingResult {
    double pass_rate = 0;
    std::vector<BridgingTrialRow> rows;
};

/// Empirical check that the finite-sample coefficient at sigma stays below
/// 8x the continuum coefficient at 2*sigma, for iid draws from the shape.
BridgingResult bridging_check(const SupportShape& shape, size_t n, const Rational& sigma,
                              size_t trials, uint64_t seed, const ThetaDOptions& opts = {});

} // namespace rhosum
