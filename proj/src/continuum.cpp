#include "rhosum/continuum.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>

#include "rhosum/disagreement.hpp"
#include "rhosum/generators.hpp"
#include "rhosum/sweep.hpp"

namespace rhosum {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

double mu_ball(double x_norm, int dim) {
    if (x_norm < 0.0 || x_norm > 1.0) throw std::out_of_range("mu_ball: x_norm outside [0,1]");
    double u = x_norm;
    if (dim == 2) return (std::acos(u) - u * std::sqrt(1.0 - u * u)) / kPi;
    if (dim == 3) {
        double h = 1.0 - u; // cap height
        return h * h * (3.0 - h) / 4.0;
    }
    throw std::invalid_argument("mu_ball: dim must be 2 or 3");
}

namespace {

/// Area of {y in [0,1]^2 : dot(u, y - x) >= 0}: clip the square, shoelace.
double clipped_area(double ux, double uy, double x0, double x1) {
    double px[8] = {0, 1, 1, 0}, py[8] = {0, 0, 1, 1};
    int m = 4;
    double qx[8], qy[8];
    int k = 0;
    for (int i = 0; i < m; ++i) {
        int j = (i + 1) % m;
        double di = ux * (px[i] - x0) + uy * (py[i] - x1);
        double dj = ux * (px[j] - x0) + uy * (py[j] - x1);
        if (di >= 0) {
            qx[k] = px[i];
            qy[k] = py[i];
            ++k;
        }
        if ((di > 0 && dj < 0) || (di < 0 && dj > 0)) {
            double t = di / (di - dj);
            qx[k] = px[i] + t * (px[j] - px[i]);
            qy[k] = py[i] + t * (py[j] - py[i]);
            ++k;
        }
    }
    double area = 0;
    for (int i = 0; i < k; ++i) {
        int j = (i + 1) % k;
        area += qx[i] * qy[j] - qx[j] * qy[i];
    }
    return 0.5 * std::fabs(area);
}

double golden_min(double lo, double hi, const std::function<double(double)>& f, double tol) {
    const double gr = 0.6180339887498949;
    double a = lo, b = hi;
    double c = b - gr * (b - a), d = a + gr * (b - a);
    double fc = f(c), fd = f(d);
    while (b - a > tol) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - gr * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + gr * (b - a);
            fd = f(d);
        }
    }
    return std::min(fc, fd);
}

double minimize_angle(const std::function<double(double)>& area, double phi_lo, double phi_hi,
                      int coarse) {
    double best = HUGE_VAL;
    int best_i = 0;
    double step = (phi_hi - phi_lo) / coarse;
    for (int i = 0; i <= coarse; ++i) {
        double v = area(phi_lo + i * step);
        if (v < best) {
            best = v;
            best_i = i;
        }
    }
    double lo = phi_lo + std::max(0, best_i - 1) * step;
    double hi = phi_lo + std::min(coarse, best_i + 1) * step;
    return golden_min(lo, hi, area, 1e-9);
}

} // namespace

double mu_box(const std::vector<double>& x, int dim) {
    if (dim != 2) throw std::invalid_argument("mu_box: d=2 only");
    if (x.size() != 2) throw std::invalid_argument("mu_box: need 2 coordinates");
    for (double c : x)
        if (c < 0.0 || c > 1.0) throw std::out_of_range("mu_box: point outside the unit box");
    auto area = [&](double phi) { return clipped_area(std::cos(phi), std::sin(phi), x[0], x[1]); };
    return minimize_angle(area, 0.0, 2.0 * kPi, 96);
}

double mu_box_monotone_origin(const std::vector<double>& x) {
    if (x.size() != 2) throw std::invalid_argument("mu_box_monotone_origin: need 2 coordinates");
    // normals with both components <= 0 point the halfplane toward the origin
    auto area = [&](double phi) { return clipped_area(std::cos(phi), std::sin(phi), x[0], x[1]); };
    return minimize_angle(area, kPi, 1.5 * kPi, 96);
}

namespace {

/// Invert the d=2/3 cap measure: distance u such that mu_ball(u) = r.
double cap_inverse(double r, int dim) {
    double lo = 0.0, hi = 1.0; // mu decreasing in u: mu(0)=1/2, mu(1)=0
    if (r >= 0.5) return 0.0;
    if (r <= 0.0) return 1.0;
    for (int it = 0; it < 80; ++it) {
        double mid = 0.5 * (lo + hi);
        if (mu_ball(mid, dim) > r)
            lo = mid;
        else
            hi = mid;
        if (hi - lo < 1e-13) break;
    }
    return 0.5 * (lo + hi);
}

double ball_F(double r, int dim) {
    // Pr[mu(x) <= r] = mass outside radius u_r = 1 - u_r^dim
    double u = cap_inverse(r, dim);
    return 1.0 - std::pow(u, dim);
}

} // namespace

ContinuumTheta theta_D(const SupportShape& shape, double sigma, const ThetaDOptions& opts) {
    if (opts.grid_size < 8) throw std::invalid_argument("theta_D: grid_size must be >= 8");
    if (!(sigma > 0)) throw std::invalid_argument("theta_D: sigma must be positive");
    ContinuumTheta out;
    out.sigma = sigma;
    out.theta = 1.0;
    if (sigma >= 1.0) return out; // empty supremum range

    std::vector<double> mus; // box path: empirical mu distribution
    if (shape.kind == ShapeKind::UnitBox) {
        Rng rng(opts.seed);
        mus.reserve(opts.box_mc_samples);
        for (size_t k = 0; k < opts.box_mc_samples; ++k) {
            std::vector<double> x(shape.dim);
            for (int a = 0; a < shape.dim; ++a) x[a] = rng.real01();
            mus.push_back(mu_box(x, shape.dim));
        }
        std::sort(mus.begin(), mus.end());
    }

    for (int g = 0; g < opts.grid_size; ++g) {
        double t = static_cast<double>(g) / (opts.grid_size - 1);
        double r = sigma * std::pow(1.0 / sigma, t); // log-spaced in [sigma, 1]
        double F;
        if (shape.kind == ShapeKind::UnitBall) {
            F = ball_F(r, shape.dim);
        } else {
            size_t cnt = std::upper_bound(mus.begin(), mus.end(), r) - mus.begin();
            F = static_cast<double>(cnt) / static_cast<double>(mus.size());
        }
        out.F_curve.push_back({r, F});
        out.theta = std::max(out.theta, F / r);
    }
    return out;
}

double volume_I(double r, int dim) {
    if (!(r > 0.0 && r <= 1.0)) throw std::out_of_range("volume_I: r must be in (0,1]");
    if (dim == 2) return r + r * std::log(1.0 / r);
    if (dim == 3) {
        // integrate vol2(min(1, r / x3)) over x3: exact r below x3 = r,
        // Simpson on [r, 1]
        auto f = [&](double x3) { return volume_I(std::min(1.0, r / x3), 2); };
        int steps = 4096;
        double h = (1.0 - r) / steps;
        double acc = f(r) + f(1.0);
        for (int i = 1; i < steps; ++i) acc += (i % 2 ? 4.0 : 2.0) * f(r + i * h);
        return r + acc * h / 3.0;
    }
    throw std::invalid_argument("volume_I: dim must be 2 or 3");
}

double volume_I_mc(double r, int dim, size_t samples, Rng& rng) {
    if (!(r > 0.0 && r <= 1.0)) throw std::out_of_range("volume_I_mc: r must be in (0,1]");
    size_t hit = 0;
    for (size_t k = 0; k < samples; ++k) {
        double p = 1.0;
        for (int a = 0; a < dim; ++a) p *= rng.real01();
        if (p <= r) ++hit;
    }
    return static_cast<double>(hit) / static_cast<double>(samples);
}

BridgingResult bridging_check(const SupportShape& shape, size_t n, const Rational& sigma,
                              size_t trials, uint64_t seed, const ThetaDOptions& opts) {
    double theta_cont = theta_D(shape, 2.0 * sigma.to_double(), opts).theta;
    BridgingResult res;
    size_t pass = 0;
    for (size_t tr = 0; tr < trials; ++tr) {
        Rng rng = Rng::stream(seed, tr);
        PointSet ps = shape.kind == ShapeKind::UnitBall
                          ? gen_ball(n, shape.dim, rng)
                          : gen_box(n, shape.dim, rng);
        auto mu = min_cover_sweep(ps);
        auto prof = theta_empty_from_mu(mu, n, sigma);
        BridgingTrialRow row;
        row.trial = tr;
        row.theta_finite = prof.theta.to_double();
        row.theta_continuum = theta_cont;
        row.holds = row.theta_finite <= 8.0 * theta_cont;
        if (row.holds) ++pass;
        res.rows.push_back(row);
    }
    res.pass_rate = trials == 0 ? 1.0 : static_cast<double>(pass) / static_cast<double>(trials);
    return res;
}

} // namespace rhosum
