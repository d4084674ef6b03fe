#include "rhosum/generators.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "rhosum/disagreement.hpp"
#include "rhosum/rangespace.hpp"

namespace rhosum {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

void DistributionSpec::validate() const {
    if (dim != 2 && dim != 3) throw std::invalid_argument("DistributionSpec: dim must be 2 or 3");
    if (n == 0) throw std::invalid_argument("DistributionSpec: n must be >= 1");
    if (components.empty()) throw std::invalid_argument("DistributionSpec: no components");
    double sum = 0;
    for (const auto& [w, comp] : components) {
        if (!(w > 0)) throw std::invalid_argument("DistributionSpec: weights must be positive");
        sum += w;
        if (comp.affine) {
            if (comp.affine->matrix.size() != static_cast<size_t>(dim) ||
                comp.affine->shift.size() != static_cast<size_t>(dim))
                throw std::invalid_argument("DistributionSpec: affine dimension mismatch");
        }
    }
    if (std::fabs(sum - 1.0) > 1e-9)
        throw std::invalid_argument("DistributionSpec: weights must sum to 1");
}

void LowerBoundSpec::validate() const {
    if (eta < 4) throw std::invalid_argument("LowerBoundSpec: violated eta >= 4");
    if (q % eta != 0) throw std::invalid_argument("LowerBoundSpec: violated q % eta == 0");
    if (k < 1) throw std::invalid_argument("LowerBoundSpec: violated k >= 1");
    if (k > q / (4 * eta)) throw std::invalid_argument("LowerBoundSpec: violated k <= q/(4*eta)");
    if (!vertex_angles.empty()) {
        if (static_cast<int64_t>(vertex_angles.size()) != eta)
            throw std::invalid_argument("LowerBoundSpec: need exactly eta vertex angles");
        for (size_t i = 0; i < vertex_angles.size(); ++i) {
            if (!(vertex_angles[i] > 0.0 && vertex_angles[i] < kPi))
                throw std::invalid_argument("LowerBoundSpec: violated angle in (0, pi)");
            if (i > 0 && !(vertex_angles[i] > vertex_angles[i - 1]))
                throw std::invalid_argument("LowerBoundSpec: violated strictly increasing angles");
        }
    }
    if (outer_height <= 0 || outer_height >= kCoordLimit)
        throw std::invalid_argument("LowerBoundSpec: outer_height out of range");
}

namespace {

std::vector<double> draw_raw(ShapeKind shape, int dim, Rng& rng) {
    std::vector<double> x(dim);
    if (shape == ShapeKind::UnitBox) {
        for (int a = 0; a < dim; ++a) x[a] = rng.real01();
        return x;
    }
    // rejection from [-1,1]^d; acceptance >= pi/4 at d=2, pi/6 at d=3
    while (true) {
        double s = 0;
        for (int a = 0; a < dim; ++a) {
            x[a] = rng.sym01();
            s += x[a] * x[a];
        }
        if (s <= 1.0) return x;
    }
}

std::vector<double> apply_affine(const AffineMap& m, const std::vector<double>& x) {
    size_t d = x.size();
    std::vector<double> out(d, 0.0);
    for (size_t r = 0; r < d; ++r) {
        double v = m.shift[r];
        for (size_t c = 0; c < d; ++c) v += m.matrix[r][c] * x[c];
        out[r] = v;
    }
    return out;
}

} // namespace

PointSet gen_box(size_t n, int dim, Rng& rng, int64_t grid_scale) {
    if (n == 0) throw std::invalid_argument("gen_box: n must be >= 1");
    std::vector<std::vector<double>> raw;
    raw.reserve(n);
    for (size_t i = 0; i < n; ++i) raw.push_back(draw_raw(ShapeKind::UnitBox, dim, rng));
    return snap_points(raw, dim, grid_scale);
}

PointSet gen_ball(size_t n, int dim, Rng& rng, int64_t grid_scale) {
    if (n == 0) throw std::invalid_argument("gen_ball: n must be >= 1");
    std::vector<std::vector<double>> raw;
    raw.reserve(n);
    for (size_t i = 0; i < n; ++i) raw.push_back(draw_raw(ShapeKind::UnitBall, dim, rng));
    return snap_points(raw, dim, grid_scale);
}

PointSet gen_mixture(const DistributionSpec& spec) {
    spec.validate();
    Rng rng(spec.seed);
    std::vector<std::vector<double>> raw;
    raw.reserve(spec.n);
    for (size_t i = 0; i < spec.n; ++i) {
        size_t pick = 0;
        if (spec.components.size() > 1) {
            // a single-component mixture must reproduce the bare generator's
            // stream, so the selection draw is skipped in that case
            double u = rng.real01(), acc = 0;
            for (size_t c = 0; c < spec.components.size(); ++c) {
                acc += spec.components[c].first;
                if (u < acc || c + 1 == spec.components.size()) {
                    pick = c;
                    break;
                }
            }
        }
        const auto& comp = spec.components[pick].second;
        auto x = draw_raw(comp.shape, spec.dim, rng);
        if (comp.affine) x = apply_affine(*comp.affine, x);
        raw.push_back(std::move(x));
    }
    return snap_points(raw, spec.dim, spec.grid_scale);
}

PointSet gen_line(size_t n, int64_t grid_scale) {
    if (n == 0) throw std::invalid_argument("gen_line: n must be >= 1");
    // exact multiples of a fixed grid direction: collinear before snapping
    int64_t step = std::max<int64_t>(1, grid_scale / (2 * std::max<size_t>(1, n - 1)));
    PointSet ps;
    ps.dim = 2;
    ps.grid_scale = grid_scale;
    for (size_t i = 0; i < n; ++i)
        ps.coords.push_back({static_cast<int64_t>(i) * 2 * step, static_cast<int64_t>(i) * step, 0});
    return ps;
}

PointSet gen_circle(size_t n, int64_t grid_scale) {
    if (n == 0) throw std::invalid_argument("gen_circle: n must be >= 1");
    std::vector<std::vector<double>> raw;
    raw.reserve(n);
    for (size_t i = 0; i < n; ++i) {
        double a = 2.0 * kPi * static_cast<double>(i) / static_cast<double>(n);
        raw.push_back({std::cos(a), std::sin(a)});
    }
    return snap_points(raw, 2, grid_scale);
}

LowerBoundResult gen_lower_bound(const LowerBoundSpec& spec) {
    spec.validate();
    std::vector<double> angles = spec.vertex_angles;
    if (angles.empty()) {
        for (int64_t j = 0; j < spec.eta; ++j)
            angles.push_back(kPi / 6.0 + (4.0 * kPi / 6.0) * static_cast<double>(j) /
                                             static_cast<double>(spec.eta - 1));
    }

    Rational want(spec.n(), spec.k + spec.q / spec.eta);
    for (int64_t M = spec.outer_height; M < kCoordLimit; M *= 2) {
        PointSet ps;
        ps.dim = 2;
        ps.grid_scale = spec.grid_scale;
        for (int64_t i = 0; i < spec.k; ++i) ps.coords.push_back({0, M, 0});
        for (double a : angles) {
            int64_t vx = std::llround(std::cos(a) * static_cast<double>(spec.grid_scale));
            int64_t vy = std::llround(std::sin(a) * static_cast<double>(spec.grid_scale));
            for (int64_t c = 0; c < spec.q / spec.eta; ++c) ps.coords.push_back({vx, vy, 0});
        }

        RangeSpace rs = make_range_space(ps);
        Rational sigma(spec.k, spec.n());
        Rational got = theta_X(rs, sigma).theta;
        if (got == want) {
            LowerBoundResult res;
            res.points = std::move(ps);
            res.outer_height_used = M;
            res.theta = got;
            return res;
        }
    }
    throw std::runtime_error(
        "gen_lower_bound: no outer height below the coordinate bound certifies the placement");
}

GenSpec parse_gen_config(std::istream& is, GenSpec base) {
    GenSpec g = std::move(base);
    bool explicit_components = false;
    std::string line;
    while (std::getline(is, line)) {
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        auto eq = line.find('=');
        if (eq == std::string::npos) continue;
        auto trim = [](std::string s) {
            size_t b = s.find_first_not_of(" \t\r");
            size_t e = s.find_last_not_of(" \t\r");
            return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
        };
        std::string key = trim(line.substr(0, eq)), val = trim(line.substr(eq + 1));
        if (key.empty() || val.empty()) continue;
        if (key == "kind") {
            g.kind = val;
        } else if (key == "dim") {
            g.dist.dim = std::stoi(val);
        } else if (key == "n") {
            g.n = std::stoull(val);
            g.dist.n = g.n;
        } else if (key == "seed") {
            g.dist.seed = std::stoull(val);
        } else if (key == "scale") {
            g.grid_scale = std::stoll(val);
            g.dist.grid_scale = g.grid_scale;
            g.lb.grid_scale = g.grid_scale;
        } else if (key == "eta") {
            g.lb.eta = std::stoll(val);
        } else if (key == "q") {
            g.lb.q = std::stoll(val);
        } else if (key == "k") {
            g.lb.k = std::stoll(val);
        } else if (key == "outer_height") {
            g.lb.outer_height = std::stoll(val);
        } else if (key == "angles") {
            g.lb.vertex_angles.clear();
            std::stringstream ss(val);
            std::string tok;
            while (std::getline(ss, tok, ',')) g.lb.vertex_angles.push_back(std::stod(tok));
        } else if (key == "component") {
            if (!explicit_components) {
                g.dist.components.clear();
                explicit_components = true;
            }
            std::stringstream ss(val);
            std::string wtok, stok, atok;
            std::getline(ss, wtok, ':');
            std::getline(ss, stok, ':');
            std::getline(ss, atok);
            AtomicSpec comp;
            if (stok == "ball")
                comp.shape = ShapeKind::UnitBall;
            else if (stok == "box")
                comp.shape = ShapeKind::UnitBox;
            else
                throw std::invalid_argument("config: component shape must be box or ball");
            if (!atok.empty()) {
                if (atok.rfind("affine=", 0) != 0)
                    throw std::invalid_argument("config: expected affine=... in component");
                std::stringstream as(atok.substr(7));
                std::vector<double> vals;
                std::string t;
                while (std::getline(as, t, ',')) vals.push_back(std::stod(t));
                int d = g.dist.dim;
                if (static_cast<int>(vals.size()) != d * d + d)
                    throw std::invalid_argument("config: affine needs d*d + d values");
                AffineMap m;
                for (int r = 0; r < d; ++r) {
                    m.matrix.push_back(
                        std::vector<double>(vals.begin() + r * d, vals.begin() + (r + 1) * d));
                }
                m.shift.assign(vals.begin() + d * d, vals.end());
                comp.affine = m;
            }
            g.dist.components.push_back({std::stod(wtok), comp});
        } else {
            throw std::invalid_argument("config: unknown key '" + key + "'");
        }
    }
    return g;
}

PointSet run_generator(const GenSpec& spec) {
    if (spec.kind == "box") {
        Rng rng(spec.dist.seed);
        return gen_box(spec.dist.n, spec.dist.dim, rng, spec.grid_scale);
    }
    if (spec.kind == "ball") {
        Rng rng(spec.dist.seed);
        return gen_ball(spec.dist.n, spec.dist.dim, rng, spec.grid_scale);
    }
    if (spec.kind == "mixture") return gen_mixture(spec.dist);
    if (spec.kind == "line") return gen_line(spec.n ? spec.n : spec.dist.n, spec.grid_scale);
    if (spec.kind == "circle") return gen_circle(spec.n ? spec.n : spec.dist.n, spec.grid_scale);
    if (spec.kind == "lowerbound") return gen_lower_bound(spec.lb).points;
    throw std::invalid_argument("config: unknown kind '" + spec.kind + "'");
}

} // namespace rhosum
