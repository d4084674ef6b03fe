#include "rhosum/disagreement.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace rhosum {

Rational sigma_min(const RangeSpace& rs) {
    if (rs.range_count() == 0) throw std::invalid_argument("sigma_min: no ranges");
    uint32_t best = UINT32_MAX;
    for (const auto& r : rs.ranges) best = std::min(best, r.popcount);
    return Rational(best, static_cast<int64_t>(rs.n()));
}

std::vector<uint32_t> r_ball(const RangeSpace& rs, uint32_t h, const Rational& r) {
    const auto& base = rs.ranges.at(h).trace;
    std::vector<uint32_t> out;
    for (uint32_t j = 0; j < rs.range_count(); ++j) {
        // sd/n <= r  <=>  sd * r.den <= r.num * n
        Int128 sd = rs.ranges[j].trace.count_xor(base);
        if (sd * r.den <= Int128(r.num) * rs.n()) out.push_back(j);
    }
    return out;
}

namespace {

/// Shared supremum evaluation over the step function G, where
/// G[k] = |X ∩ DIS(B(h, r))| for r in [k/n, (k+1)/n). The ratio G(r)/(n r)
/// has nonincreasing 1/r against a piecewise-constant numerator, so the
/// supremum over r > sigma is attained at each step's left endpoint
/// max(sigma, k/n); the sigma endpoint enters as a limit value.
void eval_theta(const std::vector<int64_t>& G, size_t n, const Rational& sigma, ThetaMode mode,
                DisagreementProfile& out) {
    out.sigma = sigma;
    out.theta = Rational(1);
    out.witness_r = Rational(0);
    if (sigma >= Rational(1) || sigma < Rational(1, static_cast<int64_t>(n))) {
        out.mode += "-easy";
        return;
    }
    if (mode == ThetaMode::Eq8) {
        // doubled maximum over the integer grid S = {i/n : sigma*n <= i <= n}
        for (size_t i = 1; i <= n; ++i) {
            if (Int128(i) * sigma.den < Int128(sigma.num) * n) continue;
            Rational ratio(2 * G[i], static_cast<int64_t>(i));
            if (ratio > out.theta) {
                out.theta = ratio;
                out.witness_r = Rational(static_cast<int64_t>(i), static_cast<int64_t>(n));
            }
        }
        return;
    }
    for (size_t k = 0; k <= n; ++k) {
        // piece [k/n, (k+1)/n) meets (sigma, inf) iff (k+1)/n > sigma
        if (Int128(k + 1) * sigma.den <= Int128(sigma.num) * n) continue;
        Rational r_eval = rat_max(sigma, Rational(static_cast<int64_t>(k), static_cast<int64_t>(n)));
        if (G[k] == 0) continue;
        Rational ratio = Rational(G[k]) / (Rational(static_cast<int64_t>(n)) * r_eval);
        if (ratio > out.theta) {
            out.theta = ratio;
            out.witness_r = r_eval;
        }
    }
}

void fill_grid(const std::vector<int64_t>& G, const std::vector<int64_t>* balls, size_t n,
               const Rational& sigma, DisagreementProfile& out) {
    if (sigma >= Rational(1) || sigma < Rational(1, static_cast<int64_t>(n))) return;
    // ceil(sigma * n)
    Int128 lo128 = (Int128(sigma.num) * n + sigma.den - 1) / sigma.den;
    out.grid_lo = static_cast<uint32_t>(static_cast<int64_t>(lo128));
    for (size_t i = out.grid_lo; i <= n; ++i) {
        out.dis_sizes.push_back(G[i]);
        if (balls) out.ball_sizes.push_back((*balls)[i]);
    }
}

} // namespace

DisagreementProfile theta_h(const RangeSpace& rs, uint32_t h, const Rational& sigma,
                            ThetaMode mode) {
    size_t n = rs.n();
    const auto& base = rs.ranges.at(h).trace;

    // symmetric differences, then grow the ball one step size at a time
    std::vector<std::pair<uint32_t, uint32_t>> by_sd; // (sd, range)
    by_sd.reserve(rs.range_count());
    for (uint32_t j = 0; j < rs.range_count(); ++j)
        by_sd.push_back({static_cast<uint32_t>(rs.ranges[j].trace.count_xor(base)), j});
    std::sort(by_sd.begin(), by_sd.end());

    std::vector<int64_t> G(n + 1, 0), balls(n + 1, 0);
    Bitset all(n), any(n);
    all.set_all();
    size_t pos = 0;
    int64_t in_ball = 0;
    for (size_t k = 0; k <= n; ++k) {
        while (pos < by_sd.size() && by_sd[pos].first == k) {
            const auto& tr = rs.ranges[by_sd[pos].second].trace;
            any |= tr;
            all &= tr;
            ++in_ball;
            ++pos;
        }
        balls[k] = in_ball;
        if (in_ball == 0) {
            G[k] = 0;
        } else {
            Bitset dis = any;
            dis.and_not(all);
            G[k] = static_cast<int64_t>(dis.count());
        }
    }

    DisagreementProfile out;
    out.mode = mode == ThetaMode::Eq8 ? "eq8" : "exhaustive";
    eval_theta(G, n, sigma, mode, out);
    fill_grid(G, &balls, n, sigma, out);
    return out;
}

ThetaXResult theta_X(const RangeSpace& rs, const Rational& sigma, ThetaMode mode) {
    Rational smin = sigma_min(rs);
    if (sigma < smin)
        throw std::domain_error("theta_X: sigma below sigma_min (" + smin.str() + ")");
    ThetaXResult best;
    bool first = true;
    for (uint32_t j = 0; j < rs.range_count(); ++j) {
        // candidate iff fraction <= sigma
        if (Int128(rs.ranges[j].popcount) * sigma.den > Int128(sigma.num) * rs.n()) continue;
        DisagreementProfile p = theta_h(rs, j, sigma, mode);
        if (first || p.theta < best.theta) {
            first = false;
            best.theta = p.theta;
            best.witness_range = j;
            best.profile = std::move(p);
        }
    }
    if (first) throw std::logic_error("theta_X: no candidate range at this sigma");
    return best;
}

std::vector<int64_t> min_cover_profile(const RangeSpace& rs) {
    bool has_empty = false;
    for (const auto& r : rs.ranges)
        if (r.popcount == 0) { has_empty = true; break; }
    if (!has_empty)
        throw std::invalid_argument("min_cover_profile: family lacks the empty trace");
    std::vector<int64_t> mu(rs.n(), INT64_MAX);
    for (const auto& r : rs.ranges) {
        if (r.popcount == 0) continue;
        int64_t c = r.popcount;
        r.trace.for_each([&](size_t i) { mu[i] = std::min(mu[i], c); });
    }
    return mu;
}

DisagreementProfile theta_empty_from_mu(const std::vector<int64_t>& mu, size_t n,
                                        const Rational& sigma, ThetaMode mode) {
    if (mu.size() != n) throw std::invalid_argument("theta_empty_from_mu: size mismatch");
    // G[k] = #{x : mu(x) <= k}: the ball around the empty trace at radius
    // k/n is every range of size <= k, and its DIS is their union.
    std::vector<int64_t> G(n + 1, 0);
    for (int64_t v : mu) {
        if (v < 0) throw std::invalid_argument("theta_empty_from_mu: negative cover value");
        if (static_cast<size_t>(v) <= n) G[v]++;
    }
    for (size_t k = 1; k <= n; ++k) G[k] += G[k - 1];

    DisagreementProfile out;
    out.mode = mode == ThetaMode::Eq8 ? "eq8-profile" : "profile";
    eval_theta(G, n, sigma, mode, out);
    fill_grid(G, nullptr, n, sigma, out);
    return out;
}

std::string profile_csv(const std::vector<DisagreementProfile>& rows) {
    std::ostringstream os;
    os << "# schema v1: sigma,theta_num,theta_den,witness_r,mode\n";
    for (const auto& p : rows)
        os << p.sigma.str() << "," << p.theta.num << "," << p.theta.den << "," << p.witness_r.str()
           << "," << p.mode << "\n";
    return os.str();
}

} // namespace rhosum
