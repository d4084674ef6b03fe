#include "rhosum/approx.hpp"

#include <cmath>
#include <map>
#include <stdexcept>

namespace rhosum {

void SampleSpec::validate() const {
    if (!(Rational(0) < rho && rho < Rational(1)))
        throw std::invalid_argument("SampleSpec: rho must be in (0,1)");
    if (!(Rational(0) < eps && eps <= Rational(1)))
        throw std::invalid_argument("SampleSpec: eps must be in (0,1]");
    if (!(Rational(0) < delta && delta < Rational(1)))
        throw std::invalid_argument("SampleSpec: delta must be in (0,1)");
    if (lambda < 1) throw std::invalid_argument("SampleSpec: lambda must be >= 1");
    if (!(c_sample > 0)) throw std::invalid_argument("SampleSpec: c_sample must be positive");
}

namespace {

double log2_inv(const Rational& r) {
    // log2(1/r) for rational r in (0,1]
    return std::log2(static_cast<double>(r.den)) - std::log2(static_cast<double>(r.num));
}

int64_t ceil_positive(double v) {
    if (v <= 0) return 0;
    return static_cast<int64_t>(std::ceil(v - 1e-12));
}

} // namespace

int64_t li_sample_size(const SampleSpec& spec) {
    spec.validate();
    double term = spec.lambda * log2_inv(spec.rho) + log2_inv(spec.delta);
    double v = spec.c_sample * (1.0 / spec.rho.to_double()) *
               (1.0 / (spec.eps.to_double() * spec.eps.to_double())) * term;
    return ceil_positive(v);
}

int64_t round_sample_size(const SampleSpec& spec, size_t x_size, size_t n, int i,
                          const Rational& rho) {
    if (i < 1) throw std::invalid_argument("round_sample_size: round index must be >= 1");
    if (x_size > n) throw std::invalid_argument("round_sample_size: x_size exceeds n");
    if (x_size == 0) return 0;
    int t_max = ceil_log2_inverse(rho);
    double log_term = spec.lambda * log2_inv(rho) +
                      std::log2(std::max(1, t_max) / spec.delta.to_double());
    double ratio = static_cast<double>(x_size) / static_cast<double>(n);
    double v = spec.c_sample * ratio * (std::ldexp(1.0, i) /
               (spec.eps.to_double() * spec.eps.to_double())) * log_term;
    int64_t size = ceil_positive(v);
    return std::min<int64_t>(size, static_cast<int64_t>(x_size));
}

std::vector<WeightedIndex> draw_sample_indices(const std::vector<uint32_t>& indices, size_t size,
                                               Rng& rng) {
    if (size > 0 && indices.empty())
        throw std::invalid_argument("draw_sample: positive size from empty subset");
    std::map<uint32_t, uint32_t> counts;
    for (size_t k = 0; k < size; ++k)
        counts[indices[rng.below(indices.size())]]++;
    std::vector<WeightedIndex> out;
    out.reserve(counts.size());
    for (auto [idx, m] : counts) out.push_back({idx, m});
    return out;
}

std::vector<WeightedIndex> draw_sample(const Bitset& subset, size_t size, Rng& rng) {
    return draw_sample_indices(subset.to_indices(), size, rng);
}

VerifyResult verify_relative_approx(const std::vector<WeightedIndex>& z, const RangeSpace& rs,
                                    const Rational& rho, const Rational& eps, const Bitset* base) {
    int64_t base_n = base ? static_cast<int64_t>(base->count()) : static_cast<int64_t>(rs.n());
    int64_t w_total = 0;
    for (const auto& e : z) w_total += e.mult;

    VerifyResult res;
    Rational worst_ratio(-1); // violation severity ranked by error/allowance
    for (size_t ri = 0; ri < rs.ranges.size(); ++ri) {
        const auto& trace = rs.ranges[ri].trace;
        int64_t cnt_base = base ? static_cast<int64_t>(trace.count_and(*base))
                                : static_cast<int64_t>(rs.ranges[ri].popcount);
        int64_t cnt_z = 0;
        for (const auto& e : z)
            if (trace.test(e.index)) cnt_z += e.mult;

        Rational xbar = base_n == 0 ? Rational(0) : Rational(cnt_base, base_n);
        Rational zbar = w_total == 0 ? Rational(0) : Rational(cnt_z, w_total);
        Rational err = (xbar - zbar).abs();
        Rational allow = eps * rat_max(rho, xbar);
        if (err > allow) {
            res.ok = false;
            // compare err/allow ratios by cross multiplication; allow > 0 here
            Rational ratio = allow.num == 0 ? Rational(INT64_MAX) : err / allow;
            if (ratio > worst_ratio) {
                worst_ratio = ratio;
                res.worst_range = static_cast<int64_t>(ri);
                res.worst_error = err;
                res.worst_allowance = allow;
            }
        }
    }
    return res;
}

} // namespace rhosum
