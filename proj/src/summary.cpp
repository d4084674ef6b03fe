#include "rhosum/summary.hpp"

#include <algorithm>
#include <cstring>
#include <stdexcept>

#include <json.hpp>

namespace rhosum {

void SummaryParams::validate() const {
    if (!(Rational(0) < rho && rho < Rational(1)))
        throw std::invalid_argument("SummaryParams: rho must be in (0,1)");
    if (!(Rational(0) < eps && eps < Rational(1)))
        throw std::invalid_argument("SummaryParams: eps must be in (0,1)");
    if (!(Rational(0) < delta && delta < Rational(1)))
        throw std::invalid_argument("SummaryParams: delta must be in (0,1)");
    if (lambda < 1) throw std::invalid_argument("SummaryParams: lambda must be >= 1");
    if (!(c_sample > 0)) throw std::invalid_argument("SummaryParams: c_sample must be positive");
    if (ceil_log2_inverse(rho) > 40)
        throw std::invalid_argument("SummaryParams: rho below 2^-40 is unsupported");
}

namespace {

const Rational kEpsCap(1, 3);

/// Exact removal test for round i. h stays when
/// S_i(h) * |X_i| + m_i < n / 2^i; with an empty sample the test
/// degenerates to m_i < n / 2^i.
bool round_pass(uint64_t w_h, uint64_t w_total, uint64_t x_size, uint64_t m, uint64_t n, int i) {
    if (w_total == 0) return (Int128(m) << i) < Int128(n);
    Int128 lhs = (Int128(w_h) * x_size + Int128(m) * w_total) << i;
    return lhs < Int128(n) * w_total;
}

SampleSpec make_spec(const SummaryParams& p, const Rational& eps_internal) {
    SampleSpec s;
    s.rho = p.rho;
    s.eps = eps_internal;
    s.delta = p.delta;
    s.lambda = p.lambda;
    s.c_sample = p.c_sample;
    return s;
}

uint64_t count_weight_in_trace(const Bitset& trace, const std::vector<WeightedIndex>& z) {
    uint64_t w = 0;
    for (const auto& e : z)
        if (trace.test(e.index)) w += e.mult;
    return w;
}

} // namespace

Summary build(const RangeSpace& rs, const SummaryParams& params, Rng& rng) {
    params.validate();
    size_t n = rs.n();
    if (n == 0) throw std::invalid_argument("build: empty point set");
    size_t R = rs.range_count();

    Rational sigma_min(1);
    for (const auto& r : rs.ranges) sigma_min = rat_min(sigma_min, fraction(rs, r));

    Summary s;
    s.n = n;
    s.dim = rs.ps.dim;
    s.grid_scale = rs.ps.grid_scale;
    s.params = params;
    s.eps_internal = rat_min(params.eps, kEpsCap);
    s.rho_effective = rat_max(params.rho, sigma_min);

    int t_max = ceil_log2_inverse(s.rho_effective);
    t_max = std::max(t_max, 1);
    SampleSpec spec = make_spec(params, s.eps_internal);

    std::vector<uint32_t> alive(R);
    for (size_t i = 0; i < R; ++i) alive[i] = static_cast<uint32_t>(i);

    for (int i = 1; i <= t_max; ++i) {
        Bitset all(n), any(n);
        all.set_all();
        for (uint32_t id : alive) {
            all &= rs.ranges[id].trace;
            any |= rs.ranges[id].trace;
        }
        uint64_t m = all.count();
        Bitset x_region = any;
        x_region.and_not(all);
        uint64_t x_size = x_region.count();
        std::vector<uint32_t> x_indices = x_region.to_indices();

        int64_t size = round_sample_size(spec, x_size, n, i, s.rho_effective);
        std::vector<WeightedIndex> sample;
        int tries = 0;
        while (true) {
            if (static_cast<uint64_t>(size) >= x_size) {
                sample.clear();
                for (uint32_t idx : x_indices) sample.push_back({idx, 1});
            } else {
                sample = draw_sample_indices(x_indices, static_cast<size_t>(size), rng);
            }
            if (!params.verified_build || x_size == 0 ||
                static_cast<uint64_t>(size) >= x_size)
                break;
            Rational rho_i = Rational::from_int128(
                Int128(n) * (s.eps_internal.den + s.eps_internal.num),
                (Int128(s.eps_internal.den) << i) * x_size);
            Rational eps_q(s.eps_internal.num, s.eps_internal.den * 4);
            if (verify_relative_approx(sample, rs, rho_i, eps_q, &x_region).ok) break;
            if (++tries >= params.max_retries)
                throw std::runtime_error("build: verified draw failed after " +
                                         std::to_string(params.max_retries) +
                                         " retries at round " + std::to_string(i));
        }

        SummaryLevel lvl;
        lvl.i = i;
        lvl.m = m;
        lvl.x_size = x_size;
        for (const auto& e : sample)
            lvl.sample.push_back({rs.ps.coords[e.index], e.mult, static_cast<int64_t>(e.index)});
        if (params.sample_based_fix && m > 0) {
            for (size_t p = 0; p < n; ++p)
                if (all.test(p)) {
                    lvl.witness_point = StoredPoint{rs.ps.coords[p], 1, static_cast<int64_t>(p)};
                    break;
                }
        }
        s.levels.push_back(std::move(lvl));
        s.t = i;

        uint64_t w_total = 0;
        for (const auto& e : sample) w_total += e.mult;
        std::vector<uint32_t> next;
        next.reserve(alive.size());
        for (uint32_t id : alive) {
            uint64_t w = count_weight_in_trace(rs.ranges[id].trace, sample);
            if (round_pass(w, w_total, x_size, m, n, i)) next.push_back(id);
        }
        alive.swap(next);
        Bitset mask(R);
        for (uint32_t id : alive) mask.set(id);
        s.alive_after.push_back(std::move(mask));
        if (alive.empty()) break;
    }
    return s;
}

namespace {

template <typename CountFn>
int first_failed_round(const Summary& s, CountFn&& count_in_h) {
    for (int i = 1; i <= s.t; ++i) {
        const auto& lvl = s.level(i);
        uint64_t w = count_in_h(lvl);
        if (!round_pass(w, lvl.sample_weight(), lvl.x_size, lvl.m, s.n, i)) return i;
    }
    return s.t + 1;
}

uint64_t count_halfspace(const Summary& s, const SummaryLevel& lvl, const Halfspace& h) {
    uint64_t w = 0;
    for (const auto& p : lvl.sample)
        if (halfspace_contains_coords(h, p.coords, s.dim)) w += p.mult;
    return w;
}

uint64_t count_range(const SummaryLevel& lvl, const CanonicalRange& h) {
    uint64_t w = 0;
    for (const auto& p : lvl.sample) {
        if (p.index < 0)
            throw std::invalid_argument("membership: summary lacks source point indices");
        if (h.trace.test(static_cast<size_t>(p.index))) w += p.mult;
    }
    return w;
}

Rational estimate_at(const Summary& s, int j, uint64_t w) {
    const auto& lvl = s.level(j);
    uint64_t w_total = lvl.sample_weight();
    if (w_total == 0) return Rational(static_cast<int64_t>(lvl.m), static_cast<int64_t>(s.n));
    return Rational::from_int128(
        Int128(w) * lvl.x_size + Int128(lvl.m) * w_total,
        Int128(w_total) * s.n);
}

} // namespace

bool membership(const Summary& s, const Halfspace& h, int i) {
    if (i < 1 || i > s.t) throw std::out_of_range("membership: round index out of range");
    return first_failed_round(s, [&](const SummaryLevel& lvl) { return count_halfspace(s, lvl, h); }) > i;
}

bool membership(const Summary& s, const CanonicalRange& h, int i) {
    if (i < 1 || i > s.t) throw std::out_of_range("membership: round index out of range");
    return first_failed_round(s, [&](const SummaryLevel& lvl) { return count_range(lvl, h); }) > i;
}

Rational estimate(const Summary& s, const Halfspace& h) {
    int ff = first_failed_round(s, [&](const SummaryLevel& lvl) { return count_halfspace(s, lvl, h); });
    int j = std::max(1, ff - 1); // removed in round 1 -> level-1 estimate
    return estimate_at(s, j, count_halfspace(s, s.level(j), h));
}

Rational estimate(const Summary& s, const CanonicalRange& h) {
    int ff = first_failed_round(s, [&](const SummaryLevel& lvl) { return count_range(lvl, h); });
    int j = std::max(1, ff - 1);
    return estimate_at(s, j, count_range(s.level(j), h));
}

uint64_t stored_point_count(const Summary& s) {
    uint64_t total = 0;
    for (const auto& lvl : s.levels) total += lvl.sample_weight();
    return total;
}

// ---------------------------------------------------------------------------
// Serialization: magic, version, header fields, levels, trailing CRC32.

namespace {

constexpr char kMagic[4] = {'R', 'S', 'U', 'M'};
constexpr uint16_t kVersion = 1;

uint32_t crc32(const uint8_t* data, size_t len) {
    static uint32_t table[256];
    static bool init = false;
    if (!init) {
        for (uint32_t n = 0; n < 256; ++n) {
            uint32_t c = n;
            for (int k = 0; k < 8; ++k) c = (c & 1) ? 0xEDB88320u ^ (c >> 1) : c >> 1;
            table[n] = c;
        }
        init = true;
    }
    uint32_t c = 0xFFFFFFFFu;
    for (size_t i = 0; i < len; ++i) c = table[(c ^ data[i]) & 0xFF] ^ (c >> 8);
    return c ^ 0xFFFFFFFFu;
}

struct Writer {
    std::vector<uint8_t> buf;
    template <typename T>
    void put(T v) {
        uint8_t tmp[sizeof(T)];
        std::memcpy(tmp, &v, sizeof(T));
        buf.insert(buf.end(), tmp, tmp + sizeof(T));
    }
    void put_rational(const Rational& r) {
        put<int64_t>(r.num);
        put<uint64_t>(static_cast<uint64_t>(r.den));
    }
};

struct Reader {
    const std::vector<uint8_t>& buf;
    size_t pos = 0;
    explicit Reader(const std::vector<uint8_t>& b) : buf(b) {}
    template <typename T>
    T get() {
        if (pos + sizeof(T) > buf.size()) throw std::runtime_error("deserialize: truncated input");
        T v;
        std::memcpy(&v, buf.data() + pos, sizeof(T));
        pos += sizeof(T);
        return v;
    }
    Rational get_rational() {
        int64_t num = get<int64_t>();
        uint64_t den = get<uint64_t>();
        if (den == 0 || den > static_cast<uint64_t>(INT64_MAX))
            throw std::runtime_error("deserialize: malformed rational");
        return Rational(num, static_cast<int64_t>(den));
    }
};

void put_point(Writer& w, const StoredPoint& p, int dim) {
    for (int a = 0; a < dim; ++a) w.put<int64_t>(p.coords[a]);
    w.put<uint32_t>(p.mult);
}

StoredPoint get_point(Reader& r, int dim) {
    StoredPoint p;
    for (int a = 0; a < dim; ++a) p.coords[a] = r.get<int64_t>();
    p.mult = r.get<uint32_t>();
    p.index = -1;
    return p;
}

} // namespace

std::vector<uint8_t> serialize(const Summary& s) {
    Writer w;
    w.buf.insert(w.buf.end(), kMagic, kMagic + 4);
    w.put<uint16_t>(kVersion);
    w.put<uint16_t>(static_cast<uint16_t>(s.dim));
    w.put<uint64_t>(s.n);
    w.put<uint16_t>(static_cast<uint16_t>(s.t));
    w.put<int64_t>(s.grid_scale);
    w.put_rational(s.params.eps);
    w.put_rational(s.params.rho);
    w.put_rational(s.eps_internal);
    w.put_rational(s.rho_effective);
    w.put_rational(s.params.delta);
    w.put<uint16_t>(static_cast<uint16_t>(s.params.lambda));
    w.put<double>(s.params.c_sample);
    uint8_t flags = (s.params.verified_build ? 1 : 0) | (s.params.sample_based_fix ? 2 : 0);
    w.put<uint8_t>(flags);
    for (const auto& lvl : s.levels) {
        w.put<uint16_t>(static_cast<uint16_t>(lvl.i));
        w.put<uint64_t>(lvl.m);
        w.put<uint64_t>(lvl.x_size);
        w.put<uint64_t>(lvl.sample.size());
        for (const auto& p : lvl.sample) put_point(w, p, s.dim);
        w.put<uint8_t>(lvl.witness_point ? 1 : 0);
        if (lvl.witness_point) put_point(w, *lvl.witness_point, s.dim);
    }
    uint32_t crc = crc32(w.buf.data(), w.buf.size());
    w.put<uint32_t>(crc);
    return w.buf;
}

Summary deserialize(const std::vector<uint8_t>& bytes) {
    if (bytes.size() < 8) throw std::runtime_error("deserialize: truncated input");
    if (std::memcmp(bytes.data(), kMagic, 4) != 0)
        throw std::runtime_error("deserialize: bad magic");
    uint32_t stored_crc;
    std::memcpy(&stored_crc, bytes.data() + bytes.size() - 4, 4);
    if (crc32(bytes.data(), bytes.size() - 4) != stored_crc)
        throw std::runtime_error("deserialize: checksum mismatch");

    Reader r(bytes);
    r.pos = 4;
    uint16_t version = r.get<uint16_t>();
    if (version != kVersion)
        throw std::runtime_error("deserialize: version mismatch (got " + std::to_string(version) + ")");
    Summary s;
    s.dim = r.get<uint16_t>();
    if (s.dim != 2 && s.dim != 3) throw std::runtime_error("deserialize: malformed dimension");
    s.n = r.get<uint64_t>();
    s.t = r.get<uint16_t>();
    s.grid_scale = r.get<int64_t>();
    s.params.eps = r.get_rational();
    s.params.rho = r.get_rational();
    s.eps_internal = r.get_rational();
    s.rho_effective = r.get_rational();
    s.params.delta = r.get_rational();
    s.params.lambda = r.get<uint16_t>();
    s.params.c_sample = r.get<double>();
    uint8_t flags = r.get<uint8_t>();
    s.params.verified_build = flags & 1;
    s.params.sample_based_fix = flags & 2;
    if (s.t < 1) throw std::runtime_error("deserialize: malformed (empty levels)");
    for (int i = 0; i < s.t; ++i) {
        SummaryLevel lvl;
        lvl.i = r.get<uint16_t>();
        lvl.m = r.get<uint64_t>();
        lvl.x_size = r.get<uint64_t>();
        uint64_t len = r.get<uint64_t>();
        if (len > s.n) throw std::runtime_error("deserialize: malformed sample length");
        for (uint64_t k = 0; k < len; ++k) lvl.sample.push_back(get_point(r, s.dim));
        if (r.get<uint8_t>()) lvl.witness_point = get_point(r, s.dim);
        s.levels.push_back(std::move(lvl));
    }
    if (r.pos + 4 != bytes.size()) throw std::runtime_error("deserialize: trailing bytes");
    return s;
}

std::string to_json(const Summary& s) {
    nlohmann::json j;
    j["n"] = s.n;
    j["t"] = s.t;
    j["dim"] = s.dim;
    j["grid_scale"] = s.grid_scale;
    j["eps"] = s.params.eps.str();
    j["rho"] = s.params.rho.str();
    j["eps_internal"] = s.eps_internal.str();
    j["rho_effective"] = s.rho_effective.str();
    j["stored_points"] = stored_point_count(s);
    auto levels = nlohmann::json::array();
    for (const auto& lvl : s.levels) {
        nlohmann::json l;
        l["i"] = lvl.i;
        l["m"] = lvl.m;
        l["x_size"] = lvl.x_size;
        l["sample_size"] = lvl.sample_weight();
        auto pts = nlohmann::json::array();
        for (const auto& p : lvl.sample) {
            auto e = nlohmann::json::array();
            for (int a = 0; a < s.dim; ++a) e.push_back(p.coords[a]);
            e.push_back(p.mult);
            pts.push_back(e);
        }
        l["sample"] = pts;
        if (lvl.witness_point) {
            auto e = nlohmann::json::array();
            for (int a = 0; a < s.dim; ++a) e.push_back(lvl.witness_point->coords[a]);
            l["witness"] = e;
        }
        levels.push_back(l);
    }
    j["levels"] = levels;
    return j.dump(2);
}

} // namespace rhosum
