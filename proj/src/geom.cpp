#include "rhosum/geom.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "rhosum/rng.hpp"

namespace rhosum {

namespace {

int sign_of(Int128 v) { return v > 0 ? 1 : (v < 0 ? -1 : 0); }

uint64_t splitmix(uint64_t& s) {
    uint64_t z = (s += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

struct Key128 {
    uint64_t a = 0, b = 0;
    bool operator==(const Key128& o) const { return a == o.a && b == o.b; }
};
struct Key128Hash {
    size_t operator()(const Key128& k) const {
        return k.a * 0x9e3779b97f4a7c15ULL ^ (k.b + 0x7f4a7c15ULL + (k.a << 6));
    }
};

} // namespace

PointSet snap_points(const std::vector<std::vector<double>>& raw, int dim, int64_t grid_scale) {
    if (dim != 2 && dim != 3) throw std::invalid_argument("snap_points: dim must be 2 or 3");
    if (grid_scale <= 0 || (grid_scale & (grid_scale - 1)) != 0)
        throw std::invalid_argument("snap_points: grid_scale must be a positive power of two");
    PointSet ps;
    ps.dim = dim;
    ps.grid_scale = grid_scale;
    ps.coords.reserve(raw.size());
    for (size_t i = 0; i < raw.size(); ++i) {
        if (raw[i].size() != static_cast<size_t>(dim))
            throw std::invalid_argument("snap_points: point " + std::to_string(i) + " has wrong dimension");
        std::array<int64_t, 3> c{0, 0, 0};
        for (int a = 0; a < dim; ++a) {
            double v = raw[i][a] * static_cast<double>(grid_scale);
            if (!std::isfinite(v) || std::fabs(v) >= static_cast<double>(kCoordLimit))
                throw std::out_of_range("snap_points: coordinate overflow at index " + std::to_string(i));
            c[a] = std::llround(v);
        }
        ps.coords.push_back(c);
    }
    return ps;
}

int orientation(size_t p, size_t q, size_t r, const PointSet& ps) {
    if (ps.dim != 2) throw std::invalid_argument("orientation: 2D only");
    const auto& P = ps.coords[p];
    const auto& Q = ps.coords[q];
    const auto& R = ps.coords[r];
    Int128 det = Int128(Q[0] - P[0]) * (R[1] - P[1]) - Int128(Q[1] - P[1]) * (R[0] - P[0]);
    return sign_of(det);
}

bool halfspace_contains_coords(const Halfspace& h, const std::array<int64_t, 3>& c, int dim) {
    Int256 dot = 0;
    for (int a = 0; a < dim; ++a) dot += h.normal[a] * c[a];
    return h.closed ? dot >= h.offset : dot > h.offset;
}

bool halfspace_contains(const Halfspace& h, size_t x, const PointSet& ps) {
    if (h.dim != ps.dim) throw std::invalid_argument("halfspace_contains: dimension mismatch");
    return halfspace_contains_coords(h, ps.coords[x], ps.dim);
}

namespace {

// Shared machinery for direction-sweep enumeration. For each candidate
// direction u we sort points by the primary key <u,p>; ties (points on a
// common boundary line/plane) are broken by a secondary key, in both
// orientations. Every prefix of every such order is a realizable trace,
// and in 2D every trace arises this way: an arbitrary halfplane normal
// lies in some arc between consecutive critical directions, and the order
// it induces equals a tie-broken order at one of the arc's endpoints.
struct Enumerator {
    const PointSet& ps;
    size_t n;
    std::vector<CanonicalRange> ranges;
    std::unordered_map<Key128, uint32_t, Key128Hash> seen;
    std::vector<uint64_t> tok_a, tok_b;
    Bitset prefix;

    explicit Enumerator(const PointSet& p) : ps(p), n(p.n()), prefix(p.n()) {
        tok_a.resize(n);
        tok_b.resize(n);
        uint64_t s = 0x5eedf00dULL;
        for (size_t i = 0; i < n; ++i) {
            tok_a[i] = splitmix(s);
            tok_b[i] = splitmix(s);
        }
    }

    void emit_empty_full() {
        int64_t ymax = INT64_MIN, ymin = INT64_MAX;
        for (auto& c : ps.coords) { ymax = std::max(ymax, c[1]); ymin = std::min(ymin, c[1]); }
        CanonicalRange empty;
        empty.kind = RangeKind::Empty;
        empty.trace = Bitset(n);
        empty.popcount = 0;
        empty.include_mask = 0;
        empty.witness.dim = ps.dim;
        empty.witness.normal[1] = 1;
        empty.witness.offset = Int256(ymax) + 1;
        record(empty, Key128{0, 0});

        CanonicalRange full;
        full.kind = RangeKind::Full;
        full.trace = Bitset(n);
        full.trace.set_all();
        full.popcount = static_cast<uint32_t>(n);
        full.include_mask = 1;
        full.witness.dim = ps.dim;
        full.witness.normal[1] = 1;
        full.witness.offset = ymin;
        Key128 k{0, 0};
        for (size_t i = 0; i < n; ++i) { k.a ^= tok_a[i]; k.b ^= tok_b[i]; }
        record(full, k);
    }

    bool record(CanonicalRange& cr, Key128 key) {
        auto [it, fresh] = seen.emplace(key, static_cast<uint32_t>(ranges.size()));
        (void)it;
        if (fresh) ranges.push_back(std::move(cr));
        return fresh;
    }

    // Walk one sorted order: entries grouped by full key equality
    // (duplicate locations stay grouped). After each group, the prefix is
    // a candidate trace; `witness` builds the halfspace realizing a cut
    // whose boundary group starts at position `gstart`.
    template <typename EqKey, typename MakeWitness>
    void walk(const std::vector<uint32_t>& order, EqKey&& same_key, MakeWitness&& witness) {
        prefix.clear();
        Key128 h{0, 0};
        size_t pos = 0;
        while (pos < order.size()) {
            size_t gend = pos + 1;
            while (gend < order.size() && same_key(order[pos], order[gend])) ++gend;
            int32_t pivot = INT32_MAX;
            for (size_t q = pos; q < gend; ++q) {
                uint32_t i = order[q];
                prefix.set(i);
                h.a ^= tok_a[i];
                h.b ^= tok_b[i];
                pivot = std::min(pivot, static_cast<int32_t>(i));
            }
            if (seen.find(h) == seen.end()) {
                CanonicalRange cr;
                cr.kind = RangeKind::Pivoted;
                cr.pivots[0] = pivot;
                cr.include_mask = 1;
                cr.trace = prefix;
                cr.popcount = static_cast<uint32_t>(cr.trace.count());
                cr.witness = witness(order[pos]);
                record(cr, h);
            }
            pos = gend;
        }
    }

    void finalize_check() {
        std::vector<uint32_t> idx(ranges.size());
        std::iota(idx.begin(), idx.end(), 0);
        std::sort(idx.begin(), idx.end(), [&](uint32_t a, uint32_t b) {
            return ranges[a].trace < ranges[b].trace;
        });
        for (size_t i = 1; i < idx.size(); ++i)
            if (ranges[idx[i - 1]].trace == ranges[idx[i]].trace)
                throw std::logic_error("enumerate_canonical_ranges: duplicate trace after dedup");
    }
};

// |w| component bound is 2^41, |w . p| < 2^82, so 2^84 strictly dominates
// any secondary-key difference: K*u + s*w realizes the lexicographic order.
const Int256 kLexScale2d = Int256(1) << 84;

void enumerate_2d(Enumerator& en) {
    const auto& pts = en.ps.coords;
    size_t n = en.n;

    std::vector<std::pair<int64_t, int64_t>> dirs;
    struct PairHash {
        size_t operator()(const std::pair<int64_t, int64_t>& p) const {
            return static_cast<uint64_t>(p.first) * 0x9e3779b97f4a7c15ULL ^
                   (static_cast<uint64_t>(p.second) + (static_cast<uint64_t>(p.first) << 5));
        }
    };
    std::unordered_set<std::pair<int64_t, int64_t>, PairHash> dir_seen;
    auto push_dir = [&](int64_t ux, int64_t uy) {
        if (ux == 0 && uy == 0) return;
        int64_t g = std::gcd(ux < 0 ? -ux : ux, uy < 0 ? -uy : uy);
        ux /= g;
        uy /= g;
        if (dir_seen.emplace(ux, uy).second) dirs.emplace_back(ux, uy);
    };
    push_dir(1, 0);
    push_dir(-1, 0);
    push_dir(0, 1);
    push_dir(0, -1);
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j) {
            if (i == j) continue;
            int64_t dx = pts[j][0] - pts[i][0], dy = pts[j][1] - pts[i][1];
            if (dx == 0 && dy == 0) continue;
            push_dir(-dy, dx); // ccw perpendicular of the difference
        }

    std::vector<uint32_t> order(n);
    std::vector<Int128> ku(n), kw(n);
    for (auto [ux, uy] : dirs) {
        int64_t wx = uy, wy = -ux; // cw perpendicular of u
        for (size_t i = 0; i < n; ++i) {
            ku[i] = Int128(ux) * pts[i][0] + Int128(uy) * pts[i][1];
            kw[i] = Int128(wx) * pts[i][0] + Int128(wy) * pts[i][1];
        }
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(), [&](uint32_t a, uint32_t b) {
            if (ku[a] != ku[b]) return ku[a] > ku[b];
            if (kw[a] != kw[b]) return kw[a] > kw[b];
            return a < b;
        });

        auto same_key = [&](uint32_t a, uint32_t b) { return ku[a] == ku[b] && kw[a] == kw[b]; };
        for (int s : {+1, -1}) {
            std::vector<uint32_t> pass;
            if (s > 0) {
                pass = order;
            } else {
                // reverse secondary order within each primary-key run
                pass.resize(n);
                size_t i = 0;
                while (i < n) {
                    size_t j = i + 1;
                    while (j < n && ku[order[j]] == ku[order[i]]) ++j;
                    for (size_t q = i; q < j; ++q) pass[q] = order[j - 1 - (q - i)];
                    i = j;
                }
            }
            auto witness = [&](uint32_t boundary) {
                Halfspace h;
                h.dim = 2;
                h.normal[0] = kLexScale2d * ux + Int256(s) * wx;
                h.normal[1] = kLexScale2d * uy + Int256(s) * wy;
                h.offset = kLexScale2d * Int256(ku[boundary]) + Int256(s) * Int256(kw[boundary]);
                h.closed = true;
                return h;
            };
            en.walk(pass, same_key, witness);
        }
    }
}

// 3D: candidate plane normals from point triples (shared base), two
// perpendiculars per point pair, and the axes; ties broken by coordinate
// lex order in both orientations. Exact for inputs in general position;
// heavily degenerate 3D inputs should use sampled mode.
const Int256 kLexScale3d = Int256(1) << 127;

void enumerate_3d_directions(Enumerator& en, const std::vector<std::array<int64_t, 3>>& dirs) {
    const auto& pts = en.ps.coords;
    size_t n = en.n;
    // lambda = (2^84, 2^42, 1) realizes coordinate-lex compare as one dot
    const Int256 lam0 = Int256(1) << 84, lam1 = Int256(1) << 42, lam2 = 1;

    std::vector<uint32_t> order(n);
    std::vector<Int128> ku(n);
    for (const auto& u : dirs) {
        for (size_t i = 0; i < n; ++i)
            ku[i] = Int128(u[0]) * pts[i][0] + Int128(u[1]) * pts[i][1] + Int128(u[2]) * pts[i][2];
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(), [&](uint32_t a, uint32_t b) {
            if (ku[a] != ku[b]) return ku[a] > ku[b];
            return pts[a] > pts[b] || (pts[a] == pts[b] && a < b);
        });
        auto same_key = [&](uint32_t a, uint32_t b) { return ku[a] == ku[b] && pts[a] == pts[b]; };
        for (int s : {+1, -1}) {
            std::vector<uint32_t> pass;
            if (s > 0) {
                pass = order;
            } else {
                pass.resize(n);
                size_t i = 0;
                while (i < n) {
                    size_t j = i + 1;
                    while (j < n && ku[order[j]] == ku[order[i]]) ++j;
                    for (size_t q = i; q < j; ++q) pass[q] = order[j - 1 - (q - i)];
                    i = j;
                }
            }
            auto witness = [&](uint32_t boundary) {
                Halfspace h;
                h.dim = 3;
                h.normal[0] = kLexScale3d * u[0] + Int256(s) * lam0;
                h.normal[1] = kLexScale3d * u[1] + Int256(s) * lam1;
                h.normal[2] = kLexScale3d * u[2] + Int256(s) * lam2;
                const auto& b = pts[boundary];
                h.offset = kLexScale3d * Int256(ku[boundary]) +
                           Int256(s) * (lam0 * b[0] + lam1 * b[1] + lam2 * b[2]);
                h.closed = true;
                return h;
            };
            en.walk(pass, same_key, witness);
        }
    }
}

std::array<int64_t, 3> cross3(const std::array<int64_t, 3>& a, const std::array<int64_t, 3>& b) {
    return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

std::array<int64_t, 3> primitive3(std::array<int64_t, 3> v) {
    int64_t g = std::gcd(std::gcd(v[0] < 0 ? -v[0] : v[0], v[1] < 0 ? -v[1] : v[1]),
                         v[2] < 0 ? -v[2] : v[2]);
    if (g > 1)
        for (auto& c : v) c /= g;
    return v;
}

void enumerate_3d(Enumerator& en, const EnumerateOptions& opts, bool& complete) {
    const auto& pts = en.ps.coords;
    size_t n = en.n;

    std::vector<std::array<int64_t, 3>> dirs;
    struct TripleHash {
        size_t operator()(const std::array<int64_t, 3>& v) const {
            uint64_t key = static_cast<uint64_t>(v[0]) * 0x9e3779b97f4a7c15ULL;
            key ^= static_cast<uint64_t>(v[1]) * 0xc2b2ae3d27d4eb4fULL;
            key ^= static_cast<uint64_t>(v[2]) + (key << 7);
            return key;
        }
    };
    std::unordered_set<std::array<int64_t, 3>, TripleHash> dir_seen;
    auto push = [&](std::array<int64_t, 3> v) {
        if (v[0] == 0 && v[1] == 0 && v[2] == 0) return;
        v = primitive3(v);
        if (dir_seen.insert(v).second) dirs.push_back(v);
    };

    if (opts.sampled || n > opts.cap3d) {
        if (!opts.sampled)
            throw std::length_error("enumerate_canonical_ranges: 3D exact mode capped at n <= " +
                                    std::to_string(opts.cap3d) + "; request sampled mode");
        Rng rng(opts.sample_seed);
        for (size_t k = 0; k < opts.sample_directions; ++k) {
            std::array<int64_t, 3> v{static_cast<int64_t>(rng.below(1 << 20)) - (1 << 19),
                                     static_cast<int64_t>(rng.below(1 << 20)) - (1 << 19),
                                     static_cast<int64_t>(rng.below(1 << 20)) - (1 << 19)};
            push(v);
            push({-v[0], -v[1], -v[2]});
        }
        complete = false;
    } else {
        for (int a = 0; a < 3; ++a) {
            std::array<int64_t, 3> e{0, 0, 0};
            e[a] = 1;
            push(e);
            e[a] = -1;
            push(e);
        }
        for (size_t i = 0; i < n; ++i)
            for (size_t j = i + 1; j < n; ++j) {
                std::array<int64_t, 3> d{pts[j][0] - pts[i][0], pts[j][1] - pts[i][1],
                                         pts[j][2] - pts[i][2]};
                if (d[0] == 0 && d[1] == 0 && d[2] == 0) continue;
                int best = 0;
                for (int a = 1; a < 3; ++a)
                    if (std::abs(d[a]) < std::abs(d[best])) best = a;
                std::array<int64_t, 3> e{0, 0, 0};
                e[best] = 1;
                auto v1 = cross3(d, e);
                push(v1);
                push({-v1[0], -v1[1], -v1[2]});
                auto v2 = cross3(d, primitive3(v1));
                push(v2);
                push({-v2[0], -v2[1], -v2[2]});
                for (size_t k = j + 1; k < n; ++k) {
                    std::array<int64_t, 3> d2{pts[k][0] - pts[i][0], pts[k][1] - pts[i][1],
                                              pts[k][2] - pts[i][2]};
                    auto u = cross3(d, d2);
                    push(u);
                    push({-u[0], -u[1], -u[2]});
                }
            }
        complete = true;
    }
    enumerate_3d_directions(en, dirs);
}

} // namespace

EnumerateResult enumerate_canonical_ranges(const PointSet& ps, const EnumerateOptions& opts) {
    if (ps.n() == 0) throw std::invalid_argument("enumerate_canonical_ranges: empty point set");
    Enumerator en(ps);
    en.emit_empty_full();
    EnumerateResult res;
    if (ps.dim == 2) {
        enumerate_2d(en);
        res.complete = true;
    } else {
        enumerate_3d(en, opts, res.complete);
    }
    en.finalize_check();
    res.ranges = std::move(en.ranges);
    return res;
}

PointSet affine_transform(const PointSet& ps, const std::vector<std::vector<double>>& matrix,
                          const std::vector<double>& shift, int64_t grid_scale) {
    int d = ps.dim;
    if (matrix.size() != static_cast<size_t>(d) || shift.size() != static_cast<size_t>(d))
        throw std::invalid_argument("affine_transform: matrix/shift dimension mismatch");
    double det;
    if (d == 2) {
        det = matrix[0][0] * matrix[1][1] - matrix[0][1] * matrix[1][0];
    } else {
        det = matrix[0][0] * (matrix[1][1] * matrix[2][2] - matrix[1][2] * matrix[2][1]) -
              matrix[0][1] * (matrix[1][0] * matrix[2][2] - matrix[1][2] * matrix[2][0]) +
              matrix[0][2] * (matrix[1][0] * matrix[2][1] - matrix[1][1] * matrix[2][0]);
    }
    if (std::fabs(det) < 1e-12) throw std::invalid_argument("affine_transform: singular matrix");

    std::vector<std::vector<double>> raw;
    raw.reserve(ps.n());
    for (size_t i = 0; i < ps.n(); ++i) {
        std::vector<double> out(d, 0.0);
        for (int r = 0; r < d; ++r) {
            double v = shift[r];
            for (int c = 0; c < d; ++c) v += matrix[r][c] * ps.real(i, c);
            out[r] = v;
        }
        raw.push_back(std::move(out));
    }
    return snap_points(raw, d, grid_scale);
}

void write_pointset(const PointSet& ps, std::ostream& os) {
    os << "d=" << ps.dim << " scale=" << ps.grid_scale << " n=" << ps.n() << "\n";
    for (const auto& c : ps.coords) {
        os << c[0];
        for (int a = 1; a < ps.dim; ++a) os << " " << c[a];
        os << "\n";
    }
}

PointSet read_pointset(std::istream& is) {
    std::string header;
    if (!std::getline(is, header)) throw std::runtime_error("pointset: missing header");
    PointSet ps;
    size_t n = 0;
    if (std::sscanf(header.c_str(), "d=%d scale=%ld n=%zu", &ps.dim, &ps.grid_scale, &n) != 3)
        throw std::runtime_error("pointset: malformed header: " + header);
    if (ps.dim != 2 && ps.dim != 3) throw std::runtime_error("pointset: bad dimension");
    ps.coords.reserve(n);
    for (size_t i = 0; i < n; ++i) {
        std::array<int64_t, 3> c{0, 0, 0};
        for (int a = 0; a < ps.dim; ++a)
            if (!(is >> c[a])) throw std::runtime_error("pointset: truncated at point " + std::to_string(i));
        for (int a = 0; a < ps.dim; ++a)
            if (c[a] <= -kCoordLimit || c[a] >= kCoordLimit)
                throw std::runtime_error("pointset: coordinate overflow at point " + std::to_string(i));
        ps.coords.push_back(c);
    }
    return ps;
}

void save_pointset(const PointSet& ps, const std::string& path) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot open " + path + " for writing");
    write_pointset(ps, f);
}

PointSet load_pointset(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open " + path);
    return read_pointset(f);
}

} // namespace rhosum
