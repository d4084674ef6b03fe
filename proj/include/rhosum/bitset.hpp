#pragma once

#include <cstdint>
#include <cstddef>
#include <string>
#include <vector>

#if defined(__GNUC__)
#include <bit>
#endif

namespace rhosum {

/// Packed bitset of fixed width, word-parallel set operations.
/// Range traces and disagreement regions live in these; the theta
/// oracle does O(n^2)..O(n^4) of them, so everything is plain uint64 words.
class Bitset {
public:
    Bitset() = default;
    explicit Bitset(size_t n) : n_(n), w_((n + 63) / 64, 0) {}

    size_t size() const { return n_; }
    size_t words() const { return w_.size(); }
    const uint64_t* data() const { return w_.data(); }

    void set(size_t i) { w_[i >> 6] |= (uint64_t(1) << (i & 63)); }
    void reset(size_t i) { w_[i >> 6] &= ~(uint64_t(1) << (i & 63)); }
    bool test(size_t i) const { return (w_[i >> 6] >> (i & 63)) & 1; }

    void set_all() {
        for (auto& w : w_) w = ~uint64_t(0);
        trim();
    }
    void clear() { for (auto& w : w_) w = 0; }

    size_t count() const {
        size_t c = 0;
        for (uint64_t w : w_) c += std::popcount(w);
        return c;
    }
    bool any() const {
        for (uint64_t w : w_) if (w) return true;
        return false;
    }
    bool none() const { return !any(); }

    Bitset& operator&=(const Bitset& o) { for (size_t i = 0; i < w_.size(); ++i) w_[i] &= o.w_[i]; return *this; }
    Bitset& operator|=(const Bitset& o) { for (size_t i = 0; i < w_.size(); ++i) w_[i] |= o.w_[i]; return *this; }
    Bitset& operator^=(const Bitset& o) { for (size_t i = 0; i < w_.size(); ++i) w_[i] ^= o.w_[i]; return *this; }
    Bitset& and_not(const Bitset& o) { for (size_t i = 0; i < w_.size(); ++i) w_[i] &= ~o.w_[i]; return *this; }

    friend Bitset operator&(Bitset a, const Bitset& b) { a &= b; return a; }
    friend Bitset operator|(Bitset a, const Bitset& b) { a |= b; return a; }
    friend Bitset operator^(Bitset a, const Bitset& b) { a ^= b; return a; }

    size_t count_and(const Bitset& o) const {
        size_t c = 0;
        for (size_t i = 0; i < w_.size(); ++i) c += std::popcount(w_[i] & o.w_[i]);
        return c;
    }
    size_t count_xor(const Bitset& o) const {
        size_t c = 0;
        for (size_t i = 0; i < w_.size(); ++i) c += std::popcount(w_[i] ^ o.w_[i]);
        return c;
    }

    bool operator==(const Bitset& o) const { return n_ == o.n_ && w_ == o.w_; }
    bool operator!=(const Bitset& o) const { return !(*this == o); }
    bool operator<(const Bitset& o) const { return w_ < o.w_; }

    bool is_subset_of(const Bitset& o) const {
        for (size_t i = 0; i < w_.size(); ++i)
            if (w_[i] & ~o.w_[i]) return false;
        return true;
    }

    template <typename F>
    void for_each(F&& f) const {
        for (size_t wi = 0; wi < w_.size(); ++wi) {
            uint64_t w = w_[wi];
            while (w) {
                unsigned b = std::countr_zero(w);
                f(wi * 64 + b);
                w &= w - 1;
            }
        }
    }

    std::vector<uint32_t> to_indices() const {
        std::vector<uint32_t> out;
        out.reserve(count());
        for_each([&](size_t i) { out.push_back(static_cast<uint32_t>(i)); });
        return out;
    }

    std::string to_hex() const {
        static const char* digits = "0123456789abcdef";
        std::string s;
        s.reserve(w_.size() * 16);
        for (size_t wi = w_.size(); wi-- > 0;)
            for (int nib = 15; nib >= 0; --nib)
                s.push_back(digits[(w_[wi] >> (nib * 4)) & 0xf]);
        return s;
    }

private:
    void trim() {
        if (n_ % 64 && !w_.empty())
            w_.back() &= (uint64_t(1) << (n_ % 64)) - 1;
    }

    size_t n_ = 0;
    std::vector<uint64_t> w_;
};

} // namespace rhosum
