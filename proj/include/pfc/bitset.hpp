#pragma once

#include <bit>
#include <cstdint>
#include <cstddef>
#include <vector>

namespace pfc {

// Fixed-size dense bitset with fused and+count operations.
// Used for object rows (bits over atoms) and literal columns (bits over objects);
// premise support counting reduces to AND/popcount chains over these.
class Bitset {
public:
    Bitset() = default;
    explicit Bitset(std::size_t nbits, bool value = false)
        : nbits_(nbits), words_((nbits + 63) / 64, value ? ~0ull : 0ull) {
        trim();
    }

    std::size_t size() const { return nbits_; }

    void set(std::size_t i) { words_[i >> 6] |= 1ull << (i & 63); }
    void reset(std::size_t i) { words_[i >> 6] &= ~(1ull << (i & 63)); }
    bool test(std::size_t i) const { return (words_[i >> 6] >> (i & 63)) & 1u; }

    std::size_t count() const {
        std::size_t n = 0;
        for (auto w : words_) n += std::popcount(w);
        return n;
    }

    bool any() const {
        for (auto w : words_) if (w) return true;
        return false;
    }

    bool is_subset_of(const Bitset& other) const {
        for (std::size_t i = 0; i < words_.size(); ++i)
            if (words_[i] & ~other.words_[i]) return false;
        return true;
    }

    Bitset& operator&=(const Bitset& other) {
        for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= other.words_[i];
        return *this;
    }
    Bitset& operator|=(const Bitset& other) {
        for (std::size_t i = 0; i < words_.size(); ++i) words_[i] |= other.words_[i];
        return *this;
    }

    // this AND NOT other, in place
    Bitset& subtract(const Bitset& other) {
        for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= ~other.words_[i];
        return *this;
    }

    Bitset operator~() const {
        Bitset r(*this);
        for (auto& w : r.words_) w = ~w;
        r.trim();
        return r;
    }

    friend Bitset operator&(Bitset a, const Bitset& b) { return a &= b; }
    friend Bitset operator|(Bitset a, const Bitset& b) { return a |= b; }
    bool operator==(const Bitset& other) const = default;

    static std::size_t and_count(const Bitset& a, const Bitset& b) {
        std::size_t n = 0;
        for (std::size_t i = 0; i < a.words_.size(); ++i)
            n += std::popcount(a.words_[i] & b.words_[i]);
        return n;
    }

    // |a & b & c| without materializing the intersection
    static std::size_t and_count(const Bitset& a, const Bitset& b, const Bitset& c) {
        std::size_t n = 0;
        for (std::size_t i = 0; i < a.words_.size(); ++i)
            n += std::popcount(a.words_[i] & b.words_[i] & c.words_[i]);
        return n;
    }

    // |a & ~b| restricted to a's universe
    static std::size_t and_not_count(const Bitset& a, const Bitset& b) {
        std::size_t n = 0;
        for (std::size_t i = 0; i < a.words_.size(); ++i)
            n += std::popcount(a.words_[i] & ~b.words_[i]);
        return n;
    }

    template <typename Fn>
    void for_each_set(Fn&& fn) const {
        for (std::size_t wi = 0; wi < words_.size(); ++wi) {
            std::uint64_t w = words_[wi];
            while (w) {
                unsigned bit = std::countr_zero(w);
                fn(wi * 64 + bit);
                w &= w - 1;
            }
        }
    }

private:
    void trim() {
        if (nbits_ & 63) words_.back() &= (~0ull) >> (64 - (nbits_ & 63));
    }

    std::size_t nbits_ = 0;
    std::vector<std::uint64_t> words_;
};

} // namespace pfc
