#pragma once

#include <cstdint>
#include <vector>

#include "baw/errors.hpp"

namespace baw {

// Set of atom indices, packed 64 per word. All kernel elements are stored
// this way; the word count is fixed by the owning algebra's atom count.
class AtomSet {
public:
    AtomSet() : nbits_(0) {}

    explicit AtomSet(std::size_t nbits)
        : nbits_(nbits), words_((nbits + 63) / 64, 0) {}

    static AtomSet full(std::size_t nbits) {
        AtomSet s(nbits);
        for (auto& w : s.words_) w = ~std::uint64_t{0};
        s.trim();
        return s;
    }

    static AtomSet singleton(std::size_t nbits, std::size_t i) {
        AtomSet s(nbits);
        s.set(i);
        return s;
    }

    std::size_t size_bits() const { return nbits_; }

    void set(std::size_t i) {
        check_index(i);
        words_[i >> 6] |= std::uint64_t{1} << (i & 63);
    }

    void reset(std::size_t i) {
        check_index(i);
        words_[i >> 6] &= ~(std::uint64_t{1} << (i & 63));
    }

    bool test(std::size_t i) const {
        check_index(i);
        return (words_[i >> 6] >> (i & 63)) & 1;
    }

    bool any() const {
        for (auto w : words_)
            if (w) return true;
        return false;
    }

    bool none() const { return !any(); }

    std::size_t count() const {
        std::size_t n = 0;
        for (auto w : words_) n += static_cast<std::size_t>(__builtin_popcountll(w));
        return n;
    }

    AtomSet& operator&=(const AtomSet& o) {
        check_same(o);
        for (std::size_t k = 0; k < words_.size(); ++k) words_[k] &= o.words_[k];
        return *this;
    }

    AtomSet& operator|=(const AtomSet& o) {
        check_same(o);
        for (std::size_t k = 0; k < words_.size(); ++k) words_[k] |= o.words_[k];
        return *this;
    }

    AtomSet& operator^=(const AtomSet& o) {
        check_same(o);
        for (std::size_t k = 0; k < words_.size(); ++k) words_[k] ^= o.words_[k];
        return *this;
    }

    // this & ~o
    AtomSet& subtract(const AtomSet& o) {
        check_same(o);
        for (std::size_t k = 0; k < words_.size(); ++k) words_[k] &= ~o.words_[k];
        return *this;
    }

    friend AtomSet operator&(AtomSet a, const AtomSet& b) { return a &= b; }
    friend AtomSet operator|(AtomSet a, const AtomSet& b) { return a |= b; }
    friend AtomSet operator^(AtomSet a, const AtomSet& b) { return a ^= b; }

    AtomSet complement() const {
        AtomSet r(nbits_);
        for (std::size_t k = 0; k < words_.size(); ++k) r.words_[k] = ~words_[k];
        r.trim();
        return r;
    }

    AtomSet minus(const AtomSet& o) const {
        AtomSet r = *this;
        r.subtract(o);
        return r;
    }

    bool subset_of(const AtomSet& o) const {
        check_same(o);
        for (std::size_t k = 0; k < words_.size(); ++k)
            if (words_[k] & ~o.words_[k]) return false;
        return true;
    }

    bool intersects(const AtomSet& o) const {
        check_same(o);
        for (std::size_t k = 0; k < words_.size(); ++k)
            if (words_[k] & o.words_[k]) return true;
        return false;
    }

    bool operator==(const AtomSet& o) const {
        return nbits_ == o.nbits_ && words_ == o.words_;
    }
    bool operator!=(const AtomSet& o) const { return !(*this == o); }

    // Strict weak order for use as map keys and for canonical output order.
    bool operator<(const AtomSet& o) const {
        if (nbits_ != o.nbits_) return nbits_ < o.nbits_;
        for (std::size_t k = words_.size(); k-- > 0;)
            if (words_[k] != o.words_[k]) return words_[k] < o.words_[k];
        return false;
    }

    // Index of the lowest set bit; nbits if empty.
    std::size_t first() const {
        for (std::size_t k = 0; k < words_.size(); ++k)
            if (words_[k])
                return k * 64 + static_cast<std::size_t>(__builtin_ctzll(words_[k]));
        return nbits_;
    }

    // Lowest set bit with index > i; nbits if none.
    std::size_t next(std::size_t i) const {
        ++i;
        if (i >= nbits_) return nbits_;
        std::size_t k = i >> 6;
        std::uint64_t w = words_[k] & (~std::uint64_t{0} << (i & 63));
        while (true) {
            if (w) return k * 64 + static_cast<std::size_t>(__builtin_ctzll(w));
            if (++k == words_.size()) return nbits_;
            w = words_[k];
        }
    }

    template <typename F>
    void for_each(F&& f) const {
        for (std::size_t k = 0; k < words_.size(); ++k) {
            std::uint64_t w = words_[k];
            while (w) {
                std::size_t i = k * 64 + static_cast<std::size_t>(__builtin_ctzll(w));
                f(i);
                w &= w - 1;
            }
        }
    }

    std::vector<std::size_t> to_indices() const {
        std::vector<std::size_t> out;
        out.reserve(count());
        for_each([&](std::size_t i) { out.push_back(i); });
        return out;
    }

    std::size_t hash() const {
        std::uint64_t h = 1469598103934665603ull;
        for (auto w : words_) {
            h ^= w;
            h *= 1099511628211ull;
        }
        return static_cast<std::size_t>(h ^ nbits_);
    }

private:
    void check_index(std::size_t i) const {
        if (i >= nbits_) throw usage_error("atom index out of range");
    }
    void check_same(const AtomSet& o) const {
        if (nbits_ != o.nbits_) throw usage_error("AtomSet width mismatch");
    }
    void trim() {
        if (nbits_ & 63) words_.back() &= (std::uint64_t{1} << (nbits_ & 63)) - 1;
    }

    std::size_t nbits_;
    std::vector<std::uint64_t> words_;
};

} // namespace baw
