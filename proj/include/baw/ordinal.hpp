#pragma once

#include <cstdint>
#include <string>

#include "baw/errors.hpp"

namespace baw {

// Ordinal below w*2^32, written w*k + n. Everything the workbench schedules
// lives in this segment.
struct Ordinal {
    std::uint32_t k = 0;
    std::uint32_t n = 0;

    std::uint64_t rank() const { return (std::uint64_t{k} << 32) | n; }
    bool is_limit() const { return n == 0 && k > 0; }
    bool is_zero() const { return k == 0 && n == 0; }

    friend bool operator==(const Ordinal& a, const Ordinal& b) {
        return a.k == b.k && a.n == b.n;
    }
    friend bool operator!=(const Ordinal& a, const Ordinal& b) { return !(a == b); }
    friend bool operator<(const Ordinal& a, const Ordinal& b) {
        return a.rank() < b.rank();
    }

    std::string str() const;
};

// Accepts the same shapes str produces: "0", "7", "w", "w+3", "w*2", "w*2+5".
Ordinal parse_ordinal(const std::string& text);

} // namespace baw
