#include "baw/ordinal.hpp"

#include <cstdlib>

namespace baw {

std::string Ordinal::str() const {
    if (k == 0) return std::to_string(n);
    std::string s = "w";
    if (k > 1) s += "*" + std::to_string(k);
    if (n > 0) s += "+" + std::to_string(n);
    return s;
}

namespace {

bool parse_u32(const std::string& text, std::size_t& pos, std::uint32_t& out) {
    if (pos >= text.size() || !std::isdigit(static_cast<unsigned char>(text[pos])))
        return false;
    std::uint64_t v = 0;
    while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
        v = v * 10 + static_cast<std::uint64_t>(text[pos] - '0');
        if (v > 0xffffffffull) return false;
        ++pos;
    }
    out = static_cast<std::uint32_t>(v);
    return true;
}

} // namespace

Ordinal parse_ordinal(const std::string& text) {
    Ordinal o;
    std::size_t pos = 0;
    if (pos < text.size() && text[pos] == 'w') {
        ++pos;
        o.k = 1;
        if (pos < text.size() && text[pos] == '*') {
            ++pos;
            if (!parse_u32(text, pos, o.k) || o.k == 0)
                throw parse_error("bad ordinal: " + text);
        }
        if (pos < text.size() && text[pos] == '+') {
            ++pos;
            if (!parse_u32(text, pos, o.n) || o.n == 0)
                throw parse_error("bad ordinal: " + text);
        }
    } else {
        if (!parse_u32(text, pos, o.n)) throw parse_error("bad ordinal: " + text);
    }
    if (pos != text.size()) throw parse_error("bad ordinal: " + text);
    return o;
}

} // namespace baw
