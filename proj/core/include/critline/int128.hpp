#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace critline {

// Exact coefficient arithmetic. Ramanujan-tau-scale values up to n = 1e5
// reach ~4e29, far past int64 but comfortably inside 128 bits.
using int128 = __int128;

inline int128 checked_add(int128 a, int128 b) {
    int128 r;
    if (__builtin_add_overflow(a, b, &r))
        throw std::overflow_error("int128 addition overflow");
    return r;
}

inline int128 checked_mul(int128 a, int128 b) {
    int128 r;
    if (__builtin_mul_overflow(a, b, &r))
        throw std::overflow_error("int128 multiplication overflow");
    return r;
}

inline int128 abs128(int128 v) { return v < 0 ? -v : v; }

std::string to_string(int128 v);

// Accepts an optional leading '-' followed by decimal digits.
int128 parse_int128(const std::string& s);

}  // namespace critline
