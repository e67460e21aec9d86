#include "pdlab/common.hpp"

#include <algorithm>
#include <cmath>

namespace pdlab {

std::string to_string(u128 v) {
    if (v == 0) return "0";
    std::string out;
    while (v != 0) {
        out.push_back(static_cast<char>('0' + static_cast<int>(v % 10)));
        v /= 10;
    }
    std::reverse(out.begin(), out.end());
    return out;
}

std::string to_string(i128 v) {
    if (v < 0) return "-" + to_string(static_cast<u128>(-(v + 1)) + 1);
    return to_string(static_cast<u128>(v));
}

u128 parse_u128(const std::string& s) {
    if (s.empty()) throw ValidationError("value", "empty integer literal");
    u128 v = 0;
    const u128 max = ~u128{0};
    for (char ch : s) {
        if (ch < '0' || ch > '9') throw ValidationError("value", "not a decimal integer: " + s);
        const unsigned digit = static_cast<unsigned>(ch - '0');
        if (v > (max - digit) / 10) throw ValidationError("value", "integer overflow: " + s);
        v = v * 10 + digit;
    }
    return v;
}

std::uint64_t isqrt(std::uint64_t n) {
    auto r = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(n)));
    while (r > 0 && static_cast<u128>(r) * r > n) --r;
    while (static_cast<u128>(r + 1) * (r + 1) <= n) ++r;
    return r;
}

u128 isqrt(u128 n) {
    if (n < (u128{1} << 64)) return isqrt(static_cast<std::uint64_t>(n));
    // Newton from above; converges monotonically to floor(sqrt(n)).
    u128 x = static_cast<u128>(std::sqrt(static_cast<long double>(n))) + 2;
    while (true) {
        const u128 y = (x + n / x) / 2;
        if (y >= x) break;
        x = y;
    }
    while (x * x > n) --x;
    return x;
}

namespace {
constexpr long double kPowSlack = 1e-12L;
}

std::uint64_t floor_pow(std::uint64_t x, double c) {
    const long double v = std::pow(static_cast<long double>(x), static_cast<long double>(c));
    return static_cast<std::uint64_t>(std::floor(v * (1.0L + kPowSlack)));
}

std::uint64_t ceil_pow(std::uint64_t x, double c) {
    const long double v = std::pow(static_cast<long double>(x), static_cast<long double>(c));
    return static_cast<std::uint64_t>(std::ceil(v * (1.0L - kPowSlack)));
}

}  // namespace pdlab
