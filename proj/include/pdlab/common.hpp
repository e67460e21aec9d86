#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace pdlab {

using u128 = unsigned __int128;
using i128 = __int128;

// Base class for every error the library raises. The CLI maps the three
// subclasses onto exit codes 2, 3 and 4.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A parameter violates an operation's precondition. `field()` names it.
class ValidationError : public Error {
public:
    ValidationError(std::string field, const std::string& what)
        : Error(field + ": " + what), field_(std::move(field)) {}
    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

// A configured budget (sieve capacity, scan size, memory) would be exceeded.
class ResourceError : public Error {
public:
    ResourceError(std::string budget, const std::string& what)
        : Error(budget + ": " + what), budget_(std::move(budget)) {}
    const std::string& budget() const noexcept { return budget_; }

private:
    std::string budget_;
};

// An internal consistency check failed.
class InternalError : public Error {
public:
    using Error::Error;
};

#define PDLAB_ASSERT(cond, msg)                                                    \
    do {                                                                           \
        if (!(cond)) throw ::pdlab::InternalError(std::string("assertion failed: ") \
                                                  + #cond + " (" + (msg) + ")");   \
    } while (0)

std::string to_string(u128 v);
std::string to_string(i128 v);
u128 parse_u128(const std::string& s);

// floor(sqrt(n)), exact.
std::uint64_t isqrt(std::uint64_t n);
u128 isqrt(u128 n);

// Largest integer m with m <= x^c (c > 0). The comparison carries a relative
// slack of 1e-12 so that exact integer powers (x = 10^6, c = 0.5) are kept.
std::uint64_t floor_pow(std::uint64_t x, double c);

// Smallest integer m with m >= x^c, with the same slack.
std::uint64_t ceil_pow(std::uint64_t x, double c);

}  // namespace pdlab
