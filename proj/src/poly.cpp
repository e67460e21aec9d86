#include "pdlab/poly.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numeric>
#include <sstream>

namespace pdlab {

namespace {

i128 abs128(i128 v) { return v < 0 ? -v : v; }

i128 gcd128(i128 a, i128 b) {
    a = abs128(a);
    b = abs128(b);
    while (b != 0) {
        const i128 t = a % b;
        a = b;
        b = t;
    }
    return a;
}

bool mul_ok(i128 a, i128 b, i128& out) { return !__builtin_mul_overflow(a, b, &out); }
bool add_ok(i128 a, i128 b, i128& out) { return !__builtin_add_overflow(a, b, &out); }
bool sub_ok(i128 a, i128 b, i128& out) { return !__builtin_sub_overflow(a, b, &out); }

// Determinant by fraction-free (Bareiss) elimination. nullopt on overflow.
std::optional<i128> bareiss_det(std::vector<std::vector<i128>> m) {
    const std::size_t n = m.size();
    if (n == 0) return i128{1};
    i128 prev = 1;
    int sign = 1;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (m[k][k] == 0) {
            std::size_t swap_row = k + 1;
            while (swap_row < n && m[swap_row][k] == 0) ++swap_row;
            if (swap_row == n) return i128{0};
            std::swap(m[k], m[swap_row]);
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i)
            for (std::size_t j = k + 1; j < n; ++j) {
                i128 a, b, c;
                if (!mul_ok(m[i][j], m[k][k], a) || !mul_ok(m[i][k], m[k][j], b) || !sub_ok(a, b, c))
                    return std::nullopt;
                m[i][j] = c / prev;
            }
        prev = m[k][k];
    }
    return sign * m[n - 1][n - 1];
}

std::vector<std::uint64_t> divisors(std::uint64_t n) {
    std::vector<std::uint64_t> small, large;
    for (std::uint64_t d = 1; d <= n / d; ++d) {
        if (n % d != 0) continue;
        small.push_back(d);
        if (d != n / d) large.push_back(n / d);
    }
    small.insert(small.end(), large.rbegin(), large.rend());
    return small;
}

constexpr std::uint64_t kDivisorLimit = 1'000'000'000'000ULL;

}  // namespace

Polynomial::Polynomial(std::vector<std::int64_t> coeffs) : coeffs_(std::move(coeffs)) {
    while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
}

std::optional<i128> Polynomial::eval(i128 x) const {
    i128 acc = 0;
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) {
        if (!mul_ok(acc, x, acc) || !add_ok(acc, *it, acc)) return std::nullopt;
    }
    return acc;
}

std::uint64_t Polynomial::eval_mod(std::uint64_t r, std::uint64_t m) const {
    if (m == 1) return 0;
    u128 acc = 0;
    const u128 rm = r % m;
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) {
        const i128 c = static_cast<i128>(*it) % static_cast<i128>(m);
        const u128 cm = static_cast<u128>(c < 0 ? c + static_cast<i128>(m) : c);
        acc = (acc * rm + cm) % m;
    }
    return static_cast<std::uint64_t>(acc);
}

std::vector<std::uint64_t> Polynomial::reduced(std::uint64_t m) const {
    std::vector<std::uint64_t> out(coeffs_.size());
    for (std::size_t i = 0; i < coeffs_.size(); ++i) {
        const i128 c = static_cast<i128>(coeffs_[i]) % static_cast<i128>(m);
        out[i] = static_cast<std::uint64_t>(c < 0 ? c + static_cast<i128>(m) : c);
    }
    return out;
}

Polynomial Polynomial::derivative() const {
    std::vector<std::int64_t> d;
    for (std::size_t i = 1; i < coeffs_.size(); ++i) {
        i128 v = static_cast<i128>(coeffs_[i]) * static_cast<i128>(i);
        if (v > INT64_MAX || v < INT64_MIN) throw ValidationError("coeffs", "derivative overflows 64 bits");
        d.push_back(static_cast<std::int64_t>(v));
    }
    return Polynomial(std::move(d));
}

std::uint64_t Polynomial::content() const {
    std::uint64_t g = 0;
    for (std::int64_t c : coeffs_) g = std::gcd(g, static_cast<std::uint64_t>(c < 0 ? -static_cast<i128>(c) : c));
    return g;
}

i128 Polynomial::discriminant() const {
    const int deg = degree();
    if (deg < 1) throw ValidationError("coeffs", "discriminant needs degree >= 1");
    if (deg == 1) return 1;
    const Polynomial der = derivative();
    const int n = 2 * deg - 1;
    std::vector<std::vector<i128>> syl(n, std::vector<i128>(n, 0));
    // deg - 1 rows of F, deg rows of F', leading coefficient first.
    for (int r = 0; r < deg - 1; ++r)
        for (int i = 0; i <= deg; ++i) syl[r][r + i] = coeffs_[deg - i];
    for (int r = 0; r < deg; ++r)
        for (int i = 0; i <= deg - 1; ++i) syl[deg - 1 + r][r + i] = der.coeffs_[deg - 1 - i];
    const auto res = bareiss_det(std::move(syl));
    if (!res) throw ValidationError("coeffs", "discriminant overflows 128-bit arithmetic");
    const i128 sign = ((deg * (deg - 1) / 2) % 2 == 0) ? 1 : -1;
    PDLAB_ASSERT(*res % leading() == 0, "resultant not divisible by the leading coefficient");
    return sign * (*res / leading());
}

std::string Polynomial::to_string() const {
    if (coeffs_.empty()) return "0";
    std::ostringstream out;
    bool first = true;
    for (int i = degree(); i >= 0; --i) {
        const std::int64_t c = coeffs_[i];
        if (c == 0) continue;
        const std::int64_t mag = c < 0 ? -c : c;
        if (first) {
            if (c < 0) out << '-';
        } else {
            out << (c < 0 ? " - " : " + ");
        }
        if (mag != 1 || i == 0) out << mag;
        if (i >= 1) out << 'X';
        if (i >= 2) out << '^' << i;
        first = false;
    }
    return out.str();
}

// ---------------------------------------------------------------------------

namespace polymod {

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
    return static_cast<std::uint64_t>(static_cast<u128>(a) * b % m);
}

std::uint64_t powmod(std::uint64_t a, std::uint64_t e, std::uint64_t m) {
    std::uint64_t r = 1 % m;
    a %= m;
    while (e > 0) {
        if (e & 1) r = mulmod(r, a, m);
        a = mulmod(a, a, m);
        e >>= 1;
    }
    return r;
}

std::uint64_t invmod(std::uint64_t a, std::uint64_t m) {
    i128 t = 0, new_t = 1;
    i128 r = m, new_r = a % m;
    while (new_r != 0) {
        const i128 q = r / new_r;
        t -= q * new_t;
        std::swap(t, new_t);
        r -= q * new_r;
        std::swap(r, new_r);
    }
    PDLAB_ASSERT(r == 1, "value not invertible");
    if (t < 0) t += m;
    return static_cast<std::uint64_t>(t);
}

void trim(Poly& a) {
    while (!a.empty() && a.back() == 0) a.pop_back();
}

Poly from(const Polynomial& f, std::uint64_t p) {
    Poly out = f.reduced(p);
    trim(out);
    return out;
}

Poly mul(const Poly& a, const Poly& b, std::uint64_t p) {
    if (a.empty() || b.empty()) return {};
    Poly out(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) {
            out[i + j] += mulmod(a[i], b[j], p);
            if (out[i + j] >= p) out[i + j] -= p;
        }
    trim(out);
    return out;
}

Poly rem(Poly a, const Poly& m, std::uint64_t p) {
    PDLAB_ASSERT(!m.empty(), "division by the zero polynomial");
    trim(a);
    const std::uint64_t inv = invmod(m.back(), p);
    while (a.size() >= m.size()) {
        const std::uint64_t q = mulmod(a.back(), inv, p);
        const std::size_t shift = a.size() - m.size();
        for (std::size_t i = 0; i < m.size(); ++i) {
            const std::uint64_t t = mulmod(q, m[i], p);
            a[shift + i] = a[shift + i] >= t ? a[shift + i] - t : a[shift + i] + p - t;
        }
        trim(a);
    }
    return a;
}

Poly sub(Poly a, const Poly& b, std::uint64_t p) {
    if (a.size() < b.size()) a.resize(b.size(), 0);
    for (std::size_t i = 0; i < b.size(); ++i) a[i] = a[i] >= b[i] ? a[i] - b[i] : a[i] + p - b[i];
    trim(a);
    return a;
}

Poly monic(Poly a, std::uint64_t p) {
    trim(a);
    if (a.empty()) return a;
    const std::uint64_t inv = invmod(a.back(), p);
    for (auto& c : a) c = mulmod(c, inv, p);
    return a;
}

Poly gcd(Poly a, Poly b, std::uint64_t p) {
    trim(a);
    trim(b);
    while (!b.empty()) {
        Poly r = rem(a, b, p);
        a = std::move(b);
        b = std::move(r);
    }
    return monic(std::move(a), p);
}

Poly pow(Poly base, std::uint64_t e, const Poly& m, std::uint64_t p) {
    Poly result{1 % p};
    trim(result);
    base = rem(std::move(base), m, p);
    while (e > 0) {
        if (e & 1) result = rem(mul(result, base, p), m, p);
        e >>= 1;
        if (e > 0) base = rem(mul(base, base, p), m, p);
    }
    return rem(std::move(result), m, p);
}

Poly pow_x(std::uint64_t e, const Poly& m, std::uint64_t p) { return pow(Poly{0, 1}, e, m, p); }

Poly div_exact(Poly a, const Poly& b, std::uint64_t p) {
    trim(a);
    PDLAB_ASSERT(!b.empty(), "division by the zero polynomial");
    if (a.size() < b.size()) return {};
    Poly q(a.size() - b.size() + 1, 0);
    const std::uint64_t inv = invmod(b.back(), p);
    while (a.size() >= b.size()) {
        const std::uint64_t c = mulmod(a.back(), inv, p);
        const std::size_t shift = a.size() - b.size();
        q[shift] = c;
        for (std::size_t i = 0; i < b.size(); ++i) {
            const std::uint64_t t = mulmod(c, b[i], p);
            a[shift + i] = a[shift + i] >= t ? a[shift + i] - t : a[shift + i] + p - t;
        }
        trim(a);
    }
    PDLAB_ASSERT(a.empty(), "inexact polynomial division");
    trim(q);
    return q;
}

std::vector<int> factor_degrees(Poly f, std::uint64_t p) {
    f = monic(std::move(f), p);
    std::vector<int> out;
    Poly h = rem(Poly{0, 1}, f, p);
    for (int d = 1; 2 * d <= static_cast<int>(f.size()) - 1; ++d) {
        h = pow(h, p, f, p);
        const Poly g = gcd(f, sub(h, Poly{0, 1}, p), p);
        const int gd = static_cast<int>(g.size()) - 1;
        if (gd > 0) {
            for (int k = 0; k < gd / d; ++k) out.push_back(d);
            f = div_exact(f, g, p);
            h = rem(h, f, p);
        }
    }
    if (f.size() > 1) out.push_back(static_cast<int>(f.size()) - 1);
    std::sort(out.begin(), out.end());
    return out;
}

int root_count(const Poly& f, std::uint64_t p) {
    PDLAB_ASSERT(!f.empty(), "root count of the zero polynomial");
    if (f.size() == 1) return 0;
    const Poly xp = pow_x(p, f, p);
    const Poly g = gcd(f, sub(xp, Poly{0, 1}, p), p);
    return static_cast<int>(g.size()) - 1;
}

namespace {

void split_roots(const Poly& g, std::uint64_t p, std::vector<std::uint64_t>& out) {
    const int deg = static_cast<int>(g.size()) - 1;
    if (deg <= 0) return;
    if (deg == 1) {
        // monic: X + g0
        out.push_back(g[0] == 0 ? 0 : p - g[0]);
        return;
    }
    for (std::uint64_t shift = 0; shift < p; ++shift) {
        Poly t = pow(Poly{shift % p, 1}, (p - 1) / 2, g, p);
        t = sub(t, Poly{1}, p);
        const Poly s = gcd(g, t, p);
        const int sd = static_cast<int>(s.size()) - 1;
        if (sd > 0 && sd < deg) {
            split_roots(s, p, out);
            split_roots(div_exact(g, s, p), p, out);
            return;
        }
    }
    PDLAB_ASSERT(false, "root splitting did not terminate");
}

}  // namespace

std::vector<std::uint64_t> roots(const Poly& f, std::uint64_t p) {
    PDLAB_ASSERT(!f.empty(), "roots of the zero polynomial");
    std::vector<std::uint64_t> out;
    if (f.size() == 1) return out;
    if (p == 2) {
        for (std::uint64_t r = 0; r < 2; ++r) {
            std::uint64_t acc = 0;
            for (auto it = f.rbegin(); it != f.rend(); ++it) acc = (acc * r + *it) % 2;
            if (acc == 0) out.push_back(r);
        }
        return out;
    }
    const Poly g = gcd(f, sub(pow_x(p, f, p), Poly{0, 1}, p), p);
    split_roots(g, p, out);
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace polymod

// ---------------------------------------------------------------------------
// Irreducibility

namespace {

using Verdict = IrreducibilityVerdict;

// Integer polynomial ops for the trial factorization, with overflow checks.
using IPoly = std::vector<i128>;

void itrim(IPoly& a) {
    while (!a.empty() && a.back() == 0) a.pop_back();
}

// True iff g divides f in Z[X]; g must be primitive, f primitive.
// nullopt on overflow.
std::optional<bool> divides(const IPoly& g, IPoly f) {
    itrim(f);
    while (f.size() >= g.size()) {
        if (f.back() % g.back() != 0) return false;
        const i128 q = f.back() / g.back();
        const std::size_t shift = f.size() - g.size();
        for (std::size_t i = 0; i < g.size(); ++i) {
            i128 t;
            if (!mul_ok(q, g[i], t) || !sub_ok(f[shift + i], t, f[shift + i])) return std::nullopt;
        }
        PDLAB_ASSERT(f.back() == 0, "leading term did not cancel");
        itrim(f);
    }
    return f.empty();
}

// Looks for a factor of degree m with Kronecker's method. Returns true when
// found, false when none exists, nullopt when the search exceeds its budget.
std::optional<bool> kronecker_has_factor(const Polynomial& f, int m) {
    constexpr std::uint64_t kBudget = 5'000'000;
    // Interpolation points: 0, 1, -1, 2, -2, ...
    std::vector<i128> xs;
    std::vector<std::vector<std::uint64_t>> divs;
    for (int k = 0; static_cast<int>(xs.size()) < m + 1; ++k) {
        const i128 x = (k % 2 == 1) ? (k + 1) / 2 : -(k / 2);
        const auto v = f.eval(x);
        if (!v) return std::nullopt;
        PDLAB_ASSERT(*v != 0, "integer root missed by the rational-root test");
        const u128 mag = static_cast<u128>(abs128(*v));
        if (mag > kDivisorLimit) return std::nullopt;
        xs.push_back(x);
        divs.push_back(divisors(static_cast<std::uint64_t>(mag)));
    }
    std::uint64_t combos = 1;
    for (std::size_t i = 0; i < divs.size(); ++i) {
        combos *= divs[i].size() * (i == 0 ? 1 : 2);
        if (combos > kBudget) return std::nullopt;
    }

    // Lagrange basis numerators prod_{j != i} (X - x_j) and denominators.
    const int n = m + 1;
    std::vector<IPoly> basis(n);
    std::vector<i128> denom(n);
    for (int i = 0; i < n; ++i) {
        IPoly b{1};
        i128 d = 1;
        for (int j = 0; j < n; ++j) {
            if (j == i) continue;
            IPoly next(b.size() + 1, 0);
            for (std::size_t t = 0; t < b.size(); ++t) {
                next[t + 1] += b[t];
                next[t] -= b[t] * xs[j];
            }
            b = std::move(next);
            d *= (xs[i] - xs[j]);
        }
        basis[i] = std::move(b);
        denom[i] = d;
    }
    i128 common = 1;
    for (i128 d : denom) common = common / gcd128(common, d) * abs128(d);

    IPoly fi(f.coeffs().begin(), f.coeffs().end());
    std::vector<std::size_t> idx(n, 0);
    std::vector<int> sgn(n, 1);
    for (std::uint64_t c = 0; c < combos; ++c) {
        // Decode combination c into (divisor index, sign) per point; the
        // first value is taken positive, which fixes the factor's sign.
        std::uint64_t rest = c;
        for (int i = 0; i < n; ++i) {
            const std::uint64_t span = divs[i].size() * (i == 0 ? 1 : 2);
            std::uint64_t digit = rest % span;
            rest /= span;
            sgn[i] = 1;
            if (i > 0) {
                sgn[i] = (digit % 2 == 0) ? 1 : -1;
                digit /= 2;
            }
            idx[i] = digit;
        }
        IPoly g(n, 0);
        bool overflow = false;
        for (int i = 0; i < n && !overflow; ++i) {
            const i128 v = sgn[i] * static_cast<i128>(divs[i][idx[i]]);
            const i128 scale = common / denom[i];
            for (int t = 0; t < n; ++t) {
                i128 a, b;
                if (!mul_ok(v, scale, a) || !mul_ok(a, basis[i][t], b) || !add_ok(g[t], b, g[t])) {
                    overflow = true;
                    break;
                }
            }
        }
        if (overflow) return std::nullopt;
        bool integral = true;
        for (auto& coef : g) {
            if (coef % common != 0) {
                integral = false;
                break;
            }
            coef /= common;
        }
        if (!integral) continue;
        itrim(g);
        if (static_cast<int>(g.size()) - 1 != m) continue;
        i128 cont = 0;
        for (i128 coef : g) cont = gcd128(cont, coef);
        for (auto& coef : g) coef /= cont;
        const auto d = divides(g, fi);
        if (!d) return std::nullopt;
        if (*d) return true;
    }
    return false;
}

std::vector<std::uint64_t> first_primes(int count) {
    std::vector<std::uint64_t> out;
    for (std::uint64_t n = 2; static_cast<int>(out.size()) < count; ++n) {
        bool prime = true;
        for (std::uint64_t d = 2; d * d <= n; ++d)
            if (n % d == 0) {
                prime = false;
                break;
            }
        if (prime) out.push_back(n);
    }
    return out;
}

}  // namespace

IrreducibilityVerdict check_irreducible(const Polynomial& input) {
    const int deg = input.degree();
    if (deg < 1) return {Verdict::Result::Reducible, "constant polynomial"};
    if (deg == 1) return {Verdict::Result::Irreducible, "linear"};
    if (deg > 6) return {Verdict::Result::Unknown, "degree above 6 is not supported"};

    // Work with the primitive part; content does not affect irreducibility over Q.
    std::vector<std::int64_t> prim(input.coeffs().begin(), input.coeffs().end());
    const auto cont = static_cast<std::int64_t>(input.content());
    for (auto& c : prim) c /= cont;
    const Polynomial f(std::move(prim));

    if (f.coeff(0) == 0) return {Verdict::Result::Reducible, "X divides F"};

    // Rational roots r/s: r | a_0, s | a_D.
    const auto a0 = static_cast<std::uint64_t>(abs128(f.coeff(0)));
    const auto ad = static_cast<std::uint64_t>(abs128(f.leading()));
    if (a0 > kDivisorLimit || ad > kDivisorLimit)
        return {Verdict::Result::Unknown, "coefficients too large for the rational-root test"};
    for (std::uint64_t r : divisors(a0))
        for (std::uint64_t s : divisors(ad)) {
            if (std::gcd(r, s) != 1) continue;
            for (int sign : {1, -1}) {
                // sum a_i r^i s^(D-i) with r signed
                i128 acc = 0;
                bool overflow = false;
                for (int i = 0; i <= deg && !overflow; ++i) {
                    i128 term = f.coeff(i);
                    for (int k = 0; k < i && !overflow; ++k) overflow = !mul_ok(term, sign * static_cast<i128>(r), term);
                    for (int k = 0; k < deg - i && !overflow; ++k) overflow = !mul_ok(term, static_cast<i128>(s), term);
                    if (!overflow) overflow = !add_ok(acc, term, acc);
                }
                if (overflow) return {Verdict::Result::Unknown, "overflow in the rational-root test"};
                if (acc == 0)
                    return {Verdict::Result::Reducible,
                            "rational root " + std::string(sign < 0 ? "-" : "") + std::to_string(r) + "/" + std::to_string(s)};
            }
        }
    if (deg <= 3) return {Verdict::Result::Irreducible, "no rational root"};

    const i128 disc = f.discriminant();
    if (disc == 0) return {Verdict::Result::Reducible, "zero discriminant (repeated factor)"};

    // Factor degrees achievable over Q must be achievable mod every good prime.
    std::uint32_t possible = 0;
    for (int m = 2; m <= deg - 2; ++m) possible |= 1u << m;  // no linear factors
    for (std::uint64_t p : first_primes(40)) {
        if (possible == 0) break;
        if (f.leading() % static_cast<std::int64_t>(p) == 0) continue;
        if (disc % static_cast<i128>(p) == 0) continue;
        const auto degs = polymod::factor_degrees(polymod::from(f, p), p);
        std::uint32_t sums = 1;
        for (int d : degs) sums |= sums << d;
        possible &= sums;
    }
    if (possible == 0) return {Verdict::Result::Irreducible, "factor-degree patterns modulo small primes"};

    for (int m = 2; 2 * m <= deg; ++m) {
        if (!(possible & (1u << m)) && !(possible & (1u << (deg - m)))) continue;
        const auto found = kronecker_has_factor(f, m);
        if (!found) return {Verdict::Result::Unknown, "trial factorization exceeded its budget"};
        if (*found) return {Verdict::Result::Reducible, "has a factor of degree " + std::to_string(m)};
    }
    return {Verdict::Result::Irreducible, "no factor found by exhaustive trial factorization"};
}

}  // namespace pdlab
