#include "pdlab/factor.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>

namespace pdlab {

namespace {

constexpr std::uint64_t kSegment = std::uint64_t{1} << 19;

std::vector<std::uint32_t> small_primes(std::uint64_t limit) {
    std::vector<char> composite(limit + 1, 0);
    std::vector<std::uint32_t> out;
    for (std::uint64_t i = 2; i <= limit; ++i) {
        if (composite[i]) continue;
        out.push_back(static_cast<std::uint32_t>(i));
        for (std::uint64_t j = i * i; j <= limit; j += i) composite[j] = 1;
    }
    return out;
}

std::uint64_t inverse_mod_2_64(std::uint64_t p) {
    std::uint64_t inv = p;  // correct to 3 bits for odd p
    for (int i = 0; i < 5; ++i) inv *= 2 - p * inv;
    return inv;
}

int ctz128(u128 v) {
    const auto lo = static_cast<std::uint64_t>(v);
    if (lo != 0) return __builtin_ctzll(lo);
    return 64 + __builtin_ctzll(static_cast<std::uint64_t>(v >> 64));
}

}  // namespace

void for_each_prime(std::uint64_t lo, std::uint64_t hi,
                    const std::function<void(std::uint64_t)>& fn) {
    if (lo < 2) lo = 2;
    if (hi < lo) return;
    const auto base = small_primes(isqrt(hi));
    std::vector<char> composite(kSegment);
    for (std::uint64_t seg = lo; seg <= hi;) {
        const std::uint64_t seg_hi = std::min(hi, seg + kSegment - 1);
        const std::size_t len = static_cast<std::size_t>(seg_hi - seg + 1);
        std::fill(composite.begin(), composite.begin() + static_cast<std::ptrdiff_t>(len), 0);
        for (std::uint32_t p : base) {
            const std::uint64_t pp = static_cast<std::uint64_t>(p) * p;
            if (pp > seg_hi) break;
            std::uint64_t start = std::max(pp, (seg + p - 1) / p * p);
            for (std::uint64_t j = start; j <= seg_hi; j += p) composite[j - seg] = 1;
        }
        for (std::size_t i = 0; i < len; ++i)
            if (!composite[i]) fn(seg + i);
        if (seg_hi == hi) break;
        seg = seg_hi + 1;
    }
}

PrimeTable::PrimeTable(std::uint64_t limit, std::vector<std::uint64_t> primes)
    : limit_(limit), primes_(std::move(primes)) {
    inverse_.resize(primes_.size());
    bound_.resize(primes_.size());
    for (std::size_t i = 0; i < primes_.size(); ++i) {
        const std::uint64_t p = primes_[i];
        if (p % 2 == 0) continue;
        inverse_[i] = inverse_mod_2_64(p);
        bound_[i] = std::numeric_limits<std::uint64_t>::max() / p;
    }
}

bool PrimeTable::contains(std::uint64_t n) const {
    return std::binary_search(primes_.begin(), primes_.end(), n);
}

PrimeTable build_prime_table(std::uint64_t limit, std::size_t max_bytes) {
    if (limit < 2) throw ValidationError("limit", "prime table limit must be at least 2");
    // pi(x) < 1.25506 x / log x for x > 1.
    const double est_count = limit < 17 ? 7.0 : 1.25506 * static_cast<double>(limit) / std::log(static_cast<double>(limit));
    const double est_bytes = est_count * 3 * sizeof(std::uint64_t);
    if (est_bytes > static_cast<double>(max_bytes))
        throw ResourceError("memory", "prime table up to " + std::to_string(limit) + " needs ~" +
                                          std::to_string(static_cast<std::uint64_t>(est_bytes)) +
                                          " bytes, budget is " + std::to_string(max_bytes));
    std::vector<std::uint64_t> primes;
    primes.reserve(static_cast<std::size_t>(est_count));
    for_each_prime(2, limit, [&](std::uint64_t p) { primes.push_back(p); });
    return PrimeTable(limit, std::move(primes));
}

// ---------------------------------------------------------------------------

SpfSieve::SpfSieve(std::uint64_t limit, std::uint64_t max_limit) : limit_(limit) {
    if (limit > max_limit)
        throw ResourceError("spf_sieve", "sieve length " + std::to_string(limit) +
                                             " exceeds the cap " + std::to_string(max_limit));
    if (limit >= (std::uint64_t{1} << 32))
        throw ResourceError("spf_sieve", "sieve length must stay below 2^32");
    spf_.assign(limit + 1, 0);
    const std::uint64_t root = isqrt(limit);
    for (std::uint64_t i = 2; i <= root; ++i) {
        if (spf_[i] != 0) continue;
        for (std::uint64_t j = i * i; j <= limit; j += i)
            if (spf_[j] == 0) spf_[j] = static_cast<std::uint32_t>(i);
    }
}

// ---------------------------------------------------------------------------

void factorize_into(u128 u, const PrimeTable& table, FactorList& out) {
    out.clear();
    if (u == 0) throw ValidationError("u", "factorize requires u >= 1");
    if (static_cast<u128>(table.limit()) * table.limit() < u)
        throw ValidationError("table", "prime table limit " + std::to_string(table.limit()) +
                                           " is too small to factor " + to_string(u));
    if ((u & 1) == 0) {
        const int twos = ctz128(u);
        out.push(2, static_cast<std::uint32_t>(twos));
        u >>= twos;
    }
    const auto primes = table.primes();
    std::size_t i = (!primes.empty() && primes[0] == 2) ? 1 : 0;

    // Wide values: plain division until the cofactor fits a word.
    for (; i < primes.size() && (u >> 64) != 0; ++i) {
        const u128 p = primes[i];
        if (p * p > u) break;
        if (u % p != 0) continue;
        std::uint32_t e = 0;
        do {
            u /= p;
            ++e;
        } while (u % p == 0);
        out.push(p, e);
    }
    if ((u >> 64) == 0) {
        auto w = static_cast<std::uint64_t>(u);
        for (; i < primes.size(); ++i) {
            const std::uint64_t p = primes[i];
            if (static_cast<u128>(p) * p > w) break;
            if (!table.divides(i, w)) continue;
            std::uint32_t e = 0;
            do {
                w /= p;
                ++e;
            } while (table.divides(i, w));
            out.push(p, e);
        }
        u = w;
    }
    if (u > 1) out.push(u, 1);
}

Factorization factorize(u128 u, const PrimeTable& table) {
    FactorList list;
    factorize_into(u, table, list);
    Factorization f;
    f.value = u;
    f.factors.assign(list.items().begin(), list.items().end());
    return f;
}

void factorize_into(std::uint64_t n, const SpfSieve& sieve, FactorList& out) {
    out.clear();
    if (n == 0 || n > sieve.limit())
        throw ValidationError("u", "value " + std::to_string(n) + " outside the sieve range");
    while (n > 1) {
        const std::uint32_t p = sieve.spf(n);
        std::uint32_t e = 0;
        do {
            n /= p;
            ++e;
        } while (n > 1 && sieve.spf(n) == p);
        out.push(p, e);
    }
}

Factorization factorize(std::uint64_t n, const SpfSieve& sieve) {
    FactorList list;
    factorize_into(n, sieve, list);
    Factorization f;
    f.value = n;
    f.factors.assign(list.items().begin(), list.items().end());
    return f;
}

Factorization factorize_naive(std::uint64_t n) {
    if (n == 0) throw ValidationError("u", "factorize requires u >= 1");
    Factorization f;
    f.value = n;
    for (std::uint64_t d = 2; d <= n / d; ++d) {
        std::uint32_t e = 0;
        while (n % d == 0) {
            n /= d;
            ++e;
        }
        if (e > 0) f.factors.push_back({d, e});
    }
    if (n > 1) f.factors.push_back({n, 1});
    return f;
}

u128 expand(std::span<const PrimePower> factors) {
    u128 acc = 1;
    for (const auto& [p, e] : factors)
        for (std::uint32_t k = 0; k < e; ++k) {
            PDLAB_ASSERT(acc <= (~u128{0}) / p, "product overflows 128 bits");
            acc *= p;
        }
    return acc;
}

u128 largest_prime(const Factorization& f) {
    return f.factors.empty() ? 1 : f.factors.back().prime;
}

void SpectrumBuffer::assign(u128 value, std::span<const PrimePower> factors) {
    value_ = value;
    if (factors.empty()) {
        entries_[0] = 1.0;
        size_ = 1;
        return;
    }
    const long double log_u = std::log(static_cast<long double>(value));
    size_ = 0;
    for (auto it = factors.rbegin(); it != factors.rend(); ++it) {
        const double entry =
            static_cast<double>(std::log(static_cast<long double>(it->prime)) / log_u);
        for (std::uint32_t k = 0; k < it->exponent; ++k) entries_[size_++] = entry;
    }
}

NormalizedSpectrum spectrum(const Factorization& f) {
    SpectrumBuffer buf;
    buf.assign(f.value, f.factors);
    NormalizedSpectrum s;
    s.value = f.value;
    s.entries.assign(buf.entries().begin(), buf.entries().end());
    return s;
}

// ---------------------------------------------------------------------------
// Binary cache

namespace {

constexpr char kMagic[8] = {'P', 'D', 'L', 'A', 'B', 'P', 'T', '\0'};
constexpr std::uint32_t kVersion = 1;

struct Fnv1a {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    void feed(const unsigned char* p, std::size_t n) {
        for (std::size_t i = 0; i < n; ++i) {
            h ^= p[i];
            h *= 0x100000001b3ULL;
        }
    }
};

void put_le(std::vector<unsigned char>& buf, std::uint64_t v, int bytes) {
    for (int i = 0; i < bytes; ++i) buf.push_back(static_cast<unsigned char>(v >> (8 * i)));
}

std::uint64_t get_le(const unsigned char* p, int bytes) {
    std::uint64_t v = 0;
    for (int i = 0; i < bytes; ++i) v |= static_cast<std::uint64_t>(p[i]) << (8 * i);
    return v;
}

}  // namespace

void save_prime_table(const PrimeTable& table, const std::filesystem::path& path) {
    std::vector<unsigned char> buf(kMagic, kMagic + 8);
    put_le(buf, kVersion, 4);
    put_le(buf, 0, 4);
    put_le(buf, table.limit(), 8);
    put_le(buf, table.size(), 8);
    std::uint64_t prev = 0;
    for (std::uint64_t p : table.primes()) {
        std::uint64_t gap = p - prev;
        prev = p;
        do {
            unsigned char byte = gap & 0x7f;
            gap >>= 7;
            if (gap != 0) byte |= 0x80;
            buf.push_back(byte);
        } while (gap != 0);
    }
    Fnv1a sum;
    sum.feed(buf.data(), buf.size());
    put_le(buf, sum.h, 8);

    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot open " + path.string() + " for writing");
    out.write(reinterpret_cast<const char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
    if (!out) throw Error("write failed: " + path.string());
}

PrimeTable load_prime_table(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open " + path.string());
    std::vector<unsigned char> buf((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    constexpr std::size_t header = 32;
    if (buf.size() < header + 8 || !std::equal(kMagic, kMagic + 8, buf.begin()))
        throw Error("not a prime table cache: " + path.string());
    if (get_le(buf.data() + 8, 4) != kVersion) throw Error("unsupported prime table version");
    Fnv1a sum;
    sum.feed(buf.data(), buf.size() - 8);
    if (sum.h != get_le(buf.data() + buf.size() - 8, 8)) throw Error("prime table checksum mismatch");

    const std::uint64_t limit = get_le(buf.data() + 16, 8);
    const std::uint64_t count = get_le(buf.data() + 24, 8);
    std::vector<std::uint64_t> primes;
    primes.reserve(count);
    std::uint64_t prev = 0;
    std::size_t pos = header;
    const std::size_t end = buf.size() - 8;
    while (pos < end) {
        std::uint64_t gap = 0;
        int shift = 0;
        while (true) {
            if (pos >= end || shift > 63) throw Error("truncated prime table payload");
            const unsigned char byte = buf[pos++];
            gap |= static_cast<std::uint64_t>(byte & 0x7f) << shift;
            shift += 7;
            if ((byte & 0x80) == 0) break;
        }
        prev += gap;
        primes.push_back(prev);
    }
    if (primes.size() != count) throw Error("prime table count mismatch");
    return PrimeTable(limit, std::move(primes));
}

}  // namespace pdlab
