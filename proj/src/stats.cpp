#include "pdlab/stats.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>

#include "pdlab/parallel.hpp"
#include "pdlab/simd/kernels.hpp"

namespace pdlab {

namespace {

constexpr std::uint64_t kChunk = std::uint64_t{1} << 16;

bool dense_kind(SequenceSpec::Kind k) { return k != SequenceSpec::Kind::Poly; }

std::uint64_t geometric_skip(RandomStream& rng, double rate) {
    if (rate >= 1.0) return 0;
    const double g = std::floor(std::log(rng.uniform()) / std::log1p(-rate));
    return g >= 1e18 ? std::uint64_t{1} << 60 : static_cast<std::uint64_t>(g);
}

struct Moments {
    double sum = 0.0;
    double sum_sq = 0.0;
    std::uint64_t hits = 0;
    std::uint64_t n = 0;
};

Frequency finish_mean(const std::vector<Moments>& parts) {
    Moments t;
    for (const auto& m : parts) {
        t.sum += m.sum;
        t.sum_sq += m.sum_sq;
        t.hits += m.hits;
        t.n += m.n;
    }
    Frequency f;
    f.n = t.n;
    f.count = t.hits;
    if (t.n == 0) throw ValidationError("sample", "the sample is empty");
    const double n = static_cast<double>(t.n);
    f.estimate = t.sum / n;
    if (t.n > 1) {
        const double var = std::max(0.0, (t.sum_sq - n * f.estimate * f.estimate) / (n - 1.0));
        f.std_error = std::sqrt(var / n);
    }
    return f;
}

// Frequency of an event per member, with the binomial standard error.
template <class Pred>
Frequency event_frequency(const SampleSet& s, Pred&& pred) {
    std::vector<Moments> parts(s.chunk_total());
    s.scan([&](std::size_t chunk, const MemberView& m) {
        auto& acc = parts[chunk];
        ++acc.n;
        if (pred(m)) ++acc.hits;
    });
    Frequency f;
    for (const auto& m : parts) {
        f.count += m.hits;
        f.n += m.n;
    }
    if (f.n == 0) throw ValidationError("sample", "the sample is empty");
    const double n = static_cast<double>(f.n);
    f.estimate = static_cast<double>(f.count) / n;
    f.std_error = std::sqrt(f.estimate * (1.0 - f.estimate) / n);
    return f;
}

using Bitmap = std::vector<std::uint64_t>;

void set_bit(Bitmap& b, std::uint64_t i) { b[i >> 6] |= std::uint64_t{1} << (i & 63); }
bool get_bit(const Bitmap& b, std::uint64_t i) { return (b[i >> 6] >> (i & 63)) & 1; }

// Bit n set for every member n <= x.
Bitmap member_bitmap(const Sequence& seq, std::uint64_t x) {
    Bitmap b(x / 64 + 1, 0);
    switch (seq.spec().kind) {
        case SequenceSpec::Kind::Uniform:
            for (std::uint64_t n = 1; n <= x; ++n) set_bit(b, n);
            break;
        default:
            seq.for_each(x, [&](std::uint64_t n) { set_bit(b, n); });
    }
    return b;
}

// g(d) for 1 <= d <= D, multiplicatively from a smallest-prime-factor sieve.
std::vector<double> g_table(const GFunction& g, std::uint64_t dmax) {
    std::vector<double> out(dmax + 1, 0.0);
    if (dmax == 0) return out;
    const SpfSieve sieve(std::max<std::uint64_t>(dmax, 2));
    FactorList fl;
    out[1] = 1.0;
    for (std::uint64_t d = 2; d <= dmax; ++d) {
        factorize_into(d, sieve, fl);
        double v = 1.0;
        for (const auto& pe : fl.items()) {
            v *= g.at_prime_power(static_cast<std::uint64_t>(pe.prime), pe.exponent);
            if (v == 0.0) break;
        }
        out[d] = v;
    }
    return out;
}

BoxFunction widened(const BoxFunction& eta) {
    std::vector<Box> boxes = eta.boxes();
    for (auto& b : boxes)
        for (std::size_t i = 0; i < b.lo.size(); ++i) {
            b.lo[i] = std::max(b.lo[i] - kTieSlack, std::numeric_limits<double>::min());
            b.hi[i] += kTieSlack;
        }
    return BoxFunction(eta.dimension(), std::move(boxes));
}

}  // namespace

// ---------------------------------------------------------------------------
// SampleSet

SampleSet::SampleSet(const Sequence& seq, std::uint64_t x, SampleOptions opts)
    : spec_(seq.spec()), x_(x), opts_(opts) {
    if (x == 0) throw ValidationError("x", "must be at least 1");
    const auto kind = spec_.kind;
    implicit_ = kind == SequenceSpec::Kind::Uniform || kind == SequenceSpec::Kind::ThueMorse;
    if (!implicit_) members_ = seq.enumerate(x);

    std::uint64_t members = implicit_ ? (kind == SequenceSpec::Kind::Uniform ? x : thue_morse_count(x))
                                      : members_.size();
    if (opts_.rate) {
        if (!(*opts_.rate > 0.0 && *opts_.rate <= 1.0)) throw ValidationError("rate", "must lie in (0, 1]");
        if (*opts_.rate < 1.0) rate_ = *opts_.rate;
    } else if (members > opts_.exhaustive_limit) {
        rate_ = static_cast<double>(opts_.exhaustive_limit) / static_cast<double>(members);
    }

    if (dense_kind(kind) && x <= opts_.spf_limit)
        sieve_ = std::make_shared<const SpfSieve>(std::max<std::uint64_t>(x, 2), opts_.spf_limit);
    else
        table_ = std::make_shared<const PrimeTable>(build_prime_table(isqrt(x) + 2));

    if (!rate_) {
        size_ = members;
    } else {
        size_ = 0;
        for (std::size_t c = 0; c < chunk_total(); ++c) for_selected(c, [&](std::uint64_t) { ++size_; });
    }
}

SampleSet SampleSet::of_values(std::vector<std::uint64_t> values, SampleOptions opts) {
    if (values.empty()) throw ValidationError("values", "need at least one value");
    if (values.front() == 0) throw ValidationError("values", "values must be >= 1");
    if (!std::is_sorted(values.begin(), values.end())) throw ValidationError("values", "values must be ascending");
    SampleSet s;
    s.opts_ = opts;
    s.opts_.rate.reset();
    s.x_ = values.back();
    s.members_ = std::move(values);
    s.size_ = s.members_.size();
    s.table_ = std::make_shared<const PrimeTable>(build_prime_table(isqrt(s.x_) + 2));
    return s;
}

std::uint64_t SampleSet::index_space() const { return implicit_ ? x_ : members_.size(); }

std::size_t SampleSet::chunk_total() const { return chunk_count(index_space(), kChunk); }

std::uint64_t SampleSet::member_at(std::uint64_t i) const {
    if (!implicit_) return members_[i];
    const std::uint64_t n = i + 1;
    if (spec_.kind == SequenceSpec::Kind::ThueMorse && (std::popcount(n) & 1)) return 0;
    return n;
}

template <class Fn>
void SampleSet::for_selected(std::size_t chunk, Fn&& fn) const {
    const std::uint64_t b = chunk * kChunk;
    const std::uint64_t e = std::min(index_space(), b + kChunk);
    if (!rate_) {
        for (std::uint64_t i = b; i < e; ++i)
            if (const auto n = member_at(i)) fn(n);
        return;
    }
    RandomStream rng(opts_.seed, chunk);
    for (std::uint64_t i = b + geometric_skip(rng, *rate_); i < e; i += 1 + geometric_skip(rng, *rate_))
        if (const auto n = member_at(i)) fn(n);
}

void SampleSet::scan(const std::function<void(std::size_t, const MemberView&)>& visit) const {
    parallel_chunks(chunk_total(), 1, opts_.threads, [&](ChunkRange r) {
        FactorList fl;
        SpectrumBuffer spec;
        for_selected(r.index, [&](std::uint64_t n) {
            if (sieve_)
                factorize_into(n, *sieve_, fl);
            else
                factorize_into(u128{n}, *table_, fl);
            spec.assign(n, fl.items());
            visit(r.index, MemberView{n, fl.items(), spec});
        });
    });
}

std::vector<double> SampleSet::largest_normalized() const {
    std::vector<std::vector<double>> parts(chunk_total());
    scan([&](std::size_t chunk, const MemberView& m) { parts[chunk].push_back(m.spectrum[0]); });
    std::vector<double> out;
    out.reserve(size_);
    for (auto& p : parts) out.insert(out.end(), p.begin(), p.end());
    return out;
}

// ---------------------------------------------------------------------------
// Estimators

Frequency empirical_corr(const SampleSet& s, const BoxFunction& eta) {
    const BoxFunction wide = widened(eta);
    std::vector<Moments> parts(s.chunk_total());
    s.scan([&](std::size_t chunk, const MemberView& m) {
        const double v = distinct_tuple_sum(wide, m.spectrum.entries());
        auto& acc = parts[chunk];
        acc.sum += v;
        acc.sum_sq += v * v;
        acc.hits += v != 0.0;
        ++acc.n;
    });
    return finish_mean(parts);
}

Frequency empirical_joint_cdf(const SampleSet& s, std::span<const double> c) {
    if (c.empty()) throw ValidationError("c", "need at least one threshold");
    for (double ci : c)
        if (!(ci > 0.0 && ci <= 1.0)) throw ValidationError("c", "thresholds must lie in (0, 1]");
    const std::vector<double> cc(c.begin(), c.end());
    return event_frequency(s, [&](const MemberView& m) {
        for (std::size_t i = 0; i < cc.size(); ++i)
            if (m.spectrum[i] > cc[i] + kTieSlack) return false;
        return true;
    });
}

Frequency tail_frequency(const SampleSet& s, double eps) {
    if (!(eps > 0.0 && eps <= 0.5)) throw ValidationError("eps", "must lie in (0, 1/2]");
    const double cut = 1.0 - eps - kTieSlack;
    return event_frequency(s, [&](const MemberView& m) { return m.spectrum[0] >= cut; });
}

Frequency repeated_factor_frequency(const SampleSet& s, double alpha, double c) {
    if (!(alpha > 0.0 && alpha < c && c <= 1.0)) throw ValidationError("alpha", "need 0 < alpha < c <= 1");
    const std::uint64_t lo = ceil_pow(s.x(), alpha);
    const std::uint64_t hi = floor_pow(s.x(), c);
    return event_frequency(s, [&](const MemberView& m) {
        for (const auto& pe : m.factors) {
            if (pe.prime > hi) break;
            if (pe.prime >= lo && pe.exponent >= 2) return true;
        }
        return false;
    });
}

LodResult lod_error_sum(const Sequence& seq, std::uint64_t x, double c, const LodOptions& opts) {
    if (!(c > 0.0 && c < 1.0)) throw ValidationError("c", "must lie in (0, 1)");
    if (x == 0) throw ValidationError("x", "must be at least 1");
    if (x > opts.max_x)
        throw ResourceError("max_x", "counting up to x = " + std::to_string(x) + " exceeds the budget " +
                                         std::to_string(opts.max_x));
    LodResult out;
    out.d_max = std::max<std::uint64_t>(floor_pow(x, c), 1);
    const std::uint64_t dmax = out.d_max;
    const GFunction g(seq.spec().g());
    const auto gd = g_table(g, dmax);

    std::vector<std::uint64_t> nd(dmax + 1, 0);
    const auto kind = seq.spec().kind;
    if (kind == SequenceSpec::Kind::Uniform) {
        out.n_total = x;
        for (std::uint64_t d = 1; d <= dmax; ++d) nd[d] = x / d;
    } else {
        // Either count multiples of d in a member bitmap (cost ~ x log D) or
        // test every member against every d (cost ~ N D).
        std::vector<std::uint64_t> members;
        const bool sparse = kind == SequenceSpec::Kind::Poly;
        if (sparse) members = seq.enumerate(x);
        const double harmonic = std::log(static_cast<double>(dmax)) + 1.0;
        const bool use_list =
            sparse && static_cast<double>(members.size()) * static_cast<double>(dmax) < static_cast<double>(x) * harmonic;
        if (use_list) {
            out.n_total = members.size();
            parallel_chunks(dmax, 256, opts.threads, [&](ChunkRange r) {
                for (std::size_t i = r.begin; i < r.end; ++i) nd[i + 1] = simd::count_divisible(members, i + 1);
            });
        } else {
            Bitmap bits;
            if (sparse) {
                bits.assign(x / 64 + 1, 0);
                for (auto n : members) set_bit(bits, n);
            } else {
                bits = member_bitmap(seq, x);
            }
            for (auto w : bits) out.n_total += std::popcount(w);
            parallel_chunks(dmax, 64, opts.threads, [&](ChunkRange r) {
                for (std::size_t i = r.begin; i < r.end; ++i) {
                    const std::uint64_t d = i + 1;
                    std::uint64_t k = 0;
                    for (std::uint64_t m = d; m <= x; m += d) k += get_bit(bits, m);
                    nd[d] = k;
                }
            });
        }
    }
    if (out.n_total == 0) throw ValidationError("x", "the sequence has no members up to x");

    const double n = static_cast<double>(out.n_total);
    double sum = 0.0;
    for (std::uint64_t d = 1; d <= dmax; ++d) {
        const double r = std::abs(static_cast<double>(nd[d]) - gd[d] * n);
        sum += r;
        if (r > out.max_abs_r) {
            out.max_abs_r = r;
            out.argmax_d = d;
        }
    }
    out.error_sum = sum / n;
    return out;
}

SurvivorResult sieve_survivor_experiment(const Sequence& seq, std::uint64_t x, double eps, double delta0,
                                         std::uint64_t z0, const SurvivorOptions& opts) {
    if (x < 2) throw ValidationError("x", "must be at least 2");
    if (!(eps > 0.0 && eps < delta0 && delta0 <= 1.0)) throw ValidationError("eps", "need 0 < eps < delta0 <= 1");
    if (x > opts.max_x)
        throw ResourceError("max_x", "counting up to x = " + std::to_string(x) + " exceeds the budget " +
                                         std::to_string(opts.max_x));
    // p > x^eps, p > z0, p < x^delta0, in exact integers.
    const std::uint64_t lo = std::max(floor_pow(x, eps), z0) + 1;
    const std::uint64_t up = ceil_pow(x, delta0);
    std::vector<std::uint64_t> window;
    if (up >= 1 && lo <= up - 1) for_each_prime(std::max<std::uint64_t>(lo, 2), up - 1, [&](std::uint64_t p) { window.push_back(p); });
    if (window.empty())
        throw ValidationError("window", "no prime p with p > z0 = " + std::to_string(z0) + " and x^eps < p < x^delta0 (x = " +
                                            std::to_string(x) + ", eps = " + std::to_string(eps) +
                                            ", delta0 = " + std::to_string(delta0) + ")");
    SurvivorResult out;
    out.window_lo = window.front();
    out.window_hi = window.back();
    out.window_primes = window.size();

    const GFunction g(seq.spec().g());
    for (auto p : window) out.v *= 1.0 - g.at_prime(p);

    if (dense_kind(seq.spec().kind)) {
        const Bitmap members = member_bitmap(seq, x);
        Bitmap marked(members.size(), 0);
        for (auto p : window)
            for (std::uint64_t m = p; m <= x; m += p) set_bit(marked, m);
        for (auto w : members) out.n_total += std::popcount(w);
        out.survivors = simd::popcount_andnot(members, marked);
    } else {
        const auto members = seq.enumerate(x);
        out.n_total = members.size();
        std::vector<std::uint64_t> hit(chunk_count(members.size(), 4096), 0);
        parallel_chunks(members.size(), 4096, opts.threads, [&](ChunkRange r) {
            std::uint64_t k = 0;
            for (std::size_t i = r.begin; i < r.end; ++i) {
                bool divisible = false;
                for (auto p : window) {
                    if (p > members[i]) break;
                    if (members[i] % p == 0) {
                        divisible = true;
                        break;
                    }
                }
                k += !divisible;
            }
            hit[r.index] = k;
        });
        for (auto k : hit) out.survivors += k;
    }
    if (out.n_total == 0) throw ValidationError("x", "the sequence has no members up to x");
    out.ratio = out.v > 0.0 ? static_cast<double>(out.survivors) / (out.v * static_cast<double>(out.n_total))
                            : std::numeric_limits<double>::quiet_NaN();
    return out;
}

double ks_distance(std::vector<double> sample, const std::function<double(double)>& cdf) {
    if (sample.empty()) throw ValidationError("sample", "KS distance of an empty sample");
    std::sort(sample.begin(), sample.end());
    std::vector<double> ref(sample.size());
    for (std::size_t i = 0; i < sample.size(); ++i)
        ref[i] = i > 0 && sample[i] == sample[i - 1] ? ref[i - 1] : cdf(sample[i]);
    return simd::max_cdf_gap(ref);
}

const RhoTable& extended_rho_table() {
    static const RhoTable table(RhoTable::Options{64.0, 8, 16});
    return table;
}

double ks_distance_dickman(const SampleSet& s) {
    const RhoTable& rho = extended_rho_table();
    return ks_distance(s.largest_normalized(), [&](double c) { return c >= 1.0 ? 1.0 : rho(1.0 / c); });
}

}  // namespace pdlab
