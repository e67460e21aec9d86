#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "pdlab/dickman.hpp"
#include "pdlab/factor.hpp"
#include "pdlab/pdprocess.hpp"
#include "pdlab/sequences.hpp"

namespace pdlab {

// Comparisons of normalized log-primes against thresholds (L1 <= c,
// L1 >= 1 - eps, box faces) allow this much slack, so that exact ties such
// as u = p^2 at c = 1/2 are not lost to rounding in log p / log u.
inline constexpr double kTieSlack = 1e-12;

struct SampleOptions {
    unsigned threads = 1;
    // Above this many members the set is subsampled uniformly.
    std::uint64_t exhaustive_limit = 200'000'000;
    // Force Bernoulli subsampling at this rate in (0, 1].
    std::optional<double> rate;
    std::uint64_t seed = 0;  // subsampling seed
    // Dense sequences up to this x are factored from a smallest-prime-factor
    // sieve; everything else by trial division.
    std::uint64_t spf_limit = SpfSieve::kDefaultMaxLimit;
};

// One member as the estimators see it.
struct MemberView {
    std::uint64_t n;
    std::span<const PrimePower> factors;  // primes ascending
    const SpectrumBuffer& spectrum;       // descending, [1] for n = 1
};

// The members u <= x of a sequence with their spectra, or a uniform Bernoulli
// subsample of them. Spectra are produced on the fly during each pass
// rather than stored. Passes visit members in fixed chunks whose boundaries
// depend only on the member index, and estimators reduce chunk results in
// chunk order, so every estimate is independent of the thread count.
class SampleSet {
public:
    SampleSet(const Sequence& seq, std::uint64_t x, SampleOptions opts = {});

    // An explicit list of values (ascending, >= 1), for tests and ad hoc
    // samples. Treated as exhaustive.
    static SampleSet of_values(std::vector<std::uint64_t> values, SampleOptions opts = {});

    const SequenceSpec& spec() const { return spec_; }
    std::uint64_t x() const { return x_; }
    bool exhaustive() const { return !rate_; }
    std::optional<double> rate() const { return rate_; }
    std::uint64_t subsample_seed() const { return opts_.seed; }
    unsigned threads() const { return opts_.threads; }

    // Members in the sample.
    std::uint64_t size() const { return size_; }

    std::size_t chunk_total() const;

    // Calls visit(chunk_index, member) for every sampled member; members of
    // one chunk arrive in ascending order from a single thread.
    void scan(const std::function<void(std::size_t, const MemberView&)>& visit) const;

    // L1 = log P+(u) / log u for every sampled member, in member order.
    std::vector<double> largest_normalized() const;

private:
    SampleSet() = default;
    std::uint64_t index_space() const;
    std::uint64_t member_at(std::uint64_t i) const;  // 0 if index i is not a member
    template <class Fn>
    void for_selected(std::size_t chunk, Fn&& fn) const;

    SequenceSpec spec_;
    std::uint64_t x_ = 0;
    SampleOptions opts_;
    std::optional<double> rate_;
    bool implicit_ = false;                // index i is the candidate n = i + 1
    std::vector<std::uint64_t> members_;  // explicit members otherwise
    std::shared_ptr<const SpfSieve> sieve_;
    std::shared_ptr<const PrimeTable> table_;
    std::uint64_t size_ = 0;
};

struct Frequency {
    double estimate = 0.0;
    double std_error = 0.0;
    std::uint64_t count = 0;  // members that satisfied the event (or summed terms)
    std::uint64_t n = 0;      // members in the sample
};

// Mean over members of the distinct-index tuple sum of eta at the normalized
// log-primes. std_error is the sample standard deviation over sqrt(n).
Frequency empirical_corr(const SampleSet& s, const BoxFunction& eta);

// Frequency of {L_1 <= c_1, ..., L_k <= c_k}; c_i in (0, 1].
Frequency empirical_joint_cdf(const SampleSet& s, std::span<const double> c);

// Frequency of P+(u) >= u^(1 - eps), i.e. L_1 >= 1 - eps; eps in (0, 1/2].
// u = 1 counts (its spectrum is [1]).
Frequency tail_frequency(const SampleSet& s, double eps);

struct LodResult {
    double error_sum = 0.0;    // sum_{d <= D} |N_d(x) - g(d) N(x)| / N(x)
    double max_abs_r = 0.0;    // max_d |N_d(x) - g(d) N(x)|
    std::uint64_t argmax_d = 1;
    std::uint64_t d_max = 0;   // D = floor(x^c)
    std::uint64_t n_total = 0; // N(x)
};

struct LodOptions {
    unsigned threads = 1;
    std::uint64_t max_x = 2'000'000'000ull;  // counting budget
};

// c in (0, 1). ResourceError("max_x") past the counting budget.
LodResult lod_error_sum(const Sequence& seq, std::uint64_t x, double c, const LodOptions& opts = {});

// Frequency of members with some prime p, x^alpha <= p <= x^c, dividing them
// at least twice. 0 < alpha < c <= 1.
Frequency repeated_factor_frequency(const SampleSet& s, double alpha, double c);

struct SurvivorResult {
    std::uint64_t survivors = 0;
    std::uint64_t n_total = 0;     // N(x)
    double v = 1.0;                // prod over window primes of (1 - g(p))
    double ratio = 0.0;            // survivors / (V N(x)); NaN when V = 0
    std::uint64_t window_lo = 0;   // smallest prime in the window
    std::uint64_t window_hi = 0;   // largest prime in the window
    std::uint64_t window_primes = 0;
};

struct SurvivorOptions {
    unsigned threads = 1;
    std::uint64_t max_x = 2'000'000'000ull;
};

// Members u <= x divisible by no prime p with p > z0 and x^eps < p < x^delta0
// (both ends open). ValidationError("window") if no prime qualifies.
SurvivorResult sieve_survivor_experiment(const Sequence& seq, std::uint64_t x, double eps, double delta0,
                                         std::uint64_t z0 = 0, const SurvivorOptions& opts = {});

// One-sample Kolmogorov-Smirnov statistic sup |F_n - F|. ValidationError
// ("sample") when empty. `cdf` must be nondecreasing.
double ks_distance(std::vector<double> sample, const std::function<double(double)>& cdf);

// KS distance between the L_1 values of the sample and c -> rho(1/c). The
// reference table covers u up to 64, enough for any u < 2^64.
double ks_distance_dickman(const SampleSet& s);

// The reference table used by ks_distance_dickman.
const RhoTable& extended_rho_table();

}  // namespace pdlab
