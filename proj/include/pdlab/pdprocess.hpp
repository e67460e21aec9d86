#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "pdlab/rng.hpp"

namespace pdlab {

inline constexpr double kDefaultTruncation = 1e-12;

// One draw of the Poisson-Dirichlet (theta = 1) process, truncated: the
// sticks generated before the residual fell below delta, sorted descending.
struct PDSample {
    std::vector<double> entries;
    double tail_mass = 0.0;  // mass never assigned, < delta
    // Leading entries that are exact top order statistics of the untruncated
    // process: those >= tail_mass, since every unassigned piece is smaller.
    std::size_t exact_prefix = 0;

    double operator[](std::size_t j) const { return j < entries.size() ? entries[j] : 0.0; }
};

// Source of Uniform(0,1) variates; a test hook in place of a RandomStream.
using UniformSource = std::function<double()>;

// Unsorted sticks G_1 = 1 - U_1, G_2 = U_1 (1 - U_2), ... drawn until the
// residual U_1 ... U_m drops below delta. Returns the sticks and the residual.
struct Sticks {
    std::vector<double> sticks;
    double residual = 1.0;
};
Sticks stick_breaking(const UniformSource& next_uniform, double delta = kDefaultTruncation);

// ValidationError("delta") unless 0 < delta <= 1e-6.
PDSample sample_pd(RandomStream& rng, double delta = kDefaultTruncation);
PDSample sample_pd(const UniformSource& next_uniform, double delta = kDefaultTruncation);

// ---------------------------------------------------------------------------
// Test functions

// eta = sum of weight * 1[a_i <= y_i <= b_i for all i] over the boxes.
struct Box {
    std::vector<double> lo;
    std::vector<double> hi;
    double weight = 1.0;
};

class BoxFunction {
public:
    // ValidationError("boxes") unless k >= 1, every box has k coordinates and
    // 0 < a_i < b_i.
    BoxFunction(std::size_t k, std::vector<Box> boxes);

    static BoxFunction indicator(std::vector<double> lo, std::vector<double> hi, double weight = 1.0);

    std::size_t dimension() const { return k_; }
    const std::vector<Box>& boxes() const { return boxes_; }

    // Smallest lower bound over all boxes and coordinates.
    double alpha() const { return alpha_; }

    double operator()(std::span<const double> y) const;

    // The same function with coordinates permuted: new coordinate i is old
    // coordinate perm[i].
    BoxFunction permuted(std::span<const std::size_t> perm) const;

private:
    std::size_t k_;
    std::vector<Box> boxes_;
    double alpha_;
};

// sum over ordered tuples of distinct indices (j_1, ..., j_k) of
// eta(L_{j_1}, ..., L_{j_k}). `entries` is descending; entries below
// eta.alpha() cannot contribute and are skipped.
double distinct_tuple_sum(const BoxFunction& eta, std::span<const double> entries);

// ---------------------------------------------------------------------------
// Oracles

struct Interval {
    double lo;
    double hi;
};

// True when the intervals lie in (0, 1], are pairwise disjoint (shared
// endpoints allowed) and sum of the upper ends is below 1.
bool product_formula_applies(std::span<const Interval> intervals);

// prod log(b_i / a_i), the exact PD correlation mass of I_1 x ... x I_k.
// nullopt when product_formula_applies() is false; callers fall back to
// Monte Carlo and flag it.
std::optional<double> box_correlation_exact(std::span<const Interval> intervals);

// \int eta(t) 1[t_1 + ... + t_k <= 1] / (t_1 ... t_k) dt by nested adaptive
// Gauss-Kronrod in log coordinates, with breakpoints wherever the simplex
// constraint meets a box face. Deterministic. k <= 4.
double correlation_integral(const BoxFunction& eta, double tolerance = 1e-11);

// ---------------------------------------------------------------------------
// Monte Carlo

struct MCEstimate {
    double estimate = 0.0;
    double std_error = 0.0;
    std::uint64_t samples = 0;
};

struct MCOptions {
    std::uint64_t seed = 0;
    unsigned threads = 1;
    double delta = kDefaultTruncation;
};

// Mean of distinct_tuple_sum over n PD samples; sample i uses stream i.
MCEstimate corr_mc(const BoxFunction& eta, std::uint64_t n_samples, const MCOptions& opts);

// Frequency of {L_1 <= c_1, ..., L_k <= c_k}. Requires delta <= c_i <= 1.
MCEstimate joint_cdf_mc(std::span<const double> c, std::uint64_t n_samples, const MCOptions& opts);

// The same probability through the size-biased representation
// PD = sort({W} u (1 - W) M), W ~ U(0,1) independent of M ~ PD: each sample
// draws M and integrates over W exactly. Uses streams disjoint from
// joint_cdf_mc, so the two estimates are independent.
MCEstimate joint_cdf_size_biased(std::span<const double> c, std::uint64_t n_samples, const MCOptions& opts);

}  // namespace pdlab
