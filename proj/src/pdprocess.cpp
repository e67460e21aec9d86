#include "pdlab/pdprocess.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <numeric>

#include "pdlab/common.hpp"
#include "pdlab/parallel.hpp"

namespace pdlab {

namespace {

constexpr std::size_t kMaxSticks = 100'000;
constexpr std::size_t kMcChunk = 4096;

void check_delta(double delta) {
    if (!(delta > 0.0 && delta <= 1e-6)) throw ValidationError("delta", "truncation must lie in (0, 1e-6]");
}

// Sticks into buf (unsorted), returns the residual.
template <class Next>
double break_sticks(Next&& next, double delta, std::vector<double>& buf) {
    buf.clear();
    double residual = 1.0;
    while (residual >= delta) {
        const double u = next();
        buf.push_back(residual * (1.0 - u));
        residual *= u;
        PDLAB_ASSERT(buf.size() <= kMaxSticks, "stick breaking did not reach the truncation threshold");
    }
    return residual;
}

double sample_sorted(RandomStream& rng, double delta, std::vector<double>& buf) {
    const double tail = break_sticks([&] { return rng.uniform(); }, delta, buf);
    std::sort(buf.begin(), buf.end(), std::greater<>());
    return tail;
}

PDSample finish(std::vector<double> sticks, double residual) {
    std::sort(sticks.begin(), sticks.end(), std::greater<>());
    PDSample s;
    s.tail_mass = residual;
    s.exact_prefix = static_cast<std::size_t>(
        std::find_if(sticks.begin(), sticks.end(), [&](double v) { return v < residual; }) - sticks.begin());
    s.entries = std::move(sticks);
    return s;
}

struct Moments {
    double sum = 0.0;
    double sum_sq = 0.0;
};

template <class PerSample>
MCEstimate run_mc(std::uint64_t n, unsigned threads, PerSample&& per_sample) {
    if (n == 0) throw ValidationError("n_samples", "must be at least 1");
    std::vector<Moments> parts(chunk_count(n, kMcChunk));
    parallel_chunks(n, kMcChunk, threads, [&](ChunkRange r) {
        Moments m;
        std::vector<double> buf;
        for (std::size_t i = r.begin; i < r.end; ++i) {
            const double v = per_sample(static_cast<std::uint64_t>(i), buf);
            m.sum += v;
            m.sum_sq += v * v;
        }
        parts[r.index] = m;
    });
    Moments total;
    for (const auto& m : parts) {
        total.sum += m.sum;
        total.sum_sq += m.sum_sq;
    }
    MCEstimate est;
    est.samples = n;
    const double nn = static_cast<double>(n);
    est.estimate = total.sum / nn;
    if (n > 1) {
        const double var = std::max(0.0, (total.sum_sq - nn * est.estimate * est.estimate) / (nn - 1.0));
        est.std_error = std::sqrt(var / nn);
    }
    return est;
}

void check_thresholds(std::span<const double> c, double delta) {
    if (c.empty()) throw ValidationError("c", "need at least one threshold");
    for (double ci : c)
        if (!(ci >= delta && ci <= 1.0)) throw ValidationError("c", "thresholds must lie in [delta, 1]");
}

// ---- Gauss-Kronrod 7/15 -----------------------------------------------------

constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.0};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                                       0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

using Integrand = std::function<double(double)>;

double gk_adaptive(const Integrand& f, double a, double b, double tol, int depth) {
    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    double k = kWgk[7] * f(c), g = kWg[3] * f(c);
    for (int i = 0; i < 7; ++i) {
        const double x = h * kXgk[i];
        const double s = f(c - x) + f(c + x);
        k += kWgk[i] * s;
        if (i % 2 == 1) g += kWg[i / 2] * s;
    }
    k *= h;
    g *= h;
    if (std::abs(k - g) <= tol || depth >= 40 || b - a < 1e-14) return k;
    return gk_adaptive(f, a, c, tol / 2, depth + 1) + gk_adaptive(f, c, b, tol / 2, depth + 1);
}

// Log-space measure of {s_i..s_{k-1} in the box : sum exp(s_j) <= r}.
double simplex_box_measure(const Box& box, std::size_t i, double r, double tol) {
    const std::size_t k = box.lo.size();
    const double a = box.lo[i];
    const double b = std::min(box.hi[i], r);
    if (b <= a) return 0.0;
    if (i + 1 == k) return std::log(b / a);

    // The inner measure, as a function of r - t, has kinks where r - t
    // crosses a corner sum of the remaining coordinates.
    std::vector<double> cuts{std::log(a), std::log(b)};
    const std::size_t rest = k - i - 1;
    for (std::size_t mask = 0; mask < (std::size_t{1} << rest); ++mask) {
        double s = 0.0;
        for (std::size_t j = 0; j < rest; ++j) s += (mask >> j & 1) ? box.hi[i + 1 + j] : box.lo[i + 1 + j];
        const double t = r - s;
        if (t > a && t < b) cuts.push_back(std::log(t));
    }
    std::sort(cuts.begin(), cuts.end());
    const Integrand inner = [&](double s) { return simplex_box_measure(box, i + 1, r - std::exp(s), tol); };
    double total = 0.0;
    for (std::size_t j = 0; j + 1 < cuts.size(); ++j)
        if (cuts[j + 1] > cuts[j]) total += gk_adaptive(inner, cuts[j], cuts[j + 1], tol, 0);
    return total;
}

}  // namespace

// ---------------------------------------------------------------------------

Sticks stick_breaking(const UniformSource& next_uniform, double delta) {
    check_delta(delta);
    Sticks s;
    s.residual = break_sticks(next_uniform, delta, s.sticks);
    return s;
}

PDSample sample_pd(RandomStream& rng, double delta) {
    check_delta(delta);
    std::vector<double> buf;
    const double tail = break_sticks([&] { return rng.uniform(); }, delta, buf);
    return finish(std::move(buf), tail);
}

PDSample sample_pd(const UniformSource& next_uniform, double delta) {
    auto s = stick_breaking(next_uniform, delta);
    return finish(std::move(s.sticks), s.residual);
}

// ---------------------------------------------------------------------------

BoxFunction::BoxFunction(std::size_t k, std::vector<Box> boxes) : k_(k), boxes_(std::move(boxes)), alpha_(1.0) {
    if (k_ == 0) throw ValidationError("boxes", "dimension must be at least 1");
    if (boxes_.empty()) throw ValidationError("boxes", "need at least one box");
    for (const auto& b : boxes_) {
        if (b.lo.size() != k_ || b.hi.size() != k_)
            throw ValidationError("boxes", "every box needs " + std::to_string(k_) + " coordinates");
        for (std::size_t i = 0; i < k_; ++i) {
            if (!(b.lo[i] > 0.0 && b.lo[i] < b.hi[i]))
                throw ValidationError("boxes", "each coordinate needs 0 < a < b");
            alpha_ = std::min(alpha_, b.lo[i]);
        }
        if (!std::isfinite(b.weight)) throw ValidationError("boxes", "weights must be finite");
    }
}

BoxFunction BoxFunction::indicator(std::vector<double> lo, std::vector<double> hi, double weight) {
    const std::size_t k = lo.size();
    return BoxFunction(k, {Box{std::move(lo), std::move(hi), weight}});
}

double BoxFunction::operator()(std::span<const double> y) const {
    if (y.size() != k_) throw ValidationError("y", "dimension mismatch");
    double v = 0.0;
    for (const auto& b : boxes_) {
        bool in = true;
        for (std::size_t i = 0; i < k_ && in; ++i) in = y[i] >= b.lo[i] && y[i] <= b.hi[i];
        if (in) v += b.weight;
    }
    return v;
}

BoxFunction BoxFunction::permuted(std::span<const std::size_t> perm) const {
    if (perm.size() != k_) throw ValidationError("perm", "dimension mismatch");
    std::vector<Box> out;
    for (const auto& b : boxes_) {
        Box nb{std::vector<double>(k_), std::vector<double>(k_), b.weight};
        for (std::size_t i = 0; i < k_; ++i) {
            nb.lo[i] = b.lo[perm[i]];
            nb.hi[i] = b.hi[perm[i]];
        }
        out.push_back(std::move(nb));
    }
    return BoxFunction(k_, std::move(out));
}

namespace {

// Ordered tuples of distinct indices with entry j_i in [lo_i, hi_i].
std::uint64_t count_tuples(const Box& box, std::span<const double> rel) {
    const std::size_t k = box.lo.size();
    auto inside = [&](std::size_t i, double v) { return v >= box.lo[i] && v <= box.hi[i]; };
    if (k == 1) {
        std::uint64_t n = 0;
        for (double v : rel) n += inside(0, v);
        return n;
    }
    if (k == 2) {
        std::uint64_t n0 = 0, n1 = 0, both = 0;
        for (double v : rel) {
            const bool a = inside(0, v), b = inside(1, v);
            n0 += a;
            n1 += b;
            both += a && b;
        }
        return n0 * n1 - both;
    }
    std::vector<char> used(rel.size(), 0);
    std::function<std::uint64_t(std::size_t)> dfs = [&](std::size_t i) -> std::uint64_t {
        if (i == k) return 1;
        std::uint64_t n = 0;
        for (std::size_t j = 0; j < rel.size(); ++j) {
            if (used[j] || !inside(i, rel[j])) continue;
            used[j] = 1;
            n += dfs(i + 1);
            used[j] = 0;
        }
        return n;
    };
    return dfs(0);
}

}  // namespace

double distinct_tuple_sum(const BoxFunction& eta, std::span<const double> entries) {
    const double alpha = eta.alpha();
    const std::size_t n_rel = static_cast<std::size_t>(
        std::find_if(entries.begin(), entries.end(), [&](double v) { return v < alpha; }) - entries.begin());
    if (n_rel < eta.dimension()) return 0.0;
    const auto rel = entries.first(n_rel);
    double v = 0.0;
    for (const auto& b : eta.boxes())
        if (b.weight != 0.0) v += b.weight * static_cast<double>(count_tuples(b, rel));
    return v;
}

// ---------------------------------------------------------------------------

bool product_formula_applies(std::span<const Interval> iv) {
    if (iv.empty()) return false;
    double sum_hi = 0.0;
    for (std::size_t i = 0; i < iv.size(); ++i) {
        if (!(iv[i].lo > 0.0 && iv[i].lo <= iv[i].hi && iv[i].hi <= 1.0)) return false;
        sum_hi += iv[i].hi;
        for (std::size_t j = 0; j < i; ++j)
            if (!(iv[i].hi <= iv[j].lo || iv[j].hi <= iv[i].lo)) return false;
    }
    return sum_hi < 1.0;
}

std::optional<double> box_correlation_exact(std::span<const Interval> iv) {
    if (!product_formula_applies(iv)) return std::nullopt;
    double v = 1.0;
    for (const auto& i : iv) v *= std::log(i.hi / i.lo);
    return v;
}

double correlation_integral(const BoxFunction& eta, double tolerance) {
    if (eta.dimension() > 4) throw ValidationError("k", "quadrature supports k <= 4");
    double v = 0.0;
    for (const auto& b : eta.boxes())
        if (b.weight != 0.0) v += b.weight * simplex_box_measure(b, 0, 1.0, tolerance);
    return v;
}

// ---------------------------------------------------------------------------

MCEstimate corr_mc(const BoxFunction& eta, std::uint64_t n_samples, const MCOptions& opts) {
    check_delta(opts.delta);
    return run_mc(n_samples, opts.threads, [&](std::uint64_t i, std::vector<double>& buf) {
        RandomStream rng(opts.seed, i);
        sample_sorted(rng, opts.delta, buf);
        return distinct_tuple_sum(eta, buf);
    });
}

MCEstimate joint_cdf_mc(std::span<const double> c, std::uint64_t n_samples, const MCOptions& opts) {
    check_delta(opts.delta);
    check_thresholds(c, opts.delta);
    return run_mc(n_samples, opts.threads, [&](std::uint64_t i, std::vector<double>& buf) {
        RandomStream rng(opts.seed, i);
        sample_sorted(rng, opts.delta, buf);
        for (std::size_t j = 0; j < c.size(); ++j)
            if ((j < buf.size() ? buf[j] : 0.0) > c[j]) return 0.0;
        return 1.0;
    });
}

MCEstimate joint_cdf_size_biased(std::span<const double> c, std::uint64_t n_samples, const MCOptions& opts) {
    check_delta(opts.delta);
    check_thresholds(c, opts.delta);
    constexpr std::uint64_t kStreamOffset = std::uint64_t{1} << 63;
    return run_mc(n_samples, opts.threads, [&](std::uint64_t i, std::vector<double>& m) {
        RandomStream rng(opts.seed, kStreamOffset | i);
        sample_sorted(rng, opts.delta, m);
        // Every condition "#{elements > c_j} <= j" is piecewise constant in w
        // with jumps at w = c_j and w = 1 - c_j / m_l.
        std::vector<double> cuts{0.0, 1.0};
        for (double cj : c) {
            if (cj < 1.0) cuts.push_back(cj);
            for (double ml : m) {
                if (ml <= cj) break;
                cuts.push_back(1.0 - cj / ml);
            }
        }
        std::sort(cuts.begin(), cuts.end());
        double good = 0.0;
        for (std::size_t s = 0; s + 1 < cuts.size(); ++s) {
            const double w0 = cuts[s], w1 = cuts[s + 1];
            if (w1 <= w0) continue;
            const double w = 0.5 * (w0 + w1);
            bool ok = true;
            for (std::size_t j = 0; j < c.size() && ok; ++j) {
                std::size_t above = w > c[j];
                for (double ml : m) {
                    if ((1.0 - w) * ml <= c[j]) break;
                    ++above;
                }
                ok = above <= j;
            }
            if (ok) good += w1 - w0;
        }
        return good;
    });
}

}  // namespace pdlab
