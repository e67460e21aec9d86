#include "pdlab/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <set>
#include <sstream>

#include "pdlab/arith.hpp"
#include "pdlab/dickman.hpp"
#include "pdlab/factor.hpp"
#include "pdlab/stats.hpp"

namespace pdlab {

namespace {

// E[L_1] for the Poisson-Dirichlet(1) process (Golomb-Dickman constant).
constexpr double kGolombDickman = 0.62432998854355087099;

constexpr std::uint64_t kMaxPdSamples = 100'000'000;
constexpr std::uint64_t kMaxTableRows = 1'000'000;

struct KindInfo {
    ExperimentKind kind;
    std::string_view name;
    std::set<std::string> fields;  // besides the common ones
};

const std::vector<KindInfo>& kinds() {
    static const std::vector<KindInfo> k = {
        {ExperimentKind::RhoTable, "rho-table", {"u_max", "spacing"}},
        {ExperimentKind::PdSample, "pd-sample", {"n_samples", "delta"}},
        {ExperimentKind::PdCorr, "pd-corr", {"boxes", "n_samples", "delta"}},
        {ExperimentKind::SeqCorr, "seq-corr", {"spec", "x", "boxes", "rate", "exhaustive_limit"}},
        {ExperimentKind::JointCdf, "joint-cdf",
         {"thresholds", "spec", "x", "rate", "exhaustive_limit", "n_samples", "delta"}},
        {ExperimentKind::Tail, "tail", {"spec", "x", "eps", "guard_band", "rate", "exhaustive_limit"}},
        {ExperimentKind::Lod, "lod", {"spec", "x", "c"}},
        {ExperimentKind::Repeated, "repeated",
         {"spec", "x", "alpha", "c", "guard_band", "rate", "exhaustive_limit"}},
        {ExperimentKind::SieveSurvivors, "sieve-survivors", {"spec", "x", "eps", "delta0", "z0"}},
        {ExperimentKind::Mertens, "mertens", {"spec", "x"}},
        {ExperimentKind::Growth, "growth", {"spec", "x", "bound_limit"}},
    };
    return k;
}

const std::set<std::string> kCommonFields = {"experiment", "seed", "threads", "out", "format"};

std::string fmt(double v, int digits = 17) {
    if (std::isnan(v)) return "nan";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", digits, v);
    return buf;
}

// ---------------------------------------------------------------------------
// Field readers. Each one names the field in its error.

std::uint64_t as_u64(const Json& v, const std::string& name) {
    if (v.is_number_unsigned()) return v.get<std::uint64_t>();
    if (v.is_number_integer()) {
        if (v.get<std::int64_t>() < 0) throw ValidationError(name, "must be nonnegative");
        return static_cast<std::uint64_t>(v.get<std::int64_t>());
    }
    if (v.is_number_float()) {
        const double d = v.get<double>();
        if (!(d >= 0.0 && d <= 9007199254740992.0) || d != std::floor(d))
            throw ValidationError(name, "must be a nonnegative integer, got " + fmt(d));
        return static_cast<std::uint64_t>(d);
    }
    throw ValidationError(name, "must be a nonnegative integer");
}

double as_double(const Json& v, const std::string& name) {
    if (!v.is_number()) throw ValidationError(name, "must be a number");
    const double d = v.get<double>();
    if (!std::isfinite(d)) throw ValidationError(name, "must be finite");
    return d;
}

class Reader {
public:
    Reader(const Json& in, Json& out) : in_(in), out_(out) {}

    bool has(const std::string& name) const { return in_.contains(name) && !in_[name].is_null(); }

    std::uint64_t u64(const std::string& name, std::optional<std::uint64_t> def = std::nullopt) {
        std::uint64_t v;
        if (has(name))
            v = as_u64(in_[name], name);
        else if (def)
            v = *def;
        else
            throw ValidationError(name, "is required");
        out_[name] = v;
        return v;
    }

    double real(const std::string& name, std::optional<double> def = std::nullopt) {
        double v;
        if (has(name))
            v = as_double(in_[name], name);
        else if (def)
            v = *def;
        else
            throw ValidationError(name, "is required");
        out_[name] = v;
        return v;
    }

    std::optional<double> optional_real(const std::string& name) {
        if (!has(name)) return std::nullopt;
        return real(name);
    }

    SequenceSpec spec(std::optional<SequenceSpec> def = std::nullopt) {
        SequenceSpec s;
        if (has("spec"))
            s = spec_from_json(in_["spec"]);
        else if (def)
            s = *def;
        else
            throw ValidationError("spec", "is required");
        out_["spec"] = spec_to_json(s);
        return s;
    }

    BoxFunction boxes() {
        if (!has("boxes")) throw ValidationError("boxes", "is required");
        auto eta = boxes_from_json(in_["boxes"]);
        out_["boxes"] = boxes_to_json(eta);
        return eta;
    }

    std::vector<double> thresholds() {
        if (!has("thresholds")) throw ValidationError("thresholds", "is required");
        const Json& t = in_["thresholds"];
        std::vector<double> c;
        if (t.is_number()) {
            c.push_back(as_double(t, "thresholds"));
        } else if (t.is_array() && !t.empty()) {
            for (const auto& v : t) c.push_back(as_double(v, "thresholds"));
        } else {
            throw ValidationError("thresholds", "must be a number or a nonempty array of numbers");
        }
        for (double ci : c)
            if (!(ci > 0.0 && ci <= 1.0)) throw ValidationError("thresholds", "every threshold must lie in (0, 1]");
        out_["thresholds"] = c;
        return c;
    }

    // rate and exhaustive_limit, for experiments over a SampleSet.
    void sampling() {
        if (const auto r = optional_real("rate"); r && !(*r > 0.0 && *r <= 1.0))
            throw ValidationError("rate", "must lie in (0, 1]");
        if (u64("exhaustive_limit", SampleOptions{}.exhaustive_limit) == 0)
            throw ValidationError("exhaustive_limit", "must be at least 1");
    }

private:
    const Json& in_;
    Json& out_;
};

void check_x(std::uint64_t x, std::uint64_t lo = 1) {
    if (x < lo) throw ValidationError("x", "must be at least " + std::to_string(lo));
}

void check_delta(double delta) {
    if (!(delta > 0.0 && delta <= 1e-6)) throw ValidationError("delta", "must lie in (0, 1e-6]");
}

void check_samples(std::uint64_t n) {
    if (n == 0 || n > kMaxPdSamples)
        throw ValidationError("n_samples", "must lie in [1, " + std::to_string(kMaxPdSamples) + "]");
}

// ---------------------------------------------------------------------------
// Running

Json num_or_null(std::optional<double> v) {
    if (!v || std::isnan(*v)) return nullptr;
    return *v;
}

struct Outcome {
    std::optional<double> estimate;
    std::optional<double> std_error;
    std::optional<double> oracle;
    std::optional<double> guard_band;
    bool exhaustive = true;
    Json details = Json::object();
    std::vector<std::string> flags;
    Table table;
};

SampleSet make_sample(const Json& d, const SequenceSpec& spec, unsigned threads) {
    SampleOptions o;
    o.threads = threads;
    o.seed = d["seed"].get<std::uint64_t>();
    o.exhaustive_limit = d["exhaustive_limit"].get<std::uint64_t>();
    if (d.contains("rate")) o.rate = d["rate"].get<double>();
    return SampleSet(Sequence(spec), d["x"].get<std::uint64_t>(), o);
}

void describe_sample(Outcome& out, const SampleSet& s) {
    out.exhaustive = s.exhaustive();
    out.details["sample_size"] = s.size();
    out.details["rate"] = num_or_null(s.rate());
}

void put_frequency(Outcome& out, const Frequency& f) {
    out.estimate = f.estimate;
    out.std_error = f.std_error;
    out.details["count"] = f.count;
    out.details["n"] = f.n;
}

// The Poisson-Dirichlet correlation mass of eta: the product formula when
// every box qualifies, else quadrature.
std::optional<double> pd_correlation(const BoxFunction& eta, std::vector<std::string>& flags) {
    double sum = 0.0;
    bool product = true;
    for (const auto& b : eta.boxes()) {
        std::vector<Interval> iv;
        for (std::size_t i = 0; i < b.lo.size(); ++i) iv.push_back({b.lo[i], b.hi[i]});
        const auto v = box_correlation_exact(iv);
        if (!v) {
            product = false;
            break;
        }
        sum += b.weight * *v;
    }
    if (product) return sum;
    flags.emplace_back("product_formula_not_applicable");
    if (eta.dimension() > 4) {
        flags.emplace_back("no_oracle_for_k_above_4");
        return std::nullopt;
    }
    return correlation_integral(eta);
}

std::vector<std::uint64_t> decade_grid(std::uint64_t x) {
    std::vector<std::uint64_t> g;
    for (std::uint64_t v = 100; v < x; v *= 10) g.push_back(v);
    g.push_back(x);
    return g;
}

Outcome run_rho(const Json& d) {
    Outcome out;
    const double u_max = d["u_max"].get<double>(), spacing = d["spacing"].get<double>();
    const RhoTable rho(RhoTable::Options{u_max, 8, 16});
    out.table.columns = {"u", "rho"};
    const auto steps = static_cast<long>(std::floor(u_max / spacing + 1e-9));
    for (long i = 1; i <= steps; ++i) {
        const double u = std::min(u_max, static_cast<double>(i) * spacing);
        out.table.rows.push_back({u, rho(u)});
    }
    out.estimate = rho(u_max);
    out.details["rho_2"] = u_max >= 2.0 ? Json(rho(2.0)) : Json(nullptr);
    return out;
}

Outcome run_pd_sample(const Json& d) {
    Outcome out;
    out.exhaustive = false;
    const auto n = d["n_samples"].get<std::uint64_t>();
    const auto seed = d["seed"].get<std::uint64_t>();
    const double delta = d["delta"].get<double>();
    out.table.columns = {"sample", "rank", "entry"};
    double sum = 0.0, sum_sq = 0.0, max_tail = 0.0;
    for (std::uint64_t i = 0; i < n; ++i) {
        RandomStream rng(seed, i);
        const auto s = sample_pd(rng, delta);
        sum += s[0];
        sum_sq += s[0] * s[0];
        max_tail = std::max(max_tail, s.tail_mass);
        if (out.table.rows.size() + s.entries.size() <= kMaxTableRows)
            for (std::size_t j = 0; j < s.entries.size(); ++j)
                out.table.rows.push_back({static_cast<double>(i), static_cast<double>(j), s.entries[j]});
    }
    const double nn = static_cast<double>(n);
    out.estimate = sum / nn;
    if (n > 1) out.std_error = std::sqrt(std::max(0.0, (sum_sq - nn * *out.estimate * *out.estimate) / (nn - 1)) / nn);
    out.oracle = kGolombDickman;
    out.details["max_tail_mass"] = max_tail;
    if (out.table.rows.size() >= kMaxTableRows) out.flags.emplace_back("table_truncated");
    return out;
}

Outcome run_pd_corr(const Json& d, unsigned threads) {
    Outcome out;
    out.exhaustive = false;
    const auto eta = boxes_from_json(d["boxes"]);
    MCOptions o{d["seed"].get<std::uint64_t>(), threads, d["delta"].get<double>()};
    const auto mc = corr_mc(eta, d["n_samples"].get<std::uint64_t>(), o);
    out.estimate = mc.estimate;
    out.std_error = mc.std_error;
    out.oracle = pd_correlation(eta, out.flags);
    if (out.oracle && mc.std_error > 0) out.details["z_score"] = (mc.estimate - *out.oracle) / mc.std_error;
    return out;
}

Outcome run_seq_corr(const Json& d, unsigned threads) {
    Outcome out;
    const auto spec = spec_from_json(d["spec"]);
    const auto eta = boxes_from_json(d["boxes"]);
    const auto s = make_sample(d, spec, threads);
    describe_sample(out, s);
    const auto f = empirical_corr(s, eta);
    out.estimate = f.estimate;
    out.std_error = f.std_error;
    out.details["n"] = f.n;
    out.oracle = pd_correlation(eta, out.flags);
    return out;
}

Outcome run_joint_cdf(const Json& d, unsigned threads) {
    Outcome out;
    const auto c = d["thresholds"].get<std::vector<double>>();
    if (c.size() == 1 && 1.0 / c[0] <= extended_rho_table().u_max()) out.oracle = cdf_largest(extended_rho_table(), c[0]);
    if (d.contains("spec")) {
        const auto s = make_sample(d, spec_from_json(d["spec"]), threads);
        describe_sample(out, s);
        put_frequency(out, empirical_joint_cdf(s, c));
        return out;
    }
    out.exhaustive = false;
    MCOptions o{d["seed"].get<std::uint64_t>(), threads, d["delta"].get<double>()};
    const auto n = d["n_samples"].get<std::uint64_t>();
    const auto mc = joint_cdf_mc(c, n, o);
    out.estimate = mc.estimate;
    out.std_error = mc.std_error;
    const auto sb = joint_cdf_size_biased(c, n, o);
    out.details["size_biased_estimate"] = sb.estimate;
    out.details["size_biased_std_error"] = sb.std_error;
    return out;
}

Outcome run_tail(const Json& d, unsigned threads) {
    Outcome out;
    const double eps = d["eps"].get<double>();
    const auto s = make_sample(d, spec_from_json(d["spec"]), threads);
    describe_sample(out, s);
    put_frequency(out, tail_frequency(s, eps));
    out.oracle = std::log(1.0 / (1.0 - eps));
    if (d.contains("guard_band")) {
        out.guard_band = d["guard_band"].get<double>();
        out.details["bound"] = *out.guard_band * *out.oracle;
        out.details["within_guard_band"] = *out.estimate <= *out.guard_band * *out.oracle;
    }
    return out;
}

Outcome run_lod(const Json& d, unsigned threads) {
    Outcome out;
    const auto spec = spec_from_json(d["spec"]);
    const auto x = d["x"].get<std::uint64_t>();
    const double c = d["c"].get<double>();
    LodOptions o;
    o.threads = threads;
    const auto r = lod_error_sum(Sequence(spec), x, c, o);
    out.estimate = r.error_sum;
    out.details["max_abs_r"] = r.max_abs_r;
    out.details["argmax_d"] = r.argmax_d;
    out.details["d_max"] = r.d_max;
    out.details["n_total"] = r.n_total;
    if (spec.kind == SequenceSpec::Kind::Uniform) {
        const double bound = std::pow(static_cast<double>(x), c - 1.0);
        out.details["bound"] = bound;
        out.details["within_bound"] = r.error_sum <= bound;
    }
    return out;
}

Outcome run_repeated(const Json& d, unsigned threads) {
    Outcome out;
    const auto spec = spec_from_json(d["spec"]);
    const double alpha = d["alpha"].get<double>(), c = d["c"].get<double>();
    const auto s = make_sample(d, spec, threads);
    describe_sample(out, s);
    put_frequency(out, repeated_factor_frequency(s, alpha, c));
    const GFunction g(spec.g());
    const std::uint64_t lo = ceil_pow(s.x(), alpha), hi = floor_pow(s.x(), c);
    double sum = 0.0;
    if (lo <= hi) for_each_prime(std::max<std::uint64_t>(lo, 2), hi, [&](std::uint64_t p) { sum += g.at_prime_power(p, 2); });
    out.oracle = sum;
    out.guard_band = d["guard_band"].get<double>();
    out.details["bound"] = *out.guard_band * sum;
    out.details["within_guard_band"] = *out.estimate <= *out.guard_band * sum;
    return out;
}

Outcome run_sieve(const Json& d, unsigned threads) {
    Outcome out;
    SurvivorOptions o;
    o.threads = threads;
    const auto r = sieve_survivor_experiment(Sequence(spec_from_json(d["spec"])), d["x"].get<std::uint64_t>(),
                                             d["eps"].get<double>(), d["delta0"].get<double>(),
                                             d["z0"].get<std::uint64_t>(), o);
    out.estimate = std::isnan(r.ratio) ? std::nullopt : std::optional<double>(r.ratio);
    if (!out.estimate) out.flags.emplace_back("v_is_zero");
    out.details["survivors"] = r.survivors;
    out.details["n_total"] = r.n_total;
    out.details["v"] = r.v;
    out.details["density"] = static_cast<double>(r.survivors) / static_cast<double>(r.n_total);
    out.details["window_lo"] = r.window_lo;
    out.details["window_hi"] = r.window_hi;
    out.details["window_primes"] = r.window_primes;
    return out;
}

Outcome run_mertens(const Json& d) {
    Outcome out;
    const GFunction g(spec_from_json(d["spec"]).g());
    out.table.columns = {"x", "deviation"};
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (auto x : decade_grid(d["x"].get<std::uint64_t>())) {
        const double v = mertens_deviation(g, x);
        out.table.rows.push_back({static_cast<double>(x), v});
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    out.estimate = out.table.rows.back()[1];
    out.details["min_deviation"] = lo;
    out.details["max_deviation"] = hi;
    return out;
}

Outcome run_growth(const Json& d) {
    Outcome out;
    const GFunction g(spec_from_json(d["spec"]).g());
    const bool has_h = g.root_counter() != nullptr;
    out.table.columns = has_h ? std::vector<std::string>{"x", "sum_g", "sum_h"} : std::vector<std::string>{"x", "sum_g"};
    for (auto x : decade_grid(d["x"].get<std::uint64_t>())) {
        const auto s = partial_sums_gh(g, x);
        std::vector<double> row{static_cast<double>(x), s.sum_g};
        if (has_h) row.push_back(*s.sum_h);
        out.table.rows.push_back(row);
    }
    out.estimate = out.table.rows.back()[1];
    if (has_h) {
        const auto* roots = g.root_counter();
        const auto e = empirical_bound_constant(*roots, d["bound_limit"].get<std::uint64_t>());
        out.details["bound_constant"] = roots->bound_constant();
        out.details["empirical_c"] = e.c;
        out.details["empirical_c_argmax"] = e.argmax;
        out.details["sum_h"] = out.table.rows.back()[2];
    }
    return out;
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char ch : s) {
        if (ch == '"') q += '"';
        q += ch;
    }
    return q + "\"";
}

std::string csv_value(const Json& v) {
    if (v.is_null()) return "";
    if (v.is_string()) return csv_field(v.get<std::string>());
    if (v.is_number_float()) return fmt(v.get<double>());
    return csv_field(v.dump());
}

}  // namespace

// ---------------------------------------------------------------------------

std::string_view kind_name(ExperimentKind kind) {
    for (const auto& k : kinds())
        if (k.kind == kind) return k.name;
    return "?";
}

std::optional<ExperimentKind> parse_kind(std::string_view name) {
    for (const auto& k : kinds())
        if (k.name == name) return k.kind;
    return std::nullopt;
}

Json spec_to_json(const SequenceSpec& spec) {
    switch (spec.kind) {
        case SequenceSpec::Kind::Uniform: return {{"kind", "uniform"}};
        case SequenceSpec::Kind::ThueMorse: return {{"kind", "thue_morse"}};
        case SequenceSpec::Kind::ShiftedPrimes: return {{"kind", "shifted_primes"}, {"shift", spec.shift}};
        case SequenceSpec::Kind::Poly: {
            const auto c = spec.poly->coeffs();
            return {{"kind", "poly"}, {"coeffs", std::vector<std::int64_t>(c.begin(), c.end())}};
        }
    }
    return nullptr;
}

SequenceSpec spec_from_json(const Json& j) {
    if (j.is_string()) {
        const auto s = j.get<std::string>();
        if (s == "uniform") return SequenceSpec::uniform();
        if (s == "thue_morse") return SequenceSpec::thue_morse();
        throw ValidationError("spec", "unknown shorthand \"" + s + "\"; use an object with a \"kind\"");
    }
    if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string())
        throw ValidationError("spec", "must be an object with a string \"kind\"");
    const auto kind = j["kind"].get<std::string>();
    auto only = [&](std::set<std::string> allowed) {
        allowed.insert("kind");
        for (const auto& [key, _] : j.items())
            if (!allowed.count(key)) throw ValidationError("spec." + key, "not a field of spec kind " + kind);
    };
    if (kind == "uniform") {
        only({});
        return SequenceSpec::uniform();
    }
    if (kind == "thue_morse") {
        only({});
        return SequenceSpec::thue_morse();
    }
    if (kind == "shifted_primes") {
        only({"shift"});
        std::int64_t a = 1;
        if (j.contains("shift")) {
            if (!j["shift"].is_number_integer()) throw ValidationError("spec.shift", "must be an integer");
            a = j["shift"].get<std::int64_t>();
        }
        if (a == 0) throw ValidationError("spec.shift", "must be nonzero");
        if (a < -(std::int64_t{1} << 40) || a > (std::int64_t{1} << 40))
            throw ValidationError("spec.shift", "must have |shift| <= 2^40");
        return SequenceSpec::shifted_primes(a);
    }
    if (kind == "poly") {
        only({"coeffs"});
        if (!j.contains("coeffs") || !j["coeffs"].is_array() || j["coeffs"].empty())
            throw ValidationError("spec.coeffs", "must be a nonempty integer array, constant term first");
        std::vector<std::int64_t> c;
        for (const auto& v : j["coeffs"]) {
            if (!v.is_number_integer()) throw ValidationError("spec.coeffs", "coefficients must be integers");
            c.push_back(v.get<std::int64_t>());
        }
        try {
            return SequenceSpec::polynomial(std::move(c));
        } catch (const ValidationError& e) {
            throw ValidationError("spec.coeffs", e.what());
        }
    }
    throw ValidationError("spec.kind", "unknown kind \"" + kind + "\"");
}

Json boxes_to_json(const BoxFunction& eta) {
    Json out = Json::array();
    for (const auto& b : eta.boxes()) out.push_back({{"lo", b.lo}, {"hi", b.hi}, {"weight", b.weight}});
    return out;
}

BoxFunction boxes_from_json(const Json& j) {
    if (!j.is_array() || j.empty()) throw ValidationError("boxes", "must be a nonempty array of boxes");
    std::vector<Box> boxes;
    for (const auto& b : j) {
        if (!b.is_object() || !b.contains("lo") || !b.contains("hi"))
            throw ValidationError("boxes", "every box needs \"lo\" and \"hi\" arrays");
        Box box;
        try {
            box.lo = b["lo"].get<std::vector<double>>();
            box.hi = b["hi"].get<std::vector<double>>();
            if (b.contains("weight")) box.weight = b["weight"].get<double>();
        } catch (const Json::exception&) {
            throw ValidationError("boxes", "lo and hi must be arrays of numbers, weight a number");
        }
        boxes.push_back(std::move(box));
    }
    const std::size_t k = boxes.front().lo.size();
    return BoxFunction(k, std::move(boxes));
}

ExperimentConfig parse_config(const Json& doc) {
    if (!doc.is_object()) throw ValidationError("config", "must be a JSON object");
    if (!doc.contains("experiment") || !doc["experiment"].is_string())
        throw ValidationError("experiment", "is required (one of rho-table, pd-sample, pd-corr, seq-corr, "
                                            "joint-cdf, tail, lod, repeated, sieve-survivors, mertens, growth)");
    const auto name = doc["experiment"].get<std::string>();
    const auto kind = parse_kind(name);
    if (!kind) throw ValidationError("experiment", "unknown experiment \"" + name + "\"");
    const auto& info = *std::find_if(kinds().begin(), kinds().end(), [&](const KindInfo& k) { return k.kind == *kind; });
    for (const auto& [key, _] : doc.items())
        if (!kCommonFields.count(key) && !info.fields.count(key))
            throw ValidationError(key, "not a field of experiment " + name);

    ExperimentConfig cfg;
    cfg.kind = *kind;
    cfg.doc = Json::object();
    Json& d = cfg.doc;
    d["experiment"] = name;
    Reader r(doc, d);
    r.u64("seed", 0);

    if (r.has("threads")) {
        const auto t = as_u64(doc["threads"], "threads");
        if (t > 1024) throw ValidationError("threads", "must be at most 1024 (0 means all cores)");
        cfg.threads = static_cast<unsigned>(t);
    }
    if (r.has("out")) {
        if (!doc["out"].is_string()) throw ValidationError("out", "must be a path string");
        cfg.out = doc["out"].get<std::string>();
    }
    if (r.has("format")) {
        if (!doc["format"].is_string()) throw ValidationError("format", "must be \"csv\" or \"json\"");
        cfg.format = doc["format"].get<std::string>();
        if (cfg.format != "csv" && cfg.format != "json") throw ValidationError("format", "must be \"csv\" or \"json\"");
    }

    switch (*kind) {
        case ExperimentKind::RhoTable: {
            const double u_max = r.real("u_max", 20.0);
            if (!(u_max >= 1.0 && u_max <= 64.0)) throw ValidationError("u_max", "must lie in [1, 64]");
            const double spacing = r.real("spacing", 0.05);
            if (!(spacing > 0.0) || u_max / spacing > static_cast<double>(kMaxTableRows))
                throw ValidationError("spacing", "must be positive with at most 10^6 rows");
            break;
        }
        case ExperimentKind::PdSample:
            check_samples(r.u64("n_samples", 10));
            check_delta(r.real("delta", kDefaultTruncation));
            break;
        case ExperimentKind::PdCorr:
            r.boxes();
            check_samples(r.u64("n_samples", 100'000));
            check_delta(r.real("delta", kDefaultTruncation));
            break;
        case ExperimentKind::SeqCorr:
            r.spec();
            check_x(r.u64("x"));
            r.boxes();
            r.sampling();
            break;
        case ExperimentKind::JointCdf: {
            const auto c = r.thresholds();
            if (r.has("spec")) {
                for (const char* f : {"n_samples", "delta"})
                    if (r.has(f)) throw ValidationError(f, "only applies to the Poisson-Dirichlet form (no spec)");
                r.spec();
                check_x(r.u64("x"));
                r.sampling();
            } else {
                for (const char* f : {"x", "rate", "exhaustive_limit"})
                    if (r.has(f)) throw ValidationError(f, "only applies together with a spec");
                check_samples(r.u64("n_samples", 100'000));
                const double delta = r.real("delta", kDefaultTruncation);
                check_delta(delta);
                for (double ci : c)
                    if (ci < delta) throw ValidationError("thresholds", "thresholds must be at least delta");
            }
            break;
        }
        case ExperimentKind::Tail: {
            r.spec();
            check_x(r.u64("x"));
            const double eps = r.real("eps");
            if (!(eps > 0.0 && eps <= 0.5)) throw ValidationError("eps", "must lie in (0, 1/2]");
            if (const auto g = r.optional_real("guard_band"); g && !(*g > 0.0))
                throw ValidationError("guard_band", "must be positive");
            r.sampling();
            break;
        }
        case ExperimentKind::Lod: {
            r.spec();
            check_x(r.u64("x"));
            const double c = r.real("c");
            if (!(c > 0.0 && c < 1.0)) throw ValidationError("c", "must lie in (0, 1)");
            break;
        }
        case ExperimentKind::Repeated: {
            r.spec();
            check_x(r.u64("x"));
            const double alpha = r.real("alpha");
            const double c = r.real("c");
            if (!(alpha > 0.0)) throw ValidationError("alpha", "must be positive");
            if (!(c > alpha && c <= 1.0)) throw ValidationError("c", "must satisfy alpha < c <= 1");
            if (!(r.real("guard_band", 2.0) > 0.0)) throw ValidationError("guard_band", "must be positive");
            r.sampling();
            break;
        }
        case ExperimentKind::SieveSurvivors: {
            r.spec();
            check_x(r.u64("x"), 2);
            const double eps = r.real("eps");
            const double delta0 = r.real("delta0");
            if (!(eps > 0.0)) throw ValidationError("eps", "must be positive");
            if (!(delta0 > eps && delta0 <= 1.0)) throw ValidationError("delta0", "must satisfy eps < delta0 <= 1");
            r.u64("z0", 0);
            break;
        }
        case ExperimentKind::Mertens:
            r.spec(SequenceSpec::uniform());
            check_x(r.u64("x"), 2);
            break;
        case ExperimentKind::Growth: {
            r.spec(SequenceSpec::uniform());
            const auto x = r.u64("x");
            check_x(x);
            if (x > 10'000'000) throw ValidationError("x", "partial sums are limited to x <= 10^7");
            if (r.u64("bound_limit", 100'000) < 2) throw ValidationError("bound_limit", "must be at least 2");
            break;
        }
    }
    return cfg;
}

// ---------------------------------------------------------------------------

std::string to_csv(const Table& t) {
    std::string out;
    for (std::size_t i = 0; i < t.columns.size(); ++i) out += (i ? "," : "") + csv_field(t.columns[i]);
    out += '\n';
    for (const auto& row : t.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) out += (i ? "," : "") + fmt(row[i]);
        out += '\n';
    }
    return out;
}

Json ExperimentReport::to_json() const {
    Json j = payload;
    j["run"] = {{"threads", threads}, {"wall_time", wall_time}};
    return j;
}

std::string ExperimentReport::to_csv() const {
    if (!table.columns.empty()) return pdlab::to_csv(table);
    static const char* cols[] = {"experiment", "spec", "x", "estimate", "std_error", "oracle_value", "guard_band",
                                 "exhaustive", "seed"};
    std::string head, row;
    for (const char* c : cols) {
        head += (head.empty() ? "" : ",") + std::string(c);
        row += (row.empty() && c == cols[0] ? "" : ",") + csv_value(payload[c]);
    }
    return head + "\n" + row + "\n";
}

std::string ExperimentReport::summary() const {
    std::ostringstream s;
    auto line = [&](const std::string& key, const Json& v) {
        if (v.is_null()) return;
        s << "  " << key << std::string(key.size() < 22 ? 22 - key.size() : 1, ' ')
          << (v.is_number_float() ? fmt(v.get<double>(), 10) : v.is_string() ? v.get<std::string>() : v.dump()) << '\n';
    };
    s << payload["experiment"].get<std::string>() << '\n';
    if (!payload["spec"].is_null()) line("spec", payload["spec_name"]);
    line("x", payload["x"]);
    line("estimate", payload["estimate"]);
    line("std_error", payload["std_error"]);
    line("oracle_value", payload["oracle_value"]);
    line("guard_band", payload["guard_band"]);
    line("exhaustive", payload["exhaustive"]);
    line("seed", payload["seed"]);
    for (const auto& [k, v] : payload["details"].items()) line(k, v);
    if (!payload["flags"].empty()) line("flags", payload["flags"]);
    line("wall_time", wall_time);
    if (!table.columns.empty()) {
        s << '\n';
        for (const auto& c : table.columns) s << std::string(c.size() < 22 ? 22 - c.size() : 1, ' ') << c;
        s << '\n';
        const std::size_t shown = std::min<std::size_t>(table.rows.size(), 25);
        for (std::size_t i = 0; i < shown; ++i) {
            for (double v : table.rows[i]) {
                const auto f = fmt(v, 12);
                s << std::string(f.size() < 22 ? 22 - f.size() : 1, ' ') << f;
            }
            s << '\n';
        }
        if (shown < table.rows.size()) s << "  ... " << table.rows.size() - shown << " more rows\n";
    }
    return s.str();
}

ExperimentReport run(const ExperimentConfig& config) {
    const auto t0 = std::chrono::steady_clock::now();
    const Json& d = config.doc;
    const unsigned threads = config.threads;
    Outcome out;
    switch (config.kind) {
        case ExperimentKind::RhoTable: out = run_rho(d); break;
        case ExperimentKind::PdSample: out = run_pd_sample(d); break;
        case ExperimentKind::PdCorr: out = run_pd_corr(d, threads); break;
        case ExperimentKind::SeqCorr: out = run_seq_corr(d, threads); break;
        case ExperimentKind::JointCdf: out = run_joint_cdf(d, threads); break;
        case ExperimentKind::Tail: out = run_tail(d, threads); break;
        case ExperimentKind::Lod: out = run_lod(d, threads); break;
        case ExperimentKind::Repeated: out = run_repeated(d, threads); break;
        case ExperimentKind::SieveSurvivors: out = run_sieve(d, threads); break;
        case ExperimentKind::Mertens: out = run_mertens(d); break;
        case ExperimentKind::Growth: out = run_growth(d); break;
    }

    ExperimentReport rep;
    Json& p = rep.payload;
    p["schema_version"] = kReportSchemaVersion;
    p["experiment"] = d["experiment"];
    p["spec"] = d.contains("spec") ? d["spec"] : Json(nullptr);
    p["spec_name"] = d.contains("spec") ? Json(spec_from_json(d["spec"]).name()) : Json(nullptr);
    p["x"] = d.contains("x") ? d["x"] : Json(nullptr);
    Json params = Json::object();
    for (const auto& [k, v] : d.items())
        if (k != "experiment" && k != "spec" && k != "x" && k != "seed") params[k] = v;
    p["parameters"] = params;
    p["seed"] = d["seed"];
    p["estimate"] = num_or_null(out.estimate);
    p["std_error"] = num_or_null(out.std_error);
    p["oracle_value"] = num_or_null(out.oracle);
    p["guard_band"] = num_or_null(out.guard_band);
    p["exhaustive"] = out.exhaustive;
    p["details"] = out.details;
    p["flags"] = out.flags;
    p["config"] = d;
    rep.table = std::move(out.table);
    rep.threads = threads;
    rep.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return rep;
}

Json SweepResult::to_json() const {
    Json j;
    j["axis"] = axis;
    j["reports"] = Json::array();
    for (const auto& r : reports) j["reports"].push_back(r.to_json());
    return j;
}

SweepResult sweep(const Json& tmpl, const std::string& axis, const Json& values) {
    if (!values.is_array() || values.empty()) throw ValidationError("values", "sweep needs a nonempty array of values");
    if (axis.empty() || axis == "experiment" || axis == "spec")
        throw ValidationError("axis", "must name a numeric config field");
    std::vector<ExperimentConfig> configs;
    for (const auto& v : values) {
        if (!v.is_number()) throw ValidationError("values", "sweep values must be numbers");
        Json doc = tmpl;
        doc[axis] = v;
        configs.push_back(parse_config(doc));
    }
    SweepResult res;
    res.axis = axis;
    res.trend.columns = {axis, "estimate", "std_error", "oracle_value"};
    const double nan = std::numeric_limits<double>::quiet_NaN();
    auto val = [&](const Json& j) { return j.is_number() ? j.get<double>() : nan; };
    for (std::size_t i = 0; i < configs.size(); ++i) {
        res.reports.push_back(run(configs[i]));
        const Json& p = res.reports.back().payload;
        res.trend.rows.push_back({values[i].get<double>(), val(p["estimate"]), val(p["std_error"]), val(p["oracle_value"])});
    }
    return res;
}

}  // namespace pdlab
