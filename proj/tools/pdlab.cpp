// pdlab: run prime-spectrum experiments from JSON configs and flags.
//
//   pdlab tail --spec uniform --x 1e7 --eps 0.1 --seed 42
//   pdlab lod --config lod.json --out lod.json
//   pdlab sweep --config tail.json --axis eps --values 0.05,0.1,0.2 --out tail.json
//
// Exit codes: 0 success, 2 validation error, 3 resource budget, 4 internal.

#include <CLI11.hpp>

#include <cerrno>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <new>
#include <sstream>

#include "pdlab/common.hpp"
#include "pdlab/experiment.hpp"

using pdlab::Json;

namespace {

enum Exit { kOk = 0, kValidation = 2, kResource = 3, kInternal = 4 };

// Flags that map one-to-one onto config fields.
const std::vector<std::pair<std::string, std::string>> kFieldFlags = {
    {"--experiment", "experiment"}, {"--spec", "spec"},
    {"--x", "x"},                   {"--eps", "eps"},
    {"--c", "c"},                   {"--alpha", "alpha"},
    {"--delta0", "delta0"},         {"--z0", "z0"},
    {"--n-samples", "n_samples"},   {"--delta", "delta"},
    {"--u-max", "u_max"},           {"--spacing", "spacing"},
    {"--thresholds", "thresholds"}, {"--boxes", "boxes"},
    {"--guard-band", "guard_band"}, {"--rate", "rate"},
    {"--exhaustive-limit", "exhaustive_limit"},
    {"--bound-limit", "bound_limit"},
};

Json parse_number(const std::string& field, const std::string& s) {
    if (!s.empty() && s.find_first_not_of("0123456789") == std::string::npos) {
        errno = 0;
        char* end = nullptr;
        const unsigned long long v = std::strtoull(s.c_str(), &end, 10);
        if (errno == 0 && *end == '\0') return static_cast<std::uint64_t>(v);
    }
    char* end = nullptr;
    const double d = std::strtod(s.c_str(), &end);
    if (s.empty() || *end != '\0') throw pdlab::ValidationError(field, "not a number: \"" + s + "\"");
    return d;
}

Json parse_list(const std::string& field, const std::string& s) {
    Json arr = Json::array();
    std::stringstream in(s);
    std::string item;
    while (std::getline(in, item, ',')) arr.push_back(parse_number(field, item));
    return arr;
}

Json parse_json(const std::string& field, const std::string& s) {
    try {
        return Json::parse(s);
    } catch (const Json::parse_error& e) {
        throw pdlab::ValidationError(field, std::string("invalid JSON: ") + e.what());
    }
}

// uniform, thue_morse, shifted_primes:A, poly:a0,a1,... or a JSON object.
Json parse_spec(const std::string& s) {
    if (!s.empty() && s.front() == '{') return parse_json("spec", s);
    const auto colon = s.find(':');
    const std::string kind = s.substr(0, colon);
    if (colon == std::string::npos) return kind;
    const std::string rest = s.substr(colon + 1);
    if (kind == "shifted_primes") return {{"kind", kind}, {"shift", parse_number("spec.shift", rest)}};
    if (kind == "poly") return {{"kind", kind}, {"coeffs", parse_list("spec.coeffs", rest)}};
    throw pdlab::ValidationError("spec", "unknown spec \"" + s + "\"");
}

Json field_value(const std::string& field, const std::string& raw) {
    if (field == "experiment") return raw;
    if (field == "spec") return parse_spec(raw);
    if (field == "boxes") return parse_json(field, raw);
    if (field == "thresholds") return parse_list(field, raw);
    return parse_number(field, raw);
}

Json load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw pdlab::ValidationError("config", "cannot open " + path);
    try {
        return Json::parse(in);
    } catch (const Json::parse_error& e) {
        throw pdlab::ValidationError("config", path + ": " + e.what());
    }
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    out << text;
    if (!out) throw pdlab::ResourceError("out", "cannot write " + path);
}

struct Invocation {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<unsigned> threads;
    std::string out;
    std::string format;
    std::map<std::string, std::string> fields;  // config field -> raw flag value
    std::string axis;
    std::string values;
};

void add_common_flags(CLI::App* cmd, Invocation& inv) {
    cmd->add_option("--config", inv.config_path, "experiment config (JSON)");
    cmd->add_option("--seed", inv.seed, "random seed");
    cmd->add_option("--threads", inv.threads, "worker threads (0 = all cores)");
    cmd->add_option("--out", inv.out, "write the report here");
    cmd->add_option("--format", inv.format, "report format")->check(CLI::IsMember({"csv", "json"}));
    for (const auto& [flag, field] : kFieldFlags) {
        const std::string key = field;
        cmd->add_option_function<std::string>(
            flag, [&inv, key](const std::string& v) { inv.fields[key] = v; }, "config field " + field);
    }
}

Json build_doc(const Invocation& inv) {
    Json doc = inv.config_path.empty() ? Json::object() : load_config(inv.config_path);
    if (!doc.is_object()) throw pdlab::ValidationError("config", "must be a JSON object");
    for (const auto& [field, raw] : inv.fields) doc[field] = field_value(field, raw);
    if (inv.seed) doc["seed"] = *inv.seed;
    if (inv.threads) doc["threads"] = *inv.threads;
    if (!inv.out.empty()) doc["out"] = inv.out;
    if (!inv.format.empty()) doc["format"] = inv.format;
    return doc;
}

// The experiments a subcommand may run; the first is the default.
std::vector<std::string> experiments_for(const std::string& cmd, const Json& doc) {
    if (cmd == "rho") return {"rho-table"};
    if (cmd == "pd") return {"pd-sample"};
    if (cmd == "corr") return doc.contains("spec") ? std::vector<std::string>{"seq-corr", "pd-corr"}
                                                   : std::vector<std::string>{"pd-corr", "seq-corr"};
    if (cmd == "cdf") return {"joint-cdf"};
    if (cmd == "sieve") return {"sieve-survivors"};
    return {cmd};
}

void set_experiment(const std::string& cmd, Json& doc) {
    const auto allowed = experiments_for(cmd, doc);
    if (!doc.contains("experiment")) {
        doc["experiment"] = allowed.front();
        return;
    }
    const auto e = doc["experiment"].is_string() ? doc["experiment"].get<std::string>() : std::string();
    if (std::find(allowed.begin(), allowed.end(), e) == allowed.end())
        throw pdlab::ValidationError("experiment", "\"" + e + "\" cannot run under the " + cmd + " subcommand");
}

int run_single(const std::string& cmd, const Invocation& inv) {
    Json doc = build_doc(inv);
    set_experiment(cmd, doc);
    const auto cfg = pdlab::parse_config(doc);
    const auto report = pdlab::run(cfg);
    const std::string machine = cfg.format == "csv" ? report.to_csv() : report.to_json().dump(2) + "\n";
    if (cfg.out) {
        write_file(*cfg.out, machine);
        std::cout << report.summary();
    } else if (!inv.format.empty() || doc.contains("format")) {
        std::cout << machine;
    } else {
        std::cout << report.summary();
    }
    return kOk;
}

int run_sweep(const Invocation& inv) {
    Json doc = build_doc(inv);
    std::string axis = inv.axis;
    Json values;
    if (doc.contains("axis")) {
        if (axis.empty() && doc["axis"].is_string()) axis = doc["axis"].get<std::string>();
        doc.erase("axis");
    }
    if (doc.contains("values")) {
        values = doc["values"];
        doc.erase("values");
    }
    if (!inv.values.empty()) values = parse_list("values", inv.values);
    if (axis.empty()) throw pdlab::ValidationError("axis", "is required (--axis or \"axis\" in the config)");
    if (values.is_null()) throw pdlab::ValidationError("values", "is required (--values or \"values\" in the config)");
    if (!doc.contains("experiment")) throw pdlab::ValidationError("experiment", "is required for a sweep");

    const auto res = pdlab::sweep(doc, axis, values);
    const std::string format = inv.format.empty() ? (doc.contains("format") && doc["format"].is_string()
                                                         ? doc["format"].get<std::string>()
                                                         : std::string("json"))
                                                  : inv.format;
    const std::string trend = pdlab::to_csv(res.trend);
    const std::string out = inv.out.empty() && doc.contains("out") && doc["out"].is_string()
                                ? doc["out"].get<std::string>()
                                : inv.out;
    if (!out.empty()) {
        if (format == "csv") {
            write_file(out, trend);
        } else {
            write_file(out, res.to_json().dump(2) + "\n");
            write_file(out + ".trend.csv", trend);
        }
    }
    std::cout << doc["experiment"].get<std::string>() << " sweep over " << axis << "\n" << trend;
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"pdlab: prime factor spectra versus the Poisson-Dirichlet process"};
    app.require_subcommand(1);
    app.set_help_all_flag("--help-all", "help for every subcommand");

    const std::vector<std::pair<std::string, std::string>> commands = {
        {"rho", "tabulate the Dickman function"},
        {"pd", "draw Poisson-Dirichlet samples"},
        {"corr", "correlation sums (sequence or Poisson-Dirichlet)"},
        {"cdf", "joint CDF of the largest normalized log-primes"},
        {"tail", "frequency of P+(u) >= u^(1-eps)"},
        {"lod", "level-of-distribution error sum"},
        {"repeated", "frequency of repeated prime factors in [x^alpha, x^c]"},
        {"sieve", "sieve survivors versus the product V"},
        {"mertens", "Mertens-type deviation of g"},
        {"growth", "partial sums of g and h"},
        {"sweep", "run an experiment over a grid of one field"},
    };
    Invocation inv;
    std::map<CLI::App*, std::string> names;
    for (const auto& [name, help] : commands) {
        auto* cmd = app.add_subcommand(name, help);
        add_common_flags(cmd, inv);
        if (name == "sweep") {
            cmd->add_option("--axis", inv.axis, "config field to vary");
            cmd->add_option("--values", inv.values, "comma-separated values of the axis");
        }
        names[cmd] = name;
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kValidation;
    }

    const std::string cmd = names.at(app.get_subcommands().front());
    try {
        return cmd == "sweep" ? run_sweep(inv) : run_single(cmd, inv);
    } catch (const pdlab::ValidationError& e) {
        std::cerr << "pdlab: invalid " << e.field() << ": " << e.what() << '\n';
        return kValidation;
    } catch (const pdlab::ResourceError& e) {
        std::cerr << "pdlab: budget " << e.budget() << " exceeded: " << e.what() << '\n';
        return kResource;
    } catch (const std::bad_alloc&) {
        std::cerr << "pdlab: out of memory\n";
        return kResource;
    } catch (const std::exception& e) {
        std::cerr << "pdlab: internal error: " << e.what() << '\n';
        return kInternal;
    }
}
