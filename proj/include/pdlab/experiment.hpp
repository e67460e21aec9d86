#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "pdlab/pdprocess.hpp"
#include "pdlab/sequences.hpp"

namespace pdlab {

using Json = nlohmann::json;  // keys sorted, so dumps are canonical

inline constexpr int kReportSchemaVersion = 1;

enum class ExperimentKind {
    RhoTable,
    PdSample,
    PdCorr,
    SeqCorr,
    JointCdf,
    Tail,
    Lod,
    Repeated,
    SieveSurvivors,
    Mertens,
    Growth,
};

std::string_view kind_name(ExperimentKind kind);
std::optional<ExperimentKind> parse_kind(std::string_view name);

// {"kind":"uniform"}, {"kind":"shifted_primes","shift":a},
// {"kind":"poly","coeffs":[a0,a1,...]} (constant term first) or
// {"kind":"thue_morse"}. The strings "uniform" and "thue_morse" are accepted
// as shorthands on input.
Json spec_to_json(const SequenceSpec& spec);
SequenceSpec spec_from_json(const Json& j);  // ValidationError("spec")

// [{"lo":[...],"hi":[...],"weight":w}, ...]; weight defaults to 1.
Json boxes_to_json(const BoxFunction& eta);
BoxFunction boxes_from_json(const Json& j);  // ValidationError("boxes")

// A validated experiment. `doc` is the normalized document with defaults
// filled in; it is what reports embed and what run() reads. The execution
// and output fields (threads, out, format) are split off, since they do not
// change any result.
struct ExperimentConfig {
    ExperimentKind kind = ExperimentKind::RhoTable;
    Json doc;
    unsigned threads = 1;
    std::optional<std::string> out;
    std::string format = "json";  // "json" or "csv"
};

// Validates every field against the experiment's preconditions and rejects
// fields the experiment does not use. ValidationError names the field.
ExperimentConfig parse_config(const Json& doc);

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
};

std::string to_csv(const Table& t);

struct ExperimentReport {
    // Everything that is a function of the config alone; byte-identical for
    // a fixed config whatever the thread count.
    Json payload;
    double wall_time = 0.0;
    unsigned threads = 1;
    Table table;  // tabular output (rho values, grids); may be empty

    // payload plus a "run" object holding wall_time and threads.
    Json to_json() const;
    // One CSV row of the scalar fields, or the table when there is one.
    std::string to_csv() const;
    // Human-readable summary for a terminal.
    std::string summary() const;
};

ExperimentReport run(const ExperimentConfig& config);

struct SweepResult {
    std::string axis;
    std::vector<ExperimentReport> reports;
    Table trend;  // axis value, estimate, std_error, oracle_value per report

    Json to_json() const;
};

// Runs `tmpl` once per value of the numeric field `axis`. Every config is
// validated before the first run. ValidationError("values") when empty.
SweepResult sweep(const Json& tmpl, const std::string& axis, const Json& values);

}  // namespace pdlab
