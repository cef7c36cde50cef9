#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ness/landauer.hpp"
#include "ness/lattice.hpp"
#include "ness/thermo.hpp"

namespace ness {

// Experiment orchestration: config ingestion, sweeps over the three legs
// (closed forms, lattice simulation, band-integral oracles), and report
// emission as long-format CSV or json-lines.

enum class ExperimentKind { predict, simulate, fcs, landauer, characters, compare };

std::string to_string(ExperimentKind kind);
ExperimentKind experiment_kind_from_string(const std::string& name);

struct CharacterPoint {
    int level_k = 1;
    double beta = 1.0;
    double mu = 0.0;
    double big_r = 80.0;  // circle circumference over which the Gibbs state lives
    int order = 2400;
};

struct ExperimentConfig {
    ExperimentKind kind = ExperimentKind::predict;
    int schema_version = 1;
    long seed = 0;  // reserved; all computations are deterministic
    int workers = 1;
    std::filesystem::path out_dir;

    std::vector<ThermoPoint> thermo_points;    // predict
    std::vector<ChainSpec> chains;             // simulate / fcs / compare
    std::vector<ReservoirPair> reservoirs;     // landauer
    std::vector<CharacterPoint> character_points;  // characters

    double time_window_lo = 150.0;  // steady-window average for simulate/compare
    double time_window_hi = 300.0;
    int time_samples = 16;
    std::vector<double> t_grid;  // fcs cumulant-rate fit times
    int n_max = 2;

    std::map<std::string, double> tolerances;  // resolved values, all positive

    void validate() const;
};

// Loads the JSON config file, applies the tolerance profile ("default" or
// "strict"), then any per-key overrides from the file itself.
ExperimentConfig load_config(const std::filesystem::path& path,
                             const std::string& tolerance_profile = "default");

struct ReportRow {
    int point_index = 0;
    std::string quantity;
    std::string source;
    double value = 0.0;
    std::string reference_source;  // empty when the row is a pure output
    double reference_value = 0.0;
    double rel_error = 0.0;
    double tolerance = 0.0;
    std::string verdict;  // pass | fail | n/a | error
    std::string note;
};

struct RunReport {
    ExperimentKind kind = ExperimentKind::predict;
    std::string config_hash;
    std::string version;
    double wall_seconds = 0.0;
    std::vector<ReportRow> rows;

    bool all_pass() const;  // no fail/error verdicts
};

// Executes the sweep. A failing grid point is recorded as an error row and
// never aborts sibling points. Row order is deterministic for a given
// config regardless of the worker count.
RunReport run(const ExperimentConfig& config);

// Long-format CSV: provenance as leading '#' comment lines, then a fixed
// header and one observation per row, numbers at 17 significant digits.
void emit_csv(const RunReport& report, const std::filesystem::path& path);

// json-lines: one meta object, then one object per row.
void emit_jsonl(const RunReport& report, const std::filesystem::path& path);

// Reads rows back from a json-lines file (meta line skipped).
std::vector<ReportRow> read_jsonl(const std::filesystem::path& path);

// Default tolerance set for a profile; "strict" tightens every value 10x.
std::map<std::string, double> default_tolerances(const std::string& profile);

std::string format_double(double v);  // 17 significant digits

}  // namespace ness
