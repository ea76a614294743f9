#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "watts/estimate.hpp"
#include "watts/identity_lab.hpp"

namespace wlab {

enum class Mode { Eval, VerifyIdentities, PercEnum, PercMc, SleMc };

const char* to_string(Mode m);
Mode mode_from_string(const std::string& s);

// Sentinel for "not set" in integer and real fields.
inline constexpr int kUnset = -1;

struct ExperimentConfig {
    Mode mode = Mode::Eval;
    std::uint64_t n_samples = 10000;
    std::uint64_t seed = 1;
    // 0 selects default_workers(); results do not depend on it.
    int workers = 0;
    std::string output;

    // eval grid and verify-identities grid
    double s_min = 0.02;
    double s_max = 0.98;
    int s_count = 49;
    int identity_points = 50;

    // percolation: explicit domain and gap quad, or half-plane setup when
    // s_target > 0. x4 = kUnset puts x4 at the right corner.
    int width = 5;
    int height = 3;
    bool mirrored = false;
    int x1 = kUnset, x2 = kUnset, x3 = kUnset, x4 = kUnset;
    std::string event = "both";
    int span = 32;
    int wall_multiple = 32;
    double s_target = 0.0;

    // sle: quad q1..q4 (q4 = inf allowed) unless s_target > 0, or the
    // evaluation point for the conditioned mode. dt and eps of 0 pick
    // 1e-4 span^2 and 1e-4 span.
    std::string sle_mode = "both";
    double q1 = -1.0, q2 = 0.0, q3 = 1.0, q4 = kInfinity;
    EvalPoint point;
    double dt = 0.0;
    double eps = 0.0;
    int monitors = 64;
    double kappa = 6.0;

    // pass rule for estimates with a closed-form value:
    // |p_hat - expected| <= abs_tol + z_max * std_error
    double z_max = 4.0;
    double abs_tol = 0.0;

    bool operator==(const ExperimentConfig&) const = default;
};

// key = value lines; '#' starts a comment. Unknown keys, bad values and
// duplicates raise ConfigError naming the field and line.
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::string& path);
// Every key in a fixed order, reals in shortest round-trip form.
std::string serialize_config(const ExperimentConfig& c);

// FNV-1a 64 over the serialisation without output and workers, as 16 hex digits.
std::string config_hash(const ExperimentConfig& c);

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

void write_csv(std::ostream& os, const Table& t);
// Throws SchemaError on ragged rows.
Table read_csv(std::istream& is);
Table read_csv_file(const std::string& path);

// Column layouts.
const std::vector<std::string>& eval_columns();
const std::vector<std::string>& estimate_columns();
const std::vector<std::string>& check_columns();

struct ExperimentOutput {
    Table table;
    std::vector<EstimateResult> estimates;
    bool passed = true;
};

ExperimentOutput run_experiment(const ExperimentConfig& c);

// One row per check of the identity suite over a deterministic grid.
struct CheckRow {
    std::string name;
    double s = 0.0;
    double value = 0.0;
    double tolerance = 0.0;
    bool pass = false;
};

// Evaluation points spread over s in [s_min, s_max] with varying scales.
std::vector<EvalPoint> identity_grid(int count, double s_min = 0.02, double s_max = 0.98);
std::vector<CheckRow> identity_suite(int count, double s_min = 0.02, double s_max = 0.98);

struct ReportOutput {
    Table table;
    // name -> two-column (x, y) series, plus std_error for estimates.
    std::vector<std::pair<std::string, Table>> series;
    bool passed = true;
};

// Merges eval and estimate CSVs: closed-form curves checked for ordering
// and monotonicity, estimates compared by z-score (|z| <= z_max flagged ok).
ReportOutput report(const std::vector<std::string>& csv_paths, double z_max = 4.0);

}  // namespace wlab
