#pragma once

#include "ldgbem/coupled_system.hpp"
#include "ldgbem/manufactured_errors.hpp"

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace ldgbem::cli {

enum ExitCode : int { ok = 0, failure = 1, usage = 2, solver = 3, invariants = 4 };

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvariantFailure : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct RunConfig {
    Scheme scheme = Scheme::dg_bem;
    std::vector<int> levels{2, 3, 4, 5, 6};
    int refine_factor = 1;
    double c_alpha = 1.0;
    BetaMode beta_mode = BetaMode::normal;
    double nu = 1.0;
    double tolerance = 1e-10;
    std::filesystem::path out_dir = "results";
    int volume_order = 6;
    int boundary_points = 8;
    int data_subdivisions = 1;
    bool check = false;
    bool dump_mesh = false;
    bool zero_data = false;
    bool timings = true;
};

[[nodiscard]] std::string scheme_name(Scheme s);

/// "a:b" or a single level; levels must lie in [1, 6].
[[nodiscard]] std::vector<int> parse_levels(const std::string& text);

/// args excludes the program name. Command-line flags override values from --config FILE
/// (key=value lines with the long flag names as keys); unknown keys are rejected.
/// Returns nullopt after printing help to `help`. Throws UsageError.
[[nodiscard]] std::optional<RunConfig> parse_config(const std::vector<std::string>& args, std::ostream& help);

struct StudyResult {
    EocTable table;     ///< columns empty when fewer than two levels ran
    std::vector<ErrorRow> rows;
    std::filesystem::path csv;
    std::filesystem::path summary;
    std::filesystem::path plot;
    bool invariants_passed = true;
};

/// Runs the levels in order, writing one CSV row per finished level. SolverError propagates
/// with the rows written so far kept on disk; InvariantFailure is thrown after the sweep when
/// --check found a violation.
[[nodiscard]] StudyResult run_study(const RunConfig& config, std::ostream& log);

[[nodiscard]] std::string csv_header();
[[nodiscard]] std::string csv_row(const ErrorRow& row);

/// Full command-line entry point; returns the process exit code.
int run_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace ldgbem::cli
