#pragma once

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace fieldcomm::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUnexpected = 1;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitNumerical = 3;

[[nodiscard]] const std::vector<std::string>& experiments();

using Cell = std::variant<double, long long, bool, std::string>;

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<Cell>> rows;
};

struct ExperimentResult {
    Table table;
    std::vector<std::string> warnings;
};

/// Scientific notation with 12 significant digits.
[[nodiscard]] std::string format_double(double v);
[[nodiscard]] std::string render_csv(const Table& table);

/// A number, an array of numbers, or {"start", "stop", "step"} with inclusive stop.
[[nodiscard]] std::vector<double> parse_grid(const nlohmann::json& config, const std::string& key);

/// --jobs, then FIELDCOMM_JOBS, then the hardware thread count.
[[nodiscard]] int resolve_jobs(std::optional<int> cli_jobs, const char* env_value);

/// Runs one experiment. Throws ValidationError for bad configuration before
/// doing any computation; numerical failures propagate as NumericalError.
[[nodiscard]] ExperimentResult run_experiment(const std::string& experiment, const nlohmann::json& config,
                                              std::uint64_t seed, int jobs);

struct RunOptions {
    std::string experiment;
    std::filesystem::path config_path;
    std::optional<std::filesystem::path> out;
    std::optional<std::uint64_t> seed;
    std::optional<int> jobs;
};

/// Loads the configuration, runs, and writes the CSV plus a JSON manifest next
/// to it. Both files are written atomically; nothing is left behind on failure.
/// Returns the process exit code.
[[nodiscard]] int run(const RunOptions& options, std::ostream& log);

/// Manifest path for a CSV path: results.csv -> results.manifest.json.
[[nodiscard]] std::filesystem::path manifest_path(const std::filesystem::path& csv);

}  // namespace fieldcomm::cli
