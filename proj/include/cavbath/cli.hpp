// cli.hpp — command-line front end (spectrum | evolve | scan-min | oracle)

#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "cavbath/model.hpp"
#include "cavbath/spectrum.hpp"

namespace cavbath::cli {

enum class OutputFormat { Csv, CsvPlusPlotScript };

// Everything a run depends on; identical manifests produce byte-identical
// outputs (no clocks, no randomness anywhere in the pipelines).
struct RunManifest {
    std::string command;
    PhysicalConfig config;
    SecularConvention convention = SecularConvention::Paper;
    std::string regime = "weak";     // evolve/scan-min
    double t_max = -1.0;             // evolve; <0 selects the 50·L/c default
    int steps = 2000;
    double delta_lo = 0.0;           // scan-min
    double delta_hi = 0.0;
    int oracle_modes = 200;          // oracle
    bool cross_check = false;
    std::optional<std::string> output_path;
    OutputFormat format = OutputFormat::Csv;
};

// Exit codes: 0 success, 1 usage/validation, 2 numerical failure.
constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitNumerical = 2;

// Parses argv, resolves the config (flags override the optional key=value
// config file), dispatches, and writes CSV plus summary.  `out` receives
// the summary (and the CSV when no --output is given); `err` receives
// warnings and error messages.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace cavbath::cli
