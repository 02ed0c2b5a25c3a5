#include "cavbath/cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "cavbath/csv.hpp"
#include "cavbath/evolution.hpp"
#include "cavbath/oracle.hpp"

namespace cavbath::cli {

namespace {

std::string fmt(double x) { return format_double(x); }

void apply_config_file(const std::string& path, PhysicalConfig& cfg) {
    std::ifstream f(path);
    if (!f) throw Error("cannot read config file " + path);
    std::string line;
    int lineno = 0;
    while (std::getline(f, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos) continue;
        auto last = line.find_last_not_of(" \t\r");
        line = line.substr(first, last - first + 1);
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw Error("config file " + path + ": line " + std::to_string(lineno) +
                        " is not key=value");
        auto trim = [](std::string s) {
            auto b = s.find_first_not_of(" \t");
            auto e = s.find_last_not_of(" \t");
            return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
        };
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        try {
            if (key == "omega_bar") cfg.omega_bar = std::stod(value);
            else if (key == "g") cfg.g = std::stod(value);
            else if (key == "L") cfg.cavity_L = std::stod(value);
            else if (key == "c") cfg.light_speed_c = std::stod(value);
            else if (key == "modes") cfg.mode_count = std::stoi(value);
            else if (key == "root_tol") cfg.root_tol = std::stod(value);
            else throw Error("config file " + path + ": unknown key '" + key + "'");
        } catch (const std::invalid_argument&) {
            throw Error("config file " + path + ": bad value for '" + key + "'");
        }
    }
}

struct Outputs {
    std::ostream& out;
    std::ostream& err;
};

void emit(const RunManifest& manifest, const CsvTable& table, const std::string& plot_script,
          Outputs io) {
    if (manifest.output_path) {
        write_file(*manifest.output_path, table.to_string());
        io.out << "wrote " << *manifest.output_path << "\n";
        if (manifest.format == OutputFormat::CsvPlusPlotScript) {
            write_file(*manifest.output_path + ".gp", plot_script);
            io.out << "wrote " << *manifest.output_path << ".gp\n";
        }
    } else {
        io.out << table.to_string();
    }
}

std::string plot_script_for(const RunManifest& manifest, const std::string& csv_path,
                            const std::string& ylabel, int ycol) {
    std::ostringstream s;
    s << "# gnuplot script for " << manifest.command << " output\n"
      << "set datafile separator ','\n"
      << "set key autotitle columnhead\n"
      << "set ylabel '" << ylabel << "'\n"
      << "plot '" << csv_path << "' using 1:" << ycol << " with lines\n";
    return s.str();
}

int run_spectrum(const RunManifest& manifest, Outputs io) {
    const PhysicalConfig& cfg = manifest.config;
    Spectrum exact = solve_spectrum(cfg, cfg.mode_count, manifest.convention);
    double dw = mode_spacing(cfg);

    CsvTable table;
    table.header = {"k", "omega_asymptote", "Omega_exact", "Omega_approx", "epsilon_k", "residual"};
    double max_residual = 0.0;
    for (int k = 0; k <= cfg.mode_count; ++k) {
        std::string eps_str, approx_str;
        if (k == 0) {
            approx_str = fmt(lowest_mode_smallL(cfg));
        } else {
            try {
                double eps = epsilon_k(cfg, k);
                eps_str = fmt(eps);
                approx_str = fmt(dw * (k + eps));
            } catch (const ResonantDenominator&) {
                eps_str = "nan";
                approx_str = "nan";
            }
        }
        max_residual = std::max(max_residual, exact.residuals[static_cast<size_t>(k)]);
        table.add_row({std::to_string(k), fmt(k * dw), fmt(exact.roots[static_cast<size_t>(k)]),
                       approx_str, eps_str, fmt(exact.residuals[static_cast<size_t>(k)])});
    }

    std::string csv_name = manifest.output_path ? *manifest.output_path : "spectrum.csv";
    emit(manifest, table, plot_script_for(manifest, csv_name, "Omega_r [rad/s]", 3), io);

    if (manifest.output_path) {
        // transformation weights over the same spectrum, exact vs small-L
        CsvTable weights;
        weights.header = {"r", "Omega_r", "t0r_sq_exact", "t0r_sq_approx"};
        CouplingWeights approx;
        bool have_approx = true;
        try {
            approx = regime_of(cfg) == CouplingRegime::Weak
                         ? weights_weak(cfg, cfg.mode_count)
                         : weights_strong(cfg, cfg.mode_count);
        } catch (const DeltaTooLarge&) {
            have_approx = false;
        }
        for (int r = 0; r <= cfg.mode_count; ++r) {
            double t0 = t0r_exact(exact.roots[static_cast<size_t>(r)], cfg);
            double wa = !have_approx ? std::numeric_limits<double>::quiet_NaN()
                        : r == 0     ? approx.w0
                                     : approx.wk[static_cast<size_t>(r) - 1];
            weights.add_row({std::to_string(r), fmt(exact.roots[static_cast<size_t>(r)]),
                             fmt(t0 * t0), fmt(wa)});
        }
        write_file(*manifest.output_path + ".weights.csv", weights.to_string());
        io.out << "wrote " << *manifest.output_path << ".weights.csv\n";
    }

    ValidityBound bound = smallL_validity_bound(cfg);
    io.out << "spectrum: " << (cfg.mode_count + 1) << " roots, max residual "
           << fmt(max_residual) << "\n"
           << "delta = " << fmt(delta_of(cfg)) << ", L = " << fmt(cfg.cavity_L)
           << " m, small-L bound " << fmt(bound.length_bound) << " m ("
           << (cfg.cavity_L < bound.length_bound ? "inside" : "OUTSIDE") << ")\n";
    return kExitOk;
}

int run_evolve(const RunManifest& manifest, Outputs io) {
    const PhysicalConfig& cfg = manifest.config;
    SeriesRegime regime;
    if (manifest.regime == "exact") regime = SeriesRegime::ExactSeries;
    else if (manifest.regime == "weak") regime = SeriesRegime::WeakApprox;
    else if (manifest.regime == "strong") regime = SeriesRegime::StrongApprox;
    else throw Error("regime must be exact, weak or strong");

    double delta = delta_of(cfg);
    if (regime == SeriesRegime::StrongApprox) {
        double dmax = delta_max_strong().closed_form;
        if (delta > dmax)
            io.err << "warning: delta = " << fmt(delta) << " exceeds delta_max = " << fmt(dmax)
                   << "; the lower bound is negative (unphysical region)\n";
    }

    SurvivalSeries series =
        evolve_series(cfg, regime, manifest.t_max, manifest.steps, manifest.convention);

    CsvTable table;
    table.header = {"t", "probability", "lower_bound"};
    double sampled_min = series.probabilities.empty() ? 0.0 : series.probabilities[0];
    for (size_t i = 0; i < series.times.size(); ++i) {
        sampled_min = std::min(sampled_min, series.probabilities[i]);
        table.add_row({fmt(series.times[i]), fmt(series.probabilities[i]),
                       fmt(series.lower_bound)});
    }

    std::string csv_name = manifest.output_path ? *manifest.output_path : "evolve.csv";
    emit(manifest, table, plot_script_for(manifest, csv_name, "|f00(t)|^2", 2), io);

    io.out << "evolve (" << manifest.regime << "): delta = " << fmt(delta) << ", sampled min "
           << fmt(sampled_min) << ", lower bound Min(delta) = " << fmt(series.lower_bound)
           << ", series slack " << fmt(series.series_slack) << "\n";

    if (manifest.cross_check) {
        // expanded double-sum evaluation is O(K^2); spot-check a few instants
        size_t n_check = std::min<size_t>(series.times.size(), 8);
        double worst = 0.0;
        if (regime == SeriesRegime::ExactSeries) {
            Spectrum spectrum = solve_spectrum(cfg, cfg.mode_count, manifest.convention);
            CouplingWeights weights = weights_exact(spectrum, cfg);
            for (size_t i = 0; i < n_check; ++i) {
                size_t idx = i * (series.times.size() - 1) / std::max<size_t>(n_check - 1, 1);
                double t = series.times[idx];
                worst = std::max(worst, std::abs(survival_probability(t, spectrum, weights) -
                                                 survival_probability_expanded(t, spectrum, weights)));
            }
        } else {
            CosineSeries cs = regime == SeriesRegime::WeakApprox
                                  ? CosineSeries::weak(cfg, cfg.mode_count)
                                  : CosineSeries::strong(cfg, cfg.mode_count);
            for (size_t i = 0; i < n_check; ++i) {
                size_t idx = i * (series.times.size() - 1) / std::max<size_t>(n_check - 1, 1);
                double t = series.times[idx];
                worst = std::max(worst, std::abs(cs.at(t) - cs.at_expanded(t)));
            }
        }
        io.out << "cross-check: max |compact - expanded| = " << fmt(worst) << " over "
               << n_check << " instants\n";
    }
    return kExitOk;
}

int run_scan(const RunManifest& manifest, Outputs io) {
    CouplingRegime regime;
    if (manifest.regime == "weak") regime = CouplingRegime::Weak;
    else if (manifest.regime == "strong") regime = CouplingRegime::Strong;
    else throw Error("scan-min regime must be weak or strong");

    std::vector<ScanRow> rows =
        scan_min(regime, manifest.delta_lo, manifest.delta_hi, manifest.steps, &manifest.config);

    CsvTable table;
    table.header = {"delta", "min_bound", "L_equiv_m"};
    double best = rows[0].min_bound, best_delta = rows[0].delta;
    for (const ScanRow& row : rows) {
        if (row.min_bound < best) { best = row.min_bound; best_delta = row.delta; }
        table.add_row({fmt(row.delta), fmt(row.min_bound), fmt(row.length_equivalent)});
    }

    std::string csv_name = manifest.output_path ? *manifest.output_path : "scan.csv";
    emit(manifest, table, plot_script_for(manifest, csv_name, "Min(delta)", 2), io);

    io.out << "scan-min (" << manifest.regime << "): " << rows.size() << " points on ["
           << fmt(manifest.delta_lo) << ", " << fmt(manifest.delta_hi) << "], grid minimum "
           << fmt(best) << " at delta = " << fmt(best_delta) << "\n";
    if (regime == CouplingRegime::Strong) {
        io.out << "delta_max (closed form) = " << fmt(delta_max_strong().closed_form) << "\n";
    }
    return kExitOk;
}

int run_oracle(const RunManifest& manifest, Outputs io) {
    const PhysicalConfig& cfg = manifest.config;
    int n = manifest.oracle_modes;
    // survival comparison instants: a few cavity transit times
    std::vector<double> t_grid;
    double transit = cfg.cavity_L / cfg.light_speed_c;
    for (int j = 0; j < 16; ++j) t_grid.push_back(j * 2.5 * transit);

    PipelineComparison cmp = compare_pipelines(cfg, n, t_grid);

    CsvTable table;
    table.header = {"r", "Omega_oracle", "Omega_closed_paper", "Omega_closed_derived",
                    "t0r_sq_oracle"};
    for (size_t r = 0; r < cmp.omega_oracle.size(); ++r)
        table.add_row({std::to_string(r), fmt(cmp.omega_oracle[r]), fmt(cmp.omega_paper[r]),
                       fmt(cmp.omega_derived[r]), fmt(cmp.t0r_sq_oracle[r])});

    std::string csv_name = manifest.output_path ? *manifest.output_path : "oracle.csv";
    emit(manifest, table, plot_script_for(manifest, csv_name, "Omega_r [rad/s]", 2), io);

    auto report = [&](const ConventionDeviation& dev, const char* name) {
        io.out << "  convention " << name << ": max |dOmega| = " << fmt(dev.max_freq_dev)
               << " (mode " << dev.argmax_mode << "), max |dweight| = " << fmt(dev.max_weight_dev)
               << ", max |dsurvival| = " << fmt(dev.max_survival_dev) << "\n";
    };
    io.out << "oracle comparison, N = " << n << " bath modes:\n";
    report(cmp.paper, "paper");
    report(cmp.derived, "derived");
    io.out << "  better match: "
           << (cmp.better_match == SecularConvention::Paper ? "paper" : "derived") << "\n"
           << "  unitarity certificate worst |1 - sum| = " << fmt(cmp.worst_unitarity_error)
           << "\n";
    return kExitOk;
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"confined ohmic particle+bath spectra and survival probabilities"};
    app.fallthrough();
    app.require_subcommand(1);

    double omega_bar = 0, g = 0, cavity_l = 0, light_c = 2.99792458e8;
    int modes = 10000;
    std::string config_path, output, convention = "paper";
    auto* o_omega = app.add_option("--omega-bar", omega_bar, "renormalized frequency [rad/s]");
    auto* o_g = app.add_option("--g", g, "coupling strength [rad/s]");
    auto* o_l = app.add_option("--L", cavity_l, "cavity diameter [m]");
    auto* o_c = app.add_option("--c", light_c, "propagation speed [m/s]");
    auto* o_modes = app.add_option("--modes", modes, "bath mode count");
    app.add_option("--config", config_path, "key=value config file (flags override)");
    auto* o_output = app.add_option("--output", output, "CSV output path (plot script alongside)");
    app.add_option("--secular-convention", convention, "secular equation convention")
        ->check(CLI::IsMember({"paper", "derived"}));

    auto* cmd_spectrum = app.add_subcommand("spectrum", "solve the eigenfrequency spectrum");
    auto* cmd_evolve = app.add_subcommand("evolve", "sample the survival probability");
    auto* cmd_scan = app.add_subcommand("scan-min", "scan the lower bound Min(delta)");
    app.add_subcommand("oracle", "finite-N matrix cross-check");

    std::string evolve_regime = "weak";
    double t_max = -1.0;
    int evolve_steps = 2000;
    bool cross_check = false;
    cmd_evolve->add_option("--regime", evolve_regime, "exact | weak | strong")
        ->check(CLI::IsMember({"exact", "weak", "strong"}));
    cmd_evolve->add_option("--t-max", t_max, "time horizon [s] (default 50 L/c)");
    cmd_evolve->add_option("--steps", evolve_steps, "number of samples");
    cmd_evolve->add_flag("--cross-check", cross_check, "verify against the expanded double sum");

    std::string scan_regime = "weak";
    double delta_lo = 0.0, delta_hi = 0.0;
    int scan_steps = 100;
    cmd_scan->add_option("--regime", scan_regime, "weak | strong")
        ->check(CLI::IsMember({"weak", "strong"}));
    cmd_scan->add_option("--delta-lo", delta_lo, "scan start");
    cmd_scan->add_option("--delta-hi", delta_hi, "scan end");
    cmd_scan->add_option("--steps", scan_steps, "grid points");

    try {
        app.parse(std::vector<std::string>(args.rbegin(), args.rend()));
    } catch (const CLI::ParseError& e) {
        if (e.get_name() == "CallForHelp" || e.get_name() == "CallForAllHelp") {
            out << app.help();
            return kExitOk;
        }
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    }

    try {
        PhysicalConfig raw;
        if (!config_path.empty()) apply_config_file(config_path, raw);
        if (o_omega->count()) raw.omega_bar = omega_bar;
        if (o_g->count()) raw.g = g;
        if (o_l->count()) raw.cavity_L = cavity_l;
        if (o_c->count()) raw.light_speed_c = light_c;
        if (o_modes->count()) raw.mode_count = modes;

        std::vector<std::string> warnings;
        RunManifest manifest;
        manifest.config = validate_config(raw, &warnings);
        for (const auto& w : warnings) err << "warning: " << w << "\n";

        manifest.convention =
            convention == "derived" ? SecularConvention::Derived : SecularConvention::Paper;
        if (o_output->count()) {
            manifest.output_path = output;
            manifest.format = OutputFormat::CsvPlusPlotScript;
        } else {
            manifest.format = OutputFormat::Csv;
        }
        manifest.cross_check = cross_check;
        manifest.t_max = t_max;
        manifest.oracle_modes = manifest.config.mode_count;

        Outputs io{out, err};
        if (cmd_spectrum->parsed()) {
            manifest.command = "spectrum";
            return run_spectrum(manifest, io);
        }
        if (cmd_evolve->parsed()) {
            manifest.command = "evolve";
            manifest.regime = evolve_regime;
            manifest.steps = evolve_steps;
            return run_evolve(manifest, io);
        }
        if (cmd_scan->parsed()) {
            manifest.command = "scan-min";
            manifest.regime = scan_regime;
            manifest.steps = scan_steps;
            manifest.delta_lo = delta_lo;
            manifest.delta_hi = delta_hi;
            return run_scan(manifest, io);
        }
        manifest.command = "oracle";
        return run_oracle(manifest, io);
    } catch (const ValidationError& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const BracketFailure& e) {
        err << "error: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const ConvergenceFailure& e) {
        err << "error: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const NonConvergence& e) {
        err << "error: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const PoleProximity& e) {
        err << "error: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const ResonantDenominator& e) {
        err << "error: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const NegativeDiscriminant& e) {
        err << "error: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const DeltaTooLarge& e) {
        err << "error: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    }
}

} // namespace cavbath::cli
