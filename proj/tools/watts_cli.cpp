#include <CLI11.hpp>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>

#include "watts/errors.hpp"
#include "watts/harness.hpp"
#include "watts/sle.hpp"

namespace {

using wlab::ExperimentConfig;

void write_table(const wlab::Table& t, const std::string& path) {
    if (path.empty() || path == "-") {
        wlab::write_csv(std::cout, t);
        return;
    }
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    wlab::write_csv(out, t);
}

// Options shared by every experiment subcommand. Values given on the command
// line override those of --config.
struct Common {
    std::string config_path;
    ExperimentConfig cli;
    CLI::App* app = nullptr;
};

void add_common(CLI::App* app, Common& c) {
    c.app = app;
    app->add_option("--config", c.config_path, "key = value config file");
    app->add_option("--seed", c.cli.seed);
    app->add_option("-n,--n-samples", c.cli.n_samples);
    app->add_option("--workers", c.cli.workers, "worker threads (0: WATTS_WORKERS or hardware)");
    app->add_option("-o,--output", c.cli.output, "CSV output path (default stdout)");
    app->add_option("--z-max", c.cli.z_max);
    app->add_option("--abs-tol", c.cli.abs_tol);
}

void add_grid(CLI::App* app, Common& c) {
    app->add_option("--s-min", c.cli.s_min);
    app->add_option("--s-max", c.cli.s_max);
    app->add_option("--s-count", c.cli.s_count);
    app->add_option("--points", c.cli.identity_points);
}

void add_perc(CLI::App* app, Common& c) {
    app->add_option("--width", c.cli.width);
    app->add_option("--height", c.cli.height);
    app->add_flag("--mirrored", c.cli.mirrored);
    app->add_option("--x1", c.cli.x1);
    app->add_option("--x2", c.cli.x2);
    app->add_option("--x3", c.cli.x3);
    app->add_option("--x4", c.cli.x4, "default: right corner");
    app->add_option("--event", c.cli.event, "both, crossing, tripod, Hb, Vb, HbVb, HyVy, N, Tb, Ty");
    app->add_option("--span", c.cli.span);
    app->add_option("--wall-multiple", c.cli.wall_multiple);
    app->add_option("--s-target", c.cli.s_target, "half-plane setup closest to this cross-ratio");
}

void add_sle(CLI::App* app, Common& c) {
    app->add_option("--sle-mode", c.cli.sle_mode, "both, cardy, tripod, conditioned");
    app->add_option("--q1", c.cli.q1);
    app->add_option("--q2", c.cli.q2);
    app->add_option("--q3", c.cli.q3);
    app->add_option("--q4", c.cli.q4);
    app->add_option("--v3", c.cli.point.v3);
    app->add_option("--w", c.cli.point.W);
    app->add_option("--v1", c.cli.point.v1);
    app->add_option("--v2", c.cli.point.v2);
    app->add_option("--s-target", c.cli.s_target, "quad (0, s, 1, inf)");
    app->add_option("--dt", c.cli.dt);
    app->add_option("--eps", c.cli.eps);
    app->add_option("--monitors", c.cli.monitors);
    app->add_option("--kappa", c.cli.kappa);
}

std::map<std::string, std::string> config_lines(const std::string& text) {
    std::map<std::string, std::string> lines;
    std::istringstream in(text);
    for (std::string line; std::getline(in, line);) lines[line.substr(0, line.find(' '))] = line;
    return lines;
}

// Starts from the config file (or defaults) and applies every option that
// was given explicitly.
ExperimentConfig resolve(const Common& c, wlab::Mode mode) {
    ExperimentConfig base = c.config_path.empty() ? ExperimentConfig{} : wlab::load_config(c.config_path);
    if (!c.config_path.empty() && base.mode != mode)
        throw wlab::ConfigError("mode", std::string("config is for ") + wlab::to_string(base.mode));
    base.mode = mode;
    auto lines = config_lines(wlab::serialize_config(base));
    const auto given = config_lines(wlab::serialize_config(c.cli));
    for (const CLI::Option* opt : c.app->get_options()) {
        if (opt->count() == 0 || opt->get_lnames().empty()) continue;
        std::string key = opt->get_lnames().front();
        std::replace(key.begin(), key.end(), '-', '_');
        if (key == "points") key = "identity_points";
        if (const auto it = given.find(key); it != given.end()) lines[key] = it->second;
    }
    std::string text;
    for (const auto& [key, line] : lines) text += line + "\n";
    return wlab::parse_config(text);
}

int run(const ExperimentConfig& cfg) {
    if (cfg.mode == wlab::Mode::SleMc && cfg.sle_mode != "conditioned" && cfg.sle_mode != "cardy") {
        wlab::BoundaryQuad q = cfg.s_target > 0.0 ? wlab::quad_for_cross_ratio(cfg.s_target)
                                                  : wlab::BoundaryQuad{cfg.q1, cfg.q2, cfg.q3, cfg.q4};
        wlab::SleConfig k = wlab::SleConfig::for_span(wlab::quad_span(q));
        if (cfg.dt > 0.0) k.dt_base = cfg.dt;
        if (cfg.eps > 0.0) k.collision_eps = cfg.eps;
        k.monitor_count = cfg.monitors;
        k.kappa = cfg.kappa;
        const std::uint64_t n = std::min<std::uint64_t>(cfg.n_samples, 1000);
        const double flips = wlab::monitor_flip_fraction(q, k, n, cfg.seed ^ 0x9e3779b97f4a7c15ULL,
                                                         cfg.workers > 0 ? cfg.workers : wlab::default_workers());
        if (flips > wlab::kMonitorFlipWarning)
            std::cerr << "warning: doubling the monitor count flips a_first on " << flips * 100.0
                      << "% of right-hitting traces; the tripod estimate is monitor-limited\n";
    }
    const wlab::ExperimentOutput out = wlab::run_experiment(cfg);
    write_table(out.table, cfg.output);
    if (!out.passed) std::cerr << wlab::to_string(cfg.mode) << ": some checks failed\n";
    return out.passed ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Crossing and tripod probabilities: closed forms, identities, lattice and SLE Monte Carlo"};
    app.require_subcommand(1);

    Common eval_c, ident_c, enum_c, mc_c, sle_c;
    CLI::App* eval = app.add_subcommand("eval", "tabulate cardy, watts, tripod and f on an s grid");
    add_common(eval, eval_c);
    add_grid(eval, eval_c);
    CLI::App* ident = app.add_subcommand("verify-identities", "residuals of the analytic identities");
    add_common(ident, ident_c);
    add_grid(ident, ident_c);
    CLI::App* en = app.add_subcommand("perc-enum", "exact enumeration checks on a small patch");
    add_common(en, enum_c);
    add_perc(en, enum_c);
    CLI::App* mc = app.add_subcommand("perc-mc", "site percolation Monte Carlo");
    add_common(mc, mc_c);
    add_perc(mc, mc_c);
    CLI::App* sle = app.add_subcommand("sle-mc", "SLE(6) Monte Carlo");
    add_common(sle, sle_c);
    add_sle(sle, sle_c);

    std::vector<std::string> inputs;
    std::string series_dir;
    std::string report_out;
    double report_z = 4.0;
    CLI::App* rep = app.add_subcommand("report", "merge result CSVs and check them");
    rep->add_option("inputs", inputs, "eval, estimate or check CSVs")->check(CLI::ExistingFile);
    rep->add_option("--series-dir", series_dir, "write one CSV per plotted series here");
    rep->add_option("-o,--output", report_out);
    rep->add_option("--z-max", report_z);

    CLI11_PARSE(app, argc, argv);

    try {
        if (*rep) {
            const wlab::ReportOutput r = wlab::report(inputs, report_z);
            write_table(r.table, report_out);
            if (!series_dir.empty()) {
                std::filesystem::create_directories(series_dir);
                for (const auto& [name, t] : r.series) write_table(t, series_dir + "/" + name + ".csv");
            }
            return r.passed ? 0 : 1;
        }
        if (*eval) return run(resolve(eval_c, wlab::Mode::Eval));
        if (*ident) return run(resolve(ident_c, wlab::Mode::VerifyIdentities));
        if (*en) return run(resolve(enum_c, wlab::Mode::PercEnum));
        if (*mc) return run(resolve(mc_c, wlab::Mode::PercMc));
        if (*sle) return run(resolve(sle_c, wlab::Mode::SleMc));
    } catch (const wlab::ConfigError& e) {
        std::cerr << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 2;
}
