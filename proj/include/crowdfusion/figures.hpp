#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "analysis.hpp"
#include "errors.hpp"
#include "estimation.hpp"
#include "experiment.hpp"
#include "io.hpp"
#include "version.hpp"

// Hard-coded sweep settings behind `reproduce --figure <id>`. Each curve
// lands in its own CSV under the output directory. Settings mirror the
// simulation study this artifact replicates; see README for the map.

namespace crowdfusion {

struct FigureOutput {
    std::vector<std::string> files;
};

namespace detail {

inline std::string run_curve(ExperimentConfig cfg, const std::string& method,
                             const std::string& path, bool timings) {
    ExperimentResult res = run_monte_carlo(cfg);
    for (CellSummary& c : res.cells) c.method = method;
    for (std::string& meta : res.metadata)
        if (meta.rfind("method=", 0) == 0) meta = "method=" + method;
    write_report_file(make_report(res, timings), path);
    return path;
}

inline std::vector<double> arange(double lo, double hi, double step) {
    std::vector<double> v;
    for (int k = 0;; ++k) {
        const double x = lo + k * step;
        if (x > hi + 1e-9) break;
        // snap to 3 decimals so sweep labels stay clean
        v.push_back(std::floor(x * 1000.0 + 0.5) / 1000.0);
    }
    return v;
}

} // namespace detail

inline FigureOutput reproduce_figure(const std::string& id, const std::string& out_dir,
                                     long long trials, std::uint64_t seed, int threads = 0,
                                     bool timings = false) {
    namespace fs = std::filesystem;
    fs::create_directories(out_dir);
    auto out = [&](const std::string& name) { return (fs::path(out_dir) / name).string(); };

    FigureOutput result;
    ExperimentConfig base;
    base.trials = trials;
    base.seed = seed;
    base.threads = threads;

    if (id == "fig2" || id == "fig3") {
        base.model.W = 20;
        base.model.N = 3;
        base.model.M = 8;
        if (id == "fig2") {
            base.model.reliability_dist = DistributionSpec::fixed(0.8);
            base.sweep_key = "p";
            base.sweep_values = detail::arange(0.1, 1.0, 0.1);
            base.model.skip_dist = DistributionSpec::fixed(0.5); // overridden by the sweep
        } else {
            base.model.skip_dist = DistributionSpec::fixed(0.5);
            base.sweep_key = "rho";
            base.sweep_values = detail::arange(0.5, 1.0, 0.05);
            base.model.reliability_dist = DistributionSpec::fixed(0.8); // overridden by the sweep
        }
        ExperimentConfig proposed = base;
        proposed.scheme = FusionScheme::RejectWeighted;
        result.files.push_back(
            detail::run_curve(proposed, "proposed", out(id + "_proposed.csv"), timings));
        ExperimentConfig mv = base;
        mv.scheme = FusionScheme::MvForced;
        result.files.push_back(detail::run_curve(mv, "mv", out(id + "_mv.csv"), timings));
        return result;
    }

    if (id == "fig4") {
        base.model.N = 3;
        base.model.M = 8;
        base.model.W = 20;
        base.model.skip_dist = DistributionSpec::uniform(0.0, 1.0);
        base.model.reliability_dist = DistributionSpec::uniform(0.6, 1.0);
        base.sweep_key = "W";
        base.sweep_values = {10, 20, 40, 60, 80, 100, 140, 200};
        ExperimentConfig proposed = base;
        proposed.scheme = FusionScheme::RejectWeighted;
        result.files.push_back(
            detail::run_curve(proposed, "proposed", out("fig4_proposed.csv"), timings));
        ExperimentConfig mv = base;
        mv.scheme = FusionScheme::MvForced;
        result.files.push_back(detail::run_curve(mv, "mv", out("fig4_mv.csv"), timings));
        // closed-form companions at the distribution means
        const double mu_bar = 0.8, m_bar = 0.5;
        Report asym, asym_mv;
        asym.metadata = {std::string("generator=") + kVersionString, "method=asymptotic"};
        asym_mv.metadata = {std::string("generator=") + kVersionString, "method=mv_asymptotic"};
        for (double wv : base.sweep_values) {
            const int W = static_cast<int>(wv);
            ReportRow row;
            row.sweep = format_value(wv);
            row.method = "asymptotic";
            row.pc = asymptotic_pc(W, base.model.N, mu_bar, m_bar);
            row.has_analytic = true;
            row.analytic_pc = row.pc;
            asym.rows.push_back(row);
            row.method = "mv_asymptotic";
            row.pc = asymptotic_pc_mv(W, base.model.N, mu_bar, m_bar);
            row.analytic_pc = row.pc;
            asym_mv.rows.push_back(row);
        }
        write_report_file(asym, out("fig4_asymptotic.csv"));
        write_report_file(asym_mv, out("fig4_mv_asymptotic.csv"));
        result.files.push_back(out("fig4_asymptotic.csv"));
        result.files.push_back(out("fig4_mv_asymptotic.csv"));
        return result;
    }

    if (id == "fig5" || id == "fig8") {
        base.model.W = 15;
        base.model.N = 3;
        base.model.M = 8;
        base.model.skip_dist = DistributionSpec::uniform(0.0, 1.0);
        base.model.reliability_dist = DistributionSpec::uniform(0.5, 1.0);
        base.mu_source = MuSource::Benchmark;
        base.sweep_key = "alpha";
        base.sweep_values = detail::arange(0.0, 1.0, 0.05);
        ExperimentConfig obl = base;
        obl.strategy = StrategyKind::Oblivious;
        result.files.push_back(
            detail::run_curve(obl, "oblivious", out(id + "_oblivious.csv"), timings));
        ExperimentConfig expu = base;
        expu.strategy = StrategyKind::Expurgation;
        result.files.push_back(
            detail::run_curve(expu, "expurgation", out(id + "_expurgation.csv"), timings));
        // switching point at the distribution means
        const ThresholdResult th = switching_threshold(0.75, 0.5, base.model.N);
        Report marker;
        marker.metadata = {std::string("generator=") + kVersionString, "method=alpha_star",
                           "inputs mu=0.75 m=0.5 N=3"};
        ReportRow row;
        row.sweep = format_value(th.alpha_star);
        row.method = "alpha_star";
        row.pc = th.alpha_star;
        marker.rows.push_back(row);
        write_report_file(marker, out(id + "_threshold.csv"));
        result.files.push_back(out(id + "_threshold.csv"));
        return result;
    }

    if (id == "fig6") {
        Report surface;
        surface.metadata = {std::string("generator=") + kVersionString,
                            "switching threshold alpha_star over (mu, m), N=3",
                            "columns: sweep=mu, method=m, pc=alpha_star"};
        for (double m : detail::arange(0.1, 0.9, 0.1)) {
            for (double mu : detail::arange(0.55, 0.95, 0.05)) {
                const ThresholdResult th = switching_threshold(mu, m, 3);
                ReportRow row;
                row.sweep = format_value(mu);
                row.method = "m=" + format_value(m);
                row.pc = th.alpha_star;
                surface.rows.push_back(row);
            }
        }
        write_report_file(surface, out("fig6_threshold_surface.csv"));
        result.files.push_back(out("fig6_threshold_surface.csv"));
        return result;
    }

    if (id == "fig7") {
        const std::vector<int> t_values = {1, 2, 3, 5, 8, 12, 20, 30};
        for (int N : {3, 6, 10}) {
            ExperimentConfig cfg = base;
            cfg.model.W = 20;
            cfg.model.N = N;
            cfg.model.M = 1 << N;
            cfg.model.skip_dist = DistributionSpec::uniform(0.0, 1.0);
            cfg.model.reliability_dist = DistributionSpec::uniform(0.6, 1.0);
            cfg.scheme = FusionScheme::RejectWeighted;

            Report training;
            training.metadata = {std::string("generator=") + kVersionString,
                                 "method=training, sweep=training items, N=" + std::to_string(N),
                                 "seed=" + std::to_string(seed),
                                 "trials=" + std::to_string(trials)};
            for (int T : t_values) {
                ExperimentConfig cell = cfg;
                cell.mu_source = MuSource::Training;
                cell.training_items = T;
                ExperimentResult res = run_monte_carlo(cell);
                ReportRow row;
                row.sweep = std::to_string(T);
                row.method = "training";
                row.pc = res.cells[0].pc;
                row.stderr_pc = res.cells[0].stderr_pc;
                row.has_runtime = timings;
                row.runtime_ms = res.cells[0].runtime_ms;
                training.rows.push_back(row);
            }
            const std::string tpath = out("fig7_training_N" + std::to_string(N) + ".csv");
            write_report_file(training, tpath);
            result.files.push_back(tpath);

            ExperimentConfig bench = cfg;
            bench.mu_source = MuSource::Benchmark;
            const std::string bpath = out("fig7_benchmark_N" + std::to_string(N) + ".csv");
            result.files.push_back(detail::run_curve(bench, "benchmark", bpath, timings));
        }
        return result;
    }

    throw ConfigError("unknown figure id: " + id + " (expected fig2..fig8)");
}

} // namespace crowdfusion
