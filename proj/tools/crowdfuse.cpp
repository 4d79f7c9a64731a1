// crowdfuse: CLI over the crowd fusion library. Subcommands cover Monte
// Carlo simulation, exact and asymptotic curves, parameter estimation,
// the strategy switching threshold, offline aggregation of recorded answer
// sets, and canned figure reproduction.
//
// Exit codes: 0 success, 2 bad input or configuration, 3 enumeration over cap.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "crowdfusion/crowdfusion.hpp"

namespace cf = crowdfusion;
using nlohmann::json;

namespace {

void print_value(double v) { std::printf("%.12g\n", v); }

json fusion_to_json(const cf::FusionResult& fused) {
    json j;
    j["decided_bits"] = fused.decided_bits;
    j["tie_bits"] = fused.tie_bits;
    j["class_index"] = fused.class_index;
    j["invalid_codeword"] = fused.class_index == cf::kInvalidCodeword;
    return j;
}

json threshold_to_json(const cf::ThresholdResult& th) {
    return json{{"alpha_star", th.alpha_star},
                {"alpha_star_unclamped", th.alpha_star_unclamped},
                {"gamma1", th.gamma1},
                {"gamma2", th.gamma2},
                {"x", th.x}};
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"crowd answer fusion with a reject option: simulation, exact curves, "
                 "estimation and offline aggregation"};
    app.require_subcommand(1);

    // simulate
    auto* sim = app.add_subcommand("simulate", "run a Monte Carlo experiment from a config file");
    std::string sim_config, sim_out;
    int sim_threads = 0;
    bool sim_timings = false;
    sim->add_option("--config", sim_config, "experiment config file")->required();
    sim->add_option("--out", sim_out, "output report CSV")->required();
    sim->add_option("--threads", sim_threads, "worker threads (0 = hardware)");
    sim->add_flag("--timings", sim_timings, "fill the runtime_ms column (breaks byte determinism)");

    // exact
    auto* exact = app.add_subcommand("exact", "closed-form success probability");
    std::string exact_strategy = "honest";
    int exact_w = 0, exact_n = 0;
    double exact_mu = 0.0, exact_m = 0.0, exact_alpha = 0.0, exact_cap = 1e7;
    exact->add_option("--strategy", exact_strategy, "honest, oblivious or expurgation")
        ->check(CLI::IsMember({"honest", "oblivious", "expurgation"}));
    exact->add_option("--W", exact_w, "crowd size")->required();
    exact->add_option("--N", exact_n, "questions per task")->required();
    exact->add_option("--mu", exact_mu, "mean reliability")->required();
    exact->add_option("--m", exact_m, "mean skip probability")->required();
    exact->add_option("--alpha", exact_alpha, "greedy fraction");
    exact->add_option("--cap", exact_cap, "profile enumeration cap");

    // asymptotic
    auto* asym = app.add_subcommand("asymptotic", "Gaussian approximation of the success rate");
    int asym_w = 0, asym_n = 0;
    double asym_mu = 0.0, asym_m = 0.0;
    bool asym_mv = false, asym_printed = false;
    asym->add_option("--W", asym_w, "crowd size")->required();
    asym->add_option("--N", asym_n, "questions per task")->required();
    asym->add_option("--mu", asym_mu, "mean reliability")->required();
    asym->add_option("--m", asym_m, "mean skip probability")->required();
    asym->add_flag("--mv", asym_mv, "forced-vote majority baseline");
    asym->add_flag("--printed-form", asym_printed,
                   "use the published variance expression for the baseline");

    // estimate
    auto* est = app.add_subcommand("estimate", "estimate mu, m and alpha from an answer file");
    std::string est_answers, est_gold;
    std::uint64_t est_seed = 1;
    bool est_include_full = false;
    est->add_option("--answers", est_answers, "answer CSV")->required();
    est->add_option("--gold", est_gold, "gold bits for training-based mu");
    est->add_option("--seed", est_seed, "seed for benchmark tie coins");
    est->add_flag("--include-full-length", est_include_full,
                  "keep full-length words in the benchmark estimate");

    // threshold
    auto* thr = app.add_subcommand("threshold", "strategy switching threshold alpha*");
    double thr_mu = 0.0, thr_m = 0.0;
    int thr_n = 0;
    bool thr_json = false;
    thr->add_option("--mu", thr_mu, "mean reliability")->required();
    thr->add_option("--m", thr_m, "mean skip probability")->required();
    thr->add_option("--N", thr_n, "questions per task")->required();
    thr->add_flag("--json", thr_json, "emit the full threshold record");

    // aggregate
    auto* agg = app.add_subcommand("aggregate", "estimate, pick a strategy and fuse an answer file");
    std::string agg_answers;
    int agg_m = 0;
    std::uint64_t agg_seed = 1;
    bool agg_include_full = false;
    agg->add_option("--answers", agg_answers, "answer CSV")->required();
    agg->add_option("--M", agg_m, "number of classes (default 2^N)");
    agg->add_option("--seed", agg_seed, "seed for tie coins");
    agg->add_flag("--include-full-length", agg_include_full,
                  "keep full-length words in the benchmark estimate");

    // reproduce
    auto* rep = app.add_subcommand("reproduce", "regenerate a canned figure dataset");
    std::string rep_figure, rep_out;
    long long rep_trials = 100000;
    std::uint64_t rep_seed = 1;
    int rep_threads = 0;
    bool rep_timings = false;
    rep->add_option("--figure", rep_figure, "fig2 .. fig8")->required();
    rep->add_option("--out", rep_out, "output directory")->required();
    rep->add_option("--trials", rep_trials, "trials per cell");
    rep->add_option("--seed", rep_seed, "master seed");
    rep->add_option("--threads", rep_threads, "worker threads (0 = hardware)");
    rep->add_flag("--timings", rep_timings, "fill the runtime_ms column");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (sim->parsed()) {
            cf::ExperimentConfig cfg = cf::parse_config_path(sim_config);
            cfg.threads = sim_threads;
            cfg.timings = sim_timings;
            const cf::ExperimentResult res = cf::run_monte_carlo(cfg);
            cf::write_report_file(cf::make_report(res, sim_timings), sim_out);
            std::cerr << "wrote " << sim_out << " (" << res.cells.size() << " cells)\n";
        } else if (exact->parsed()) {
            double v = 0.0;
            if (exact_strategy == "honest")
                v = cf::exact_pc_honest(exact_w, exact_n, exact_mu, exact_m, exact_cap);
            else if (exact_strategy == "oblivious")
                v = cf::exact_pc_oblivious(exact_w, exact_n, exact_mu, exact_m, exact_alpha, exact_cap);
            else
                v = cf::exact_pc_expurgation(exact_w, exact_n, exact_mu, exact_m, exact_alpha, exact_cap);
            print_value(v);
        } else if (asym->parsed()) {
            const double v = asym_mv
                                 ? cf::asymptotic_pc_mv(asym_w, asym_n, asym_mu, asym_m, asym_printed)
                                 : cf::asymptotic_pc(asym_w, asym_n, asym_mu, asym_m);
            print_value(v);
        } else if (est->parsed()) {
            const cf::AnswerFile file = cf::parse_answers_path(est_answers);
            json out;
            out["workers"] = file.answers.size();
            out["questions"] = file.n_bits;
            cf::MuEstimate mu;
            if (!est_gold.empty()) {
                const std::vector<int> gold = cf::parse_gold_path(est_gold);
                if (static_cast<int>(gold.size()) != file.n_bits)
                    throw cf::ConfigError("gold has " + std::to_string(gold.size()) +
                                          " bits for " + std::to_string(file.n_bits) + " questions");
                mu = cf::estimate_mu_training(file.answers, gold);
                out["mu_source"] = "training";
            } else {
                cf::RngStream rng = cf::derive_stream(est_seed, 0, cf::purpose::kBenchmark);
                mu = cf::estimate_mu_benchmark(file.answers, file.n_bits, rng, !est_include_full);
                out["mu_source"] = "benchmark";
            }
            out["mu_hat"] = mu.mu_hat;
            out["excluded_no_definitive"] = mu.excluded_no_definitive;
            out["excluded_full_length"] = mu.excluded_full_length;
            const std::vector<int> hist = cf::length_histogram(file.answers, file.n_bits);
            const cf::MAlphaEstimate ma = cf::estimate_m_alpha(
                hist, static_cast<int>(file.answers.size()), file.n_bits);
            out["length_histogram"] = hist;
            out["m_hat"] = ma.m_hat;
            out["alpha_hat"] = ma.alpha_hat;
            out["log_likelihood"] = ma.log_likelihood;
            std::cout << out.dump(2) << "\n";
        } else if (thr->parsed()) {
            const cf::ThresholdResult th = cf::switching_threshold(thr_mu, thr_m, thr_n);
            if (thr_json)
                std::cout << threshold_to_json(th).dump(2) << "\n";
            else
                print_value(th.alpha_star);
        } else if (agg->parsed()) {
            const cf::AnswerFile file = cf::parse_answers_path(agg_answers);
            cf::OfflineOptions opt;
            opt.n_classes = agg_m;
            opt.seed = agg_seed;
            opt.exclude_full_length = !agg_include_full;
            const cf::OfflineReport r = cf::aggregate_offline(file, opt);
            json out;
            out["workers"] = r.workers;
            out["questions"] = r.questions;
            out["classes"] = r.classes;
            out["mu_hat"] = r.mu.mu_hat;
            out["mu_excluded_no_definitive"] = r.mu.excluded_no_definitive;
            out["mu_excluded_full_length"] = r.mu.excluded_full_length;
            out["m_hat"] = r.m_alpha.m_hat;
            out["alpha_hat"] = r.m_alpha.alpha_hat;
            out["log_likelihood"] = r.m_alpha.log_likelihood;
            out["threshold"] = threshold_to_json(r.decision.threshold);
            out["strategy"] =
                r.decision.chosen == cf::StrategyKind::Expurgation ? "expurgation" : "oblivious";
            out["mu_used"] = r.decision.mu_used;
            out["m_used"] = r.decision.m_used;
            out["retained_words"] = r.retained_words;
            out["fusion"] = fusion_to_json(r.fusion);
            out["low_confidence"] = r.low_confidence;
            out["seed"] = agg_seed;
            std::cout << out.dump(2) << "\n";
        } else if (rep->parsed()) {
            const cf::FigureOutput files =
                cf::reproduce_figure(rep_figure, rep_out, rep_trials, rep_seed, rep_threads, rep_timings);
            for (const std::string& f : files.files) std::cerr << "wrote " << f << "\n";
        }
    } catch (const cf::EnumerationLimitError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const cf::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const cf::ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
