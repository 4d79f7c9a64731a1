#pragma once

#include <chrono>
#include <cmath>
#include <cstdint>
#include <istream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "analysis.hpp"
#include "answers.hpp"
#include "errors.hpp"
#include "estimation.hpp"
#include "fusion.hpp"
#include "io.hpp"
#include "model.hpp"
#include "rng.hpp"
#include "version.hpp"
#include "weights.hpp"

// Monte Carlo harness. Every trial derives its own random streams from
// (seed, trial, purpose), so success counts are integers that do not depend
// on the thread partition; reports with the same seed are byte-identical.

namespace crowdfusion {

enum class FusionScheme { Uniform, RejectWeighted, ChairVarshney, MvForced };
enum class MuSource { Known, Training, Benchmark };

struct ExperimentConfig {
    CrowdModel model;
    StrategyKind strategy = StrategyKind::Honest;
    FusionScheme scheme = FusionScheme::RejectWeighted;
    MuSource mu_source = MuSource::Known;
    int training_items = 0;
    long long trials = 10000;
    std::uint64_t seed = 1;
    std::string sweep_key; // empty, "p", "rho", "alpha" or "W"
    std::vector<double> sweep_values;
    int threads = 0; // 0 = hardware concurrency
    bool timings = false;
    bool exclude_full_length = true; // greedy handling in the benchmark estimator
};

namespace detail {

inline double parse_double(const std::string& s, const std::string& key) {
    try {
        std::size_t used = 0;
        const double v = std::stod(s, &used);
        if (used != s.size()) throw ConfigError("");
        return v;
    } catch (const std::exception&) {
        throw ConfigError("bad numeric value for '" + key + "': " + s);
    }
}

inline long long parse_int(const std::string& s, const std::string& key) {
    try {
        std::size_t used = 0;
        const long long v = std::stoll(s, &used);
        if (used != s.size()) throw ConfigError("");
        return v;
    } catch (const std::exception&) {
        throw ConfigError("bad integer value for '" + key + "': " + s);
    }
}

inline DistributionSpec parse_dist(const std::string& s, const std::string& key) {
    if (s.rfind("fixed:", 0) == 0) return DistributionSpec::fixed(parse_double(s.substr(6), key));
    if (s.rfind("uniform:", 0) == 0) {
        const std::string body = s.substr(8);
        const std::size_t comma = body.find(',');
        if (comma == std::string::npos)
            throw ConfigError("uniform distribution for '" + key + "' needs two bounds: " + s);
        return DistributionSpec::uniform(parse_double(trim(body.substr(0, comma)), key),
                                         parse_double(trim(body.substr(comma + 1)), key));
    }
    return DistributionSpec::fixed(parse_double(s, key));
}

} // namespace detail

// key = value lines, '#' starts a comment, unknown keys are an error
inline ExperimentConfig parse_config(std::istream& in) {
    ExperimentConfig cfg;
    cfg.model.skip_dist = DistributionSpec::fixed(-1.0);        // sentinel: required
    cfg.model.reliability_dist = DistributionSpec::fixed(-1.0); // sentinel: required
    bool have_w = false, have_n = false, have_m = false;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        const std::string stripped = detail::trim(line);
        if (stripped.empty()) continue;
        const std::size_t eq = stripped.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(line_no) + ": expected key = value");
        const std::string key = detail::trim(stripped.substr(0, eq));
        const std::string val = detail::trim(stripped.substr(eq + 1));
        if (key == "W") { cfg.model.W = static_cast<int>(detail::parse_int(val, key)); have_w = true; }
        else if (key == "N") { cfg.model.N = static_cast<int>(detail::parse_int(val, key)); have_n = true; }
        else if (key == "M") { cfg.model.M = static_cast<int>(detail::parse_int(val, key)); have_m = true; }
        else if (key == "p") cfg.model.skip_dist = detail::parse_dist(val, key);
        else if (key == "rho") cfg.model.reliability_dist = detail::parse_dist(val, key);
        else if (key == "alpha") cfg.model.alpha = detail::parse_double(val, key);
        else if (key == "strategy") {
            if (val == "honest") cfg.strategy = StrategyKind::Honest;
            else if (val == "oblivious") cfg.strategy = StrategyKind::Oblivious;
            else if (val == "expurgation") cfg.strategy = StrategyKind::Expurgation;
            else if (val == "adaptive") cfg.strategy = StrategyKind::Adaptive;
            else throw ConfigError("unknown strategy: " + val);
        } else if (key == "scheme") {
            if (val == "uniform") cfg.scheme = FusionScheme::Uniform;
            else if (val == "reject_weighted") cfg.scheme = FusionScheme::RejectWeighted;
            else if (val == "chair_varshney") cfg.scheme = FusionScheme::ChairVarshney;
            else if (val == "mv_forced") cfg.scheme = FusionScheme::MvForced;
            else throw ConfigError("unknown scheme: " + val);
        } else if (key == "mu_source") {
            if (val == "known") cfg.mu_source = MuSource::Known;
            else if (val == "benchmark") cfg.mu_source = MuSource::Benchmark;
            else if (val.rfind("training:", 0) == 0) {
                cfg.mu_source = MuSource::Training;
                cfg.training_items = static_cast<int>(detail::parse_int(val.substr(9), key));
                if (cfg.training_items < 1) throw ConfigError("training needs at least one item");
            } else throw ConfigError("unknown mu_source: " + val);
        } else if (key == "trials") {
            cfg.trials = detail::parse_int(val, key);
            if (cfg.trials < 1) throw ConfigError("trials must be positive");
        } else if (key == "seed") {
            cfg.seed = static_cast<std::uint64_t>(detail::parse_int(val, key));
        } else if (key == "sweep") {
            const std::size_t colon = val.find(':');
            if (colon == std::string::npos)
                throw ConfigError("sweep needs the form key:v1,v2,...");
            cfg.sweep_key = detail::trim(val.substr(0, colon));
            if (cfg.sweep_key != "p" && cfg.sweep_key != "rho" && cfg.sweep_key != "alpha" &&
                cfg.sweep_key != "W")
                throw ConfigError("sweep key must be one of p, rho, alpha, W");
            std::stringstream body(val.substr(colon + 1));
            std::string tok;
            while (std::getline(body, tok, ','))
                cfg.sweep_values.push_back(detail::parse_double(detail::trim(tok), "sweep"));
            if (cfg.sweep_values.empty()) throw ConfigError("sweep has no values");
        } else if (key == "exclude_full_length") {
            if (val == "true") cfg.exclude_full_length = true;
            else if (val == "false") cfg.exclude_full_length = false;
            else throw ConfigError("exclude_full_length must be true or false");
        } else {
            throw ConfigError("unknown config key: " + key);
        }
    }
    if (!have_w || !have_n) throw ConfigError("config must set W and N");
    if (!have_m) cfg.model.M = 1 << cfg.model.N;
    if (cfg.model.skip_dist.a < 0.0) throw ConfigError("config must set p");
    if (cfg.model.reliability_dist.a < 0.0) throw ConfigError("config must set rho");
    validate_model(cfg.model);
    if (cfg.mu_source == MuSource::Training && cfg.training_items < 1)
        throw ConfigError("mu_source=training needs training:<items>");
    return cfg;
}

inline ExperimentConfig parse_config_path(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open config file: " + path);
    return parse_config(in);
}

struct CellSummary {
    double x = 0.0;          // swept value; NaN when there is no sweep
    std::string sweep_label; // formatted x or "-"
    std::string method;
    long long successes = 0;
    long long trials = 0;
    double pc = 0.0;
    double stderr_pc = 0.0;
    bool has_analytic = false;
    double analytic_pc = 0.0;
    double runtime_ms = 0.0;
    bool adaptive = false;
    StrategyDecision decision; // valid when adaptive or estimated strategies ran
};

struct ExperimentResult {
    std::vector<CellSummary> cells;
    std::vector<std::string> metadata;
};

namespace detail {

struct CellParams {
    CrowdModel model;
    StrategyKind strategy = StrategyKind::Honest; // resolved, never Adaptive
    FusionScheme scheme = FusionScheme::RejectWeighted;
    MuSource mu_source = MuSource::Known;
    int training_items = 0;
    bool exclude_full_length = true;
    double m_for_weights = 0.5; // calibrated or model mean; feeds solve_x
    std::uint64_t seed = 1;
};

// one trial; returns 1 on correct classification
inline int run_trial(const CellParams& cp, long long trial) {
    const CrowdModel& model = cp.model;
    RngStream truth_rng = derive_stream(cp.seed, static_cast<std::uint64_t>(trial), purpose::kTruth);
    RngStream prof_rng = derive_stream(cp.seed, static_cast<std::uint64_t>(trial), purpose::kProfiles);
    RngStream ans_rng = derive_stream(cp.seed, static_cast<std::uint64_t>(trial), purpose::kAnswers);
    RngStream tie_rng = derive_stream(cp.seed, static_cast<std::uint64_t>(trial), purpose::kTies);

    const int truth_class = static_cast<int>(truth_rng.next_below(static_cast<std::uint64_t>(model.M)));
    const TruthWord truth = encode_class(truth_class, model.N);
    const std::vector<WorkerProfile> profiles = sample_profiles(model, prof_rng);
    std::vector<AnswerWord> answers = generate_answers(profiles, truth, ans_rng);

    double mu_used = model.reliability_dist.mean();
    if (cp.mu_source == MuSource::Benchmark) {
        RngStream bench_rng = derive_stream(cp.seed, static_cast<std::uint64_t>(trial), purpose::kBenchmark);
        mu_used = estimate_mu_benchmark(answers, model.N, bench_rng, cp.exclude_full_length).mu_hat;
    } else if (cp.mu_source == MuSource::Training) {
        RngStream gold_rng = derive_stream(cp.seed, static_cast<std::uint64_t>(trial), purpose::kTrainingGold);
        RngStream tprof_rng = derive_stream(cp.seed, static_cast<std::uint64_t>(trial), purpose::kTrainingProfiles);
        RngStream tans_rng = derive_stream(cp.seed, static_cast<std::uint64_t>(trial), purpose::kTrainingAnswers);
        TruthWord gold;
        gold.bits.resize(static_cast<std::size_t>(cp.training_items));
        for (int t = 0; t < cp.training_items; ++t)
            gold.bits[static_cast<std::size_t>(t)] = gold_rng.next_bool() ? 1 : 0;
        CrowdModel tmodel = model;
        tmodel.N = cp.training_items;
        const std::vector<WorkerProfile> tprofiles = sample_profiles(tmodel, tprof_rng);
        const std::vector<AnswerWord> tanswers = generate_answers(tprofiles, gold, tans_rng);
        mu_used = estimate_mu_training(tanswers, gold.bits).mu_hat;
    }
    // weights need mu in (1/2, 1]
    if (cp.mu_source != MuSource::Known) mu_used = std::min(1.0, std::max(0.5 + 1e-6, mu_used));

    FusionResult fused;
    if (cp.strategy == StrategyKind::Honest) {
        switch (cp.scheme) {
        case FusionScheme::Uniform:
            fused = fuse_bitwise(answers, WeightScheme{UniformWeight{}}, model.N, model.M, tie_rng);
            break;
        case FusionScheme::RejectWeighted:
            fused = fuse_bitwise(answers, WeightScheme{RejectWeighted{mu_used}}, model.N, model.M, tie_rng);
            break;
        case FusionScheme::ChairVarshney: {
            std::vector<std::vector<double>> rel(profiles.size());
            for (std::size_t w = 0; w < profiles.size(); ++w) rel[w] = profiles[w].reliabilities;
            fused = chair_varshney_fuse(answers, rel, model.N, model.M, tie_rng);
            break;
        }
        case FusionScheme::MvForced: {
            RngStream forced_rng =
                derive_stream(cp.seed, static_cast<std::uint64_t>(trial), purpose::kForcedVotes);
            for (AnswerWord& word : answers)
                for (AnswerSymbol& s : word.symbols)
                    if (s == AnswerSymbol::Skip)
                        s = forced_rng.next_bool() ? AnswerSymbol::One : AnswerSymbol::Zero;
            fused = fuse_bitwise(answers, WeightScheme{UniformWeight{}}, model.N, model.M, tie_rng);
            break;
        }
        }
    } else {
        const StrategyApplication app =
            apply_strategy(answers, cp.strategy, mu_used, std::max(cp.m_for_weights, 1e-9));
        fused = fuse_bitwise_weighted(app.retained, app.weights, model.N, model.M, tie_rng);
    }
    return fused.class_index == truth_class ? 1 : 0;
}

inline long long run_range_threaded(const CellParams& cp, long long trials, int threads) {
    int n_threads = threads > 0 ? threads : static_cast<int>(std::thread::hardware_concurrency());
    if (n_threads < 1) n_threads = 1;
    if (static_cast<long long>(n_threads) > trials) n_threads = static_cast<int>(trials);
    std::vector<long long> partial(static_cast<std::size_t>(n_threads), 0);
    std::vector<std::thread> pool;
    const long long chunk = trials / n_threads, rem = trials % n_threads;
    long long start = 0;
    for (int t = 0; t < n_threads; ++t) {
        const long long len = chunk + (t < rem ? 1 : 0);
        const long long begin = start, end = start + len;
        start = end;
        pool.emplace_back([&cp, &partial, t, begin, end]() {
            long long s = 0;
            for (long long trial = begin; trial < end; ++trial) s += run_trial(cp, trial);
            partial[static_cast<std::size_t>(t)] = s;
        });
    }
    long long total = 0;
    for (auto& th : pool) th.join();
    for (long long s : partial) total += s;
    return total;
}

// average per-trial estimates over the first few trials of the cell
inline StrategyDecision calibrate_cell(const CellParams& cp, long long trials) {
    const long long batch = std::min<long long>(trials, 100);
    double mu_sum = 0.0, m_sum = 0.0, a_sum = 0.0;
    for (long long trial = 0; trial < batch; ++trial) {
        RngStream truth_rng = derive_stream(cp.seed, static_cast<std::uint64_t>(trial), purpose::kTruth);
        RngStream prof_rng = derive_stream(cp.seed, static_cast<std::uint64_t>(trial), purpose::kProfiles);
        RngStream ans_rng = derive_stream(cp.seed, static_cast<std::uint64_t>(trial), purpose::kAnswers);
        const int truth_class =
            static_cast<int>(truth_rng.next_below(static_cast<std::uint64_t>(cp.model.M)));
        const TruthWord truth = encode_class(truth_class, cp.model.N);
        const std::vector<WorkerProfile> profiles = sample_profiles(cp.model, prof_rng);
        const std::vector<AnswerWord> answers = generate_answers(profiles, truth, ans_rng);
        double mu_hat = cp.model.reliability_dist.mean();
        if (cp.mu_source == MuSource::Benchmark) {
            RngStream bench_rng =
                derive_stream(cp.seed, static_cast<std::uint64_t>(trial), purpose::kBenchmark);
            mu_hat = estimate_mu_benchmark(answers, cp.model.N, bench_rng, cp.exclude_full_length).mu_hat;
        }
        const MAlphaEstimate ma =
            estimate_m_alpha(length_histogram(answers, cp.model.N), cp.model.W, cp.model.N);
        mu_sum += mu_hat;
        m_sum += ma.m_hat;
        a_sum += ma.alpha_hat;
    }
    const double k = static_cast<double>(batch);
    return select_strategy(mu_sum / k, m_sum / k, a_sum / k, cp.model.N);
}

inline bool analytic_available(const CellParams& cp) {
    return cp.strategy == StrategyKind::Honest && cp.model.alpha == 0.0 &&
           cp.mu_source == MuSource::Known &&
           (cp.scheme == FusionScheme::RejectWeighted || cp.scheme == FusionScheme::MvForced);
}

} // namespace detail

// exact forced-vote majority baseline: per-answer success l = mu + m(1/2 - mu)
inline double exact_pc_mv_forced(int W, int N, double mu, double m) {
    detail::check_domain(W, N, mu, m);
    const double l = mu + m * (0.5 - mu);
    double per_bit = 0.0;
    for (int k = W / 2 + 1; k <= W; ++k)
        per_bit += std::exp(log_binomial(W, k) + xlog(k, std::log(l)) + xlog(W - k, std::log1p(-l)));
    if (W % 2 == 0)
        per_bit += 0.5 * std::exp(log_binomial(W, W / 2) + xlog(W / 2, std::log(l)) +
                                  xlog(W - W / 2, std::log1p(-l)));
    return std::pow(per_bit, N);
}

inline std::string method_label(const ExperimentConfig& cfg) {
    switch (cfg.strategy) {
    case StrategyKind::Oblivious: return "oblivious";
    case StrategyKind::Expurgation: return "expurgation";
    case StrategyKind::Adaptive: return "adaptive";
    case StrategyKind::Honest: break;
    }
    switch (cfg.scheme) {
    case FusionScheme::Uniform: return "uniform";
    case FusionScheme::RejectWeighted: return "reject_weighted";
    case FusionScheme::ChairVarshney: return "chair_varshney";
    case FusionScheme::MvForced: return "mv_forced";
    }
    return "unknown";
}

inline ExperimentResult run_monte_carlo(const ExperimentConfig& cfg) {
    validate_model(cfg.model);
    ExperimentResult result;
    const bool swept = !cfg.sweep_key.empty();
    const std::size_t n_cells = swept ? cfg.sweep_values.size() : 1;
    const std::string label = method_label(cfg);
    for (std::size_t ci = 0; ci < n_cells; ++ci) {
        detail::CellParams cp;
        cp.model = cfg.model;
        cp.scheme = cfg.scheme;
        cp.mu_source = cfg.mu_source;
        cp.training_items = cfg.training_items;
        cp.exclude_full_length = cfg.exclude_full_length;
        cp.seed = cfg.seed;
        double x = NAN;
        if (swept) {
            x = cfg.sweep_values[ci];
            if (cfg.sweep_key == "p") cp.model.skip_dist = DistributionSpec::fixed(x);
            else if (cfg.sweep_key == "rho") cp.model.reliability_dist = DistributionSpec::fixed(x);
            else if (cfg.sweep_key == "alpha") cp.model.alpha = x;
            else if (cfg.sweep_key == "W") cp.model.W = static_cast<int>(std::llround(x));
            validate_model(cp.model);
        }
        cp.m_for_weights = cp.model.skip_dist.mean();

        CellSummary cell;
        cell.x = x;
        cell.sweep_label = swept ? format_value(x) : "-";
        cell.method = label;
        cell.trials = cfg.trials;

        cp.strategy = cfg.strategy;
        if (cfg.strategy == StrategyKind::Adaptive) {
            cell.decision = detail::calibrate_cell(cp, cfg.trials);
            cell.adaptive = true;
            cp.strategy = cell.decision.chosen;
            cp.m_for_weights = cell.decision.m_used;
        }

        const auto t0 = std::chrono::steady_clock::now();
        cell.successes = detail::run_range_threaded(cp, cfg.trials, cfg.threads);
        const auto t1 = std::chrono::steady_clock::now();
        cell.runtime_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();

        cell.pc = static_cast<double>(cell.successes) / static_cast<double>(cfg.trials);
        cell.stderr_pc = std::sqrt(cell.pc * (1.0 - cell.pc) / static_cast<double>(cfg.trials));
        if (detail::analytic_available(cp)) {
            try {
                const double mu_bar = cp.model.reliability_dist.mean();
                const double m_bar = cp.model.skip_dist.mean();
                cell.analytic_pc = cp.scheme == FusionScheme::MvForced
                                       ? exact_pc_mv_forced(cp.model.W, cp.model.N, mu_bar, m_bar)
                                       : exact_pc_honest(cp.model.W, cp.model.N, mu_bar, m_bar);
                cell.has_analytic = true;
            } catch (const EnumerationLimitError&) {
                // no closed form at this size; leave the column empty
            }
        }
        result.cells.push_back(std::move(cell));
    }

    result.metadata.push_back(std::string("generator=") + kVersionString);
    result.metadata.push_back("seed=" + std::to_string(cfg.seed));
    result.metadata.push_back("trials=" + std::to_string(cfg.trials));
    result.metadata.push_back("method=" + label);
    if (cfg.strategy == StrategyKind::Adaptive) {
        for (const CellSummary& cell : result.cells) {
            std::string chosen =
                cell.decision.chosen == StrategyKind::Expurgation ? "expurgation" : "oblivious";
            result.metadata.push_back(
                "adaptive cell=" + cell.sweep_label + " chosen=" + chosen +
                " mu_hat=" + format_value(cell.decision.mu_input) +
                " m_hat=" + format_value(cell.decision.m_input) +
                " alpha_hat=" + format_value(cell.decision.alpha_input) +
                " alpha_star=" + format_value(cell.decision.threshold.alpha_star) +
                " calibration=first " + std::to_string(std::min<long long>(cfg.trials, 100)) +
                " trials, estimates averaged once per cell");
        }
    }
    return result;
}

inline Report make_report(const ExperimentResult& result, bool timings) {
    Report report;
    report.metadata = result.metadata;
    for (const CellSummary& cell : result.cells) {
        ReportRow row;
        row.sweep = cell.sweep_label;
        row.method = cell.method;
        row.pc = cell.pc;
        row.stderr_pc = cell.stderr_pc;
        row.has_analytic = cell.has_analytic;
        row.analytic_pc = cell.analytic_pc;
        row.has_runtime = timings;
        row.runtime_ms = cell.runtime_ms;
        report.rows.push_back(std::move(row));
    }
    return report;
}

} // namespace crowdfusion
