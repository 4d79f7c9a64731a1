#pragma once

#include <string>
#include <vector>

#include "answers.hpp"
#include "estimation.hpp"
#include "fusion.hpp"
#include "io.hpp"
#include "model.hpp"
#include "rng.hpp"

// Offline aggregation of a recorded answer set: estimate (mu, m, alpha) from
// the answers alone, pick a strategy against the switching threshold, fuse,
// and decode. No ground truth involved.

namespace crowdfusion {

struct OfflineOptions {
    int n_classes = 0; // 0 = 2^N
    std::uint64_t seed = 1;
    bool exclude_full_length = true;
};

struct OfflineReport {
    int workers = 0;
    int questions = 0;
    int classes = 0;
    MuEstimate mu;
    MAlphaEstimate m_alpha;
    StrategyDecision decision;
    int retained_words = 0;
    FusionResult fusion;
    bool low_confidence = false; // nothing definitive reached the vote
};

inline OfflineReport aggregate_offline(const AnswerFile& file, const OfflineOptions& opt = {}) {
    OfflineReport rep;
    rep.workers = static_cast<int>(file.answers.size());
    rep.questions = file.n_bits;
    rep.classes = opt.n_classes > 0 ? opt.n_classes : (1 << file.n_bits);
    if (file.n_bits < bits_needed(rep.classes))
        throw ConfigError("M = " + std::to_string(rep.classes) + " does not fit in " +
                          std::to_string(file.n_bits) + " questions");

    RngStream bench_rng = derive_stream(opt.seed, 0, purpose::kBenchmark);
    rep.mu = estimate_mu_benchmark(file.answers, file.n_bits, bench_rng, opt.exclude_full_length);
    rep.m_alpha = estimate_m_alpha(length_histogram(file.answers, file.n_bits), rep.workers,
                                   file.n_bits);
    rep.decision =
        select_strategy(rep.mu.mu_hat, rep.m_alpha.m_hat, rep.m_alpha.alpha_hat, file.n_bits);

    const StrategyApplication app = apply_strategy(file.answers, rep.decision.chosen,
                                                   rep.decision.mu_used, rep.decision.m_used);
    rep.retained_words = static_cast<int>(app.retained.size());
    RngStream tie_rng = derive_stream(opt.seed, 0, purpose::kTies);
    rep.fusion =
        fuse_bitwise_weighted(app.retained, app.weights, file.n_bits, rep.classes, tie_rng);
    rep.low_confidence = static_cast<int>(rep.fusion.tie_bits.size()) == file.n_bits;
    return rep;
}

} // namespace crowdfusion
