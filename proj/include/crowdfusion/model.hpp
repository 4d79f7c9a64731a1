#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "answers.hpp"
#include "errors.hpp"
#include "rng.hpp"

// Crowd model: W workers answer N binary questions about one of M classes.
// A fraction alpha of the crowd is greedy (answers everything, coin-flip
// accuracy); the rest skip question i with probability p_{w,i} and are correct
// with probability rho_{w,i} when they do answer. p and rho are drawn
// independently per worker and per question from the configured distributions.

namespace crowdfusion {

struct DistributionSpec {
    enum class Kind { Fixed, Uniform };

    Kind kind = Kind::Fixed;
    double a = 0.0; // Fixed: the value. Uniform: lower bound.
    double b = 0.0; // Uniform: upper bound.

    static DistributionSpec fixed(double v) { return {Kind::Fixed, v, v}; }
    static DistributionSpec uniform(double lo, double hi) { return {Kind::Uniform, lo, hi}; }

    double mean() const { return kind == Kind::Fixed ? a : 0.5 * (a + b); }

    double sample(RngStream& rng) const {
        if (kind == Kind::Fixed) return a;
        return a + (b - a) * rng.next_double();
    }
};

struct WorkerProfile {
    std::vector<double> skip_probs;    // one per question
    std::vector<double> reliabilities; // one per question
    bool greedy = false;
};

struct CrowdModel {
    int W = 0;
    int N = 0;
    int M = 0;
    DistributionSpec skip_dist = DistributionSpec::fixed(0.0);
    DistributionSpec reliability_dist = DistributionSpec::fixed(1.0);
    double alpha = 0.0;

    // number of greedy workers; W * alpha rounded half away from zero
    int greedy_count() const { return static_cast<int>(std::floor(W * alpha + 0.5)); }
};

inline int bits_needed(int n_classes) {
    int n = 0;
    while ((1 << n) < n_classes) ++n;
    return n < 1 ? 1 : n;
}

inline void validate_model(const CrowdModel& model) {
    if (model.W < 1) throw ConfigError("W must be at least 1");
    if (model.M < 2) throw ConfigError("M must be at least 2");
    if (model.N < bits_needed(model.M))
        throw ConfigError("N must be at least ceil(log2(M)) = " +
                          std::to_string(bits_needed(model.M)));
    auto check_range = [](const DistributionSpec& d, double lo, double hi, const char* name) {
        if (d.a < lo || d.a > hi || d.b < lo || d.b > hi || (d.kind == DistributionSpec::Kind::Uniform && d.a > d.b))
            throw ConfigError(std::string(name) + " distribution out of range");
    };
    check_range(model.skip_dist, 0.0, 1.0, "skip");
    check_range(model.reliability_dist, 0.0, 1.0, "reliability");
    if (model.alpha < 0.0 || model.alpha > 1.0) throw ConfigError("alpha must be in [0, 1]");
}

// First greedy_count() profiles are greedy (never skip, coin-flip answers);
// the rest draw p and rho independently for every question.
inline std::vector<WorkerProfile> sample_profiles(const CrowdModel& model, RngStream& rng) {
    std::vector<WorkerProfile> profiles(static_cast<std::size_t>(model.W));
    const int n_greedy = model.greedy_count();
    for (int w = 0; w < model.W; ++w) {
        WorkerProfile& prof = profiles[static_cast<std::size_t>(w)];
        prof.skip_probs.resize(static_cast<std::size_t>(model.N));
        prof.reliabilities.resize(static_cast<std::size_t>(model.N));
        if (w < n_greedy) {
            prof.greedy = true;
            for (int i = 0; i < model.N; ++i) {
                prof.skip_probs[static_cast<std::size_t>(i)] = 0.0;
                prof.reliabilities[static_cast<std::size_t>(i)] = 0.5;
            }
        } else {
            for (int i = 0; i < model.N; ++i) {
                prof.skip_probs[static_cast<std::size_t>(i)] = model.skip_dist.sample(rng);
                prof.reliabilities[static_cast<std::size_t>(i)] = model.reliability_dist.sample(rng);
            }
        }
    }
    return profiles;
}

// One answer word per worker. Draw order per (worker, question): skip draw
// first, then the correctness draw if the worker answers. Greedy workers
// consume a single draw per question.
inline std::vector<AnswerWord> generate_answers(const std::vector<WorkerProfile>& profiles,
                                                const TruthWord& truth, RngStream& rng) {
    std::vector<AnswerWord> answers(profiles.size());
    const int n = static_cast<int>(truth.bits.size());
    for (std::size_t w = 0; w < profiles.size(); ++w) {
        const WorkerProfile& prof = profiles[w];
        AnswerWord& word = answers[w];
        word.worker_id = static_cast<int>(w);
        word.symbols.resize(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) {
            const std::size_t ii = static_cast<std::size_t>(i);
            const int true_bit = truth.bits[ii];
            if (prof.greedy) {
                word.symbols[ii] = rng.next_bool() ? AnswerSymbol::One : AnswerSymbol::Zero;
                continue;
            }
            if (rng.next_double() < prof.skip_probs[ii]) {
                word.symbols[ii] = AnswerSymbol::Skip;
            } else if (rng.next_double() < prof.reliabilities[ii]) {
                word.symbols[ii] = true_bit ? AnswerSymbol::One : AnswerSymbol::Zero;
            } else {
                word.symbols[ii] = true_bit ? AnswerSymbol::Zero : AnswerSymbol::One;
            }
        }
    }
    return answers;
}

} // namespace crowdfusion
