#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "answers.hpp"
#include "errors.hpp"
#include "model.hpp"
#include "rng.hpp"
#include "weights.hpp"

// Vote fusion. Bitwise: each question is decided by the sign of the weighted
// vote margin; exact ties (up to relative tolerance) are broken by a seeded
// coin and recorded. Classwise: each candidate class scores the total weight
// of words consistent with it on every definitive position.

namespace crowdfusion {

constexpr double kTieRelTol = 1e-9;

// margin comparison with relative tolerance; sums are nonnegative
inline bool sums_tie(double s1, double s0) {
    const double scale = std::max(s1, s0);
    if (scale == 0.0) return true;
    return std::abs(s1 - s0) <= kTieRelTol * scale;
}

struct FusionResult {
    std::vector<int> decided_bits;
    std::vector<int> tie_bits; // question indexes decided by coin
    int class_index = kInvalidCodeword;
};

inline FusionResult fuse_bitwise_weighted(const std::vector<AnswerWord>& answers,
                                          const std::vector<double>& weights, int n_bits,
                                          int n_classes, RngStream& rng) {
    FusionResult res;
    res.decided_bits.resize(static_cast<std::size_t>(n_bits));
    for (int i = 0; i < n_bits; ++i) {
        double s1 = 0.0, s0 = 0.0;
        for (std::size_t w = 0; w < answers.size(); ++w) {
            const AnswerSymbol s = answers[w].symbols[static_cast<std::size_t>(i)];
            if (s == AnswerSymbol::One)
                s1 += weights[w];
            else if (s == AnswerSymbol::Zero)
                s0 += weights[w];
        }
        int bit;
        if (sums_tie(s1, s0)) {
            bit = rng.next_bool() ? 1 : 0;
            res.tie_bits.push_back(i);
        } else {
            bit = s1 > s0 ? 1 : 0;
        }
        res.decided_bits[static_cast<std::size_t>(i)] = bit;
    }
    res.class_index = decode_class(res.decided_bits, n_classes);
    return res;
}

inline FusionResult fuse_bitwise(const std::vector<AnswerWord>& answers, const WeightScheme& scheme,
                                 int n_bits, int n_classes, RngStream& rng) {
    std::vector<double> weights(answers.size());
    for (std::size_t w = 0; w < answers.size(); ++w)
        weights[w] = compute_weight(scheme, answers[w]);
    return fuse_bitwise_weighted(answers, weights, n_bits, n_classes, rng);
}

// A word is consistent with a class when every definitive symbol matches the
// class codeword. Skips match anything.
inline bool word_matches_class(const AnswerWord& word, const TruthWord& code) {
    for (std::size_t i = 0; i < word.symbols.size(); ++i) {
        const AnswerSymbol s = word.symbols[i];
        if (s == AnswerSymbol::Skip) continue;
        if (static_cast<int>(s) != code.bits[i]) return false;
    }
    return true;
}

struct ClasswiseResult {
    std::vector<double> scores;
    int class_index = kInvalidCodeword;
    bool tie = false;
};

inline ClasswiseResult fuse_classwise(const std::vector<AnswerWord>& answers,
                                      const WeightScheme& scheme, int n_bits, int n_classes,
                                      RngStream& rng) {
    ClasswiseResult res;
    res.scores.assign(static_cast<std::size_t>(n_classes), 0.0);
    std::vector<double> weights(answers.size());
    for (std::size_t w = 0; w < answers.size(); ++w)
        weights[w] = compute_weight(scheme, answers[w]);
    for (int c = 0; c < n_classes; ++c) {
        const TruthWord code = encode_class(c, n_bits);
        double s = 0.0;
        for (std::size_t w = 0; w < answers.size(); ++w)
            if (word_matches_class(answers[w], code)) s += weights[w];
        res.scores[static_cast<std::size_t>(c)] = s;
    }
    const double best = *std::max_element(res.scores.begin(), res.scores.end());
    std::vector<int> leaders;
    for (int c = 0; c < n_classes; ++c) {
        const double s = res.scores[static_cast<std::size_t>(c)];
        if (best == 0.0 ? s == 0.0 : best - s <= kTieRelTol * best) leaders.push_back(c);
    }
    res.tie = leaders.size() > 1;
    res.class_index = leaders[res.tie ? static_cast<std::size_t>(rng.next_below(leaders.size())) : 0];
    return res;
}

// Per-question log-odds fusion from the true reliabilities. Every definitive
// answer must come with rho strictly inside (0, 1).
inline FusionResult chair_varshney_fuse(const std::vector<AnswerWord>& answers,
                                        const std::vector<std::vector<double>>& reliabilities,
                                        int n_bits, int n_classes, RngStream& rng) {
    FusionResult res;
    res.decided_bits.resize(static_cast<std::size_t>(n_bits));
    for (int i = 0; i < n_bits; ++i) {
        double llr = 0.0, scale = 0.0;
        for (std::size_t w = 0; w < answers.size(); ++w) {
            const AnswerSymbol s = answers[w].symbols[static_cast<std::size_t>(i)];
            if (s == AnswerSymbol::Skip) continue;
            const double rho = reliabilities[w][static_cast<std::size_t>(i)];
            if (!(rho > 0.0) || !(rho < 1.0))
                throw std::domain_error("chair_varshney_fuse: reliability must be strictly inside (0, 1)");
            const double term = std::log(rho / (1.0 - rho));
            llr += s == AnswerSymbol::One ? term : -term;
            scale += std::abs(term);
        }
        int bit;
        if (std::abs(llr) <= kTieRelTol * scale || scale == 0.0) {
            bit = rng.next_bool() ? 1 : 0;
            res.tie_bits.push_back(i);
        } else {
            bit = llr > 0.0 ? 1 : 0;
        }
        res.decided_bits[static_cast<std::size_t>(i)] = bit;
    }
    res.class_index = decode_class(res.decided_bits, n_classes);
    return res;
}

enum class StrategyKind { Honest, Oblivious, Expurgation, Adaptive };

struct StrategyApplication {
    std::vector<AnswerWord> retained;
    std::vector<double> weights;
};

// Oblivious keeps everything under mu^-n weights. Expurgation drops words
// that answered all N questions and reweights the rest by (mu*x)^-n. An empty
// retained set is fine; fusion then resolves every bit by coin.
inline StrategyApplication apply_strategy(const std::vector<AnswerWord>& answers,
                                          StrategyKind kind, double mu, double m) {
    StrategyApplication app;
    if (kind == StrategyKind::Expurgation) {
        const ExpurgationWeighted scheme{mu, solve_x(m, answers.empty() ? 1 : answers.front().length())};
        for (const AnswerWord& word : answers) {
            if (word.n_definitive() == word.length()) continue;
            app.retained.push_back(word);
            app.weights.push_back(compute_weight(WeightScheme{scheme}, word));
        }
        return app;
    }
    const RejectWeighted scheme{mu};
    app.retained = answers;
    app.weights.resize(answers.size());
    for (std::size_t w = 0; w < answers.size(); ++w)
        app.weights[w] = compute_weight(WeightScheme{scheme}, answers[w]);
    return app;
}

} // namespace crowdfusion
