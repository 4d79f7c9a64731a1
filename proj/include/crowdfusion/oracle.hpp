#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "analysis.hpp"
#include "errors.hpp"
#include "fusion.hpp"
#include "numeric.hpp"
#include "weights.hpp"

// Brute-force ground truth for small crowds: enumerate every joint answer
// outcome at fixed skip probability m and reliability mu, apply the same
// weighting and tie rules as the fusion pipeline, and sum the exact success
// probability. The class is all-zeros without loss of generality; questions
// are exchangeable and answer errors are symmetric.

namespace crowdfusion {

namespace detail {

struct OutcomeType {
    double prob = 0.0;
    double weight = 0.0;          // per-word vote weight under the strategy
    std::vector<int> dirs;        // per question: -1 votes truth, +1 votes against, 0 skip
};

// votes[] carries an exact integer count of definitive answers per question.
// The incremental add/subtract on margin[]/scale[] leaves ~1ulp residue after
// a sibling subtree is unwound, so "no votes" must not be inferred from the
// floats: a residue-sign decision on an unanswered question is a real error.
inline void oracle_walk(const std::vector<std::vector<OutcomeType>>& worker_types,
                        std::size_t w, double prob, std::vector<double>& margin,
                        std::vector<double>& scale, std::vector<int>& votes, KahanSum& acc) {
    if (w == worker_types.size()) {
        double score = 1.0;
        for (std::size_t i = 0; i < margin.size(); ++i) {
            const double mg = margin[i], sc = scale[i];
            if (votes[i] == 0 || std::abs(mg) <= kTieRelTol * sc)
                score *= 0.5;
            else if (mg > 0.0)
                score = 0.0;
            if (score == 0.0) break;
        }
        if (score != 0.0) acc.add(prob * score);
        return;
    }
    for (const OutcomeType& t : worker_types[w]) {
        for (std::size_t i = 0; i < margin.size(); ++i) {
            if (t.dirs[i] == 0) continue;
            margin[i] += t.dirs[i] * t.weight;
            scale[i] += t.weight;
            ++votes[i];
        }
        oracle_walk(worker_types, w + 1, prob * t.prob, margin, scale, votes, acc);
        for (std::size_t i = 0; i < margin.size(); ++i) {
            if (t.dirs[i] == 0) continue;
            margin[i] -= t.dirs[i] * t.weight;
            scale[i] -= t.weight;
            --votes[i];
        }
    }
}

} // namespace detail

inline double oracle_pc(int W, int N, double mu, double m, double alpha, StrategyKind strategy,
                        double cap = 1e8) {
    detail::check_domain(W, N, mu, m);
    if (alpha < 0.0 || alpha > 1.0) throw std::domain_error("alpha must be in [0, 1]");
    const int greedy = static_cast<int>(std::floor(W * alpha + 0.5));
    const int honest = W - greedy;
    const double log_terms = honest * N * std::log(3.0) + greedy * N * std::log(2.0);
    if (log_terms > std::log(cap)) throw EnumerationLimitError(std::exp(log_terms), cap);

    const bool expurgate = strategy == StrategyKind::Expurgation;
    const double x = expurgate ? solve_x(m, N) : 1.0;
    auto word_weight = [&](int n) {
        if (expurgate) return n == N ? 0.0 : std::pow(mu * x, -n);
        return std::pow(mu, -n);
    };

    // enumerate the per-worker outcome alphabets once
    std::vector<detail::OutcomeType> honest_types;
    {
        std::vector<int> dirs(static_cast<std::size_t>(N), 0);
        // odometer over {skip, correct, wrong}^N
        std::vector<int> state(static_cast<std::size_t>(N), 0);
        while (true) {
            double prob = 1.0;
            int n_def = 0;
            for (int i = 0; i < N; ++i) {
                const int s = state[static_cast<std::size_t>(i)];
                if (s == 0) {
                    prob *= m;
                    dirs[static_cast<std::size_t>(i)] = 0;
                } else if (s == 1) {
                    prob *= (1.0 - m) * mu;
                    dirs[static_cast<std::size_t>(i)] = -1;
                    ++n_def;
                } else {
                    prob *= (1.0 - m) * (1.0 - mu);
                    dirs[static_cast<std::size_t>(i)] = +1;
                    ++n_def;
                }
            }
            const double wt = word_weight(n_def);
            // a zero-weight word moves no margin; drop its dirs so it is not
            // counted as a vote either
            if (wt == 0.0) std::fill(dirs.begin(), dirs.end(), 0);
            if (prob > 0.0) honest_types.push_back({prob, wt, dirs});
            int i = 0;
            while (i < N && ++state[static_cast<std::size_t>(i)] == 3) state[static_cast<std::size_t>(i++)] = 0;
            if (i == N) break;
        }
    }
    std::vector<detail::OutcomeType> greedy_types;
    if (greedy > 0) {
        std::vector<int> dirs(static_cast<std::size_t>(N), 0);
        std::vector<int> state(static_cast<std::size_t>(N), 0);
        const double prob = std::pow(0.5, N);
        const double wt = word_weight(N);
        while (true) {
            for (int i = 0; i < N; ++i)
                dirs[static_cast<std::size_t>(i)] =
                    wt == 0.0 ? 0 : (state[static_cast<std::size_t>(i)] == 0 ? -1 : +1);
            greedy_types.push_back({prob, wt, dirs});
            int i = 0;
            while (i < N && ++state[static_cast<std::size_t>(i)] == 2) state[static_cast<std::size_t>(i++)] = 0;
            if (i == N) break;
        }
    }

    std::vector<std::vector<detail::OutcomeType>> worker_types;
    worker_types.reserve(static_cast<std::size_t>(W));
    for (int w = 0; w < honest; ++w) worker_types.push_back(honest_types);
    for (int w = 0; w < greedy; ++w) worker_types.push_back(greedy_types);

    std::vector<double> margin(static_cast<std::size_t>(N), 0.0);
    std::vector<double> scale(static_cast<std::size_t>(N), 0.0);
    std::vector<int> votes(static_cast<std::size_t>(N), 0);
    KahanSum acc;
    detail::oracle_walk(worker_types, 0, 1.0, margin, scale, votes, acc);
    return acc.value();
}

} // namespace crowdfusion
