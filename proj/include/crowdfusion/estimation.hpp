#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "answers.hpp"
#include "fusion.hpp"
#include "numeric.hpp"
#include "rng.hpp"
#include "weights.hpp"

// Parameter estimation from answer sets alone: mean reliability via a gold
// set or a majority-vote benchmark word, and (m, alpha) by maximizing the
// length-histogram likelihood on a coarse-to-fine grid.

namespace crowdfusion {

struct MuEstimate {
    double mu_hat = 0.5;
    int excluded_no_definitive = 0; // workers with nothing to score
    int excluded_full_length = 0;   // words dropped as greedy suspects
};

// Score each worker against known gold bits; mu_hat is the mean per-worker
// accuracy over the workers that answered anything.
inline MuEstimate estimate_mu_training(const std::vector<AnswerWord>& answers,
                                       const std::vector<int>& gold) {
    MuEstimate est;
    const int W = static_cast<int>(answers.size());
    double sum = 0.0;
    for (const AnswerWord& word : answers) {
        int definitive = 0, matches = 0;
        for (std::size_t t = 0; t < gold.size(); ++t) {
            const AnswerSymbol s = word.symbols[t];
            if (s == AnswerSymbol::Skip) continue;
            ++definitive;
            if (static_cast<int>(s) == gold[t]) ++matches;
        }
        if (definitive == 0)
            ++est.excluded_no_definitive;
        else
            sum += static_cast<double>(matches) / definitive;
    }
    const int scored = W - est.excluded_no_definitive;
    est.mu_hat = scored == 0 ? 0.5 : sum / scored;
    return est;
}

// Majority word over the included answers. Skip when nobody answered a
// question; coin when the vote splits evenly.
inline std::vector<AnswerSymbol> benchmark_word(const std::vector<AnswerWord>& answers,
                                                const std::vector<bool>& included, int n_bits,
                                                RngStream& rng) {
    std::vector<AnswerSymbol> ref(static_cast<std::size_t>(n_bits), AnswerSymbol::Skip);
    for (int i = 0; i < n_bits; ++i) {
        int ones = 0, zeros = 0;
        for (std::size_t w = 0; w < answers.size(); ++w) {
            if (!included[w]) continue;
            const AnswerSymbol s = answers[w].symbols[static_cast<std::size_t>(i)];
            if (s == AnswerSymbol::One) ++ones;
            else if (s == AnswerSymbol::Zero) ++zeros;
        }
        if (ones + zeros == 0) continue;
        if (ones == zeros)
            ref[static_cast<std::size_t>(i)] = rng.next_bool() ? AnswerSymbol::One : AnswerSymbol::Zero;
        else
            ref[static_cast<std::size_t>(i)] = ones > zeros ? AnswerSymbol::One : AnswerSymbol::Zero;
    }
    return ref;
}

// No gold available: score workers against the majority word instead.
// Full-length words look like greedy workers and are dropped from both the
// majority and the average when exclude_full_length is set. A skip in the
// reference word never counts as a match.
inline MuEstimate estimate_mu_benchmark(const std::vector<AnswerWord>& answers, int n_bits,
                                        RngStream& rng, bool exclude_full_length = true) {
    MuEstimate est;
    std::vector<bool> included(answers.size(), true);
    for (std::size_t w = 0; w < answers.size(); ++w) {
        if (exclude_full_length && answers[w].n_definitive() == n_bits) {
            included[w] = false;
            ++est.excluded_full_length;
        }
    }
    const std::vector<AnswerSymbol> ref = benchmark_word(answers, included, n_bits, rng);
    double sum = 0.0;
    int scored = 0;
    for (std::size_t w = 0; w < answers.size(); ++w) {
        if (!included[w]) continue;
        int definitive = 0, matches = 0;
        for (int i = 0; i < n_bits; ++i) {
            const AnswerSymbol s = answers[w].symbols[static_cast<std::size_t>(i)];
            if (s == AnswerSymbol::Skip) continue;
            ++definitive;
            if (ref[static_cast<std::size_t>(i)] != AnswerSymbol::Skip && s == ref[static_cast<std::size_t>(i)])
                ++matches;
        }
        if (definitive == 0) {
            ++est.excluded_no_definitive;
            continue;
        }
        sum += static_cast<double>(matches) / definitive;
        ++scored;
    }
    est.mu_hat = scored == 0 ? 0.5 : sum / scored;
    return est;
}

inline std::vector<int> length_histogram(const std::vector<AnswerWord>& answers, int n_bits) {
    std::vector<int> counts(static_cast<std::size_t>(n_bits) + 1, 0);
    for (const AnswerWord& word : answers) ++counts[static_cast<std::size_t>(word.n_definitive())];
    return counts;
}

// Likelihood of the length histogram under skip rate m and greedy fraction
// alpha. Greedy workers always produce full-length words; honest lengths are
// Binomial(N, 1-m), scored per length bin. printed_full_length_factor keeps
// the full-length bin's complement factor at power one, the way the closed
// form is usually quoted; the default exponentiates it like the other bins.
inline double length_log_likelihood(const std::vector<int>& counts, int W, int N, double m,
                                    double alpha, bool printed_full_length_factor = false) {
    const int greedy = static_cast<int>(std::floor(W * alpha + 0.5));
    const int honest = W - greedy;
    const int k_full = counts[static_cast<std::size_t>(N)] - greedy;
    if (k_full < 0 || k_full > honest) return -INFINITY;
    double L = 0.0;
    for (int n = 0; n < N; ++n) {
        const int c = counts[static_cast<std::size_t>(n)];
        const double lc = log_binomial(honest, c);
        if (std::isinf(lc)) return -INFINITY;
        const double A = binomial(N, n) * ipow(1.0 - m, n) * ipow(m, N - n);
        if (A <= 0.0) {
            if (c > 0) return -INFINITY;
            L += lc;
        } else if (A >= 1.0) {
            if (c != honest) return -INFINITY;
            L += lc;
        } else {
            L += lc + xlog(c, std::log(A)) + xlog(honest - c, std::log1p(-A));
        }
    }
    const double full = ipow(1.0 - m, N);
    L += log_binomial(honest, k_full);
    if (full <= 0.0) {
        if (k_full > 0) return -INFINITY;
        // complement factor is exactly 1 either way
    } else if (full >= 1.0) {
        if (printed_full_length_factor) return -INFINITY; // log(1 - full) = log 0
        if (k_full != honest) return -INFINITY;
    } else {
        L += xlog(k_full, N * std::log1p(-m));
        L += printed_full_length_factor ? std::log1p(-full) : xlog(honest - k_full, std::log1p(-full));
    }
    return L;
}

struct MAlphaEstimate {
    double m_hat = 0.0;
    double alpha_hat = 0.0;
    double log_likelihood = -INFINITY;
};

// Grid search at step 0.01 over (alpha, m) in [0,1]^2, then a 0.001 pass
// around the coarse argmax. Ties keep the first candidate in scan order, so
// they resolve toward smaller alpha, then smaller m.
inline MAlphaEstimate estimate_m_alpha(const std::vector<int>& counts, int W, int N,
                                       bool printed_full_length_factor = false) {
    MAlphaEstimate best;
    auto consider = [&](double alpha, double m) {
        const double L = length_log_likelihood(counts, W, N, m, alpha, printed_full_length_factor);
        if (L > best.log_likelihood + 1e-12) best = {m, alpha, L};
    };
    for (int ai = 0; ai <= 100; ++ai)
        for (int mi = 0; mi <= 100; ++mi) consider(ai / 100.0, mi / 100.0);
    const int a0 = static_cast<int>(std::floor(best.alpha_hat * 1000.0 + 0.5));
    const int m0 = static_cast<int>(std::floor(best.m_hat * 1000.0 + 0.5));
    for (int ai = std::max(0, a0 - 10); ai <= std::min(1000, a0 + 10); ++ai)
        for (int mi = std::max(0, m0 - 10); mi <= std::min(1000, m0 + 10); ++mi)
            consider(ai / 1000.0, mi / 1000.0);
    return best;
}

struct ThresholdResult {
    double alpha_star = 0.0; // clamped to [0, 1]
    double alpha_star_unclamped = 0.0;
    double gamma1 = 0.0;
    double gamma2 = 0.0;
    double x = 1.0;
};

// Greedy fraction above which dropping full-length words beats keeping them,
// from the mean per-question vote contributions of the two schemes.
inline ThresholdResult switching_threshold(double mu, double m, int N) {
    if (!(mu > 0.5) || mu > 1.0) throw std::domain_error("mu must be in (0.5, 1]");
    if (!(m > 0.0) || m > 1.0) throw std::domain_error("m must be in (0, 1]");
    if (N < 1) throw std::domain_error("N must be at least 1");
    ThresholdResult r;
    r.x = solve_x(m, N);
    const double base = (1.0 - m) / mu;
    r.gamma1 = std::pow(base + 2.0 * m * r.x, N) - std::pow(base, N);
    r.gamma2 = std::pow(base + 2.0 * m, N);
    const double denom = std::pow(1.0 / mu, N) - r.gamma1 * std::pow(1.0 / (2.0 * mu), N) -
                         r.gamma2 + r.gamma1;
    r.alpha_star_unclamped = (r.gamma1 - r.gamma2) / denom;
    r.alpha_star = std::min(1.0, std::max(0.0, r.alpha_star_unclamped));
    return r;
}

struct StrategyDecision {
    double mu_input = 0.0;
    double m_input = 0.0;
    double alpha_input = 0.0;
    double mu_used = 0.0; // inputs clamped into the threshold domain
    double m_used = 0.0;
    ThresholdResult threshold;
    StrategyKind chosen = StrategyKind::Oblivious;
};

// Expurgation wins only on a strict threshold crossing; the boundary case
// stays oblivious.
inline StrategyDecision select_strategy(double mu_hat, double m_hat, double alpha_hat, int N) {
    StrategyDecision d;
    d.mu_input = mu_hat;
    d.m_input = m_hat;
    d.alpha_input = alpha_hat;
    d.mu_used = std::min(1.0, std::max(0.5 + 1e-6, mu_hat));
    d.m_used = std::min(1.0, std::max(1e-9, m_hat));
    d.threshold = switching_threshold(d.mu_used, d.m_used, N);
    d.chosen = alpha_hat > d.threshold.alpha_star ? StrategyKind::Expurgation
                                                  : StrategyKind::Oblivious;
    return d;
}

} // namespace crowdfusion
