#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "errors.hpp"
#include "numeric.hpp"
#include "weights.hpp"

// Closed-form success probabilities. The per-question vote total from one
// worker takes values in {0, +/- mu^-n}; enumerating multinomial count
// profiles over that support gives the exact per-question success rate, and
// the class rate is its N-th power. Everything here is log-space to survive
// W = 20, N = 3 without underflow.

namespace crowdfusion {

namespace detail {

inline void check_domain(int W, int N, double mu, double m) {
    if (W < 1) throw std::domain_error("W must be at least 1");
    if (N < 1) throw std::domain_error("N must be at least 1");
    if (!(mu >= 0.5) || mu > 1.0) throw std::domain_error("mu must be in [0.5, 1]");
    if (m < 0.0 || m > 1.0) throw std::domain_error("m must be in [0, 1]");
}

// profile count for compositions of total into parts slots
inline double composition_count(int total, int parts) {
    return std::exp(log_binomial(total + parts - 1, parts - 1));
}

inline void check_cap(double profiles, double cap) {
    if (profiles > cap) throw EnumerationLimitError(profiles, cap);
}

template <typename Fn>
void for_each_composition_impl(int total, int parts, std::vector<int>& q, int idx, Fn&& fn) {
    if (idx == parts - 1) {
        q[static_cast<std::size_t>(idx)] = total;
        fn(q);
        return;
    }
    for (int v = 0; v <= total; ++v) {
        q[static_cast<std::size_t>(idx)] = v;
        for_each_composition_impl(total - v, parts, q, idx + 1, fn);
    }
}

template <typename Fn>
void for_each_composition(int total, int parts, Fn&& fn) {
    std::vector<int> q(static_cast<std::size_t>(parts));
    for_each_composition_impl(total, parts, q, 0, fn);
}

// chance that a word answers question b and has n definitive answers total:
// C(N-1, n-1) (1-m)^n m^(N-n)
inline double phi(int N, int n, double m) {
    if (n < 1 || n > N) return 0.0;
    return binomial(N - 1, n - 1) * ipow(1.0 - m, n) * ipow(m, N - n);
}

// Shared evaluation of the signed profile sums. Slots are laid out as
// [skip, -1, +1, -2, +2, ..., -depth, +depth] where +/-n means a vote of
// +/- weight[n] coming from a word with n definitive answers. margin_shift
// adds a constant to the decision margin (greedy block in the oblivious
// form). coeff_log is the profile-independent log factor.
struct ProfileSums {
    double sum_pos = 0.0; // profiles with positive margin
    double sum_tie = 0.0; // profiles with zero margin
};

struct SlotTable {
    std::vector<double> log_h1, log_h0; // per-slot log mass under each bit hypothesis
    std::vector<bool> zero_h1, zero_h0;
    std::vector<double> vote; // signed vote weight per slot
    std::vector<std::int64_t> vote_int; // scaled integer votes when available
    bool integer_margin = false;
};

inline SlotTable make_slot_table(int N, int depth, double mu, double m,
                                 const std::vector<double>& weight) {
    SlotTable t;
    const int parts = 2 * depth + 1;
    t.log_h1.resize(static_cast<std::size_t>(parts));
    t.log_h0.resize(static_cast<std::size_t>(parts));
    t.zero_h1.resize(static_cast<std::size_t>(parts));
    t.zero_h0.resize(static_cast<std::size_t>(parts));
    t.vote.resize(static_cast<std::size_t>(parts));
    auto set = [&](int slot, double mass1, double mass0, double v) {
        const std::size_t s = static_cast<std::size_t>(slot);
        t.zero_h1[s] = mass1 <= 0.0;
        t.zero_h0[s] = mass0 <= 0.0;
        t.log_h1[s] = mass1 > 0.0 ? std::log(mass1) : 0.0;
        t.log_h0[s] = mass0 > 0.0 ? std::log(mass0) : 0.0;
        t.vote[s] = v;
    };
    set(0, m, m, 0.0);
    for (int n = 1; n <= depth; ++n) {
        const double ph = phi(N, n, m);
        set(2 * n - 1, (1.0 - mu) * ph, mu * ph, -weight[static_cast<std::size_t>(n)]);
        set(2 * n, mu * ph, (1.0 - mu) * ph, weight[static_cast<std::size_t>(n)]);
    }
    // mu = 0.5 makes every vote weight a power of two; use exact integer
    // margins there instead of the relative-tolerance test
    if (mu == 0.5) {
        t.integer_margin = true;
        t.vote_int.resize(static_cast<std::size_t>(parts));
        for (int n = 1; n <= depth; ++n) {
            t.vote_int[static_cast<std::size_t>(2 * n - 1)] = -(std::int64_t{1} << n);
            t.vote_int[static_cast<std::size_t>(2 * n)] = std::int64_t{1} << n;
        }
    }
    return t;
}

inline ProfileSums accumulate_profiles(const SlotTable& t, int total, int numerator_count,
                                       double coeff_log, double margin_shift,
                                       std::int64_t margin_shift_int, bool sum_at_most) {
    const int parts = static_cast<int>(t.vote.size());
    KahanSum pos, tie;
    const double log_w_fact = log_factorial(numerator_count);
    auto visit = [&](const std::vector<int>& q) {
        double log_c = log_w_fact + coeff_log;
        double log_f1 = 0.0, log_f0 = 0.0;
        bool f1_zero = false, f0_zero = false;
        double margin = margin_shift, scale = std::abs(margin_shift);
        std::int64_t margin_int = margin_shift_int;
        for (int s = 0; s < parts; ++s) {
            const std::size_t ss = static_cast<std::size_t>(s);
            const int qs = q[ss];
            if (qs == 0) continue;
            log_c -= log_factorial(qs);
            if (t.zero_h1[ss]) f1_zero = true; else log_f1 += qs * t.log_h1[ss];
            if (t.zero_h0[ss]) f0_zero = true; else log_f0 += qs * t.log_h0[ss];
            margin += qs * t.vote[ss];
            scale += qs * std::abs(t.vote[ss]);
            if (t.integer_margin) margin_int += qs * t.vote_int[ss];
        }
        const double p1 = f1_zero ? 0.0 : std::exp(log_c + log_f1);
        const double p0 = f0_zero ? 0.0 : std::exp(log_c + log_f0);
        const double diff = p1 - p0;
        bool is_tie, is_pos;
        if (t.integer_margin) {
            is_tie = margin_int == 0;
            is_pos = margin_int > 0;
        } else {
            is_tie = scale == 0.0 || std::abs(margin) <= 1e-9 * scale;
            is_pos = !is_tie && margin > 0.0;
        }
        if (is_tie) tie.add(diff);
        else if (is_pos) pos.add(diff);
    };
    if (sum_at_most) {
        for (int s = 0; s <= total; ++s) for_each_composition(s, parts, visit);
    } else {
        for_each_composition(total, parts, visit);
    }
    return ProfileSums{pos.value(), tie.value()};
}

} // namespace detail

// Distribution of one answer word's signed contribution to a question vote:
// 0 when the word skipped the question, +/- mu^-n otherwise. Index n runs
// 1..N; under the opposite hypothesis plus and minus masses swap.
struct TwPmf {
    double zero_mass = 0.0;
    std::vector<double> plus_given_true;  // P(T = +mu^-n | bit is the voted value)
    std::vector<double> minus_given_true; // P(T = -mu^-n | bit is the voted value)

    double total_mass() const {
        double s = zero_mass;
        for (double v : plus_given_true) s += v;
        for (double v : minus_given_true) s += v;
        return s;
    }
};

inline TwPmf tw_pmf(double mu, double m, int N) {
    detail::check_domain(1, N, mu, m);
    TwPmf pmf;
    pmf.zero_mass = m;
    pmf.plus_given_true.resize(static_cast<std::size_t>(N));
    pmf.minus_given_true.resize(static_cast<std::size_t>(N));
    for (int n = 1; n <= N; ++n) {
        const double ph = detail::phi(N, n, m);
        pmf.plus_given_true[static_cast<std::size_t>(n - 1)] = mu * ph;
        pmf.minus_given_true[static_cast<std::size_t>(n - 1)] = (1.0 - mu) * ph;
    }
    return pmf;
}

// Exact per-question success rate for the full honest crowd under mu^-n
// weighting. Profiles with positive margin decide correctly, zero margins
// win the coin half the time:
//   1/2 + 1/2 * sum_pos(P1 - P0) + 1/4 * sum_tie(P1 - P0)
inline double exact_per_bit_honest(int W, int N, double mu, double m, double cap = 1e7) {
    detail::check_domain(W, N, mu, m);
    detail::check_cap(detail::composition_count(W, 2 * N + 1), cap);
    std::vector<double> weight(static_cast<std::size_t>(N) + 1, 0.0);
    for (int n = 1; n <= N; ++n) weight[static_cast<std::size_t>(n)] = std::pow(mu, -n);
    const detail::SlotTable t = detail::make_slot_table(N, N, mu, m, weight);
    const detail::ProfileSums s = detail::accumulate_profiles(t, W, W, 0.0, 0.0, 0, false);
    return 0.5 + 0.5 * s.sum_pos + 0.25 * s.sum_tie;
}

inline double exact_pc_honest(int W, int N, double mu, double m, double cap = 1e7) {
    return std::pow(exact_per_bit_honest(W, N, mu, m, cap), N);
}

// Printed closed form for a crowd with a greedy block: the greedy workers
// enter as a margin offset of mu^-N per head plus a 2^-Wg mass factor, with
// profiles running over the honest workers only. Reproduced as printed; see
// docs/formula_audit.md for how it behaves away from alpha = 0.
inline double exact_per_bit_oblivious(int W, int N, double mu, double m, double alpha,
                                      double cap = 1e7) {
    detail::check_domain(W, N, mu, m);
    if (alpha < 0.0 || alpha > 1.0) throw std::domain_error("alpha must be in [0, 1]");
    const int greedy = static_cast<int>(std::floor(W * alpha + 0.5));
    const int honest = W - greedy;
    detail::check_cap(detail::composition_count(honest, 2 * N + 1), cap);
    std::vector<double> weight(static_cast<std::size_t>(N) + 1, 0.0);
    for (int n = 1; n <= N; ++n) weight[static_cast<std::size_t>(n)] = std::pow(mu, -n);
    const detail::SlotTable t = detail::make_slot_table(N, N, mu, m, weight);
    const double coeff_log = -greedy * std::log(2.0);
    const double shift = greedy * std::pow(mu, -N);
    const std::int64_t shift_int = mu == 0.5 ? greedy * (std::int64_t{1} << N) : 0;
    const detail::ProfileSums s =
        detail::accumulate_profiles(t, honest, W, coeff_log, shift, shift_int, false);
    return 0.5 + 0.5 * s.sum_pos + 0.25 * s.sum_tie;
}

inline double exact_pc_oblivious(int W, int N, double mu, double m, double alpha,
                                 double cap = 1e7) {
    return std::pow(exact_per_bit_oblivious(W, N, mu, m, alpha, cap), N);
}

// Printed closed form after dropping full-length words, with (mu*x)^-n
// weights. Profile sums run over n = 1..N-1 and totals at most the honest
// count. Reproduced as printed; it is not normalized, which the audit
// artifact documents numerically.
inline double exact_per_bit_expurgation(int W, int N, double mu, double m, double alpha,
                                        double cap = 1e7) {
    detail::check_domain(W, N, mu, m);
    if (alpha < 0.0 || alpha > 1.0) throw std::domain_error("alpha must be in [0, 1]");
    const double x = solve_x(m, N);
    const int greedy = static_cast<int>(std::floor(W * alpha + 0.5));
    const int honest = W - greedy;
    const int depth = N - 1;
    detail::check_cap(detail::composition_count(honest, 2 * depth + 2), cap);
    std::vector<double> weight(static_cast<std::size_t>(depth) + 1, 0.0);
    for (int n = 1; n <= depth; ++n) weight[static_cast<std::size_t>(n)] = std::pow(mu * x, -n);
    const detail::SlotTable t = detail::make_slot_table(N, depth, mu, m, weight);
    const detail::ProfileSums s = detail::accumulate_profiles(t, honest, W, 0.0, 0.0, 0, true);
    return 0.5 + 0.5 * s.sum_pos + 0.25 * s.sum_tie;
}

inline double exact_pc_expurgation(int W, int N, double mu, double m, double alpha,
                                   double cap = 1e7) {
    return std::pow(exact_per_bit_expurgation(W, N, mu, m, alpha, cap), N);
}

struct AsymptoticMoments {
    double mean = 0.0;
    double variance = 0.0;
};

inline AsymptoticMoments asymptotic_moments(int W, int N, double mu, double m) {
    detail::check_domain(W, N, mu, m);
    AsymptoticMoments r;
    r.mean = W * (2.0 * mu - 1.0) * (1.0 - m) / mu *
             ipow((1.0 - (1.0 - mu) * m) / mu, N - 1);
    const double second = W * (1.0 - m) / (mu * mu) *
                          ipow((1.0 - (1.0 - mu * mu) * m) / (mu * mu), N - 1);
    r.variance = second - r.mean * r.mean / W;
    return r;
}

// Gaussian approximation of the per-question margin, raised to the N-th
// power. Degenerate variance means the margin is deterministic.
inline double asymptotic_pc(int W, int N, double mu, double m) {
    const AsymptoticMoments mo = asymptotic_moments(W, N, mu, m);
    if (mo.variance <= 1e-15)
        return mo.mean > 0.0 ? 1.0 : std::pow(2.0, -N);
    const double per_bit = q_function(-mo.mean / std::sqrt(mo.variance));
    return std::pow(per_bit, N);
}

// Majority-vote baseline where skips are replaced by fair coin flips. The
// per-answer success rate is l = mu + m(1/2 - mu). Default uses the CLT
// scaling Q(-W(2l-1)/sqrt(4Wl(1-l))); printed_form follows the published
// expression with W^2 and an unsquared (2l-1) inside the root.
inline double asymptotic_pc_mv(int W, int N, double mu, double m, bool printed_form = false) {
    detail::check_domain(W, N, mu, m);
    const double l = mu + m * (0.5 - mu);
    if (l >= 1.0) return 1.0;
    double per_bit;
    if (printed_form) {
        const double inside = static_cast<double>(W) * W * (2.0 * l - 1.0) / (4.0 * l * (1.0 - l));
        per_bit = q_function(-std::sqrt(inside < 0.0 ? 0.0 : inside));
    } else {
        per_bit = q_function(-(W * (2.0 * l - 1.0)) / std::sqrt(4.0 * W * l * (1.0 - l)));
    }
    return std::pow(per_bit, N);
}

// Scaling metrics of the weighted scheme: g is the per-question gain factor
// and f the deflection coefficient (1-m)(2mu-1)^2 g^(N-1).
struct FgMetrics {
    double f = 0.0;
    double g = 0.0;
};

inline FgMetrics f_g_metrics(double mu, double m, int N) {
    detail::check_domain(1, N, mu, m);
    FgMetrics r;
    const double a = 1.0 - (1.0 - mu) * m;
    const double b = 1.0 - (1.0 - mu * mu) * m;
    r.g = a * a / b;
    r.f = (1.0 - m) * (2.0 * mu - 1.0) * (2.0 * mu - 1.0) * ipow(r.g, N - 1);
    return r;
}

} // namespace crowdfusion
