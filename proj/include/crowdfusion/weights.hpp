#pragma once

#include <cmath>
#include <stdexcept>
#include <variant>
#include <vector>

#include "answers.hpp"
#include "errors.hpp"

// Per-word vote weights. A word with n definitive answers gets weight
//   Uniform:        1
//   RejectWeighted: mu^-n
//   Expurgation:    (mu * x)^-n   with x = solve_x(m, N)
// Oracle carries the true per-question reliabilities and has no single
// per-word weight; it is fused with per-question log-odds instead.

namespace crowdfusion {

struct UniformWeight {};

struct RejectWeighted {
    double mu = 1.0;
};

struct ExpurgationWeighted {
    double mu = 1.0;
    double x = 1.0;
};

struct OracleWeighted {
    // reliabilities[w][i] = true rho for worker w, question i
    std::vector<std::vector<double>> reliabilities;
};

using WeightScheme = std::variant<UniformWeight, RejectWeighted, ExpurgationWeighted, OracleWeighted>;

// Solves (1 - m + m*x)^N - (1 - m)^N = 1 for x >= 1. Closed form:
//   x = ((1 + (1 - m)^N)^(1/N) + m - 1) / m
// Undefined at m = 0 (every x solves the limit equation).
inline double solve_x(double m, int N) {
    if (!(m > 0.0))
        throw std::domain_error("solve_x: undefined at m = 0, weight limit is not unique");
    if (m > 1.0) throw std::domain_error("solve_x: m must be in (0, 1]");
    if (N < 1) throw std::domain_error("solve_x: N must be at least 1");
    const double base = 1.0 + std::pow(1.0 - m, N);
    return (std::pow(base, 1.0 / static_cast<double>(N)) + m - 1.0) / m;
}

inline double compute_weight(const WeightScheme& scheme, const AnswerWord& word) {
    const int n = word.n_definitive();
    if (std::holds_alternative<UniformWeight>(scheme)) return 1.0;
    if (const auto* rw = std::get_if<RejectWeighted>(&scheme))
        return std::pow(rw->mu, -n);
    if (const auto* ew = std::get_if<ExpurgationWeighted>(&scheme))
        return std::pow(ew->mu * ew->x, -n);
    throw ConfigError("oracle weighting has no per-word weight; use chair_varshney_fuse");
}

inline void validate_scheme(const WeightScheme& scheme) {
    auto check_mu = [](double mu) {
        if (!(mu > 0.5) || mu > 1.0) throw ConfigError("mu must be in (0.5, 1]");
    };
    if (const auto* rw = std::get_if<RejectWeighted>(&scheme)) check_mu(rw->mu);
    if (const auto* ew = std::get_if<ExpurgationWeighted>(&scheme)) {
        check_mu(ew->mu);
        if (!(ew->x >= 1.0)) throw ConfigError("expurgation x must be at least 1");
    }
}

} // namespace crowdfusion
