#pragma once

#include <cmath>
#include <string>

#include "tfd/errors.hpp"

namespace tfd {

// Feasibility system for the margin parameter mu. A positive mu satisfying
//
//   p1 = 4 mu^2 + 5 mu - 1                          <= 0
//   p2 = 24 mu^4 + 49 mu^3 + 8 mu^2 - 19 mu + 2     <= 0
//   p3 = 8 mu^3 + 20 mu^2 + 13 mu - 5               <= 0
//   p4 = 32 mu^4 - 8 mu^3 - 159 mu^2 - 130 mu + 25  >= 0
//
// guarantees that some pivot admits a partition whose missing-pair count is
// at least (1+mu) times its decycling-edge count, which drives the
// beta <= gamma / (1+mu) recursion. mu = 0.16065 is feasible and gives the
// headline constant 1/(1+mu) < 0.8616.
struct MuReport {
    double mu = 0;
    double p1 = 0, p2 = 0, p3 = 0, p4 = 0;
    bool feasible = false;
    double constant = 0; // 1 / (1 + mu)
};

// All four polynomials are evaluated by Horner's rule in the coefficient
// order written above, so every platform produces bit-identical values.
inline MuReport ineq_values(double mu) {
    if (mu < 0) throw validation_error("ineq_values: mu must be >= 0");
    MuReport r;
    r.mu = mu;
    r.p1 = (4 * mu + 5) * mu - 1;
    r.p2 = (((24 * mu + 49) * mu + 8) * mu - 19) * mu + 2;
    r.p3 = ((8 * mu + 20) * mu + 13) * mu - 5;
    r.p4 = (((32 * mu - 8) * mu - 159) * mu - 130) * mu + 25;
    r.feasible = r.p1 <= 0 && r.p2 <= 0 && r.p3 <= 0 && r.p4 >= 0;
    r.constant = 1.0 / (1.0 + mu);
    return r;
}

struct MaxMuResult {
    double mu_star = 0;
    double constant = 0; // 1 / (1 + mu_star)
    MuReport report;     // ineq_values at mu_star
    int iterations = 0;
};

// Bisection on the feasibility predicate. lo must be feasible; with an
// infeasible hi the result mu_star satisfies feasible(mu_star) while
// feasible(mu_star + tol) fails. A degenerate bracket whose upper end is
// still feasible converges to the upper end instead of being rejected.
inline MaxMuResult max_feasible_mu(double lo = 0.16065, double hi = 0.17, double tol = 1e-9) {
    if (!(lo < hi) || !(tol > 0))
        throw validation_error("max_feasible_mu: need lo < hi and tol > 0");
    if (!ineq_values(lo).feasible)
        throw validation_error("max_feasible_mu: lo = " + std::to_string(lo) + " is not feasible");
    MaxMuResult res;
    while (hi - lo > tol) {
        const double mid = lo + (hi - lo) / 2;
        if (ineq_values(mid).feasible)
            lo = mid;
        else
            hi = mid;
        ++res.iterations;
    }
    res.mu_star = lo;
    res.report = ineq_values(lo);
    res.constant = res.report.constant;
    return res;
}

// A grid-based numeric verification of one analytic claim. pass holds iff
// worst_violation stays within tolerance.
struct AnalyticCheck {
    std::string name;
    double grid_lo = 0;
    double grid_hi = 0;
    long long grid_points = 0;
    double tolerance = 0;
    bool pass = false;
    double worst_violation = 0;
};

namespace detail {

// Left side of the boundary condition: positive exactly when
//   1/4 < mu (1+mu) (1+mu + sqrt((1+mu)^2 + (1+mu))) / 2 + p1 / 16.
inline double condition3_margin(double mu) {
    const double op = 1.0 + mu;
    const double p1 = (4 * mu + 5) * mu - 1;
    return mu * op * (op + std::sqrt(op * op + op)) / 2.0 + p1 / 16.0 - 0.25;
}

// Minimum of the derivative of f over its domain: positive exactly when f
// is increasing everywhere on [0, 1/4].
inline double f_derivative_floor(double mu) {
    const double op = 1.0 + mu;
    const double p1 = (4 * mu + 5) * mu - 1;
    return mu * op * op / std::sqrt(op * op + op) + p1 / 4.0;
}

} // namespace detail

// f(x) = mu (1+mu) (1+mu + sqrt((1+mu)^2 + 4(1+mu)x)) / 2 + p1 x / 4,
// defined for x in [0, 1/4] (x plays the role of t / |C|^2).
inline double f_eval(double x, double mu) {
    if (x < 0 || x > 0.25) throw validation_error("f_eval: x must lie in [0, 1/4]");
    const double op = 1.0 + mu;
    const double p1 = (4 * mu + 5) * mu - 1;
    return mu * op * (op + std::sqrt(op * op + 4.0 * op * x)) / 2.0 + p1 * x / 4.0;
}

inline double f_derivative(double x, double mu) {
    if (x < 0 || x > 0.25) throw validation_error("f_derivative: x must lie in [0, 1/4]");
    const double op = 1.0 + mu;
    const double p1 = (4 * mu + 5) * mu - 1;
    return mu * op * op / std::sqrt(op * op + 4.0 * op * x) + p1 / 4.0;
}

// Sign-agreement sweep for the boundary-condition equivalence: wherever p3
// holds, condition3 is claimed to hold exactly when p4 < 0. Disagreements
// are measured by min(|margin|, |p4|), which is nonzero only for a genuine
// mismatch rather than a shared root straddled by rounding.
inline AnalyticCheck condition3_check(double lo = 0.0, double hi = 0.3,
                                      long long points = 10000, double tol = 1e-9) {
    AnalyticCheck c;
    c.name = "condition3-equivalence";
    c.grid_lo = lo;
    c.grid_hi = hi;
    c.grid_points = points;
    c.tolerance = tol;
    for (long long i = 0; i < points; ++i) {
        const double mu = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(points - 1);
        const MuReport r = ineq_values(mu);
        if (r.p3 > 0) continue;
        const double margin = detail::condition3_margin(mu);
        const bool cond3 = margin > 0;
        const bool quartic_negative = r.p4 < 0;
        if (cond3 != quartic_negative)
            c.worst_violation = std::max(c.worst_violation, std::min(std::abs(margin), std::abs(r.p4)));
    }
    c.pass = c.worst_violation <= c.tolerance;
    return c;
}

// Monotonicity of f on [0, 1/4] at a fixed mu, checked two ways: finite
// differences along the grid, and the analytic derivative against its
// closed-form floor.
inline AnalyticCheck f_monotonicity_check(double mu, long long points = 1000, double tol = 1e-12) {
    AnalyticCheck c;
    c.name = "f-monotonicity";
    c.grid_lo = 0.0;
    c.grid_hi = 0.25;
    c.grid_points = points;
    c.tolerance = tol;
    const double floor = detail::f_derivative_floor(mu);
    c.worst_violation = std::max(c.worst_violation, -floor);
    double prev = f_eval(0.0, mu);
    for (long long i = 1; i < points; ++i) {
        const double x = 0.25 * static_cast<double>(i) / static_cast<double>(points - 1);
        const double cur = f_eval(x, mu);
        c.worst_violation = std::max(c.worst_violation, prev - cur);
        c.worst_violation = std::max(c.worst_violation, floor - f_derivative(x, mu));
        prev = cur;
    }
    c.pass = c.worst_violation <= c.tolerance;
    return c;
}

// Sign-agreement sweep for the derivative claim: wherever p1 <= 0, the
// derivative floor is claimed nonnegative exactly when p2 <= 0.
inline AnalyticCheck derivative_iff_check(double lo = 0.0, double hi = 0.2,
                                          long long points = 10000, double tol = 1e-9) {
    AnalyticCheck c;
    c.name = "derivative-iff";
    c.grid_lo = lo;
    c.grid_hi = hi;
    c.grid_points = points;
    c.tolerance = tol;
    for (long long i = 0; i < points; ++i) {
        const double mu = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(points - 1);
        const MuReport r = ineq_values(mu);
        if (r.p1 > 0) continue;
        const double floor = detail::f_derivative_floor(mu);
        if ((floor >= 0) != (r.p2 <= 0))
            c.worst_violation = std::max(c.worst_violation, std::min(std::abs(floor), std::abs(r.p2)));
    }
    c.pass = c.worst_violation <= c.tolerance;
    return c;
}

} // namespace tfd
