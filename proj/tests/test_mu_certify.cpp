#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "tfd/mu_certify.hpp"

namespace {

// Naive power-form evaluation, kept separate from the library's Horner path.
double p1_naive(double m) { return 4 * m * m + 5 * m - 1; }
double p2_naive(double m) {
    return 24 * std::pow(m, 4) + 49 * std::pow(m, 3) + 8 * m * m - 19 * m + 2;
}
double p3_naive(double m) { return 8 * std::pow(m, 3) + 20 * m * m + 13 * m - 5; }
double p4_naive(double m) {
    return 32 * std::pow(m, 4) - 8 * std::pow(m, 3) - 159 * m * m - 130 * m + 25;
}

} // namespace

TEST_CASE("inequality values at the working mu") {
    const auto r = tfd::ineq_values(0.16065);
    CHECK(r.feasible);
    CHECK(r.p1 == Catch::Approx(-0.0935163100).margin(1e-9));
    CHECK(r.p2 == Catch::Approx(-0.6267367972).margin(1e-8));
    CHECK(r.p3 == Catch::Approx(-2.3622125654).margin(1e-8));
    CHECK(r.p4 == Catch::Approx(1.0623e-4).margin(2e-8));
    CHECK(r.p4 >= 0);
    CHECK(r.constant == Catch::Approx(1.0 / 1.16065).epsilon(1e-15));
    CHECK(r.constant < 0.8616);
}

TEST_CASE("inequality values match naive evaluation") {
    for (int i = 0; i <= 40; ++i) {
        const double mu = 0.3 * i / 40.0;
        const auto r = tfd::ineq_values(mu);
        CAPTURE(mu);
        CHECK(r.p1 == Catch::Approx(p1_naive(mu)).margin(1e-12));
        CHECK(r.p2 == Catch::Approx(p2_naive(mu)).margin(1e-12));
        CHECK(r.p3 == Catch::Approx(p3_naive(mu)).margin(1e-12));
        CHECK(r.p4 == Catch::Approx(p4_naive(mu)).margin(1e-12));
    }
}

TEST_CASE("feasibility boundary cases") {
    CHECK_FALSE(tfd::ineq_values(0.0).feasible); // p2 = 2 > 0
    CHECK(tfd::ineq_values(0.0).p2 == 2.0);
    CHECK_FALSE(tfd::ineq_values(0.17).feasible); // p4 < 0
    CHECK(tfd::ineq_values(0.17).p4 < 0);
    CHECK_THROWS_AS(tfd::ineq_values(-0.1), tfd::validation_error);
}

TEST_CASE("max feasible mu by bisection") {
    const auto res = tfd::max_feasible_mu();
    CHECK(res.mu_star > 0.16065);
    CHECK(res.mu_star < 0.16070);
    CHECK(res.report.feasible);
    CHECK_FALSE(tfd::ineq_values(res.mu_star + 1e-9).feasible);
    CHECK(res.constant < 0.8616);

    // the quartic is the binding constraint at the top of the range
    const auto r = res.report;
    CHECK(std::abs(r.p4) < std::abs(r.p1));
    CHECK(std::abs(r.p4) < std::abs(r.p2));
    CHECK(std::abs(r.p4) < std::abs(r.p3));

    // a bracket narrower than one bisection step still converges to ~lo
    const auto tiny = tfd::max_feasible_mu(0.16065, 0.16065 + 1e-12, 1e-13);
    CHECK(tiny.mu_star == Catch::Approx(0.16065).margin(1e-11));

    CHECK_THROWS_AS(tfd::max_feasible_mu(0.17, 0.18, 1e-9), tfd::validation_error);
}

TEST_CASE("condition3 equivalence with the quartic sign") {
    const auto check = tfd::condition3_check();
    CHECK(check.pass);
    CHECK(check.worst_violation == 0.0);

    // spot values on both sides of the boundary
    CHECK(tfd::detail::condition3_margin(0.16065) < 0);
    CHECK(tfd::ineq_values(0.16065).p4 >= 0);
    CHECK(tfd::detail::condition3_margin(0.17) > 0);
    CHECK(tfd::ineq_values(0.17).p4 < 0);
}

TEST_CASE("f evaluation and monotonicity") {
    const double mu = 0.16065;
    // at x = 0 the radical collapses and f(0) = mu (1+mu)^2
    CHECK(tfd::f_eval(0.0, mu) == Catch::Approx(mu * (1 + mu) * (1 + mu)).epsilon(1e-14));
    CHECK(tfd::f_eval(0.0, 0.1) == Catch::Approx(0.1 * 1.1 * 1.1).epsilon(1e-14));

    // the feasible mu leaves f(1/4) at most 1/4
    CHECK(tfd::f_eval(0.25, mu) <= 0.25);

    const auto mono = tfd::f_monotonicity_check(mu);
    CHECK(mono.pass);
    CHECK(mono.worst_violation <= 1e-12);

    // below the p2 root the derivative dips negative and the check says so
    CHECK_FALSE(tfd::f_monotonicity_check(0.05).pass);

    CHECK_THROWS_AS(tfd::f_eval(-0.01, mu), tfd::validation_error);
    CHECK_THROWS_AS(tfd::f_eval(0.26, mu), tfd::validation_error);
}

TEST_CASE("derivative iff claim") {
    const auto check = tfd::derivative_iff_check();
    CHECK(check.pass);
    CHECK(check.worst_violation == 0.0);

    // floor >= 0 exactly when p2 <= 0, sampled by hand on both sides
    CHECK(tfd::detail::f_derivative_floor(0.16065) >= 0);
    CHECK(tfd::ineq_values(0.16065).p2 <= 0);
    CHECK(tfd::detail::f_derivative_floor(0.05) < 0);
    CHECK(tfd::ineq_values(0.05).p2 > 0);
}
