#include "doctest.h"

#include <algorithm>
#include <cmath>

#include "bvlab/coefficients.hpp"

using namespace bvlab;

namespace {

// First moment int_0^1 s rho(s) ds of the normalized bump, by Simpson on its own formula.
double bump_first_moment() {
    auto raw = [](double s) { return std::abs(s) < 1.0 ? std::exp(-1.0 / (1.0 - s * s)) : 0.0; };
    const int n = 20000;
    double mass = 0.0, m1 = 0.0;
    for (int i = 0; i <= n; ++i) {
        const double s = -1.0 + 2.0 * i / n;
        const double w = (i == 0 || i == n) ? 1.0 : (i % 2 ? 4.0 : 2.0);
        mass += w * raw(s);
        if (s > 0.0) m1 += w * s * raw(s);
    }
    return m1 / mass;
}

}  // namespace

TEST_CASE("total variation of steps") {
    CHECK(total_variation(StepCoefficient::constant(3.0)) == 0.0);
    CHECK(total_variation(StepCoefficient({0.0, 1.0}, {1.0, 3.0, 2.0})) == doctest::Approx(3.0).epsilon(1e-15));
}

TEST_CASE("total variation is additive and scale invariant") {
    const StepCoefficient a({-2.0, -0.5, 1.0, 3.0}, {1.0, 2.5, 1.2, 4.0, 2.0});
    const StepCoefficient left({-2.0, -0.5}, {1.0, 2.5, 1.2});
    const StepCoefficient right({1.0, 3.0}, {1.2, 4.0, 2.0});
    CHECK(total_variation(a) == doctest::Approx(total_variation(left) + total_variation(right)).epsilon(1e-15));
    for (double s : {0.25, 3.0, 17.0}) CHECK(total_variation(a.rescaled(s)) == total_variation(a));
}

TEST_CASE("admissibility") {
    auto r = check_admissible(StepCoefficient::constant(1.0), 0.5);
    CHECK(r.admissible);
    CHECK(r.m == 1.0);
    CHECK(r.M == 1.0);
    CHECK(r.tv == 0.0);
    CHECK_FALSE(check_admissible(StepCoefficient({0.0}, {1.0, 0.1}), 0.5).admissible);
    auto s = check_admissible(StepCoefficient({0.0}, {1.0, 4.0}), 1.0);
    CHECK(s.admissible);
    CHECK(s.bv_norm == 7.0);
}

TEST_CASE("step coefficient validation") {
    CHECK_THROWS_AS(StepCoefficient({1.0, 0.0}, {1.0, 2.0, 3.0}).validate(), std::invalid_argument);
    CHECK_THROWS_AS(StepCoefficient({0.0}, {1.0}).validate(), std::invalid_argument);
    CHECK_THROWS_AS(StepCoefficient({0.0}, {1.0, -2.0}).validate(), std::invalid_argument);
}

TEST_CASE("mollify constants and supports") {
    const Grid g = Grid::spanning(-1.0, 1.0, 2001);
    auto c = mollify(StepCoefficient::constant(2.0), 0.3, g);
    double gap = 0.0;
    for (double v : c.samples) gap = std::max(gap, std::abs(v - 2.0));
    CHECK(gap < 1e-14);
    auto j = mollify(StepCoefficient({0.0}, {1.0, 4.0}), 0.1, g);
    CHECK(std::abs(j(-0.2) - 1.0) < 1e-12);
    CHECK(std::abs(j(0.2) - 4.0) < 1e-12);
    CHECK(std::is_sorted(j.samples.begin(), j.samples.end()));
}

TEST_CASE("mollify keeps the total variation of monotone pieces") {
    const Grid g = Grid::spanning(-2.0, 3.0, 8001);
    auto c = mollify(StepCoefficient({0.0, 1.0}, {1.0, 3.0, 2.0}), 0.05, g);
    CHECK(std::abs(total_variation(c) - 3.0) < 1e-6);
}

TEST_CASE("mollify never increases TV nor leaves [m, M]") {
    const Grid g = Grid::spanning(-6.0, 6.0, 6001);
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        auto a = step_family_fixed_bv(8, 3.0, 1.0, seed, 8.0);
        const double lo = coefficient_min(a), hi = coefficient_max(a);
        for (double eps : {0.4, 0.1, 0.02}) {
            auto c = mollify(a, eps, g);
            CHECK(total_variation(c) <= total_variation(a) + 1e-10);
            auto [vlo, vhi] = std::minmax_element(c.samples.begin(), c.samples.end());
            CHECK(*vlo >= lo - 1e-10);
            CHECK(*vhi <= hi + 1e-10);
        }
    }
}

TEST_CASE("diffeomorphism: constant speeds") {
    const Grid g = Grid::spanning(-2.0, 2.0, 401);
    auto id = build_diffeomorphism(SampledCoefficient(g, std::vector<double>(g.n, 1.0)));
    for (double x : {-1.7, 0.0, 0.33, 1.9}) {
        CHECK(id.forward(x) == doctest::Approx(x).epsilon(1e-13));
        CHECK(id.inverse(x) == doctest::Approx(x).epsilon(1e-13));
    }
    auto two = build_diffeomorphism(SampledCoefficient(g, std::vector<double>(g.n, 2.0)));
    for (double x : {-1.7, 0.33, 1.9}) CHECK(two.forward(x) == doctest::Approx(2.0 * x).epsilon(1e-13));
    CHECK(two.jac_lo == 0.5);
    CHECK(two.jac_hi == 0.5);
}

TEST_CASE("diffeomorphism: mollified jump against the closed-form integral") {
    const double eps = 0.25;
    const Grid g = Grid::spanning(-2.0, 2.0, 4096);
    auto w = mollify(StepCoefficient({0.0}, {1.0, 1.5}), eps, g);
    auto d = build_diffeomorphism(w);
    const double m1 = bump_first_moment();
    auto exact = [&](double x) { return x >= eps ? x + 0.5 * (x - eps * m1) : x - 0.5 * eps * m1; };
    double worst = 0.0, trip = 0.0;
    for (std::size_t i = 0; i < g.n; ++i) {
        const double x = g.at(i);
        if (std::abs(x) >= eps) worst = std::max(worst, std::abs(d.forward(x) - exact(x)));
        trip = std::max(trip, std::abs(d.inverse(d.forward(x)) - x));
    }
    CHECK(worst < 1e-8);
    CHECK(trip < 1e-8);
    CHECK(trip <= 10.0 * g.h * 1.5);
}

TEST_CASE("fixed-BV family") {
    auto one = step_family_fixed_bv(1, 2.0, 1.0, 7);
    REQUIRE(one.jumps() == 1);
    CHECK(std::abs(std::abs(one.values[1] - one.values[0]) - 2.0) < 1e-12);
    auto four = step_family_fixed_bv(4, 2.0, 1.0, 7);
    REQUIRE(four.jumps() == 4);
    CHECK(std::abs(total_variation(four) - 2.0) < 1e-12);
    CHECK(coefficient_min(four) >= 1.0 - 1e-12);
    auto again = step_family_fixed_bv(4, 2.0, 1.0, 7);
    CHECK(again.breakpoints == four.breakpoints);
    CHECK(again.values == four.values);
    CHECK_THROWS_AS(step_family_fixed_bv(0, 2.0, 1.0, 1), std::invalid_argument);
}

TEST_CASE("resolution guard") {
    const StepCoefficient a({0.0, 0.01}, {1.0, 2.0, 1.0});
    CHECK_THROWS(require_resolved(a, Grid::with_step(-1.0, 1.0, 0.01)));
    CHECK_NOTHROW(require_resolved(a, Grid::with_step(-1.0, 1.0, 0.001)));
}
