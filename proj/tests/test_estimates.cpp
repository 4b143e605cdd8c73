#include "doctest.h"

#include <cmath>

#include "bvlab/acceptance.hpp"
#include "bvlab/estimates.hpp"
#include "bvlab/resolvent.hpp"

using namespace bvlab;

namespace {

const StepCoefficient kFlat = StepCoefficient::constant(1.0);
const StepCoefficient kSteps14({0.0}, {1.0, 4.0});

RunOptions flat_exact(double T = 1.0, std::size_t nt = 257) {
    RunOptions o;
    o.T = T;
    o.nt = nt;
    o.propagator = Propagator::flat_exact;
    return o;
}

GridFunction scaled(GridFunction f, double c) {
    for (auto& z : f.v) z *= c;
    return f;
}

// First k time slices of u.
SpaceTimeField head(const SpaceTimeField& u, std::size_t k) {
    SpaceTimeField out(u.x, Grid{u.t.x0, u.t.h, k}, u.periodic_x);
    std::copy(u.values.begin(), u.values.begin() + static_cast<std::ptrdiff_t>(k * u.x.n), out.values.begin());
    return out;
}

// Separable source bump(x) * sin^2(pi t / T0) on [0, T0], zero up to the window end.
SpaceTimeField separable_source(const Grid& gx, const Grid& gt, double T0) {
    const auto bx = unit_bump(gx, 0.0, 0.5);
    SpaceTimeField f(gx, gt);
    for (std::size_t k = 0; k < gt.n; ++k) {
        const double t = gt.at(k) - gt.x0;
        const double w = t < T0 ? std::pow(std::sin(M_PI * t / T0), 2) : 0.0;
        for (std::size_t i = 0; i < gx.n; ++i) f(i, k) = bx.v[i] * w;
    }
    return f;
}

}  // namespace

TEST_CASE("smoothing quotient: flat CN run within 25% of the calibration") {
    const auto cal = load_calibration();
    auto run = smoothing_run();
    const auto q = smoothing_quotient(kFlat, run.u0, 0.0, run.opt);
    CHECK(q.propagator == "crank_nicolson");
    CHECK(q.quotient == doctest::Approx(q.numerator / q.denominator));
    CHECK(std::abs(q.quotient / cal.at("smoothing.s0") - 1.0) < 0.25);
    CHECK(q.leak <= run.opt.leak_tol);
    const auto rough = smoothing_quotient(kSteps14, run.u0, 0.0, run.opt);
    CHECK(std::isfinite(rough.quotient));
    CHECK(rough.quotient / cal.at("smoothing.s0") < 4.0);
    CHECK(cal.at("smoothing.s0") / rough.quotient < 4.0);
    CHECK(rough.jumps == 1);
    CHECK(rough.tv == 3.0);
}

TEST_CASE("smoothing quotient is homogeneous and validates s") {
    auto run = smoothing_run();
    const auto opt = flat_exact();
    const double q1 = smoothing_quotient(kFlat, run.u0, 0.0, opt).quotient;
    const double q2 = smoothing_quotient(kFlat, scaled(run.u0, 2.0), 0.0, opt).quotient;
    CHECK(std::abs(q2 / q1 - 1.0) < 1e-12);
    CHECK_THROWS_AS(smoothing_quotient(kFlat, run.u0, 0.5, opt), std::invalid_argument);
    CHECK_THROWS_AS(smoothing_quotient(kFlat, run.u0, -1.0, opt), std::invalid_argument);
}

TEST_CASE("smoothing quotient is stable under a one-band dyadic shift") {
    // u(x, t) -> u(2x, 4t) moves the datum up one band; with the window scaled
    // the same way the weighted norms pick up matching factors.
    const Grid g = Grid::with_step(-128.0, 128.0, 1.0 / 32.0);
    for (double s : {0.0, 0.25}) {
        const double q1 = smoothing_quotient(kFlat, wave_packet(g, 3.5, 4.0, -8.0), s, flat_exact(1.0)).quotient;
        const double q2 = smoothing_quotient(kFlat, wave_packet(g, 7.0, 2.0, -4.0), s, flat_exact(0.25)).quotient;
        CHECK(std::abs(q2 / q1 - 1.0) < 0.05);
    }
}

TEST_CASE("smoothing numerator is nondecreasing in the window") {
    auto run = smoothing_run();
    const auto u = propagate(kFlat, run.u0, flat_exact(2.0, 257));
    double last = 0.0;
    for (std::size_t k : {33u, 65u, 129u, 257u}) {
        const double n = smoothing_numerator(head(u, k), 0.0);
        CHECK(n >= last);
        last = n;
    }
}

TEST_CASE("inhomogeneous check: zero source, flat reference, time translation") {
    const Grid gx = Grid::with_step(-64.0, 64.0, 1.0 / 16.0);
    const Grid gt{0.0, 1.0 / 64.0, 129};
    auto f = separable_source(gx, gt, 1.0);

    SpaceTimeField zero(gx, gt);
    const auto z = inhomogeneous_smoothing_check(kFlat, zero);
    CHECK(z.numerator == 0.0);

    RunOptions cn;
    const auto q_cn = inhomogeneous_smoothing_check(kFlat, f, cn);
    const auto q_ex = inhomogeneous_smoothing_check(kFlat, f, flat_exact());
    CHECK(std::abs(q_cn.quotient / q_ex.quotient - 1.0) < 0.25);

    SpaceTimeField later = separable_source(gx, Grid{3.7, gt.h, gt.n}, 1.0);
    const auto q_later = inhomogeneous_smoothing_check(kFlat, later, cn);
    CHECK(std::abs(q_later.quotient / q_cn.quotient - 1.0) < 1e-6);

    SpaceTimeField edge = f;
    edge(0, 10) = 1.0;
    CHECK_THROWS_AS(inhomogeneous_smoothing_check(kFlat, edge, cn), std::invalid_argument);
    SpaceTimeField open = separable_source(gx, gt, 4.0);
    CHECK_THROWS_AS(inhomogeneous_smoothing_check(kFlat, open, cn), std::invalid_argument);
}

TEST_CASE("Strichartz admissibility") {
    CHECK_NOTHROW(check_strichartz_pair(8.0, 4.0, false));
    CHECK_NOTHROW(check_strichartz_pair(6.0, 6.0, false));
    CHECK_THROWS_AS(check_strichartz_pair(4.0, INFINITY, false), std::invalid_argument);
    CHECK_NOTHROW(check_strichartz_pair(4.0, INFINITY, true));
    CHECK_THROWS_AS(check_strichartz_pair(6.0, 3.0, false), std::invalid_argument);
    CHECK_THROWS_AS(check_strichartz_pair(2.0, INFINITY, true), std::invalid_argument);
}

TEST_CASE("flat Strichartz quotient for the Gaussian") {
    auto run = strichartz_run(50.0, true);
    const auto q = strichartz_quotient(kFlat, run.u0, 8.0, 4.0, run.opt);
    CHECK(std::abs(q.quotient / strichartz_gaussian_oracle(50.0, 1.0) - 1.0) < 0.02);
    CHECK(q.quotient == doctest::Approx(q.numerator / q.denominator));
    // Homogeneity.
    const auto q2 = strichartz_quotient(kFlat, scaled(run.u0, 3.0), 8.0, 4.0, run.opt);
    CHECK(std::abs(q2.quotient / q.quotient - 1.0) < 1e-12);
}

TEST_CASE("maximal quotient: flat CN run against the calibration, homogeneity, range") {
    const auto cal = load_calibration();
    auto run = smoothing_run();
    const auto q = maximal_quotient(kFlat, run.u0, 0.25, run.opt);
    CHECK(std::abs(q.quotient / cal.at("maximal.s0.25") - 1.0) < 0.25);
    const auto ex = flat_exact();
    const double q1 = maximal_quotient(kFlat, run.u0, 0.0, ex).quotient;
    const double q2 = maximal_quotient(kFlat, scaled(run.u0, 0.5), 0.0, ex).quotient;
    CHECK(std::abs(q2 / q1 - 1.0) < 1e-12);
    CHECK_THROWS_AS(maximal_quotient(kFlat, run.u0, -0.75, ex), std::invalid_argument);
    CHECK_THROWS_AS(maximal_quotient(kFlat, run.u0, 1.0, ex), std::invalid_argument);
    const auto rough = maximal_quotient(kSteps14, run.u0, 0.25, run.opt);
    CHECK(std::isfinite(rough.quotient));
    CHECK(rough.quotient / cal.at("maximal.s0.25") < 4.0);
}

TEST_CASE("uniformity sweep is deterministic and reports its spread") {
    FamilySpec fam;
    fam.n_jumps = {1, 4};
    fam.tv_targets = {1.0, 2.0};
    auto run = smoothing_run(1.0 / 16.0);
    auto a = uniformity_sweep(fam, EstimateKind::smoothing, {}, run.u0, run.opt);
    auto b = uniformity_sweep(fam, EstimateKind::smoothing, {}, run.u0, run.opt);
    REQUIRE(a.rows.size() == 4);
    double lo = INFINITY, hi = 0.0;
    for (std::size_t i = 0; i < a.rows.size(); ++i) {
        CHECK(a.rows[i].report.quotient == b.rows[i].report.quotient);
        CHECK(a.rows[i].n_jumps == b.rows[i].n_jumps);
        lo = std::min(lo, a.rows[i].report.quotient);
        hi = std::max(hi, a.rows[i].report.quotient);
    }
    CHECK(a.rows[0].n_jumps == 1);
    CHECK(a.rows[0].tv_target == 1.0);
    CHECK(a.spread == doctest::Approx(hi / lo));
}

TEST_CASE("commutator vanishes for g constant in x") {
    const Grid gx = Grid::with_step(-16.0, 16.0, 1.0 / 32.0), gt{0.0, 0.125, 9};
    SpaceTimeField g(gx, gt), f(gx, gt);
    const auto b = unit_bump(gx, 0.0, 0.2);
    for (std::size_t k = 0; k < gt.n; ++k)
        for (std::size_t i = 0; i < gx.n; ++i) {
            g(i, k) = 2.0 + std::sin(gt.at(k));
            f(i, k) = b.v[i] * (1.0 + gt.at(k));
        }
    for (int j : {0, 2, 3}) CHECK(commutator_norm(g, f, j, INFINITY, INFINITY, 2.0).norm < 1e-12);
    CHECK_THROWS_AS(commutator_norm(g, f, 2, INFINITY, 4.0, 2.0), std::invalid_argument);
}

TEST_CASE("commutator with time-independent g matches the 1-D commutator") {
    // g = g(x), f = f1(x) phi(t): ||h||_{L^1_x L^2_t} = ||phi||_{L^2} ||[Delta_j, g] f1||_{L^1}.
    const Grid gx = Grid::with_step(-32.0, 32.0, 1.0 / 64.0), gt{0.0, 1.0 / 16.0, 17};
    const auto g1 = GridFunction::sample(gx, [](double x) { return 20.0 * std::sin(x / 20.0); });
    const auto f1 = unit_bump(gx, 1.0, 0.3);
    SpaceTimeField g(gx, gt), f(gx, gt);
    std::vector<cplx> phi(gt.n);
    for (std::size_t k = 0; k < gt.n; ++k) {
        phi[k] = std::cos(gt.at(k));
        for (std::size_t i = 0; i < gx.n; ++i) {
            g(i, k) = g1.v[i];
            f(i, k) = f1.v[i] * phi[k];
        }
    }
    for (int j : {1, 3}) {
        GridFunction gf = f1;
        for (std::size_t i = 0; i < gx.n; ++i) gf.v[i] = g1.v[i] * f1.v[i];
        auto lhs = lp_project(gf, j), rhs = lp_project(f1, j);
        std::vector<cplx> h(gx.n);
        for (std::size_t i = 0; i < gx.n; ++i) h[i] = lhs.v[i] - g1.v[i] * rhs.v[i];
        const double oracle = lp_norm(phi, gt.h, 2.0) * lp_norm(h, gx.h, 1.0);
        const auto c = commutator_norm(g, f, j, INFINITY, INFINITY, 2.0);
        CHECK(std::abs(c.norm / oracle - 1.0) < 1e-10);
        CHECK(c.norm <= c.bound);
    }
}
