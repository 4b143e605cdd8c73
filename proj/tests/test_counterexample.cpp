#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "bvlab/counterexample.hpp"
#include "bvlab/heat_lp.hpp"

using namespace bvlab;

namespace {

constexpr double kPi = std::numbers::pi;

double spread(const std::vector<double>& v) {
    auto [lo, hi] = std::minmax_element(v.begin(), v.end());
    return *hi / *lo;
}

const FloquetSolution& resonant() {
    static const FloquetSolution f = floquet_mode(named_hill_profile("resonant"));
    return f;
}

}  // namespace

TEST_CASE("monodromy of the constant profile is the identity") {
    auto m = monodromy(named_hill_profile("constant"));
    CHECK((m.monodromy - Eigen::Matrix2d::Identity()).cwiseAbs().maxCoeff() < 1e-8);
    CHECK(m.trace == doctest::Approx(2.0).epsilon(1e-10));
    CHECK_THROWS(floquet_mode(named_hill_profile("constant")));
}

TEST_CASE("named profiles: Wronskian, instability, validation") {
    for (const auto& name : hill_profile_names()) {
        const auto a = named_hill_profile(name);
        CHECK_NOTHROW(a.validate());
        CHECK(a.deviation() <= 1.0);
        CHECK(a(0.0) == doctest::Approx(4.0 * kPi * kPi));
        CHECK(std::abs(monodromy(a).det - 1.0) < 1e-10);
    }
    // The natural frequency is 2 pi, so the primary parametric resonance needs
    // the cos 4 pi x harmonic; cos 2 pi x only reaches the O(delta^2) second tongue,
    // which the flat zones close.
    CHECK(std::abs(monodromy(named_hill_profile("resonant")).trace) > 2.0);
    CHECK(std::abs(monodromy(named_hill_profile("cosine")).trace) <= 2.0);
    CHECK_THROWS(floquet_mode(named_hill_profile("cosine")));
    HillCoefficient bad = named_hill_profile("resonant");
    bad.delta = 1.5;
    CHECK_THROWS(bad.validate());
    bad = named_hill_profile("resonant");
    bad.flat = 0.1;
    CHECK_THROWS(bad.validate());
}

TEST_CASE("Floquet exponent is the log of the spectral radius") {
    const auto& f = resonant();
    const double tr = f.trace;
    const double rho = (std::abs(tr) + std::sqrt(tr * tr - 4.0)) / 2.0;
    CHECK(f.kappa > 0.0);
    CHECK(std::abs(f.kappa - std::log(rho)) < 1e-10);
    CHECK(std::abs(std::abs(f.contracting) - 1.0 / rho) < 1e-10);
}

TEST_CASE("decaying mode: periodic part, gluing, norm") {
    const auto& f = resonant();
    double pmax = 0.0, pgap = 0.0;
    for (int i = 0; i < 512; ++i) {
        const double x = i / 512.0;
        for (double base : {0.0, 3.0, -4.0}) {
            const double y = base + (base < 0 ? -x : x);
            const double next = y + (base < 0 ? -1.0 : 1.0);
            pmax = std::max(pmax, std::abs(f.periodic_part(y)));
            pgap = std::max(pgap, std::abs(f.periodic_part(next) - f.periodic_part(y)));
        }
    }
    CHECK(pgap <= 1e-6 * pmax);
    const double e = 1e-12;
    CHECK(std::abs(f.w(e) - f.w(-e)) < 1e-8);
    CHECK(std::abs(f.dw(e) - f.dw(-e)) < 1e-8);
    // ||w||_2 = 1; the tail beyond 600 periods is below e^{-2 kappa 600}.
    const double h = 1.0 / 64.0;
    double m = 0.0;
    for (double x = -600.0; x <= 600.0; x += h) m += f.w(x) * f.w(x);
    CHECK(std::abs(m * h - 1.0) < 1e-6);
}

TEST_CASE("decaying mode solves the Hill equation") {
    // Fourth-order difference of w' at the RK4 nodes, over five periods.
    const auto& f = resonant();
    const double h = 1.0 / f.steps;
    double worst = 0.0, wmax = 0.0;
    for (int i = 2; i < 5 * f.steps; ++i) {
        const double x = i * h;
        const double d2 = (-f.dw(x + 2 * h) + 8 * f.dw(x + h) - 8 * f.dw(x - h) + f.dw(x - 2 * h)) / (12 * h);
        worst = std::max(worst, std::abs(d2 + f.potential(x) * f.w(x)));
        wmax = std::max(wmax, std::abs(f.w(x)));
    }
    CHECK(worst <= 1e-6 * wmax);
}

TEST_CASE("Floquet reconstruction against direct integration over five periods") {
    const auto& f = resonant();
    const int n = 5 * f.steps;
    const double h = 1.0 / f.steps;
    double w = f.w(0.0), dw = f.dw(0.0), worst = 0.0, wmax = 0.0;
    auto acc = [&](double x, double y) { return -f.potential(x) * y; };
    for (int i = 0; i < n; ++i) {
        const double x = i * h;
        const double k1w = dw, k1d = acc(x, w);
        const double k2w = dw + 0.5 * h * k1d, k2d = acc(x + 0.5 * h, w + 0.5 * h * k1w);
        const double k3w = dw + 0.5 * h * k2d, k3d = acc(x + 0.5 * h, w + 0.5 * h * k2w);
        const double k4w = dw + h * k3d, k4d = acc(x + h, w + h * k3w);
        w += h / 6 * (k1w + 2 * k2w + 2 * k3w + k4w);
        dw += h / 6 * (k1d + 2 * k2d + 2 * k3d + k4d);
        worst = std::max(worst, std::abs(w - f.w(x + h)));
        wmax = std::max(wmax, std::abs(w));
    }
    CHECK(worst <= 1e-6 * wmax);
}

TEST_CASE("changed variable") {
    ChangedVariable cv(resonant());
    for (double x : {-2.3, -0.4, 0.0, 0.05, 1.7, 6.2}) {
        CHECK(std::abs(cv.x_of_y(cv.y_of_x(x)) - x) < 1e-9);
        const double d = 1e-5;
        const double dydx = (cv.y_of_x(x + d) - cv.y_of_x(x - d)) / (2 * d);
        CHECK(dydx == doctest::Approx(resonant().potential(x)).epsilon(1e-6));
        CHECK(cv.v(cv.y_of_x(x)) == doctest::Approx(resonant().w(x)).epsilon(1e-9));
    }
}

TEST_CASE("singular metric: supports, lower bound, per-scale norms") {
    SingularMetric beta(resonant(), kMaxScales);
    auto norms = beta.piece_norms(1 << 14);
    REQUIRE(norms.size() == static_cast<std::size_t>(kMaxScales));
    for (std::size_t i = 1; i < norms.size(); ++i) CHECK(norms[i].hi <= norms[i - 1].lo);
    for (const auto& p : norms) {
        CHECK(p.center == std::ldexp(1.0, -p.n));
        CHECK(p.rate == p.n * std::ldexp(1.0, p.n));
    }
    std::vector<double> l1, w11;
    for (const auto& p : norms)
        if (p.n >= 4 && p.n <= 10) {
            l1.push_back(p.l1 / std::ldexp(1.0, -p.n));
            w11.push_back(p.w11 / p.n);
        }
    CHECK(spread(l1) < 3.0);
    CHECK(spread(w11) < 3.0);
    CHECK(beta.minimum(0.0, 0.8, 1e-6) >= 2.0 * kPi - 1e-9);
    // Away from the pieces the background 4 pi is all that is left.
    CHECK(beta(0.9) == doctest::Approx(4.0 * kPi));
    CHECK_THROWS(SingularMetric(resonant(), kMaxScales + 1));
    CHECK_THROWS(SingularMetric(resonant(), 0));
}

TEST_CASE("quasimodes: normalization and support") {
    SingularMetric beta(resonant(), 8);
    for (int k = 3; k <= 6; ++k) {
        auto q = build_quasimode(beta, k, 4096);
        CHECK(std::abs(q.norm - 1.0) < 1e-8);
        CHECK(q.lambda == doctest::Approx(SingularMetric::rate(k)));
        CHECK(q.lo >= std::ldexp(1.0, -k) * std::pow(2.0, -0.5));
        CHECK(q.hi <= std::ldexp(1.0, -k) * std::pow(2.0, 0.5));
        for (std::size_t i = 0; i < q.phi.size(); ++i) {
            const double y = q.phi.grid.at(i);
            if (y <= q.lo || y >= q.hi) CHECK(q.phi[i] == cplx(0.0));
        }
        CHECK(q.residual_h1 >= q.residual_l2);
    }
}

TEST_CASE("blow-up parameters sit below the Sobolev line") {
    CHECK_NOTHROW(check_blowup_params(6.0, 0.2));
    CHECK_THROWS_AS(check_blowup_params(6.0, 1.0 / 3.0), std::invalid_argument);
    CHECK_THROWS_AS(check_blowup_params(2.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(check_blowup_params(6.0, -0.1), std::invalid_argument);
}

TEST_CASE("H^r norms of the quasimodes grow at most like lambda^r") {
    SingularMetric beta(resonant(), 8);
    BlowupOptions opt;
    opt.max_work = 1e5;  // the evolved quotient is not needed here
    auto table = blowup_experiment(beta, 3, 7, 6.0, 0.2, opt);
    REQUIRE(table.rows.size() == 5);
    std::vector<double> ll, lh;
    for (const auto& row : table.rows) {
        ll.push_back(std::log(row.lambda));
        lh.push_back(std::log(row.hr_norm));
        CHECK(row.q_quasi > 0.0);
        CHECK(row.eps == doctest::Approx(1.0 / row.lambda));
        CHECK(row.envelope == doctest::Approx(std::pow(2.0, row.k * 4.0 / 6.0) / std::pow(row.lambda, 0.2)));
    }
    CHECK(ls_slope(ll, lh) <= 0.3);
    CHECK_FALSE(table.feasible);
}
