#include "doctest.h"

#include <cmath>
#include <limits>
#include <numbers>

#include "bvlab/acceptance.hpp"
#include "bvlab/coefficients.hpp"
#include "bvlab/fields_norms.hpp"

using namespace bvlab;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kInf = std::numeric_limits<double>::infinity();

GridFunction mode(const Grid& g, double xi, bool periodic) {
    return GridFunction::sample(g, [xi](double x) { return std::exp(cplx(0.0, xi * x)); }, periodic);
}

double max_gap(const GridFunction& a, const GridFunction& b) {
    double d = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
    return d;
}

double l2_gap(const GridFunction& a, const GridFunction& b) {
    std::vector<cplx> d(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) d[i] = a[i] - b[i];
    return lp_norm(d, a.grid.h, 2.0, a.periodic);
}

// Periodic box of length 2 pi R with n points; xi_k = k / R.
Grid periodic_box(double R, std::size_t n) { return Grid{-kPi * R, 2.0 * kPi * R / static_cast<double>(n), n}; }

}  // namespace

TEST_CASE("band projector on pure modes") {
    const Grid g = periodic_box(64.0, 4096);
    for (int j : {-2, 0, 2}) {
        const double in = 1.5 * std::ldexp(1.0, j), out = 0.1 * std::ldexp(1.0, j);
        // Round to the box's frequency lattice k / 64; both stay in their zones.
        const double xi_in = std::round(in * 64.0) / 64.0, xi_out = std::round(out * 64.0) / 64.0;
        auto f = mode(g, xi_in, true);
        CHECK(max_gap(lp_project(f, j), f) < 1e-10);
        auto z = lp_project(mode(g, xi_out, true), j);
        double m = 0.0;
        for (auto v : z.v) m = std::max(m, std::abs(v));
        CHECK(m < 1e-10);
    }
}

TEST_CASE("band projector rejects bands above Nyquist") {
    const Grid g = Grid::with_step(-4.0, 4.0, 0.1);
    auto f = mode(g, 1.0, false);
    CHECK_THROWS_AS(lp_project(f, LittlewoodPaleyBank::finest_resolved(g.h) + 1), std::invalid_argument);
}

TEST_CASE("telescoped bands reproduce the high-pass part of a periodic Gaussian") {
    // Oracle: direct Fourier-series sum of the low-pass remainder, exact for
    // the periodized Gaussian whose coefficients are known in closed form.
    const double R = 64.0;
    const Grid g = periodic_box(R, 8192);
    const double L = g.period();
    auto f = GridFunction::sample(g, [](double x) { return std::exp(-0.5 * x * x); }, true);
    const int a = -3;
    const int top = LittlewoodPaleyBank::finest_resolved(g.h);
    GridFunction sum(g, true);
    for (int j = a; j <= top; ++j) {
        auto p = lp_project(f, j);
        for (std::size_t i = 0; i < g.n; ++i) sum[i] += p[i];
    }
    GridFunction expected = f;
    const int kmax = static_cast<int>(std::ceil(1.5 * std::ldexp(1.0, a) * R)) + 1;
    for (std::size_t i = 0; i < g.n; ++i) {
        cplx low = 0.0;
        for (int k = -kmax; k <= kmax; ++k) {
            const double xi = k / R;
            low += LittlewoodPaleyBank::mother(std::ldexp(xi, -a)) * std::sqrt(2.0 * kPi) * std::exp(-0.5 * xi * xi) / L *
                   std::exp(cplx(0.0, xi * g.at(i)));
        }
        expected[i] -= low;
    }
    CHECK(l2_gap(sum, expected) <= 1e-8 * lp_norm(f, 2.0));
}

TEST_CASE("bands two apart are orthogonal") {
    const Grid g = periodic_box(16.0, 2048);
    auto f = GridFunction::sample(g, [](double x) { return std::exp(-x * x) * std::cos(3.0 * x); }, true);
    for (int j = -2; j + 2 <= LittlewoodPaleyBank::finest_resolved(g.h); ++j) {
        auto jj = lp_project(lp_project(f, j), j + 2);
        CHECK(lp_norm(jj, 2.0) < 1e-14 * lp_norm(f, 2.0));
    }
}

TEST_CASE("besov norm basics") {
    const Grid g = periodic_box(64.0, 1024);
    CHECK(besov_norm(GridFunction(g, true), 0.0, 2.0, 2.0) == 0.0);
    // 3.9375 = 252 / 64 sits on the plateau of band 1.
    auto f = mode(g, 3.9375, true);
    CHECK(std::abs(besov_norm(f, 0.0, 2.0, 2.0) - lp_norm(f, 2.0)) < 1e-8);
}

TEST_CASE("besov norm scales like a half derivative") {
    const Grid g = Grid::with_step(-32.0, 32.0, 1.0 / 32.0);
    auto f = GridFunction::sample(g, [](double x) { return std::exp(-0.5 * x * x) * std::cos(2.0 * x); });
    auto f2 = GridFunction::sample(g, [](double x) { return std::exp(-2.0 * x * x) * std::cos(4.0 * x); });
    const double ratio = besov_norm(f2, 0.5, kInf, 2.0) / besov_norm(f, 0.5, kInf, 2.0);
    CHECK(std::abs(ratio / std::sqrt(2.0) - 1.0) < 0.05);
}

TEST_CASE("mixed norms of constant and separable fields") {
    const Grid x = Grid::spanning(0.0, 1.0, 33), t = Grid::spanning(0.0, 1.0, 17);
    SpaceTimeField one(x, t);
    for (auto& v : one.values) v = 1.0;
    for (double p : {1.0, 2.0, 4.0, kInf})
        for (double q : {1.0, 3.0, kInf}) {
            CHECK(mixed_norm(one, {Outer::x, p, q, {}}) == doctest::Approx(1.0).epsilon(1e-14));
            CHECK(mixed_norm(one, {Outer::t, p, q, {}}) == doctest::Approx(1.0).epsilon(1e-14));
        }
    const Grid xs = Grid::spanning(-3.0, 3.0, 241), ts = Grid::spanning(0.0, 2.0, 81);
    auto fx = [](double y) { return std::exp(-y * y) * (1.0 + 0.3 * y); };
    auto gt = [](double s) { return 1.0 + std::sin(s); };
    SpaceTimeField u(xs, ts);
    std::vector<cplx> fv(xs.n), gv(ts.n);
    for (std::size_t i = 0; i < xs.n; ++i) fv[i] = fx(xs.at(i));
    for (std::size_t k = 0; k < ts.n; ++k) gv[k] = gt(ts.at(k));
    for (std::size_t k = 0; k < ts.n; ++k)
        for (std::size_t i = 0; i < xs.n; ++i) u(i, k) = fv[i] * gv[k];
    for (double p : {1.0, 4.0, kInf})
        for (double q : {2.0, 8.0}) {
            const double prod = lp_norm(fv, xs.h, p) * lp_norm(gv, ts.h, q);
            CHECK(std::abs(mixed_norm(u, {Outer::x, p, q, {}}) / prod - 1.0) < 1e-8);
            const double prod_t = lp_norm(gv, ts.h, p) * lp_norm(fv, xs.h, q);
            CHECK(std::abs(mixed_norm(u, {Outer::t, p, q, {}}) / prod_t - 1.0) < 1e-8);
        }
}

TEST_CASE("mixed norms are homogeneous and monotone in |u|") {
    const Grid x = Grid::with_step(-8.0, 8.0, 1.0 / 16.0), t = Grid::spanning(0.0, 1.0, 9);
    SpaceTimeField u(x, t), w(x, t), two(x, t);
    for (std::size_t k = 0; k < t.n; ++k)
        for (std::size_t i = 0; i < x.n; ++i) {
            const double y = x.at(i), s = t.at(k);
            u(i, k) = std::exp(-y * y) * std::exp(cplx(0.0, 2.0 * y + s));
            w(i, k) = u(i, k) * (1.5 + std::cos(y));
            two(i, k) = 2.0 * u(i, k);
        }
    const MixedNormSpec specs[] = {{Outer::x, kInf, 2.0, {}},
                                   {Outer::t, 8.0, 4.0, {}},
                                   {Outer::x, kInf, 2.0, BesovWeight{0.5, 2.0, {}}}};
    for (const auto& s : specs) CHECK(mixed_norm(two, s) == 2.0 * mixed_norm(u, s));
    CHECK(mixed_norm(u, specs[0]) <= mixed_norm(w, specs[0]));
    CHECK(mixed_norm(u, specs[1]) <= mixed_norm(w, specs[1]));
}

TEST_CASE("flat Gaussian L8 L4 norm against the closed form") {
    // |u(t, x)| for i u_t + u_xx / 2 = 0 from e^{-x^2/2} / pi^{1/4}.
    const double T = 50.0;
    const Grid x = Grid::with_step(-400.0, 400.0, 0.25), t = Grid::spanning(0.0, T, 1001);
    SpaceTimeField u(x, t);
    for (std::size_t k = 0; k < t.n; ++k) {
        const double s = 1.0 + t.at(k) * t.at(k);
        for (std::size_t i = 0; i < x.n; ++i)
            u(i, k) = std::pow(kPi, -0.25) * std::pow(s, -0.25) * std::exp(-x.at(i) * x.at(i) / (2.0 * s));
    }
    const double q = std::pow(2.0, 1.0 / 8.0) * mixed_norm(u, {Outer::t, 8.0, 4.0, {}});
    CHECK(std::abs(q / strichartz_gaussian_oracle(T, 0.5) - 1.0) < 1e-3);
    CHECK(std::abs(q / 0.917 - 1.0) < 0.02);
}

TEST_CASE("fractional derivatives") {
    const Grid g = periodic_box(32.0, 2048);
    auto f = mode(g, 2.5, true);
    CHECK(max_gap(fractional_derivative(f, 0.0), f) < 1e-12);
    for (double s : {0.5, 1.0, 1.7}) {
        auto d = fractional_derivative(f, s);
        GridFunction e = f;
        for (auto& v : e.v) v *= std::pow(2.5, s);
        CHECK(max_gap(d, e) < 1e-9);
    }
    const Grid h = periodic_box(8.0, 2048);
    auto gauss = GridFunction::sample(h, [](double x) { return std::exp(-0.5 * x * x); }, true);
    // ||x e^{-x^2/2}||_2 = (sqrt(pi) / 2)^{1/2}.
    const double exact = std::sqrt(std::sqrt(kPi) / 2.0);
    CHECK(std::abs(lp_norm(fractional_derivative(gauss, 1.0), 2.0) - exact) < 1e-8);
    CHECK(std::abs(lp_norm(spectral_derivative(gauss), 2.0) - exact) < 1e-8);
}

TEST_CASE("composition with diffeomorphisms") {
    const Grid g = Grid::spanning(-2.0, 2.0, 4001);
    auto plateau = GridFunction::sample(
        g, [](double x) { return 0.5 * (std::tanh(x / 0.05) - std::tanh((x - 1.0) / 0.05)); });
    auto id = build_diffeomorphism(SampledCoefficient(g, std::vector<double>(g.n, 1.0)));
    CHECK(max_gap(compose_with_diffeo(plateau, id), plateau) < 1e-8);
    auto twice = build_diffeomorphism(SampledCoefficient(g, std::vector<double>(g.n, 2.0)));
    auto stretched = compose_with_diffeo(plateau, twice);
    CHECK(std::abs(lp_norm(stretched, 1.0) / lp_norm(plateau, 1.0) - 2.0) < 1e-6);
}

TEST_CASE("besov norms are equivalent across a two-speed diffeomorphism") {
    const Grid g = Grid::with_step(-16.0, 16.0, 1.0 / 64.0);
    auto w = mollify(StepCoefficient({0.0}, {1.0, 2.0}), 0.5, g);
    auto d = build_diffeomorphism(w);
    for (double xi : {2.0, 6.0}) {
        auto f = GridFunction::sample(g, [xi](double x) { return std::exp(-x * x / 2.0) * std::cos(xi * x); });
        auto fo = compose_with_diffeo(f, d);
        const double ratio = besov_norm(fo, 0.5, 4.0, 2.0) / besov_norm(f, 0.5, 4.0, 2.0);
        CHECK(ratio > 0.25);
        CHECK(ratio < 4.0);
    }
}
