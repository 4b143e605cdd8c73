#include "doctest.h"

#include <cmath>
#include <numbers>

#include "bvlab/estimates.hpp"
#include "bvlab/heat_lp.hpp"
#include "bvlab/resolvent.hpp"

using namespace bvlab;

namespace {

constexpr double kPi = std::numbers::pi;
const StepCoefficient kFlat = StepCoefficient::constant(1.0);
const StepCoefficient kSteps14({0.0}, {1.0, 4.0});

const Grid kBox{-8.0, 0.01, 1601};

double flat_kernel(double x, double y, double t) {
    return std::exp(-(x - y) * (x - y) / (4.0 * t)) / std::sqrt(4.0 * kPi * t);
}

double sum_real(const GridFunction& f) {
    double s = 0.0;
    for (auto z : f.v) s += z.real();
    return s * f.grid.h;
}

double sup_gap(const GridFunction& a, const GridFunction& b) {
    double d = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
    return d;
}

GridFunction periodic_mode(const Grid& g, double xi) {
    return GridFunction::sample(g, [xi](double x) { return std::exp(cplx(0.0, xi * x)); }, true);
}

}  // namespace

TEST_CASE("heat flow of a narrow bump follows the flat kernel") {
    auto op = build_divergence_operator(kFlat, kBox, Boundary::dirichlet);
    const auto f = unit_bump(kBox, 0.0, 0.02);
    const double t = 0.5;
    auto u = heat_apply(op, f, t);
    auto exact = GridFunction::sample(kBox, [t](double x) { return flat_kernel(x, 0.0, t); });
    CHECK(sup_gap(u, exact) < 1e-4);
    CHECK(std::abs(sum_real(u) - sum_real(f)) < 1e-8);
    CHECK_THROWS_AS(heat_apply(op, f, 0.0), std::invalid_argument);
}

TEST_CASE("heat semigroup composes") {
    auto op = build_divergence_operator(kSteps14, kBox, Boundary::dirichlet);
    const auto f = wave_packet(kBox, 2.0, 0.7, -1.0);
    const HeatOptions eig{HeatMethod::eigen};
    auto once = heat_apply(op, f, 0.2, eig);
    auto twice = heat_apply(op, heat_apply(op, f, 0.1, eig), 0.1, eig);
    CHECK(sup_gap(once, twice) < 1e-8);
}

TEST_CASE("implicit Euler heat stays nonnegative and close to the exact flow") {
    auto op = build_divergence_operator(kSteps14, kBox, Boundary::dirichlet);
    const auto f = unit_bump(kBox, -0.5, 0.3);
    auto ie = heat_apply(op, f, 0.05, {HeatMethod::implicit_euler, 64});
    auto ex = heat_apply(op, f, 0.05, {HeatMethod::eigen});
    double lo = 0.0, peak = 0.0;
    for (auto z : ie.v) lo = std::min(lo, z.real()), peak = std::max(peak, z.real());
    CHECK(lo >= -1e-10);
    CHECK(sup_gap(ie, ex) < 2e-2 * peak);
}

TEST_CASE("flat kernel matrix: closed form, symmetry, row mass") {
    auto op = build_divergence_operator(kFlat, kBox, Boundary::dirichlet);
    const double t = 0.1;
    auto K = kernel_matrix(op, t);
    double gap = 0.0, worst_mass = 0.0, lo = 0.0;
    for (std::size_t i = 0; i < kBox.n; ++i) {
        const double x = kBox.at(i);
        double row = 0.0;
        for (std::size_t j = 0; j < kBox.n; ++j) {
            // The Dirichlet edges pin the kernel to zero; compare inside.
            if (std::abs(x) < 6.0 && std::abs(kBox.at(j)) < 6.0)
                gap = std::max(gap, std::abs(K.K(i, j) - flat_kernel(x, kBox.at(j), t)));
            row += K.K(i, j) * kBox.h;
            lo = std::min(lo, K.K(i, j));
        }
        if (std::abs(x) < 5.0) worst_mass = std::max(worst_mass, std::abs(row - 1.0));
    }
    CHECK(gap < 1e-4);
    CHECK((K.K - K.K.transpose()).cwiseAbs().maxCoeff() <= 1e-8);
    CHECK(lo > -1e-10);
    CHECK(worst_mass < 1e-6);
}

TEST_CASE("kernel matrix enforces its size guard") {
    const Grid g = Grid::spanning(-1.0, 1.0, kKernelGuard + 1);
    auto op = build_divergence_operator(kFlat, g, Boundary::dirichlet);
    CHECK_THROWS_AS(kernel_matrix(op, 0.1), std::invalid_argument);
}

TEST_CASE("two-step kernel keeps Gaussian tails with the local speed") {
    // log K(x, y, t) ~ -|x-y|^2 / (4 a t) on each side, away from the jump.
    auto op = build_divergence_operator(kSteps14, kBox, Boundary::dirichlet);
    const double t = 0.05;
    auto K = kernel_matrix(op, t);
    for (double y : {-4.0, 4.0}) {
        const double a_loc = y < 0.0 ? 1.0 : 4.0;
        const auto jy = static_cast<std::size_t>(std::lround((y - kBox.x0) / kBox.h));
        std::vector<double> z, lk;
        for (std::size_t i = 0; i < kBox.n; ++i) {
            const double d = kBox.at(i) - y;
            if (std::abs(d) > 0.1 && std::abs(d) < 6.0 * std::sqrt(a_loc * t) && std::abs(kBox.at(i)) > 1.0) {
                z.push_back(d * d / t);
                lk.push_back(std::log(K.K(i, jy)));
            }
        }
        const double slope = ls_slope(z, lk);
        CHECK(std::abs(slope / (-1.0 / (4.0 * a_loc)) - 1.0) < 0.2);
    }
}

TEST_CASE("Gaussian fit: flat constants and self-similarity") {
    auto op = build_divergence_operator(kFlat, kBox, Boundary::dirichlet);
    std::vector<double> cs;
    for (double t : {0.01, 1.0}) {
        auto fit = gaussian_fit(kernel_matrix(op, t).K, kBox, t, KernelShape::value);
        CHECK(std::abs(fit.C_fit / (1.0 / std::sqrt(4.0 * kPi)) - 1.0) < 0.02);
        CHECK(std::abs(fit.c_fit / 0.25 - 1.0) < 0.02);
        CHECK(fit.samples > 0);
        cs.push_back(fit.c_fit);
    }
    CHECK(std::abs(cs[1] / cs[0] - 1.0) < 0.1);
}

TEST_CASE("Gaussian fit: steps (1, 4) in all three shapes") {
    auto op = build_divergence_operator(kSteps14, kBox, Boundary::dirichlet);
    const double t = 0.1;
    auto K = kernel_matrix(op, t);
    for (auto shape : {KernelShape::value, KernelShape::gradient, KernelShape::generator}) {
        auto fit = gaussian_fit(shaped_kernel(op, K, shape), kBox, t, shape);
        CHECK(fit.power == shape_power(shape));
        CHECK(fit.c_fit > 0.0);
        CHECK(fit.C_envelope >= fit.C_fit);
        if (shape == KernelShape::value) CHECK(fit.c_fit >= 0.9 / 16.0);
    }
}

TEST_CASE("A-band projector on flat periodic modes") {
    const std::size_t n = 1024;
    const Grid g{0.0, 2.0 * kPi / n, n};
    auto op = build_divergence_operator(kFlat, g, Boundary::periodic);
    for (int j : {1, 3}) {
        const double xi = std::ldexp(1.0, j);
        const auto f = periodic_mode(g, xi);
        auto p = lp_A_project(op, f, j);
        for (std::size_t i = 0; i < n; i += 97) CHECK(std::abs(p[i] - std::exp(-1.0) * f[i]) < 1e-6);
    }
    const auto one = GridFunction::sample(g, [](double) { return 1.0; }, true);
    double worst = 0.0;
    for (auto z : lp_A_project(op, one, 2).v) worst = std::max(worst, std::abs(z));
    CHECK(worst < 1e-10);
}

TEST_CASE("A-band projectors sum to f / ln 4") {
    // sum_j mu_j e^{-mu_j} over mu_j = 4^{-j} lambda is 1 / ln 4 up to a log-periodic
    // ripple of relative size 2 |Gamma(1 + 2 pi i / ln 4)| < 0.009.
    const std::size_t n = 1024;
    const Grid g{-32.0, 64.0 / n, n};
    auto op = build_divergence_operator(kFlat, g, Boundary::periodic);
    auto f = wave_packet(g, 3.0, 1.0, 0.0);
    f.periodic = true;
    GridFunction sum(g, true);
    for (int j = -8; j <= 12; ++j) {
        auto p = lp_A_project(op, f, j);
        for (std::size_t i = 0; i < n; ++i) sum[i] += p[i];
    }
    std::vector<cplx> d(n);
    for (std::size_t i = 0; i < n; ++i) d[i] = sum[i] - f[i] / std::log(4.0);
    CHECK(lp_norm(d, g.h, 2.0, true) < 0.012 * lp_norm(f, 2.0) / std::log(4.0));
}

TEST_CASE("off-diagonal decay") {
    const Grid g{-12.0, 1.0 / 64.0, 1537};
    const LittlewoodPaleyBank bank;
    const auto probes = band_probes(g, 1, 0.0, 5, bank);
    auto flat = build_divergence_operator(kFlat, g, Boundary::dirichlet);
    const double same = offdiagonal_decay(flat, bank, 1, 1, 2.0, probes);
    CHECK(same > 0.05);
    CHECK(same < 1.0);
    const double far = offdiagonal_decay(flat, bank, 5, 1, 2.0, probes);
    CHECK(far <= std::pow(2.0, -4) * same * 4.0);
    auto prof = offdiagonal_profile(flat, bank, 1, 4, 2.0, probes);
    CHECK(prof.ratio.size() == 5);
    CHECK(prof.ratio[0] == doctest::Approx(same));
    CHECK(std::abs(prof.slope + 1.0) <= 0.3);
    auto rough = build_divergence_operator(StepCoefficient({0.0}, {0.5, 2.0}), g, Boundary::dirichlet);
    CHECK(std::abs(offdiagonal_profile(rough, bank, 1, 4, 2.0, probes).slope + 1.0) <= 0.3);
}
