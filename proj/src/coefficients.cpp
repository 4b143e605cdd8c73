#include "bvlab/coefficients.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>
#include <stdexcept>

namespace bvlab {

namespace {

// Five-point Gauss-Legendre on [-1, 1].
constexpr std::array<double, 5> kGaussX = {-0.9061798459386640, -0.5384693101056831, 0.0,
                                           0.5384693101056831, 0.9061798459386640};
constexpr std::array<double, 5> kGaussW = {0.2369268850561891, 0.4786286704993665, 0.5688888888888889,
                                           0.4786286704993665, 0.2369268850561891};

double raw_bump(double x) {
    if (std::abs(x) >= 1.0) return 0.0;
    return std::exp(-1.0 / (1.0 - x * x));
}

struct MollifierTable {
    static constexpr int K = 2048;
    double norm = 0.0;
    std::vector<double> cdf;  // R at t_k = -1 + 2k/K

    MollifierTable() : cdf(K + 1, 0.0) {
        const double dt = 2.0 / K;
        double acc = 0.0;
        for (int k = 0; k < K; ++k) {
            double a = -1.0 + k * dt, mid = a + 0.5 * dt;
            double s = 0.0;
            for (int q = 0; q < 5; ++q) s += kGaussW[q] * raw_bump(mid + 0.5 * dt * kGaussX[q]);
            acc += 0.5 * dt * s;
            cdf[k + 1] = acc;
        }
        norm = acc;
        for (auto& c : cdf) c /= norm;
        cdf[K] = 1.0;
    }
};

const MollifierTable& table() {
    static const MollifierTable t;
    return t;
}

double cubic_hermite(double t, double y0, double y1, double d0, double d1, double h) {
    double t2 = t * t, t3 = t2 * t;
    return (2 * t3 - 3 * t2 + 1) * y0 + (t3 - 2 * t2 + t) * h * d0 + (-2 * t3 + 3 * t2) * y1 +
           (t3 - t2) * h * d1;
}

double cubic_hermite_slope(double t, double y0, double y1, double d0, double d1, double h) {
    double t2 = t * t;
    return ((6 * t2 - 6 * t) * y0 + (3 * t2 - 4 * t + 1) * h * d0 + (-6 * t2 + 6 * t) * y1 +
            (3 * t2 - 2 * t) * h * d1) /
           h;
}

}  // namespace

// ---------------------------------------------------------------- StepCoefficient

StepCoefficient::StepCoefficient(std::vector<double> bp, std::vector<double> vals, double m_)
    : breakpoints(std::move(bp)), values(std::move(vals)), m(m_) {
    validate();
}

StepCoefficient StepCoefficient::constant(double a) { return StepCoefficient({}, {a}, 0.0); }

void StepCoefficient::validate() const {
    if (values.size() != breakpoints.size() + 1)
        throw std::invalid_argument("StepCoefficient: need one more value than breakpoints");
    for (std::size_t i = 1; i < breakpoints.size(); ++i)
        if (!(breakpoints[i] > breakpoints[i - 1]))
            throw std::invalid_argument("StepCoefficient: breakpoints must be strictly increasing");
    for (double v : values)
        if (!(v > 0.0) || !std::isfinite(v)) throw std::invalid_argument("StepCoefficient: values must be positive");
    if (m > 0.0)
        for (double v : values)
            if (v < m) throw std::invalid_argument("StepCoefficient: value below declared lower bound m");
}

std::size_t StepCoefficient::piece(double x) const {
    return static_cast<std::size_t>(std::upper_bound(breakpoints.begin(), breakpoints.end(), x) -
                                    breakpoints.begin());
}

double StepCoefficient::integral_inverse(double lo, double hi) const {
    if (hi < lo) return -integral_inverse(hi, lo);
    double s = 0.0, x = lo;
    std::size_t k = piece(lo);
    while (x < hi) {
        double end = (k < breakpoints.size()) ? std::min(hi, breakpoints[k]) : hi;
        s += (end - x) / values[k];
        x = end;
        ++k;
    }
    return s;
}

StepCoefficient StepCoefficient::rescaled(double s) const {
    StepCoefficient out = *this;
    for (auto& b : out.breakpoints) b *= s;
    return out;
}

// ------------------------------------------------------------- SampledCoefficient

SampledCoefficient::SampledCoefficient(Grid g, std::vector<double> s, double m_)
    : grid(g), samples(std::move(s)), m(m_) {
    validate();
}

void SampledCoefficient::validate() const {
    if (grid.n < 2 || samples.size() != grid.n) throw std::invalid_argument("SampledCoefficient: need n >= 2 samples");
    if (!(grid.h > 0.0)) throw std::invalid_argument("SampledCoefficient: grid step must be positive");
    for (double v : samples)
        if (!(v > 0.0) || !std::isfinite(v)) throw std::invalid_argument("SampledCoefficient: samples must be positive");
    if (m > 0.0)
        for (double v : samples)
            if (v < m * (1.0 - 1e-12)) throw std::invalid_argument("SampledCoefficient: sample below declared m");
}

double SampledCoefficient::operator()(double x) const {
    double s = (x - grid.x0) / grid.h;
    if (s <= 0.0) return samples.front();
    if (s >= static_cast<double>(grid.n - 1)) return samples.back();
    auto i = static_cast<std::size_t>(s);
    double f = s - static_cast<double>(i);
    return (1.0 - f) * samples[i] + f * samples[i + 1];
}

// --------------------------------------------------------------------- variant

double coefficient_at(const Coefficient& c, double x) {
    return std::visit([x](const auto& a) { return a(x); }, c);
}

double coefficient_min(const Coefficient& c) {
    return std::visit(
        [](const auto& a) {
            if constexpr (std::is_same_v<std::decay_t<decltype(a)>, StepCoefficient>)
                return *std::min_element(a.values.begin(), a.values.end());
            else
                return *std::min_element(a.samples.begin(), a.samples.end());
        },
        c);
}

double coefficient_max(const Coefficient& c) {
    return std::visit(
        [](const auto& a) {
            if constexpr (std::is_same_v<std::decay_t<decltype(a)>, StepCoefficient>)
                return *std::max_element(a.values.begin(), a.values.end());
            else
                return *std::max_element(a.samples.begin(), a.samples.end());
        },
        c);
}

std::pair<double, double> coefficient_active_range(const Coefficient& c) {
    if (auto s = std::get_if<StepCoefficient>(&c)) {
        if (s->breakpoints.empty()) return {0.0, 0.0};
        return {s->breakpoints.front(), s->breakpoints.back()};
    }
    const auto& a = std::get<SampledCoefficient>(c);
    std::size_t lo = 0, hi = a.samples.size() - 1;
    while (lo < hi && a.samples[lo + 1] == a.samples[0]) ++lo;
    while (hi > lo && a.samples[hi - 1] == a.samples.back()) --hi;
    return {a.grid.at(lo), a.grid.at(hi)};
}

std::string describe(const Coefficient& c) {
    std::ostringstream os;
    if (auto s = std::get_if<StepCoefficient>(&c)) {
        if (s->breakpoints.empty())
            os << "constant(" << s->values[0] << ")";
        else
            os << "step(" << s->jumps() << " jumps)";
    } else {
        const auto& a = std::get<SampledCoefficient>(c);
        os << "sampled(n=" << a.grid.n << ", h=" << a.grid.h << ")";
    }
    return os.str();
}

std::vector<double> half_point_values(const Coefficient& c, const Grid& g) {
    std::vector<double> a(g.n - 1);
    if (auto s = std::get_if<StepCoefficient>(&c)) {
        for (std::size_t i = 0; i + 1 < g.n; ++i) a[i] = g.h / s->integral_inverse(g.at(i), g.at(i + 1));
    } else {
        const auto& sc = std::get<SampledCoefficient>(c);
        for (std::size_t i = 0; i + 1 < g.n; ++i) a[i] = sc(g.at(i) + 0.5 * g.h);
    }
    return a;
}

void require_resolved(const Coefficient& c, const Grid& g, double min_cells) {
    auto s = std::get_if<StepCoefficient>(&c);
    if (!s) return;
    const auto& bp = s->breakpoints;
    for (std::size_t i = 1; i < bp.size(); ++i) {
        if (bp[i] < g.x0 || bp[i - 1] > g.back()) continue;
        if (bp[i] - bp[i - 1] < min_cells * g.h)
            throw std::invalid_argument("coefficient under-resolved: piece of length " +
                                        std::to_string(bp[i] - bp[i - 1]) + " spans fewer than " +
                                        std::to_string(min_cells) + " grid cells");
    }
}

// ---------------------------------------------------------------- BV quantities

double total_variation(const StepCoefficient& c) {
    double tv = 0.0;
    for (std::size_t i = 1; i < c.values.size(); ++i) tv += std::abs(c.values[i] - c.values[i - 1]);
    return tv;
}

double total_variation(const SampledCoefficient& c) {
    double tv = 0.0;
    for (std::size_t i = 1; i < c.samples.size(); ++i) tv += std::abs(c.samples[i] - c.samples[i - 1]);
    return tv;
}

double total_variation(const Coefficient& c) {
    return std::visit([](const auto& a) { return total_variation(a); }, c);
}

AdmissibilityReport check_admissible(const Coefficient& c, double m) {
    AdmissibilityReport r;
    r.m = coefficient_min(c);
    r.M = coefficient_max(c);
    r.tv = total_variation(c);
    r.bv_norm = r.M + r.tv;
    r.admissible = (r.m >= m) && std::isfinite(r.tv);
    return r;
}

// ------------------------------------------------------------------ mollifier

double mollifier(double x) { return raw_bump(x) / table().norm; }

double mollifier_cdf(double t) {
    if (t <= -1.0) return 0.0;
    if (t >= 1.0) return 1.0;
    const auto& tb = table();
    const double dt = 2.0 / MollifierTable::K;
    double s = (t + 1.0) / dt;
    int k = std::min(static_cast<int>(s), MollifierTable::K - 1);
    double f = s - k;
    double x0 = -1.0 + k * dt;
    return cubic_hermite(f, tb.cdf[k], tb.cdf[k + 1], mollifier(x0), mollifier(x0 + dt), dt);
}

SampledCoefficient mollify(const StepCoefficient& c, double eps, const Grid& grid) {
    if (!(eps > 0.0)) throw std::invalid_argument("mollify: width must be positive");
    if (eps < grid.h) throw std::invalid_argument("mollify: width below grid step (under-resolved mollifier)");
    c.validate();
    std::vector<double> s(grid.n);
    const double lo = *std::min_element(c.values.begin(), c.values.end());
    const double hi = *std::max_element(c.values.begin(), c.values.end());
    for (std::size_t i = 0; i < grid.n; ++i) {
        double x = grid.at(i), a = c.values[0];
        for (std::size_t k = 0; k < c.breakpoints.size(); ++k)
            a += (c.values[k + 1] - c.values[k]) * mollifier_cdf((x - c.breakpoints[k]) / eps);
        s[i] = std::clamp(a, lo, hi);
    }
    return SampledCoefficient(grid, std::move(s), c.m);
}

// -------------------------------------------------------------- diffeomorphism

double Diffeomorphism::forward(double x) const {
    const std::size_t n = x_grid.n;
    double s = (x - x_grid.x0) / x_grid.h;
    if (s <= 0.0) return y_of_x.front() + (x - x_grid.x0) * omega.front();
    if (s >= static_cast<double>(n - 1)) return y_of_x.back() + (x - x_grid.back()) * omega.back();
    auto i = static_cast<std::size_t>(s);
    return cubic_hermite(s - i, y_of_x[i], y_of_x[i + 1], omega[i], omega[i + 1], x_grid.h);
}

double Diffeomorphism::omega_at(double x) const {
    const std::size_t n = x_grid.n;
    double s = (x - x_grid.x0) / x_grid.h;
    if (s <= 0.0) return omega.front();
    if (s >= static_cast<double>(n - 1)) return omega.back();
    auto i = static_cast<std::size_t>(s);
    return cubic_hermite_slope(s - i, y_of_x[i], y_of_x[i + 1], omega[i], omega[i + 1], x_grid.h);
}

double Diffeomorphism::inverse(double y) const {
    const std::size_t n = x_grid.n;
    if (y <= y_of_x.front()) return x_grid.x0 + (y - y_of_x.front()) / omega.front();
    if (y >= y_of_x.back()) return x_grid.back() + (y - y_of_x.back()) / omega.back();
    auto it = std::upper_bound(y_of_x.begin(), y_of_x.end(), y);
    std::size_t i = static_cast<std::size_t>(it - y_of_x.begin()) - 1;
    i = std::min(i, n - 2);
    double a = x_grid.at(i), b = x_grid.at(i + 1);
    double x = a + (y - y_of_x[i]) / (y_of_x[i + 1] - y_of_x[i]) * x_grid.h;
    // Safeguarded Newton on the monotone cubic.
    for (int iter = 0; iter < 60; ++iter) {
        double f = forward(x) - y;
        if (f > 0) b = x; else a = x;
        double d = omega_at(x);
        double xn = (d > 0.0) ? x - f / d : 0.5 * (a + b);
        if (!(xn > a && xn < b)) xn = 0.5 * (a + b);
        if (std::abs(xn - x) <= 1e-15 * (1.0 + std::abs(x))) return xn;
        x = xn;
    }
    return x;
}

Diffeomorphism build_diffeomorphism(const SampledCoefficient& om) {
    const std::size_t n = om.grid.n;
    if (n < 3) throw std::invalid_argument("build_diffeomorphism: need at least 3 samples");
    for (double w : om.samples)
        if (!(w > 0.0)) throw std::invalid_argument("build_diffeomorphism: non-positive omega sample");
    Diffeomorphism d;
    d.x_grid = om.grid;
    d.omega = om.samples;
    const double h = om.grid.h;
    const auto& w = om.samples;
    // Slopes of omega for the fourth-order end-corrected trapezoid.
    std::vector<double> dw(n);
    for (std::size_t i = 1; i + 1 < n; ++i) dw[i] = (w[i + 1] - w[i - 1]) / (2 * h);
    dw[0] = (-3 * w[0] + 4 * w[1] - w[2]) / (2 * h);
    dw[n - 1] = (3 * w[n - 1] - 4 * w[n - 2] + w[n - 3]) / (2 * h);
    d.y_of_x.assign(n, 0.0);
    for (std::size_t i = 0; i + 1 < n; ++i)
        d.y_of_x[i + 1] = d.y_of_x[i] + 0.5 * h * (w[i] + w[i + 1]) - h * h / 12.0 * (dw[i + 1] - dw[i]);
    double x_ref = (om.grid.x0 <= 0.0 && om.grid.back() >= 0.0) ? 0.0 : om.grid.x0;
    double shift = d.forward(x_ref);
    for (auto& y : d.y_of_x) y -= shift;
    for (std::size_t i = 1; i < n; ++i)
        if (!(d.y_of_x[i] > d.y_of_x[i - 1])) throw std::runtime_error("build_diffeomorphism: map not monotone");

    d.y_grid = Grid::spanning(d.y_of_x.front(), d.y_of_x.back(), n);
    d.x_of_y.resize(n);
    for (std::size_t k = 0; k < n; ++k) d.x_of_y[k] = d.inverse(d.y_grid.at(k));
    d.x_of_y.front() = om.grid.x0;
    d.x_of_y.back() = om.grid.back();
    auto [lo, hi] = std::minmax_element(w.begin(), w.end());
    d.jac_lo = 1.0 / *hi;
    d.jac_hi = 1.0 / *lo;
    return d;
}

// ------------------------------------------------------------ sweep families

StepCoefficient step_family_fixed_bv(int n_jumps, double tv_target, double m, std::uint64_t seed, double span) {
    if (n_jumps < 1) throw std::invalid_argument("step_family_fixed_bv: need at least one jump");
    if (!(tv_target > 0.0) || !(m > 0.0) || !(span > 0.0))
        throw std::invalid_argument("step_family_fixed_bv: infeasible target (tv, m and span must be positive)");
    std::mt19937_64 eng(seed);
    auto unif = [&eng] { return static_cast<double>(eng() >> 11) * 0x1.0p-53; };
    const double cell = span / n_jumps;
    std::vector<double> bp(n_jumps), heights(n_jumps);
    for (int i = 0; i < n_jumps; ++i) bp[i] = -0.5 * span + (i + 0.5 + 0.4 * (unif() - 0.5)) * cell;
    double wsum = 0.0;
    for (auto& w : heights) wsum += (w = 0.5 + unif());
    std::vector<double> vals(n_jumps + 1, 0.0);
    for (int i = 0; i < n_jumps; ++i) {
        double sign = (unif() < 0.5) ? -1.0 : 1.0;
        vals[i + 1] = vals[i] + sign * heights[i] * tv_target / wsum;
    }
    double lo = *std::min_element(vals.begin(), vals.end());
    for (auto& v : vals) v = (v - lo) + m;  // v - lo >= 0 exactly, so v >= m
    return StepCoefficient(std::move(bp), std::move(vals), m);
}

}  // namespace bvlab
