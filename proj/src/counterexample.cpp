#include "bvlab/counterexample.hpp"

#include <algorithm>
#include <array>
#include <numbers>
#include <stdexcept>

#include "bvlab/coefficients.hpp"
#include "bvlab/evolution.hpp"
#include "bvlab/fft.hpp"
#include "bvlab/heat_lp.hpp"

namespace bvlab {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kFourPi2 = 4.0 * kPi * kPi;

double bump_exp(double u) { return u > 0.0 ? std::exp(-1.0 / u) : 0.0; }

double smooth_step_derivative(double u) {
    if (u <= 0.0 || u >= 1.0) return 0.0;
    const double f = bump_exp(u), g = bump_exp(1.0 - u);
    const double df = f / (u * u), dg = g / ((1.0 - u) * (1.0 - u));
    return (df * g + f * dg) / ((f + g) * (f + g));
}

// Three-point Gauss-Legendre on [a, b].
template <class F>
double gauss3(const F& f, double a, double b) {
    static const double r = std::sqrt(0.6);
    const double c = 0.5 * (a + b), d = 0.5 * (b - a);
    return d * (5.0 * f(c - d * r) + 8.0 * f(c) + 5.0 * f(c + d * r)) / 9.0;
}

using State = std::array<double, 2>;

// One period of W'' = -alpha(x) W from argument a0, N RK4 steps; returns all nodes.
void rk4_period(const HillCoefficient& alpha, double a0, State y, int N, std::vector<double>* W,
                std::vector<double>* dW, State* end) {
    const double h = 1.0 / N;
    auto rhs = [&](double x, const State& s) { return State{s[1], -alpha(x) * s[0]}; };
    if (W) W->assign(1, y[0]), dW->assign(1, y[1]);
    for (int i = 0; i < N; ++i) {
        const double x = a0 + i * h;
        State k1 = rhs(x, y);
        State k2 = rhs(x + 0.5 * h, {y[0] + 0.5 * h * k1[0], y[1] + 0.5 * h * k1[1]});
        State k3 = rhs(x + 0.5 * h, {y[0] + 0.5 * h * k2[0], y[1] + 0.5 * h * k2[1]});
        State k4 = rhs(x + h, {y[0] + h * k3[0], y[1] + h * k3[1]});
        for (int c = 0; c < 2; ++c) y[c] += h / 6.0 * (k1[c] + 2 * k2[c] + 2 * k3[c] + k4[c]);
        if (W) W->push_back(y[0]), dW->push_back(y[1]);
    }
    if (end) *end = y;
}

// Cubic Hermite on nodes i/N of [0, 1]; returns value and derivative at u.
std::pair<double, double> hermite(const std::vector<double>& W, const std::vector<double>& dW, double u) {
    const auto N = static_cast<int>(W.size()) - 1;
    const double h = 1.0 / N;
    int i = std::clamp(static_cast<int>(std::floor(u * N)), 0, N - 1);
    const double t = u * N - i;
    const double t2 = t * t, t3 = t2 * t;
    const double h00 = 2 * t3 - 3 * t2 + 1, h10 = t3 - 2 * t2 + t, h01 = -2 * t3 + 3 * t2, h11 = t3 - t2;
    const double v = h00 * W[i] + h10 * h * dW[i] + h01 * W[i + 1] + h11 * h * dW[i + 1];
    const double d00 = (6 * t2 - 6 * t) / h, d10 = 3 * t2 - 4 * t + 1, d01 = (-6 * t2 + 6 * t) / h, d11 = 3 * t2 - 2 * t;
    const double d = d00 * W[i] + d10 * dW[i] + d01 * W[i + 1] + d11 * dW[i + 1];
    return {v, d};
}

double simpson(const std::vector<double>& f, double h) {
    const std::size_t n = f.size();
    if (n < 3 || n % 2 == 0) throw std::invalid_argument("simpson: need an odd number of samples >= 3");
    double s = f.front() + f.back();
    for (std::size_t i = 1; i + 1 < n; ++i) s += (i % 2 ? 4.0 : 2.0) * f[i];
    return s * h / 3.0;
}

}  // namespace

double smooth_step(double u) {
    if (u <= 0.0) return 0.0;
    if (u >= 1.0) return 1.0;
    const double f = bump_exp(u), g = bump_exp(1.0 - u);
    return f / (f + g);
}

double Cutoff::operator()(double z) const {
    const double a = std::abs(z);
    if (a <= plateau) return 1.0;
    if (a >= support) return 0.0;
    return smooth_step((support - a) / (support - plateau));
}

double Cutoff::derivative(double z) const {
    const double a = std::abs(z);
    if (a <= plateau || a >= support) return 0.0;
    const double d = smooth_step_derivative((support - a) / (support - plateau)) / (support - plateau);
    return z > 0 ? -d : d;
}

// ---------------------------------------------------------------- Hill profile

double HillCoefficient::operator()(double x) const {
    if (delta == 0.0) return kFourPi2;
    const double d = std::abs(x - std::round(x));
    const double chi = smooth_step((d - flat) / ramp);
    return kFourPi2 + delta * std::cos(2.0 * kPi * harmonic * x) * chi;
}

double HillCoefficient::derivative(double x) const {
    if (delta == 0.0) return 0.0;
    const double off = x - std::round(x);
    const double d = std::abs(off);
    const double chi = smooth_step((d - flat) / ramp);
    const double dchi = smooth_step_derivative((d - flat) / ramp) / ramp * (off < 0 ? -1.0 : 1.0);
    const double w = 2.0 * kPi * harmonic;
    return delta * (-w * std::sin(w * x) * chi + std::cos(w * x) * dchi);
}

void HillCoefficient::validate() const {
    if (!(std::abs(delta) <= 1.0)) throw std::invalid_argument("HillCoefficient: need |alpha - 4 pi^2| <= 1");
    if (harmonic < 0) throw std::invalid_argument("HillCoefficient: negative harmonic");
    if (!(flat > 0.125) || !(ramp > 0.0) || !(flat + ramp < 0.5))
        throw std::invalid_argument("HillCoefficient: need 1/8 < flat and flat + ramp < 1/2");
}

HillCoefficient named_hill_profile(const std::string& name) {
    HillCoefficient a;
    a.name = name;
    if (name == "resonant") return a;
    if (name == "cosine") {
        a.harmonic = 1;
        return a;
    }
    if (name == "constant") {
        a.delta = 0.0;
        return a;
    }
    throw std::invalid_argument("unknown Hill profile '" + name + "'");
}

std::vector<std::string> hill_profile_names() { return {"resonant", "cosine", "constant"}; }

// ---------------------------------------------------------------- Floquet

FloquetSolution monodromy(const HillCoefficient& alpha, int steps) {
    alpha.validate();
    if (steps < kMinStepsPerPeriod) throw std::invalid_argument("monodromy: need >= 2048 RK4 steps per period");
    FloquetSolution f;
    f.alpha = alpha;
    f.steps = steps;
    State c0, c1;
    rk4_period(alpha, 0.0, {1.0, 0.0}, steps, nullptr, nullptr, &c0);
    rk4_period(alpha, 0.0, {0.0, 1.0}, steps, nullptr, nullptr, &c1);
    f.monodromy << c0[0], c1[0], c0[1], c1[1];
    f.trace = f.monodromy.trace();
    f.det = f.monodromy.determinant();
    return f;
}

FloquetSolution floquet_mode(const HillCoefficient& alpha, int steps) {
    FloquetSolution f = monodromy(alpha, steps);
    const double tr = f.trace;
    if (!(std::abs(tr) > 2.0)) throw std::runtime_error("floquet_mode: |trace| <= 2, no decaying mode");
    const double disc = std::sqrt(tr * tr - 4.0);
    const double mu_big = 0.5 * (tr + (tr > 0 ? disc : -disc));
    const double mu = 1.0 / mu_big;  // det = 1
    f.contracting = mu;
    f.kappa = std::log(std::abs(mu_big));
    const auto& M = f.monodromy;
    Eigen::Vector2d v1(M(0, 1), mu - M(0, 0)), v2(mu - M(1, 1), M(1, 0));
    Eigen::Vector2d v = v1.norm() >= v2.norm() ? v1 : v2;
    v.normalize();
    // alpha is 4 pi^2 on [-flat, flat], so data move by an exact rotation there.
    const double w0 = v[0], d0 = v[1], om = 2.0 * kPi;
    const double s_even = std::atan2(d0, om * w0) / om;
    auto wrap = [](double s) {  // into (-1/4, 1/4]
        while (s > 0.25) s -= 0.5;
        while (s <= -0.25) s += 0.5;
        return s;
    };
    double s = wrap(s_even);
    f.parity = 1;
    if (std::abs(s) > 0.125) {
        s = wrap(s + 0.25);
        f.parity = -1;
    }
    f.shift = s;
    State y{w0 * std::cos(om * s) + d0 / om * std::sin(om * s), -om * w0 * std::sin(om * s) + d0 * std::cos(om * s)};
    if (f.parity == 1) y[1] = 0.0;
    else y[0] = 0.0;
    rk4_period(alpha, s, y, steps, &f.W, &f.dW, nullptr);
    std::vector<double> sq(f.W.size());
    for (std::size_t i = 0; i < sq.size(); ++i) sq[i] = f.W[i] * f.W[i];
    const double one = simpson(sq, 1.0 / steps);
    f.scale = 1.0 / std::sqrt(2.0 * one / (1.0 - mu * mu));
    return f;
}

double FloquetSolution::w(double x) const {
    const double a = std::abs(x);
    const double j = std::floor(a);
    const double v = scale * hermite(W, dW, a - j).first * std::pow(contracting, j);
    return x < 0 ? parity * v : v;
}

double FloquetSolution::dw(double x) const {
    const double a = std::abs(x);
    const double j = std::floor(a);
    const double d = scale * hermite(W, dW, a - j).second * std::pow(contracting, j);
    return x < 0 ? -parity * d : d;
}

// ---------------------------------------------------------------- change of variable

ChangedVariable::ChangedVariable(const FloquetSolution& f) : f_(f) {
    const int N = f.steps;
    h_ = 1.0 / N;
    cum_.assign(static_cast<std::size_t>(N) + 1, 0.0);
    auto a = [&](double x) { return f_.alpha(x + f_.shift); };
    for (int i = 0; i < N; ++i) cum_[i + 1] = cum_[i] + gauss3(a, i * h_, (i + 1) * h_);
    period_ = cum_.back();
}

double ChangedVariable::y_half(double x) const {
    const double j = std::floor(x);
    const double u = x - j;
    const int N = static_cast<int>(cum_.size()) - 1;
    int i = std::clamp(static_cast<int>(std::floor(u * N)), 0, N - 1);
    auto a = [&](double t) { return f_.alpha(t + f_.shift); };
    return j * period_ + cum_[i] + gauss3(a, i * h_, u);
}

double ChangedVariable::y_of_x(double x) const { return x < 0 ? -y_half(-x) : y_half(x); }

double ChangedVariable::x_of_y(double y) const {
    const double Y = std::abs(y);
    const double j = std::floor(Y / period_);
    const double r = Y - j * period_;
    auto it = std::upper_bound(cum_.begin(), cum_.end(), r);
    auto i = static_cast<std::size_t>(std::clamp<std::ptrdiff_t>(it - cum_.begin() - 1, 0, std::ssize(cum_) - 2));
    double u = (i + (r - cum_[i]) / (cum_[i + 1] - cum_[i])) * h_;
    for (int it2 = 0; it2 < 3; ++it2) u -= (y_half(u) - r) / f_.alpha(u + f_.shift);
    const double x = j + u;
    return y < 0 ? -x : x;
}

double ChangedVariable::beta(double y) const { return f_.potential(x_of_y(y)); }

double ChangedVariable::dbeta(double y) const {
    const double x = x_of_y(y);
    const double ax = std::abs(x) + f_.shift;
    return f_.alpha.derivative(ax) * (x < 0 ? -1.0 : 1.0) / f_.alpha(ax);
}

double ChangedVariable::v(double y) const { return f_.w(x_of_y(y)); }

double ChangedVariable::dv(double y) const {
    const double x = x_of_y(y);
    return f_.dw(x) / f_.potential(x);
}

// ---------------------------------------------------------------- metric

SingularMetric::SingularMetric(const FloquetSolution& f, int n_max) : cv_(f), n_max_(n_max) {
    if (n_max < 1 || n_max > kMaxScales)
        throw std::invalid_argument("SingularMetric: n_max must lie in [1, 14] (grid-resolution guard)");
    // Open supports (m_n - 2^{-n}/4, m_n + 2^{-n}/4); all endpoints are dyadic, so
    // the comparison is exact.
    for (int n = 1; n <= n_max; ++n)
        for (int l = n + 1; l <= n_max; ++l) {
            const double hi_l = center(l) + 0.25 * std::ldexp(1.0, -l);
            const double lo_n = center(n) - 0.25 * std::ldexp(1.0, -n);
            if (hi_l > lo_n) throw std::logic_error("SingularMetric: piece supports overlap");
        }
}

double SingularMetric::piece(int n, double y) const {
    const double z = std::ldexp(y - center(n), n);
    if (std::abs(z) >= kPsi1.support) return 0.0;
    return cv_.beta(rate(n) * (y - center(n))) * kPsi1(z);
}

double SingularMetric::dpiece(int n, double y) const {
    const double z = std::ldexp(y - center(n), n);
    if (std::abs(z) >= kPsi1.support) return 0.0;
    const double Y = rate(n) * (y - center(n));
    return cv_.dbeta(Y) * rate(n) * kPsi1(z) + cv_.beta(Y) * std::ldexp(kPsi1.derivative(z), n);
}

double SingularMetric::operator()(double y) const {
    double b = 4.0 * kPi;
    for (int n = 1; n <= n_max_; ++n) {
        const double z = std::ldexp(y - center(n), n);
        if (std::abs(z) >= kPsi1.support) continue;
        const double psi = kPsi1(z);
        b += cv_.beta(rate(n) * (y - center(n))) * psi - 4.0 * kPi * psi;
    }
    return b;
}

double SingularMetric::derivative(double y) const {
    double d = 0.0;
    for (int n = 1; n <= n_max_; ++n) {
        const double z = std::ldexp(y - center(n), n);
        if (std::abs(z) >= kPsi1.support) continue;
        d += dpiece(n, y) - 4.0 * kPi * std::ldexp(kPsi1.derivative(z), n);
    }
    return d;
}

std::vector<MetricPieceNorms> SingularMetric::piece_norms(int points, Exec exec) const {
    if (points < 2) throw std::invalid_argument("piece_norms: need >= 2 points");
    if (points % 2) ++points;
    return ordered_map<MetricPieceNorms>(
        static_cast<std::size_t>(n_max_),
        [&](std::size_t idx) {
            const int n = static_cast<int>(idx) + 1;
            MetricPieceNorms r;
            r.n = n;
            r.center = center(n);
            r.rate = rate(n);
            const double half = kPsi1.support * std::ldexp(1.0, -n);
            r.lo = r.center - half;
            r.hi = r.center + half;
            const double h = (r.hi - r.lo) / points;
            std::vector<double> b(static_cast<std::size_t>(points) + 1), db(b.size());
            for (std::size_t i = 0; i < b.size(); ++i) {
                const double y = r.lo + static_cast<double>(i) * h;
                b[i] = std::abs(piece(n, y));
                db[i] = std::abs(dpiece(n, y));
            }
            r.l1 = simpson(b, h);
            const double d1 = simpson(db, h);
            r.w11 = r.l1 + d1;
            r.besov_half = std::sqrt(r.l1 * d1);
            return r;
        },
        exec);
}

double SingularMetric::minimum(double lo, double hi, double h) const {
    double m = INFINITY;
    for (double y = lo; y <= hi; y += h) m = std::min(m, (*this)(y));
    return m;
}

std::vector<double> sample_metric(const SingularMetric& beta, const Grid& g) {
    std::vector<double> out(g.n);
    for (std::size_t i = 0; i < g.n; ++i) out[i] = beta(g.at(i));
    return out;
}

// ---------------------------------------------------------------- quasimode

Quasimode build_quasimode(const SingularMetric& beta, int k, std::size_t points) {
    if (k < 1 || k > beta.n_max()) throw std::invalid_argument("build_quasimode: need 1 <= k <= n_max");
    if (points < 64) throw std::invalid_argument("build_quasimode: need >= 64 points across the support");
    Quasimode q;
    q.k = k;
    q.lambda = SingularMetric::rate(k);
    const double m = SingularMetric::center(k), half = kPsi2.support * std::ldexp(1.0, -k);
    q.lo = m - half;
    q.hi = m + half;
    const Grid g = Grid::spanning(q.lo, q.hi, points + 1);
    const auto& cv = beta.variable();
    std::vector<double> phi(g.n);
    for (std::size_t i = 0; i < g.n; ++i) {
        const double y = g.at(i);
        phi[i] = cv.v(q.lambda * (y - m)) * kPsi2(std::ldexp(y - m, k));
    }
    std::vector<cplx> c(phi.begin(), phi.end());
    const double nrm = lp_norm(c, g.h, 2.0);
    for (auto& x : phi) x /= nrm;
    for (std::size_t i = 0; i < g.n; ++i) c[i] = phi[i];
    q.phi = GridFunction(g, c);
    q.norm = lp_norm(c, g.h, 2.0);
    // Flux-form (d beta d + lambda^2) phi with exact half-point metric; phi = 0 beyond the grid.
    const double h = g.h, l2 = q.lambda * q.lambda;
    auto at = [&](std::ptrdiff_t i) { return i < 0 || i >= std::ssize(phi) ? 0.0 : phi[static_cast<std::size_t>(i)]; };
    std::vector<cplx> r(g.n);
    for (std::size_t i = 0; i < g.n; ++i) {
        const auto ii = static_cast<std::ptrdiff_t>(i);
        const double y = g.at(i);
        const double bp = beta(y + 0.5 * h), bm = beta(y - 0.5 * h);
        r[i] = (bp * (at(ii + 1) - at(ii)) - bm * (at(ii) - at(ii - 1))) / (h * h) + l2 * at(ii);
    }
    std::vector<cplx> dr(g.n);
    for (std::size_t i = 0; i < g.n; ++i) {
        const cplx a = i + 1 < g.n ? r[i + 1] : 0.0, b = i > 0 ? r[i - 1] : 0.0;
        dr[i] = (a - b) / (2.0 * h);
    }
    q.residual_l2 = lp_norm(r, h, 2.0);
    q.residual_h1 = q.residual_l2 + lp_norm(dr, h, 2.0);
    return q;
}

// ---------------------------------------------------------------- blow-up

void check_blowup_params(double q, double r) {
    if (!(q > 2.0) || !(r >= 0.0) || !(r < (q - 2.0) / (2.0 * q)))
        throw std::invalid_argument(
            "blowup_experiment: need q > 2 and 0 <= r < (q-2)/(2q); beyond that line H^r embeds in L^q and no "
            "blow-up is possible");
}

namespace {

// Largest |xi| below which all but `cut` of the energy lies, and the H^r norm.
std::pair<double, double> spectral_extent(const GridFunction& f, double r, double cut) {
    Spectrum sp(f, 8);
    const auto& c = sp.coefficients();
    const auto& xi = sp.xi();
    std::vector<std::pair<double, double>> e(c.size());
    double tot = 0.0, hr = 0.0;
    for (std::size_t i = 0; i < c.size(); ++i) {
        e[i] = {std::abs(xi[i]), std::norm(c[i])};
        tot += e[i].second;
        hr += std::pow(1.0 + xi[i] * xi[i], r) * e[i].second;
    }
    std::sort(e.begin(), e.end());
    double acc = 0.0, kmax = 0.0;
    for (auto& [k, w] : e) {
        acc += w;
        kmax = k;
        if (acc >= tot * (1.0 - cut)) break;
    }
    // Parseval: sum |c|^2 = (N / h) ||f||_2^2 in the trapezoid sense.
    const double l2 = lp_norm(f, 2.0);
    return {kmax, l2 * std::sqrt(hr / tot)};
}

}  // namespace

BlowupTable blowup_experiment(const SingularMetric& beta, int k_min, int k_max, double q, double r,
                              const BlowupOptions& opt) {
    check_blowup_params(q, r);
    if (k_min < 1 || k_max < k_min || k_max > beta.n_max())
        throw std::invalid_argument("blowup_experiment: need 1 <= k_min <= k_max <= n_max");
    if (opt.nt < 3) throw std::invalid_argument("blowup_experiment: need nt >= 3");
    BlowupTable tab;
    tab.q = q;
    tab.r = r;
    const double bmin = 4.0 * kPi, bmax = kFourPi2 + 1.0;
    const auto nk = static_cast<std::size_t>(k_max - k_min + 1);
    tab.rows = ordered_map<BlowupRow>(
        nk,
        [&](std::size_t idx) {
            const int k = k_min + static_cast<int>(idx);
            auto qm = build_quasimode(beta, k);
            BlowupRow row;
            row.k = k;
            row.lambda = qm.lambda;
            row.eps = 1.0 / qm.lambda;
            row.residual_l2 = qm.residual_l2;
            row.residual_h1 = qm.residual_h1;
            row.coherence = 1.0 / qm.residual_l2;
            auto [xi_cut, hr] = spectral_extent(qm.phi, r, opt.energy_cut);
            row.hr_norm = hr;
            row.lq0 = lp_norm(qm.phi, q);
            row.q_quasi = row.lq0 / hr;
            row.envelope = std::pow(2.0, k * (q - 2.0) / q) / std::pow(qm.lambda, r);

            // beta xi^2 is transported, so the wavenumber peaks where beta is smallest.
            const double xi_glob = xi_cut * std::sqrt(bmax / bmin);
            const double h = 0.35 / xi_glob;
            const double dt = 2.0 * std::sqrt(opt.cn_tol) / (bmax * xi_glob * xi_glob);
            const double speed = 2.0 * bmax * xi_glob;
            const double m = SingularMetric::center(k), half_supp = m - qm.lo;
            auto box = [&](double steps) { return 3.0 * half_supp + 2.0 * speed * steps * dt; };
            auto work = [&](double steps) { return steps * 2.0 * box(steps) / h; };
            double n_steps = std::ceil(row.eps / dt);
            row.complete = work(n_steps) <= opt.max_work;
            if (!row.complete) {
                double lo = 0.0, hi = n_steps;
                while (hi - lo > 1.0) {
                    const double mid = std::floor(0.5 * (lo + hi));
                    (work(mid) <= opt.max_work ? lo : hi) = mid;
                }
                n_steps = std::max(lo, static_cast<double>(opt.nt - 1));
            }
            const int sub = std::max(1, static_cast<int>(std::ceil(n_steps / (opt.nt - 1))));
            row.window = row.complete ? row.eps : sub * (opt.nt - 1) * dt;
            row.steps = static_cast<long long>(sub) * (opt.nt - 1);
            const double B = box(static_cast<double>(row.steps));
            const Grid g = Grid::with_step(m - B, m + B, h);
            row.n_x = g.n;
            SampledCoefficient a(g, sample_metric(beta, g), bmin);
            auto op = build_divergence_operator(Coefficient(a), g, Boundary::dirichlet);
            auto u0 = GridFunction::sample(g, [&](double y) {
                return y > qm.lo && y < qm.hi ? cplx(interpolate_cubic(qm.phi, y).real()) : cplx(0.0);
            });
            const Grid tg = Grid::spanning(0.0, row.window, static_cast<std::size_t>(opt.nt));
            const double in_lo = m - 3.0 * half_supp, in_hi = m + 3.0 * half_supp;
            std::vector<double> lq(tg.n);
            row.kept_mass = 1.0;
            crank_nicolson_visit(op, u0, tg, sub, [&](std::size_t it, const std::vector<cplx>& u) {
                lq[it] = lp_norm(u, h, q);
                double in = 0.0, tot = 0.0;
                for (std::size_t i = 0; i < u.size(); ++i) {
                    const double w = std::norm(u[i]);
                    const double y = g.at(i);
                    tot += w;
                    if (y > in_lo && y < in_hi) in += w;
                }
                row.kept_mass = std::min(row.kept_mass, in / tot);
                if (it + 1 == tg.n) row.leak = boundary_mass_fraction(u, h, B / 8.0);
            });
            const double half = trapezoid(lq, tg.h);
            row.lq_time_l1 = 2.0 * half;
            row.q_avg = half / row.window / hr;
            return row;
        },
        opt.exec);
    tab.feasible = true;
    tab.increasing = true;
    std::vector<double> ks, lq, lqq, le;
    for (std::size_t i = 0; i < tab.rows.size(); ++i) {
        const auto& row = tab.rows[i];
        tab.feasible = tab.feasible && row.complete;
        if (i > 0 && !(row.q_avg > tab.rows[i - 1].q_avg)) tab.increasing = false;
        ks.push_back(row.k);
        lq.push_back(std::log2(row.q_avg));
        lqq.push_back(std::log2(row.q_quasi));
        le.push_back(std::log2(row.envelope));
    }
    if (!tab.feasible) tab.increasing = false;
    if (ks.size() >= 2) {
        tab.slope = ls_slope(ks, lq);
        tab.quasi_slope = ls_slope(ks, lqq);
        tab.envelope_slope = ls_slope(ks, le);
    }
    return tab;
}

}  // namespace bvlab
