#include "bvlab/resolvent.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "bvlab/tridiag.hpp"

namespace bvlab {

namespace {

constexpr std::array<double, 5> kGx = {-0.9061798459386640, -0.5384693101056831, 0.0, 0.5384693101056831,
                                       0.9061798459386640};
constexpr std::array<double, 5> kGw = {0.2369268850561891, 0.4786286704993665, 0.5688888888888889,
                                       0.4786286704993665, 0.2369268850561891};

// Linear interpolant of the samples, zero outside the grid.
cplx g_at(const GridFunction& g, double x) {
    const Grid& gr = g.grid;
    double s = (x - gr.x0) / gr.h;
    if (s < 0.0 || s > static_cast<double>(gr.n - 1)) return 0.0;
    auto i = std::min(static_cast<std::size_t>(s), gr.n - 2);
    double f = s - static_cast<double>(i);
    return (1.0 - f) * g.v[i] + f * g.v[i + 1];
}

double g_l1_norm(const GridFunction& g) {
    std::vector<double> a(g.size());
    for (std::size_t i = 0; i < a.size(); ++i) a[i] = std::abs(g.v[i]);
    return trapezoid(a, g.grid.h);
}

// tau + |sigma| without cancellation.
double tau_plus_modulus(cplx sigma) {
    double t = sigma.real(), m = std::abs(sigma);
    if (t >= 0.0) return t + m;
    return sigma.imag() * sigma.imag() / (m - t);
}

// One constant piece [l, r] with the particular solution
// p = -(F_L + F_R) / (2 mu a),  F_L(x) = int_{y<x} e^{-mu(x-y)} g,  F_R(x) = int_{y>x} e^{-mu(y-x)} g,
// tabulated at nodes X (finite ends plus interior grid points).
struct Piece {
    double a = 1.0;
    cplx mu, z;
    double l = -std::numeric_limits<double>::infinity();
    double r = std::numeric_limits<double>::infinity();
    std::vector<double> X;
    std::vector<cplx> FL, FR;
    cplx alpha = 0.0, beta = 0.0;  // amplitudes of e^{-mu(x-l)} and e^{mu(x-r)}

    bool has_left() const { return std::isfinite(l); }
    bool has_right() const { return std::isfinite(r); }

    // int_p^q e^{-mu(q-y)} g(y) dy
    cplx int_left(const GridFunction& g, double p, double q) const {
        if (q <= p) return 0.0;
        double c = 0.5 * (p + q), hw = 0.5 * (q - p);
        cplx s = 0.0;
        for (int k = 0; k < 5; ++k) {
            double y = c + hw * kGx[k];
            s += kGw[k] * std::exp(-mu * (q - y)) * g_at(g, y);
        }
        return hw * s;
    }
    // int_p^q e^{-mu(y-p)} g(y) dy
    cplx int_right(const GridFunction& g, double p, double q) const {
        if (q <= p) return 0.0;
        double c = 0.5 * (p + q), hw = 0.5 * (q - p);
        cplx s = 0.0;
        for (int k = 0; k < 5; ++k) {
            double y = c + hw * kGx[k];
            s += kGw[k] * std::exp(-mu * (y - p)) * g_at(g, y);
        }
        return hw * s;
    }

    void tabulate(const GridFunction& g) {
        const std::size_t n = X.size();
        FL.assign(n, 0.0);
        FR.assign(n, 0.0);
        for (std::size_t m = 1; m < n; ++m) {
            double d = X[m] - X[m - 1];
            // Segments never straddle a grid node, so g is linear on each.
            bool zero = g_at(g, X[m - 1]) == cplx(0.0) && g_at(g, X[m]) == cplx(0.0);
            FL[m] = std::exp(-mu * d) * FL[m - 1] + (zero ? cplx(0.0) : int_left(g, X[m - 1], X[m]));
        }
        for (std::size_t m = n - 1; m-- > 0;) {
            double d = X[m + 1] - X[m];
            bool zero = g_at(g, X[m]) == cplx(0.0) && g_at(g, X[m + 1]) == cplx(0.0);
            FR[m] = std::exp(-mu * d) * FR[m + 1] + (zero ? cplx(0.0) : int_right(g, X[m], X[m + 1]));
        }
    }

    // Particular solution and derivative at x in [X.front(), X.back()].
    std::pair<cplx, cplx> particular(const GridFunction& g, double x) const {
        auto it = std::upper_bound(X.begin(), X.end(), x);
        std::size_t m = (it == X.begin()) ? 0 : static_cast<std::size_t>(it - X.begin()) - 1;
        if (m + 1 >= X.size()) m = X.size() >= 2 ? X.size() - 2 : 0;
        cplx fl, fr;
        if (X.size() == 1) {
            fl = FL[0];
            fr = FR[0];
        } else {
            fl = std::exp(-mu * (x - X[m])) * FL[m] + int_left(g, X[m], x);
            fr = std::exp(-mu * (X[m + 1] - x)) * FR[m + 1] + int_right(g, x, X[m + 1]);
        }
        cplx p = -(fl + fr) / (2.0 * mu * a);
        cplx dp = (fl - fr) / (2.0 * a);
        return {p, dp};
    }

    std::pair<cplx, cplx> eval(const GridFunction& g, double x) const {
        auto [p, dp] = particular(g, x);
        if (has_left()) {
            cplx e = alpha * std::exp(-mu * (x - l));
            p += e;
            dp -= mu * e;
        }
        if (has_right()) {
            cplx e = beta * std::exp(mu * (x - r));
            p += e;
            dp += mu * e;
        }
        return {p, dp};
    }
};

}  // namespace

SpectralParameter SpectralParameter::with_default_eps(double tau) {
    return SpectralParameter{tau, 1e-6 * std::max(1.0, std::abs(tau))};
}

void SpectralParameter::validate() const {
    if (eps == 0.0) throw std::invalid_argument("resolvent: eps must be nonzero for a direct solve");
    if (!std::isfinite(tau) || !std::isfinite(eps)) throw std::invalid_argument("resolvent: non-finite sigma");
}

GridFunction unit_bump(const Grid& grid, double x0, double w) {
    GridFunction g = GridFunction::sample(grid, [&](double x) { return mollifier((x - x0) / w) / w; });
    std::vector<double> a(g.size());
    for (std::size_t i = 0; i < a.size(); ++i) a[i] = g.v[i].real();
    double mass = trapezoid(a, grid.h);
    if (!(mass > 0.0)) throw std::invalid_argument("unit_bump: bump not resolved by the grid");
    for (auto& v : g.v) v /= mass;
    return g;
}

ResolventSolution solve_step_resolvent(const StepCoefficient& a, SpectralParameter sig, const GridFunction& g) {
    sig.validate();
    a.validate();
    g.validate();
    const Grid& gr = g.grid;
    const auto& bp = a.breakpoints;
    const std::size_t N = bp.size();
    if (N > 0 && (bp.front() < gr.x0 || bp.back() > gr.back()))
        throw std::invalid_argument("solve_step_resolvent: the source grid must cover every breakpoint");
    const cplx sigma = sig.sigma();
    const double tol = 1e-9 * gr.h;

    std::vector<Piece> P(N + 1);
    for (std::size_t k = 0; k <= N; ++k) {
        auto& pc = P[k];
        pc.a = a.values[k];
        pc.mu = std::sqrt(sigma / pc.a);
        if (pc.mu.real() < 0) pc.mu = -pc.mu;
        pc.z = pc.a * pc.mu;
        if (k > 0) pc.l = bp[k - 1];
        if (k < N) pc.r = bp[k];
        if (pc.has_left()) pc.X.push_back(pc.l);
        for (std::size_t i = 0; i < gr.n; ++i) {
            double x = gr.at(i);
            bool inside = (!pc.has_left() || x > pc.l + tol) && (!pc.has_right() || x < pc.r - tol);
            if (inside) pc.X.push_back(x);
        }
        if (pc.has_right()) pc.X.push_back(pc.r);
        if (pc.X.empty()) pc.X.push_back(pc.has_left() ? pc.l : pc.r);
        pc.tabulate(g);
    }

    // Interface data and the forward Redheffer sweep.
    struct Iface {
        cplx rL, rR, tLR, tRL, sA, sB, D, E, R, c, P;  // P = e^{-mu L} of the left piece
    };
    std::vector<Iface> I(N + 1);  // I[k] for interface k = 1..N at bp[k-1]
    cplx R_prev = 0.0, c_prev = 0.0;
    for (std::size_t k = 1; k <= N; ++k) {
        const Piece& L = P[k - 1];
        const Piece& Rr = P[k];
        auto [pL, dpL] = L.particular(g, bp[k - 1]);
        auto [pR, dpR] = Rr.particular(g, bp[k - 1]);
        cplx dp = pR - pL;
        cplx dflux = Rr.a * dpR - L.a * dpL;
        cplx S = L.z + Rr.z;
        auto& f = I[k];
        f.rL = (L.z - Rr.z) / S;
        f.rR = -f.rL;
        f.tLR = 2.0 * L.z / S;
        f.tRL = 2.0 * Rr.z / S;
        f.sB = (dflux + Rr.z * dp) / S;
        f.sA = (dflux - L.z * dp) / S;
        f.P = L.has_left() ? std::exp(-L.mu * (L.r - L.l)) : cplx(0.0);
        cplx P2R = f.P * f.P * R_prev;
        f.D = 1.0 - f.rL * P2R;
        f.E = f.rL * f.P * c_prev + f.sB;
        f.R = f.tLR * P2R * f.tRL / f.D + f.rR;
        f.c = f.tLR * P2R * f.E / f.D + f.tLR * f.P * c_prev + f.sA;
        R_prev = f.R;
        c_prev = f.c;
    }
    // Back substitution from the rightmost interface, where nothing comes in.
    cplx B_in = 0.0;
    for (std::size_t k = N; k >= 1; --k) {
        auto& f = I[k];
        cplx B_out = (f.E + f.tRL * B_in) / f.D;
        cplx A_out = f.R * B_in + f.c;
        P[k].alpha = A_out;
        P[k - 1].beta = B_out;
        B_in = f.P * B_out;
    }

    ResolventSolution s;
    s.sigma = sig;
    s.method = "scattering";
    s.v = GridFunction(gr);
    s.dv = GridFunction(gr);
    s.flux = GridFunction(gr);
    std::vector<double> a_nodes(gr.n);
    for (std::size_t i = 0; i < gr.n; ++i) {
        double x = gr.at(i);
        std::size_t k = a.piece(x + tol);
        auto [v, dv] = P[k].eval(g, std::max(x, P[k].X.front()));
        s.v[i] = v;
        s.dv[i] = dv;
        s.flux[i] = P[k].a * dv;
        a_nodes[i] = P[k].a;
    }
    s.bp_x = bp;
    s.bp_v.resize(N);
    s.bp_dv_left.resize(N);
    s.bp_dv_right.resize(N);
    for (std::size_t k = 1; k <= N; ++k) {
        auto [vl, dvl] = P[k - 1].eval(g, bp[k - 1]);
        auto [vr, dvr] = P[k].eval(g, bp[k - 1]);
        s.bp_v[k - 1] = vr;
        s.bp_dv_left[k - 1] = dvl;
        s.bp_dv_right[k - 1] = dvr;
        s.flux_jump_max = std::max(s.flux_jump_max, std::abs(P[k].a * dvr - P[k - 1].a * dvl));
        s.v_jump_max = std::max(s.v_jump_max, std::abs(vr - vl));
    }

    // Integrals: Gauss on every node segment of every piece, analytic tails.
    for (const auto& pc : P) {
        for (std::size_t m = 0; m + 1 < pc.X.size(); ++m) {
            double p = pc.X[m], q = pc.X[m + 1];
            double c = 0.5 * (p + q), hw = 0.5 * (q - p);
            for (int j = 0; j < 5; ++j) {
                double y = c + hw * kGx[j];
                auto [v, dv] = pc.eval(g, y);
                double wq = hw * kGw[j];
                s.box_v2 += wq * std::norm(v);
                s.box_dv2 += wq * std::norm(dv);
                s.box_a_dv2 += wq * pc.a * std::norm(dv);
                s.int_g_vbar += wq * g_at(g, y) * std::conj(v);
            }
        }
    }
    const std::array<std::pair<const Piece*, std::size_t>, 2> ends = {
        std::pair<const Piece*, std::size_t>{&P.front(), 0}, {&P.back(), gr.n - 1}};
    for (auto [pc, idx] : ends) {
        double rm = pc->mu.real();
        double v2 = std::norm(s.v[idx]);
        s.tail_v2 += v2 / (2 * rm);
        s.tail_dv2 += std::norm(pc->mu) * v2 / (2 * rm);
        s.tail_a_dv2 += pc->a * std::norm(pc->mu) * v2 / (2 * rm);
        s.tail_energy += tau_plus_modulus(sigma) * v2 / (2 * rm);
    }
    s.g_l1 = g_l1_norm(g);

    // Omega with both one-sided limits at breakpoints folded into the sup.
    const double w = std::abs(sig.eps) + std::abs(sig.tau);
    s.omega.resize(gr.n);
    s.omega_trace = GridFunction(gr);
    double run = 0.0;
    std::size_t b = 0;
    for (std::size_t i = 0; i < gr.n; ++i) {
        double x = gr.at(i);
        while (b < N && bp[b] <= x + tol) {
            double vb = std::norm(s.bp_v[b]);
            run = std::max(run, w * P[b].a * vb + std::norm(P[b].a * s.bp_dv_left[b]));
            run = std::max(run, w * P[b + 1].a * vb + std::norm(P[b + 1].a * s.bp_dv_right[b]));
            ++b;
        }
        s.omega[i] = w * a_nodes[i] * std::norm(s.v[i]) + std::norm(s.flux[i]);
        run = std::max(run, s.omega[i]);
        s.omega_trace[i] = run;
    }
    return s;
}

ResolventSolution solve_grid_resolvent(const Coefficient& a, SpectralParameter sig, const GridFunction& g,
                                       GridBoundary boundary) {
    sig.validate();
    g.validate();
    const Grid& gr = g.grid;
    const std::size_t n = gr.n;
    if (n < 3) throw std::invalid_argument("solve_grid_resolvent: need n >= 3");
    require_resolved(a, gr);
    auto [alo, ahi] = coefficient_active_range(a);
    if (alo < gr.x0 || ahi > gr.back())
        throw std::invalid_argument("solve_grid_resolvent: coefficient must be constant outside the grid");
    const cplx sigma = sig.sigma();
    const double h = gr.h, h2 = h * h;
    std::vector<double> ah = half_point_values(a, gr);
    const double aL = coefficient_at(a, gr.x0 - h), aR = coefficient_at(a, gr.back() + h);

    auto decaying_root = [&](double ae) {
        cplx c = 1.0 + 0.5 * sigma * h2 / ae;
        cplx d = std::sqrt(c * c - 1.0);
        cplx z1 = c + d, z2 = c - d;
        return std::abs(z1) < std::abs(z2) ? z1 : z2;
    };
    cplx zL = 0.0, zR = 0.0;
    if (boundary == GridBoundary::transparent) {
        zL = decaying_root(aL);
        zR = decaying_root(aR);
    }

    std::vector<cplx> sub(n - 1), diag(n), sup(n - 1);
    for (std::size_t i = 0; i < n; ++i) {
        double am = (i == 0) ? aL : ah[i - 1];
        double ap = (i + 1 == n) ? aR : ah[i];
        cplx d = -(am + ap) / h2 - sigma;
        if (i == 0) d += am * zL / h2;
        if (i + 1 == n) d += ap * zR / h2;
        diag[i] = d;
        if (i + 1 < n) {
            sup[i] = ah[i] / h2;
            sub[i] = ah[i] / h2;
        }
    }
    Tridiagonal T(sub, diag, sup);
    std::vector<cplx> v = g.v;
    T.solve(v);

    ResolventSolution s;
    s.sigma = sig;
    s.method = "grid";
    s.v = GridFunction(gr, v);
    s.dv = GridFunction(gr);
    s.flux = GridFunction(gr);
    double vinf = 0.0;
    for (auto& x : v) vinf = std::max(vinf, std::abs(x));
    if (boundary == GridBoundary::dirichlet) {
        if (std::abs(v.front()) > 1e-8 * vinf || std::abs(v.back()) > 1e-8 * vinf)
            throw std::runtime_error("solve_grid_resolvent: boundary leak above 1e-8 ||v||_inf; enlarge the box");
    }
    const cplx vm1 = zL * v.front(), vn = zR * v.back();
    std::vector<double> a_nodes(n);
    for (std::size_t i = 0; i < n; ++i) {
        cplx left = (i == 0) ? vm1 : v[i - 1];
        cplx right = (i + 1 == n) ? vn : v[i + 1];
        double am = (i == 0) ? aL : ah[i - 1];
        double ap = (i + 1 == n) ? aR : ah[i];
        s.flux[i] = 0.5 * (ap * (right - v[i]) + am * (v[i] - left)) / h;
        s.dv[i] = (right - left) / (2 * h);
        a_nodes[i] = coefficient_at(a, gr.at(i));
    }

    // Discrete whole-line sums; the discrete energy identity is exact for them.
    for (std::size_t i = 0; i < n; ++i) {
        s.box_v2 += h * std::norm(v[i]);
        s.int_g_vbar += h * g.v[i] * std::conj(v[i]);
    }
    for (std::size_t i = 0; i + 1 < n; ++i) {
        double d2 = std::norm(v[i + 1] - v[i]) / h;
        s.box_dv2 += d2;
        s.box_a_dv2 += ah[i] * d2;
    }
    auto add_tail = [&](cplx z, cplx vb, double ae) {
        double v2 = std::norm(vb);
        if (boundary == GridBoundary::dirichlet) {
            s.tail_dv2 += v2 / h;
            s.tail_a_dv2 += ae * v2 / h;
            s.tail_energy += ae * v2 / h;
            return;
        }
        double q = 1.0 - std::norm(z);
        double tv2 = h * v2 * std::norm(z) / q;
        double tdv2 = std::norm(1.0 - z) * v2 / (h * q);
        s.tail_v2 += tv2;
        s.tail_dv2 += tdv2;
        s.tail_a_dv2 += ae * tdv2;
        s.tail_energy += sig.tau * tv2 + ae * tdv2;
    };
    add_tail(zL, v.front(), aL);
    add_tail(zR, v.back(), aR);
    s.g_l1 = g_l1_norm(g);

    const double w = std::abs(sig.eps) + std::abs(sig.tau);
    s.omega.resize(n);
    s.omega_trace = GridFunction(gr);
    double run = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        s.omega[i] = w * a_nodes[i] * std::norm(v[i]) + std::norm(s.flux[i]);
        run = std::max(run, s.omega[i]);
        s.omega_trace[i] = run;
    }
    if (auto st = std::get_if<StepCoefficient>(&a)) {
        s.bp_x = st->breakpoints;
        for (double x : st->breakpoints) s.bp_v.push_back(g_at(s.v, x));
    }
    return s;
}

ResolventReport certify_bound(const ResolventSolution& s, const Coefficient& a) {
    ResolventReport r;
    r.tau = s.sigma.tau;
    r.eps = s.sigma.eps;
    r.g_l1 = s.g_l1;
    for (std::size_t i = 0; i < s.v.size(); ++i) {
        r.v_inf = std::max(r.v_inf, std::abs(s.v[i]));
        r.flux_inf = std::max(r.flux_inf, std::abs(s.flux[i]));
    }
    for (std::size_t b = 0; b < s.bp_v.size(); ++b) r.v_inf = std::max(r.v_inf, std::abs(s.bp_v[b]));
    if (auto st = std::get_if<StepCoefficient>(&a)) {
        for (std::size_t b = 0; b < s.bp_dv_left.size(); ++b) {
            r.flux_inf = std::max(r.flux_inf, std::abs(st->values[b] * s.bp_dv_left[b]));
            r.flux_inf = std::max(r.flux_inf, std::abs(st->values[b + 1] * s.bp_dv_right[b]));
        }
    }
    if (r.g_l1 > 0.0) {
        r.q_v = r.v_inf / r.g_l1;
        r.q_flux = r.flux_inf / r.g_l1;
    }
    for (double o : s.omega) r.omega_sup = std::max(r.omega_sup, o);
    if (s.omega_trace.size() > 0) r.omega_sup = std::max(r.omega_sup, s.omega_trace[s.omega_trace.size() - 1].real());
    r.omega_applicable = s.sigma.tau > 0.0;
    if (r.omega_applicable) {
        double m = coefficient_min(a), M = coefficient_max(a);
        r.omega_bound = (M + 4.0) * (M + 4.0) / m * r.g_l1 * r.g_l1;
        r.omega_bound_ok = r.omega_sup <= r.omega_bound;
    }
    r.energy_residual_im = std::abs(s.sigma.eps * s.int_v2() + s.int_g_vbar.imag());
    r.energy_residual_re =
        std::abs(s.sigma.tau * s.box_v2 + s.box_a_dv2 + s.tail_energy + s.int_g_vbar.real());
    double scale = r.g_l1 * r.v_inf;
    if (scale > 0.0) {
        r.energy_residual = std::max(r.energy_residual_im, r.energy_residual_re) / scale;
        r.apriori_ratio = std::abs(s.sigma.eps) * s.int_v2() / scale;
    }
    double l2 = std::sqrt(s.int_v2()), dl2 = std::sqrt(s.int_dv2());
    if (l2 > 0.0 && dl2 > 0.0) r.interpolation_ratio = r.v_inf * r.v_inf / (2.0 * l2 * dl2);
    if (r.flux_inf > 0.0) r.flux_jump_rel = s.flux_jump_max / r.flux_inf;
    return r;
}

GronwallTrace gronwall_trace(const StepCoefficient& a, const ResolventSolution& s) {
    if (!(s.sigma.tau < 0.0)) throw std::invalid_argument("gronwall_trace: needs the hyperbolic side tau < 0");
    if (s.method != "scattering" || s.bp_x.size() != a.breakpoints.size())
        throw std::invalid_argument("gronwall_trace: needs a scattering solve on the same coefficient");
    const double m = (a.m > 0.0) ? a.m : *std::min_element(a.values.begin(), a.values.end());
    const double at = std::abs(s.sigma.tau);
    const std::size_t N = a.breakpoints.size();
    GronwallTrace tr;
    tr.C = 4.0 * s.g_l1 * s.g_l1 / (m * at);
    // Normalized Q = 2|v|^2 + |w_y|^2 with w_y = v_x sqrt(m/|tau|).
    auto Q = [&](cplx v, cplx dv) { return 2.0 * std::norm(v) + std::norm(dv) * m / at; };
    tr.alpha.resize(N);
    for (std::size_t i = 0; i < N; ++i) tr.alpha[i] = std::abs(a.values[i + 1] - a.values[i]) / m;

    // Events in x order; the continuous inequality is checked at each of them.
    const Grid& gr = s.v.grid;
    const double tol = 1e-9 * gr.h;
    double run = 0.0, jump_sum = 0.0, worst = 0.0;
    std::size_t b = 0;
    auto check = [&](double q) {
        run = std::max(run, q);
        double rhs = tr.C + jump_sum;
        worst = std::max(worst, run / rhs);
        ++tr.contdis_checks;
        if (run > rhs * (1.0 + 1e-10)) ++tr.contdis_violations;
    };
    for (std::size_t i = 0; i < gr.n; ++i) {
        double x = gr.at(i);
        while (b < N && a.breakpoints[b] <= x + tol) {
            check(Q(s.bp_v[b], s.bp_dv_left[b]));
            tr.gamma.push_back(run);
            jump_sum += tr.alpha[b] * std::norm(s.bp_v[b]);
            check(Q(s.bp_v[b], s.bp_dv_right[b]));
            ++b;
        }
        check(Q(s.v[i], s.dv[i]));
    }
    tr.gamma.push_back(run);
    tr.worst_contdis_ratio = worst;

    // gamma_{I+1} <= C + sum_{i<=I} alpha_i gamma_i, then S_I against the product bound.
    double S = 0.0, prod = 1.0, asum = 0.0;
    for (std::size_t I = 0; I <= N; ++I) {
        if (I > 0) {
            S += tr.alpha[I - 1] * tr.gamma[I - 1];
            prod *= 1.0 + tr.alpha[I - 1];
            asum += tr.alpha[I - 1];
            tr.partial_sums.push_back(S);
            tr.product_bound.push_back(tr.C * (prod - 1.0));
            if (S > tr.C * (prod - 1.0) * (1.0 + 1e-10) + 1e-300) ++tr.sum_violations;
            if (tr.C * (prod - 1.0) > tr.C * (std::exp(asum) - 1.0) * (1.0 + 1e-12)) ++tr.sum_violations;
        }
        if (tr.gamma[I] > (tr.C + S) * (1.0 + 1e-10)) ++tr.recursion_violations;
    }
    tr.certified_bound = tr.C * std::exp(asum);
    return tr;
}

std::vector<SweepRow> resolvent_sweep(const StepCoefficient& a, const std::vector<double>& tau_grid, double eps,
                                      const GridFunction& g, Exec exec) {
    return ordered_map<SweepRow>(
        tau_grid.size(),
        [&](std::size_t k) {
            double tau = tau_grid[k];
            if (tau == 0.0) throw std::invalid_argument("resolvent_sweep: tau = 0 is not allowed");
            SpectralParameter sp = (eps > 0.0) ? SpectralParameter{tau, eps} : SpectralParameter::with_default_eps(tau);
            SweepRow row;
            row.tau = tau;
            row.eps = sp.eps;
            auto sol = solve_step_resolvent(a, sp, g);
            row.report = certify_bound(sol, a);
            // y = sqrt|tau| x maps the problem to tau = +-1 with a(y / sqrt|tau|).
            double sc = std::sqrt(std::abs(tau));
            Grid gy{g.grid.x0 * sc, g.grid.h * sc, g.grid.n};
            GridFunction gt(gy, g.v);
            for (auto& v : gt.v) v /= std::abs(tau);
            SpectralParameter st{tau > 0 ? 1.0 : -1.0, sp.eps / std::abs(tau)};
            auto sol2 = solve_step_resolvent(a.rescaled(sc), st, gt);
            auto rep2 = certify_bound(sol2, a.rescaled(sc));
            row.q_flux_rescaled = rep2.q_flux;
            row.scale_gap = rep2.q_flux > 0.0 ? std::abs(row.report.q_flux / rep2.q_flux - 1.0) : 0.0;
            return row;
        },
        exec);
}

}  // namespace bvlab
