#include "bvlab/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <numbers>
#include <random>
#include <stdexcept>

#include "bvlab/counterexample.hpp"
#include "bvlab/evolution.hpp"
#include "bvlab/heat_lp.hpp"
#include "bvlab/resolvent.hpp"

namespace bvlab {

namespace {

constexpr double kPi = std::numbers::pi;

std::string str(const char* fmt, ...) {
    char buf[1024];
    va_list ap;
    va_start(ap, fmt);
    std::vsnprintf(buf, sizeof buf, fmt, ap);
    va_end(ap);
    return buf;
}

double spread(const std::vector<double>& v) {
    auto [lo, hi] = std::minmax_element(v.begin(), v.end());
    return *hi / *lo;
}

// Random admissible step coefficients for the resolvent criteria: jumps in
// [1, max_jumps], total variation in [0.5, 4], floor m in [0.5, 2].
std::vector<StepCoefficient> random_steps(int count, int max_jumps, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> jumps(1, max_jumps);
    std::uniform_real_distribution<double> tv(0.5, 4.0), m(0.5, 2.0);
    std::vector<StepCoefficient> out;
    for (int i = 0; i < count; ++i) {
        const int n = jumps(rng);
        const double t = tv(rng), mm = m(rng);
        out.push_back(step_family_fixed_bv(n, t, mm, seed + static_cast<std::uint64_t>(i), 8.0));
    }
    return out;
}

Calibration calibration_or_compute(std::string* note, Exec exec) {
    try {
        auto c = load_calibration();
        if (c.version == kCalibrationVersion) return c;
        *note = "calibration version mismatch, recomputed; ";
    } catch (const std::exception& e) {
        *note = std::string("calibration unavailable (") + e.what() + "), recomputed; ";
    }
    Calibration c;
    c.version = kCalibrationVersion;
    c.path = "(computed)";
    c.values = compute_calibration(exec);
    return c;
}

// ------------------------------------------------------------------ criteria

void c1_green(CriterionResult& r, const AcceptanceOptions&) {
    r.name = "flat-green-kernel";
    const Grid g = Grid::with_step(-10.0, 10.0, 1.0 / 1024.0);
    const auto bump = unit_bump(g, 0.0, 0.005);
    const auto a = StepCoefficient::constant(1.0);
    double worst = 0.0;
    for (double tau : {1.0, -1.0}) {
        auto sol = solve_step_resolvent(a, {tau, 1e-8}, bump);
        auto rep = certify_bound(sol, a);
        const double rel = std::abs(rep.q_v / 0.5 - 1.0);
        worst = std::max(worst, rel);
        r.detail += str("tau=%+g: ||v||_inf/||g||_1 = %.6f; ", tau, rep.q_v);
    }
    r.pass = worst < 5e-3;
    r.measured = str("max relative gap to 1/2 = %.2e", worst);
    r.threshold = "< 5e-3";
}

void c2_elliptic(CriterionResult& r, const AcceptanceOptions& opt) {
    r.name = "elliptic-omega-bound";
    const Grid g = Grid::with_step(-12.0, 12.0, 1.0 / 128.0);
    const auto bump = unit_bump(g, -6.0, 0.1);
    const auto coeffs = random_steps(opt.quick ? 5 : 20, 32, 11);
    int checks = 0, violations = 0;
    double worst = 0.0;
    for (const auto& a : coeffs)
        for (double tau : {0.01, 1.0, 100.0}) {
            auto rep = certify_bound(solve_step_resolvent(a, SpectralParameter::with_default_eps(tau), bump), a);
            ++checks;
            if (!rep.omega_bound_ok) ++violations;
            worst = std::max(worst, rep.omega_sup / rep.omega_bound);
        }
    r.pass = violations == 0;
    r.measured = str("%d violations in %d solves, worst sup Omega / bound = %.3f", violations, checks, worst);
    r.threshold = "0 violations";
}

void c3_gronwall(CriterionResult& r, const AcceptanceOptions& opt) {
    r.name = "discrete-gronwall";
    const Grid g = Grid::with_step(-12.0, 12.0, 1.0 / 128.0);
    const auto bump = unit_bump(g, -6.0, 0.1);
    const auto coeffs = random_steps(opt.quick ? 5 : 20, 32, 23);
    int traces = 0, v_rec = 0, v_sum = 0, v_cd = 0, indices = 0;
    for (const auto& a : coeffs)
        for (double tau : {-100.0, -10.0, -1.0, -0.1, -0.01}) {
            auto t = gronwall_trace(a, solve_step_resolvent(a, SpectralParameter::with_default_eps(tau), bump));
            ++traces;
            indices += static_cast<int>(t.alpha.size());
            v_rec += t.recursion_violations;
            v_sum += t.sum_violations;
            v_cd += t.contdis_violations;
        }
    r.pass = v_rec == 0 && v_sum == 0 && v_cd == 0;
    r.measured = str("violations: recursion %d, partial sums %d, interface inequality %d", v_rec, v_sum, v_cd);
    r.threshold = "all 0";
    r.detail = str("%d traces, %d interface indices", traces, indices);
}

void c4_uniformity(CriterionResult& r, const AcceptanceOptions& opt) {
    r.name = "smoothing-uniformity";
    FamilySpec fam;
    fam.n_jumps = opt.quick ? std::vector<int>{1, 4, 16} : std::vector<int>{1, 4, 16, 64};
    fam.tv_targets = {2.0};
    // 64 jumps in a span of 8 need h = 1/64 for four cells per piece.
    auto run = smoothing_run(opt.quick ? 1.0 / 32.0 : 1.0 / 64.0);
    run.opt.exec = opt.exec;
    EstimateParams par;
    auto head = uniformity_sweep(fam, EstimateKind::smoothing, par, run.u0, run.opt);
    FamilySpec ctl;
    ctl.n_jumps = {16};
    ctl.tv_targets = {1.0, 2.0, 4.0, 8.0};
    auto base = smoothing_run();
    base.opt.exec = opt.exec;
    auto control = uniformity_sweep(ctl, EstimateKind::smoothing, par, base.u0, base.opt);
    const double tol = opt.quick ? 4.0 : 2.0;
    r.pass = head.spread < tol && control.monotone_in_tv;
    r.measured = str("spread %.3f at TV 2; control monotone = %s", head.spread, control.monotone_in_tv ? "yes" : "no");
    r.threshold = str("spread < %g, control monotone in TV", tol);
    for (const auto& m : head.rows) r.detail += str("N=%d q=%.4f; ", m.n_jumps, m.report.quotient);
    r.detail += "control N=16:";
    for (const auto& m : control.rows) r.detail += str(" TV %g q=%.4f", m.tv_target, m.report.quotient);
}

void c5_strichartz(CriterionResult& r, const AcceptanceOptions& opt) {
    r.name = "strichartz-scaling";
    const double tol = opt.quick ? 0.04 : 0.02;
    // Flat half-Laplacian run against the closed form, then the same for a = 1.
    auto flat = strichartz_run(50.0, true);
    flat.opt.exec = opt.exec;
    const auto half = strichartz_quotient(StepCoefficient::constant(0.5), flat.u0, 8.0, 4.0, flat.opt);
    const auto one = strichartz_quotient(StepCoefficient::constant(1.0), flat.u0, 8.0, 4.0, flat.opt);
    const double o_half = strichartz_gaussian_oracle(50.0, 0.5), o_one = strichartz_gaussian_oracle(50.0, 1.0);
    const double gap_half = std::abs(half.quotient / o_half - 1.0), gap_one = std::abs(one.quotient / o_one - 1.0);
    // Rough coefficients at T = 10, datum away from the jumps.
    const double T = 10.0;
    const double ref = strichartz_gaussian_oracle(T, 1.0);
    auto rough = strichartz_run(T, false, -12.0);
    rough.opt.exec = opt.exec;
    const std::vector<int> ns = opt.quick ? std::vector<int>{1, 4} : std::vector<int>{1, 4, 16};
    double worst = 1.0;
    std::string rough_txt;
    for (int n : ns) {
        auto a = step_family_fixed_bv(n, 2.0, 1.0, 1, 8.0);
        auto q = strichartz_quotient(a, rough.u0, 8.0, 4.0, rough.opt);
        const double ratio = q.quotient / ref;
        worst = std::max({worst, ratio, 1.0 / ratio});
        rough_txt += str("N=%d q=%.4f; ", n, q.quotient);
    }
    r.pass = gap_half < tol && gap_one < tol && worst < 4.0;
    r.measured = str("a=1/2: %.5f vs %.5f; a=1: %.5f vs %.5f; rough/flat worst factor %.3f", half.quotient, o_half,
                     one.quotient, o_one, worst);
    r.threshold = str("relative gap < %g, factor < 4", tol);
    r.detail = rough_txt + str("flat oracle at T=10: %.5f", ref);
}

void c6_maximal(CriterionResult& r, const AcceptanceOptions& opt) {
    r.name = "maximal-function";
    std::string note;
    const auto cal = calibration_or_compute(&note, opt.exec);
    auto run = smoothing_run();
    run.opt.exec = opt.exec;
    const std::vector<int> ns = opt.quick ? std::vector<int>{1, 4} : std::vector<int>{1, 4, 16};
    double worst = 1.0;
    bool finite = true;
    r.detail = note;
    for (double s : {0.0, 0.25}) {
        const double ref = cal.at(s == 0.0 ? "maximal.s0" : "maximal.s0.25");
        for (int n : ns) {
            auto a = step_family_fixed_bv(n, 2.0, 1.0, 1, 8.0);
            auto q = maximal_quotient(a, run.u0, s, run.opt);
            finite = finite && std::isfinite(q.quotient);
            worst = std::max({worst, q.quotient / ref, ref / q.quotient});
            r.detail += str("s=%g N=%d q=%.4f (flat %.4f); ", s, n, q.quotient, ref);
        }
    }
    r.pass = finite && worst < 4.0;
    r.measured = str("worst factor to flat calibration %.3f", worst);
    r.threshold = "finite, factor < 4";
}

void c7_commutator(CriterionResult& r, const AcceptanceOptions& opt) {
    r.name = "commutator-scaling";
    const Grid gx{-32.0, 1.0 / 256.0, 16385}, gt{0.0, 1.0 / 32.0, 33};
    const auto bump = unit_bump(gx, 0.0, 0.02);
    const auto bump2 = unit_bump(gx, 1.0, 0.03);
    struct Pair {
        SpaceTimeField g, f;
    };
    std::vector<Pair> pairs(2, Pair{SpaceTimeField(gx, gt), SpaceTimeField(gx, gt)});
    for (std::size_t it = 0; it < gt.n; ++it) {
        const double t = gt.at(it);
        for (std::size_t ix = 0; ix < gx.n; ++ix) {
            const double x = gx.at(ix);
            pairs[0].g(ix, it) = 100.0 * std::sin(x / 100.0 + 0.3 * t);
            pairs[0].f(ix, it) = bump.v[ix] * (1.0 + t);
            pairs[1].g(ix, it) = 80.0 * std::cos(x / 80.0 - 0.5 * t);
            pairs[1].f(ix, it) = bump2.v[ix] * std::cos(t);
        }
    }
    const double tol = opt.quick ? 0.4 : 0.2;
    bool below = true;
    double worst_slope_gap = 0.0;
    for (std::size_t p = 0; p < pairs.size(); ++p) {
        std::vector<double> js, ln;
        for (int j = 1; j <= 4; ++j) {
            auto c = commutator_norm(pairs[p].g, pairs[p].f, j, INFINITY, INFINITY, 2.0, opt.exec);
            below = below && c.norm <= c.bound;
            js.push_back(j);
            ln.push_back(std::log2(c.norm));
            r.detail += str("pair %zu j=%d norm %.4g bound %.4g; ", p + 1, j, c.norm, c.bound);
        }
        const double slope = ls_slope(js, ln);
        worst_slope_gap = std::max(worst_slope_gap, std::abs(slope + 1.0));
        r.measured += str("pair %zu slope %.3f; ", p + 1, slope);
    }
    r.pass = below && worst_slope_gap <= tol;
    r.measured += str("all below bound = %s", below ? "yes" : "no");
    r.threshold = str("norm <= bound, slope -1 +- %g over j = 1..4", tol);
}

void c8_heat(CriterionResult& r, const AcceptanceOptions& opt) {
    r.name = "heat-kernel-gaussian";
    const Grid g{-8.0, 0.01, 1601};
    const double tol = opt.quick ? 0.04 : 0.02;
    const double C_exact = 1.0 / std::sqrt(4.0 * kPi);
    const std::vector<double> ts = opt.quick ? std::vector<double>{0.1} : std::vector<double>{0.01, 0.1, 1.0};
    auto flat = build_divergence_operator(StepCoefficient::constant(1.0), g, Boundary::dirichlet);
    auto rough = build_divergence_operator(StepCoefficient({0.0}, {1.0, 4.0}), g, Boundary::dirichlet);
    double worst_C = 0.0, worst_c = 0.0, min_c = INFINITY;
    for (double t : ts) {
        auto K = kernel_matrix(flat, t, opt.exec);
        auto fit = gaussian_fit(K.K, g, t, KernelShape::value);
        worst_C = std::max(worst_C, std::abs(fit.C_fit / C_exact - 1.0));
        worst_c = std::max(worst_c, std::abs(fit.c_fit / 0.25 - 1.0));
        r.detail += str("flat t=%g C=%.5f c=%.5f; ", t, fit.C_fit, fit.c_fit);
        auto Kr = kernel_matrix(rough, t, opt.exec);
        for (auto shape : {KernelShape::value, KernelShape::gradient, KernelShape::generator}) {
            auto f = gaussian_fit(shaped_kernel(rough, Kr, shape), g, t, shape);
            min_c = std::min(min_c, f.c_fit);
            r.detail += str("steps t=%g power %.1f c=%.4f C_env=%.3g; ", t, f.power, f.c_fit, f.C_envelope);
        }
    }
    r.pass = worst_C <= tol && worst_c <= tol && min_c > 0.0;
    r.measured = str("flat: |C/C0 - 1| = %.4f, |c/0.25 - 1| = %.4f; steps (1, 4): min c = %.4f", worst_C, worst_c, min_c);
    r.threshold = str("flat gaps <= %g, steps c > 0 in all three shapes", tol);
}

void c9_offdiagonal(CriterionResult& r, const AcceptanceOptions& opt) {
    r.name = "offdiagonal-decay";
    const Grid g{-12.0, 1.0 / 64.0, 1537};
    const LittlewoodPaleyBank bank;
    const auto probes = band_probes(g, 1, 0.0, 5, bank);
    const double tol = opt.quick ? 0.6 : 0.3;
    double worst = 0.0;
    struct Case {
        const char* name;
        StepCoefficient a;
    };
    for (const auto& c : {Case{"flat", StepCoefficient::constant(1.0)}, Case{"steps (0.5, 2)", StepCoefficient({0.0}, {0.5, 2.0})}}) {
        auto op = build_divergence_operator(c.a, g, Boundary::dirichlet);
        auto prof = offdiagonal_profile(op, bank, 1, 4, 2.0, probes, opt.exec);
        worst = std::max(worst, std::abs(prof.slope + 1.0));
        r.measured += str("%s slope %.3f; ", c.name, prof.slope);
        r.detail += std::string(c.name) + " ratios";
        for (double x : prof.ratio) r.detail += str(" %.4g", x);
        r.detail += "; ";
    }
    r.pass = worst <= tol;
    r.threshold = str("slope -1 +- %g", tol);
}

void c10_counterexample(CriterionResult& r, const AcceptanceOptions& opt) {
    r.name = "counterexample";
    auto fl = floquet_mode(named_hill_profile("resonant"));
    SingularMetric beta(fl, kMaxScales);
    // Quasimode norms and residuals.
    double norm_gap = 0.0;
    std::vector<double> ks, lres;
    for (int k = 3; k <= 8; ++k) {
        auto q = build_quasimode(beta, k);
        norm_gap = std::max(norm_gap, std::abs(q.norm - 1.0));
        ks.push_back(k);
        lres.push_back(std::log(q.residual_h1 / q.lambda));
    }
    const double c_fit = -ls_slope(ks, lres);
    // Per-scale norms.
    auto norms = beta.piece_norms(1 << 14, opt.exec);
    std::vector<double> l1r, w11r;
    for (const auto& p : norms)
        if (p.n >= 4 && p.n <= 10) {
            l1r.push_back(p.l1 / std::ldexp(1.0, -p.n));
            w11r.push_back(p.w11 / p.n);
        }
    const double s_l1 = spread(l1r), s_w11 = spread(w11r);
    // Blow-up quotient.
    BlowupOptions bo;
    bo.exec = opt.exec;
    if (opt.quick) bo.max_work = 2e7;
    auto tab = blowup_experiment(beta, 3, opt.quick ? 5 : 7, 6.0, 0.2, bo);
    const double slope_gap = std::abs(tab.slope / tab.envelope_slope - 1.0);
    const bool ok_norm = norm_gap <= 1e-8, ok_res = c_fit > 0.0, ok_q = tab.feasible && tab.increasing && slope_gap <= 0.3,
               ok_beta = s_l1 < 3.0 && s_w11 < 3.0;
    r.pass = ok_norm && ok_res && ok_q && ok_beta;
    r.measured = str("norm gap %.1e; residual rate c = %.3f; Q_k window complete = %s, slope %.3f vs envelope %.3f; "
                     "spreads L1 %.3f W11 %.3f",
                     norm_gap, c_fit, tab.feasible ? "yes" : "no", tab.slope, tab.envelope_slope, s_l1, s_w11);
    r.threshold = "gap <= 1e-8; c > 0; Q_k increasing on full windows, slope within 30%; spreads < 3";
    r.detail = str("kappa %.4f; ", fl.kappa);
    for (const auto& row : tab.rows)
        r.detail += str("k=%d eps=%.3g coherence=%.3g window=%.3g q_avg=%.4f q_quasi=%.4f kept=%.4f; ", row.k, row.eps,
                        row.coherence, row.window, row.q_avg, row.q_quasi, row.kept_mass);
}

void c11_propagator(CriterionResult& r, const AcceptanceOptions&) {
    r.name = "propagator-correctness";
    // Datum supported away from the jumps, so it lies in the domain of every power of L
    // and Crank-Nicolson converges at its nominal order.
    const Grid g = Grid::spanning(-8.0, 8.0, 512);
    const StepCoefficient a({1.0, 2.5, 4.0}, {1.0, 3.0, 1.5, 2.0});
    const auto op = build_divergence_operator(a, g, Boundary::dirichlet);
    const auto u0 = wave_packet(g, 2.0, 0.5, -3.0);
    const Grid tg = Grid::spanning(0.0, 1.0, 2);
    const auto exact = eigen_oracle(op, u0, tg).slice_t(1);
    auto err = [&](int sub) {
        auto u = evolve_crank_nicolson(op, u0, tg, sub).field.slice_t(1);
        std::vector<cplx> d(g.n);
        for (std::size_t i = 0; i < g.n; ++i) d[i] = u.v[i] - exact.v[i];
        return lp_norm(d, g.h, 2.0);
    };
    const double e_fine = err(32768);
    std::vector<double> ldt, lerr;
    for (int sub : {256, 512, 1024, 2048}) {
        ldt.push_back(std::log(1.0 / sub));
        lerr.push_back(std::log(err(sub)));
    }
    const double order = ls_slope(ldt, lerr);
    // Mass after 1e4 steps at the fine step.
    const Grid tm{0.0, 1e4 / 32768.0, 2};
    double m0 = 0.0, m1 = 0.0;
    crank_nicolson_visit(op, u0, tm, 10000, [&](std::size_t k, const std::vector<cplx>& u) {
        long double s = 0.0;
        for (auto z : u) s += std::norm(z);
        (k == 0 ? m0 : m1) = static_cast<double>(s);
    });
    const double drift = std::abs(m1 / m0 - 1.0);
    r.pass = e_fine < 1e-6 && drift < 1e-12 && std::abs(order - 2.0) <= 0.2;
    r.measured = str("L2 error %.2e at dt = 1/32768; mass drift %.1e per 1e4 steps; order %.3f", e_fine, drift, order);
    r.threshold = "error < 1e-6, drift < 1e-12, order 2 +- 0.2";
}

void c12_mollification(CriterionResult& r, const AcceptanceOptions& opt) {
    r.name = "mollification-stability";
    auto run = smoothing_run();
    run.opt.exec = opt.exec;
    const auto a = step_family_fixed_bv(4, 2.0, 1.0, 1, 8.0);
    const double q_step = smoothing_quotient(a, run.u0, 0.0, run.opt).quotient;
    std::vector<double> gaps;
    for (double w : {0.4, 0.2, 0.1}) {
        const double q = smoothing_quotient(mollify(a, w, run.grid), run.u0, 0.0, run.opt).quotient;
        gaps.push_back(std::abs(q - q_step));
        r.detail += str("w=%g q=%.5f; ", w, q);
    }
    r.detail += str("step q=%.5f", q_step);
    r.pass = gaps[1] < gaps[0] && gaps[2] < gaps[1];
    r.measured = str("|q_w - q_step| = %.2e, %.2e, %.2e", gaps[0], gaps[1], gaps[2]);
    r.threshold = "strictly decreasing as w = 0.4, 0.2, 0.1";
}

struct Entry {
    void (*run)(CriterionResult&, const AcceptanceOptions&);
    double budget;
};

const Entry kEntries[kCriteria] = {
    {c1_green, 1.0},         {c2_elliptic, 60.0},       {c3_gronwall, 120.0},      {c4_uniformity, 600.0},
    {c5_strichartz, 300.0},  {c6_maximal, 300.0},       {c7_commutator, 120.0},    {c8_heat, 300.0},
    {c9_offdiagonal, 300.0}, {c10_counterexample, 900.0}, {c11_propagator, 120.0}, {c12_mollification, 300.0},
};

}  // namespace

StandardRun smoothing_run(double h) {
    StandardRun s;
    s.grid = Grid::with_step(-128.0, 128.0, h);
    s.u0 = wave_packet(s.grid, 4.0, 1.0, -8.0);
    return s;
}

StandardRun strichartz_run(double T, bool flat, double center) {
    StandardRun s;
    s.grid = Grid::with_step(-400.0, 400.0, flat ? 0.25 : 1.0 / 16.0);
    s.u0 = wave_packet(s.grid, 0.0, 1.0, center);
    s.opt.T = T;
    s.opt.nt = flat ? 1001 : 401;
    s.opt.propagator = flat ? Propagator::flat_exact : Propagator::crank_nicolson;
    return s;
}

double strichartz_gaussian_oracle(double T, double a) {
    return std::pow(std::atan(2.0 * a * T) / (2.0 * a * kPi), 0.125);
}

std::map<std::string, double> compute_calibration(Exec exec) {
    auto run = smoothing_run();
    run.opt.propagator = Propagator::flat_exact;
    run.opt.exec = exec;
    const auto flat = StepCoefficient::constant(1.0);
    std::map<std::string, double> v;
    v["smoothing.s0"] = smoothing_quotient(flat, run.u0, 0.0, run.opt).quotient;
    v["maximal.s0"] = maximal_quotient(flat, run.u0, 0.0, run.opt).quotient;
    v["maximal.s0.25"] = maximal_quotient(flat, run.u0, 0.25, run.opt).quotient;
    return v;
}

CriterionResult run_criterion(int id, const AcceptanceOptions& opt) {
    if (id < 1 || id > kCriteria) throw std::invalid_argument("no acceptance criterion " + std::to_string(id));
    CriterionResult r;
    r.id = id;
    const auto& e = kEntries[id - 1];
    r.budget = e.budget;
    const auto t0 = std::chrono::steady_clock::now();
    try {
        e.run(r, opt);
    } catch (const std::exception& ex) {
        r.pass = false;
        r.detail = std::string("error: ") + ex.what();
    }
    for (auto* s : {&r.measured, &r.detail})
        while (!s->empty() && (s->back() == ' ' || s->back() == ';')) s->pop_back();
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (r.seconds > r.budget) {
        r.pass = false;
        r.detail += str(" runtime %.1f s exceeds the %.0f s budget", r.seconds, r.budget);
    }
    return r;
}

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opt,
                                            const std::function<void(const CriterionResult&)>& on_result) {
    std::vector<int> ids = opt.only;
    if (ids.empty())
        for (int i = 1; i <= kCriteria; ++i) ids.push_back(i);
    std::vector<CriterionResult> out;
    for (int id : ids) {
        out.push_back(run_criterion(id, opt));
        if (on_result) on_result(out.back());
    }
    return out;
}

std::string format_result(const CriterionResult& r) {
    return str("%s %2d %-24s measured: %s | threshold: %s | %.1f s (budget %.0f s)", r.pass ? "PASS" : "FAIL", r.id,
               r.name.c_str(), r.measured.c_str(), r.threshold.c_str(), r.seconds, r.budget);
}

}  // namespace bvlab
