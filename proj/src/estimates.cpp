#include "bvlab/estimates.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <stdexcept>

#include "json.hpp"

#include "bvlab/fft.hpp"

namespace bvlab {

namespace {

void fill_coefficient_meta(const Coefficient& a, QuotientReport& r) {
    r.coefficient = describe(a);
    auto rep = check_admissible(a, 0.0);
    r.bv_norm = rep.bv_norm;
    r.tv = rep.tv;
    if (auto s = std::get_if<StepCoefficient>(&a)) r.jumps = s->jumps();
}

double constant_value(const Coefficient& a) {
    auto s = std::get_if<StepCoefficient>(&a);
    if (!s || !s->breakpoints.empty())
        throw std::invalid_argument("flat_exact propagator needs a constant coefficient");
    return s->values[0];
}

// Fourth-order centered d/dx in the interior, second order at the ends.
std::vector<cplx> derivative_fd4(const std::vector<cplx>& v, double h) {
    const std::size_t n = v.size();
    std::vector<cplx> d(n);
    for (std::size_t i = 2; i + 2 < n; ++i) d[i] = (v[i - 2] - 8.0 * v[i - 1] + 8.0 * v[i + 1] - v[i + 2]) / (12 * h);
    if (n >= 3) {
        d[0] = (-3.0 * v[0] + 4.0 * v[1] - v[2]) / (2 * h);
        d[n - 1] = (3.0 * v[n - 1] - 4.0 * v[n - 2] + v[n - 3]) / (2 * h);
        if (n >= 4) {
            d[1] = (v[2] - v[0]) / (2 * h);
            d[n - 2] = (v[n - 1] - v[n - 3]) / (2 * h);
        }
    }
    return d;
}

cplx phi1(cplx w) {
    if (std::abs(w) < 1e-3) return 1.0 + w / 2.0 + w * w / 6.0 + w * w * w / 24.0;
    return (std::exp(w) - 1.0) / w;
}

cplx phi2(cplx w) {
    if (std::abs(w) < 1e-2) return 0.5 + w / 6.0 + w * w / 24.0 + w * w * w / 120.0 + w * w * w * w / 720.0;
    return (std::exp(w) - 1.0 - w) / (w * w);
}

}  // namespace

std::string to_string(EstimateKind k) {
    switch (k) {
        case EstimateKind::smoothing: return "smoothing";
        case EstimateKind::inhomogeneous: return "inhomog";
        case EstimateKind::strichartz: return "strichartz";
        case EstimateKind::maximal: return "maximal";
    }
    return "unknown";
}

EstimateKind parse_estimate_kind(const std::string& s) {
    if (s == "smoothing") return EstimateKind::smoothing;
    if (s == "inhomog" || s == "inhomogeneous") return EstimateKind::inhomogeneous;
    if (s == "strichartz") return EstimateKind::strichartz;
    if (s == "maximal") return EstimateKind::maximal;
    throw std::invalid_argument("unknown estimate kind '" + s + "'");
}

GridFunction wave_packet(const Grid& g, double xi0, double width, double center) {
    return GridFunction::sample(g, [&](double x) {
        double y = (x - center) / width;
        return std::exp(-0.5 * y * y) * std::exp(cplx(0.0, xi0 * x));
    });
}

SpaceTimeField propagate(const Coefficient& a, const GridFunction& u0, const RunOptions& opt, QuotientReport* meta) {
    u0.validate();
    if (!(opt.T > 0.0) || opt.nt < 2) throw std::invalid_argument("propagate: need T > 0 and nt >= 2");
    Grid tg{0.0, opt.T / static_cast<double>(opt.nt - 1), opt.nt};
    SpaceTimeField u;
    int substeps = 0;
    if (opt.propagator == Propagator::flat_exact) {
        double c = constant_value(a);
        Grid scaled{0.0, tg.h * c, tg.n};
        u = flat_group(u0, scaled, opt.exec);
        u.t = tg;
    } else {
        auto op = build_divergence_operator(a, u0.grid, Boundary::dirichlet);
        substeps = crank_nicolson_substeps(op, u0, tg, opt.cn_tol);
        u = evolve_crank_nicolson(op, u0, tg, substeps).field;
    }
    const double zone = opt.leak_zone * (u0.grid.back() - u0.grid.x0);
    auto last = u.slice_t(opt.nt - 1);
    double leak = boundary_mass_fraction(last.v, u0.grid.h, zone);
    if (leak > opt.leak_tol)
        throw std::runtime_error("boundary leak: " + std::to_string(leak) +
                                 " of the mass reached the box edges; enlarge the box or shorten T");
    if (meta) {
        meta->T = opt.T;
        meta->n_x = u0.grid.n;
        meta->n_t = opt.nt;
        meta->dx = u0.grid.h;
        meta->dt = tg.h;
        meta->substeps = substeps;
        meta->leak = leak;
        meta->propagator = opt.propagator == Propagator::flat_exact ? "flat_exact" : "crank_nicolson";
        fill_coefficient_meta(a, *meta);
    }
    return u;
}

// ------------------------------------------------------------------ smoothing

double smoothing_numerator(const SpaceTimeField& u, double s, Exec exec) {
    MixedNormSpec spec{Outer::x, INFINITY, 2.0, BesovWeight{s + 0.5, 2.0, {}}};
    return mixed_norm(u, spec, exec);
}

QuotientReport smoothing_quotient(const Coefficient& a, const GridFunction& u0, double s, const RunOptions& opt) {
    if (!(s > -1.0 && s < 0.5)) throw std::invalid_argument("smoothing_quotient: s must lie in (-1, 1/2)");
    QuotientReport r;
    r.kind = EstimateKind::smoothing;
    r.s = s;
    r.p = INFINITY;
    r.q = 2.0;
    auto u = propagate(a, u0, opt, &r);
    r.numerator = smoothing_numerator(u, s, opt.exec);
    r.denominator = besov_norm(u0, s, 2.0, 2.0, {}, opt.exec);
    if (!(r.denominator > 0.0)) throw std::invalid_argument("smoothing_quotient: datum has zero norm");
    r.quotient = r.numerator / r.denominator;
    return r;
}

// -------------------------------------------------------------- inhomogeneous

SpaceTimeField flat_duhamel(const SpaceTimeField& f) {
    f.validate();
    const std::size_t nx = f.x.n, nt = f.t.n;
    std::size_t span = 1;
    {
        std::size_t first = nx, last = 0;
        for (std::size_t k = 0; k < nt; ++k)
            for (std::size_t i = 0; i < nx; ++i)
                if (f(i, k) != cplx(0.0)) {
                    first = std::min(first, i);
                    last = std::max(last, i);
                }
        if (first <= last) span = last - first + 1;
    }
    const std::size_t N = f.periodic_x ? nx : fft_good_size(std::max(nx, 4 * span));
    auto xi = fft_frequencies(N, f.x.h);
    const double dt = f.t.h;
    std::vector<cplx> E(N), A(N), B(N);
    for (std::size_t m = 0; m < N; ++m) {
        cplx w(0.0, -xi[m] * xi[m] * dt);
        E[m] = std::exp(w);
        cplx p1 = phi1(w), p2 = phi2(w);
        A[m] = cplx(0.0, -dt) * (p1 - p2);  // weight of f_k
        B[m] = cplx(0.0, -dt) * p2;         // weight of f_{k+1}
    }
    SpaceTimeField u(f.x, f.t, f.periodic_x);
    std::vector<cplx> uh(N, 0.0), fk(N), fk1(N);
    auto load = [&](std::size_t k, std::vector<cplx>& out) {
        std::fill(out.begin(), out.end(), cplx(0.0));
        for (std::size_t i = 0; i < nx; ++i) out[i] = f(i, k);
        fft_forward(out);
    };
    load(0, fk);
    for (std::size_t k = 0; k + 1 < nt; ++k) {
        load(k + 1, fk1);
        for (std::size_t m = 0; m < N; ++m) uh[m] = E[m] * uh[m] + A[m] * fk[m] + B[m] * fk1[m];
        std::vector<cplx> w = uh;
        fft_inverse(w);
        for (std::size_t i = 0; i < nx; ++i) u(i, k + 1) = w[i];
        fk.swap(fk1);
    }
    return u;
}

QuotientReport inhomogeneous_smoothing_check(const Coefficient& a, const SpaceTimeField& f, const RunOptions& opt) {
    f.validate();
    QuotientReport r;
    r.kind = EstimateKind::inhomogeneous;
    r.p = INFINITY;
    r.q = 2.0;
    r.T = f.t.back() - f.t.x0;
    r.n_x = f.x.n;
    r.n_t = f.t.n;
    r.dx = f.x.h;
    r.dt = f.t.h;
    fill_coefficient_meta(a, r);
    const std::size_t nx = f.x.n, nt = f.t.n;
    double fmax = 0.0;
    for (const auto& z : f.values) fmax = std::max(fmax, std::abs(z));
    if (fmax == 0.0) return r;  // zero source, zero solution
    for (std::size_t k = 0; k < nt; ++k)
        if (std::abs(f(0, k)) > 1e-12 * fmax || std::abs(f(nx - 1, k)) > 1e-12 * fmax)
            throw std::invalid_argument("inhomogeneous_smoothing_check: source touches the box edge");
    for (std::size_t i = 0; i < nx; ++i)
        if (std::abs(f(i, nt - 1)) > 1e-12 * fmax)
            throw std::invalid_argument("inhomogeneous_smoothing_check: source does not vanish at the window end");

    SpaceTimeField u;
    if (opt.propagator == Propagator::flat_exact) {
        double c = constant_value(a);
        if (c != 1.0) throw std::invalid_argument("flat_exact source solve needs a == 1");
        u = flat_duhamel(f);
        r.propagator = "flat_exact";
    } else {
        auto op = build_divergence_operator(a, f.x, Boundary::dirichlet);
        // Substeps from the slice where the source is largest.
        std::size_t kmax = 0;
        double best = -1.0;
        for (std::size_t k = 0; k < nt; ++k) {
            double e = 0.0;
            for (std::size_t i = 0; i < nx; ++i) e += std::norm(f(i, k));
            if (e > best) best = e, kmax = k;
        }
        r.substeps = crank_nicolson_substeps(op, f.slice_t(kmax), f.t, opt.cn_tol);
        u = evolve_with_source(op, f, r.substeps);
        r.propagator = "crank_nicolson";
    }
    r.leak = boundary_mass_fraction(u.slice_t(nt - 1).v, f.x.h, opt.leak_zone * (f.x.back() - f.x.x0));
    if (r.leak > opt.leak_tol) throw std::runtime_error("boundary leak in the source run; enlarge the box");

    // d_x u per slice.
    SpaceTimeField du(f.x, f.t, f.periodic_x);
    for (std::size_t k = 0; k < nt; ++k) {
        std::vector<cplx> s(nx);
        for (std::size_t i = 0; i < nx; ++i) s[i] = u(i, k);
        auto d = derivative_fd4(s, f.x.h);
        for (std::size_t i = 0; i < nx; ++i) du(i, k) = d[i];
    }
    double dx_term = mixed_norm(du, {Outer::x, INFINITY, 2.0, std::nullopt}, opt.exec);

    // |D_t|^{1/2} per x on the tapered window, padded to a length fixed by nt.
    const std::size_t Nt = fft_good_size(4 * nt);
    const double dt = f.t.h;
    auto om = fft_frequencies(Nt, dt);
    std::vector<double> mult(Nt), taper(nt, 1.0);
    for (std::size_t m = 0; m < Nt; ++m) mult[m] = std::sqrt(std::abs(om[m]));
    const auto k0 = static_cast<std::size_t>(std::floor((1.0 - opt.taper) * static_cast<double>(nt - 1)));
    for (std::size_t k = k0; k < nt; ++k) {
        double z = static_cast<double>(k - k0) / static_cast<double>(std::max<std::size_t>(1, nt - 1 - k0));
        taper[k] = 0.5 * (1.0 + std::cos(M_PI * z));
    }
    auto per_x = ordered_map<double>(
        nx,
        [&](std::size_t i) {
            std::vector<cplx> w(Nt, 0.0);
            for (std::size_t k = 0; k < nt; ++k) w[k] = u(i, k) * taper[k];
            fft_forward(w);
            for (std::size_t m = 0; m < Nt; ++m) w[m] *= mult[m];
            fft_inverse(w);
            w.resize(nt);
            return lp_norm(w, dt, 2.0);
        },
        opt.exec);
    double dt_term = *std::max_element(per_x.begin(), per_x.end());

    r.numerator = dx_term + dt_term;
    r.denominator = mixed_norm(f, {Outer::x, 1.0, 2.0, std::nullopt}, opt.exec);
    r.quotient = r.numerator / r.denominator;
    return r;
}

// ----------------------------------------------------------------- Strichartz

void check_strichartz_pair(double p, double q, bool besov_valued) {
    double line = 2.0 / p + (std::isinf(q) ? 0.0 : 1.0 / q);
    if (std::abs(line - 0.5) > 1e-12 || !(p >= 4.0))
        throw std::invalid_argument("inadmissible Strichartz pair: need 2/p + 1/q = 1/2 with p >= 4");
    if (!besov_valued && !(p > 4.0))
        throw std::invalid_argument(
            "inadmissible Strichartz pair: the end-point (4, inf) is missing for Lebesgue norms; "
            "p = 4 is only available with the Besov-valued norm");
}

QuotientReport strichartz_quotient(const Coefficient& a, const GridFunction& u0, double p, double q,
                                   const RunOptions& opt, bool besov_valued) {
    check_strichartz_pair(p, q, besov_valued);
    QuotientReport r;
    r.kind = EstimateKind::strichartz;
    r.p = p;
    r.q = q;
    auto u = propagate(a, u0, opt, &r);
    const std::size_t nt = u.t.n;
    std::vector<double> slice_norm = ordered_map<double>(
        nt,
        [&](std::size_t k) {
            auto sl = u.slice_t(k);
            if (besov_valued) return besov_norm(sl, 0.0, q, 2.0, {}, Exec::serial);
            return lp_norm(sl, q);
        },
        opt.exec);
    std::vector<cplx> series(slice_norm.begin(), slice_norm.end());
    // [-T, T] from [0, T]: |u(-t)| = |u(t)| for real data and real a.
    r.numerator = std::pow(2.0, 1.0 / p) * lp_norm(series, u.t.h, p);
    r.denominator = lp_norm(u0, 2.0);
    r.quotient = r.numerator / r.denominator;
    return r;
}

// -------------------------------------------------------------------- maximal

QuotientReport maximal_quotient(const Coefficient& a, const GridFunction& u0, double s, const RunOptions& opt) {
    if (!(s > -0.75 && s < 1.0)) throw std::invalid_argument("maximal_quotient: s must lie in (-3/4, 1)");
    QuotientReport r;
    r.kind = EstimateKind::maximal;
    r.s = s;
    r.p = 4.0;
    r.q = INFINITY;
    auto u = propagate(a, u0, opt, &r);
    MixedNormSpec spec{Outer::x, 4.0, INFINITY, BesovWeight{s - 0.25, 2.0, {}}};
    r.numerator = mixed_norm(u, spec, opt.exec);
    r.denominator = besov_norm(u0, s, 2.0, 2.0, {}, opt.exec);
    r.quotient = r.numerator / r.denominator;
    return r;
}

// ---------------------------------------------------------------------- sweep

SweepTable uniformity_sweep(const FamilySpec& fam, EstimateKind kind, const EstimateParams& par,
                            const GridFunction& u0, const RunOptions& opt) {
    struct Job {
        int n;
        double tv;
    };
    std::vector<Job> jobs;
    for (int n : fam.n_jumps)
        for (double tv : fam.tv_targets) jobs.push_back({n, tv});
    RunOptions inner = opt;
    inner.exec = Exec::serial;
    auto rows = ordered_map<SweepMember>(
        jobs.size(),
        [&](std::size_t i) {
            auto a = step_family_fixed_bv(jobs[i].n, jobs[i].tv, fam.m, fam.seed, fam.span);
            SweepMember mem;
            mem.n_jumps = jobs[i].n;
            mem.tv_target = jobs[i].tv;
            switch (kind) {
                case EstimateKind::smoothing: mem.report = smoothing_quotient(a, u0, par.s, inner); break;
                case EstimateKind::maximal: mem.report = maximal_quotient(a, u0, par.s, inner); break;
                case EstimateKind::strichartz:
                    mem.report = strichartz_quotient(a, u0, par.p, par.q, inner, par.besov_valued);
                    break;
                case EstimateKind::inhomogeneous:
                    throw std::invalid_argument("uniformity_sweep: the source check has no datum sweep");
            }
            return mem;
        },
        opt.exec);
    SweepTable t;
    t.rows = std::move(rows);
    t.q_min = INFINITY;
    t.q_max = 0.0;
    for (const auto& m : t.rows) {
        t.q_min = std::min(t.q_min, m.report.quotient);
        t.q_max = std::max(t.q_max, m.report.quotient);
    }
    t.spread = t.q_min > 0.0 ? t.q_max / t.q_min : INFINITY;
    t.monotone_in_tv = fam.tv_targets.size() > 1;
    for (std::size_t a = 0; a < fam.n_jumps.size(); ++a)
        for (std::size_t b = 1; b < fam.tv_targets.size(); ++b) {
            const auto& prev = t.rows[a * fam.tv_targets.size() + b - 1].report.quotient;
            const auto& cur = t.rows[a * fam.tv_targets.size() + b].report.quotient;
            if (cur < prev) t.monotone_in_tv = false;
        }
    return t;
}

// ----------------------------------------------------------------- commutator

CommutatorReport commutator_norm(const SpaceTimeField& g, const SpaceTimeField& f, int j, double p1, double q_inf,
                                 double q2, Exec exec) {
    g.validate();
    f.validate();
    if (g.x.n != f.x.n || g.t.n != f.t.n) throw std::invalid_argument("commutator_norm: g and f grids differ");
    auto inv = [](double p) { return std::isinf(p) ? 0.0 : 1.0 / p; };
    if (!(p1 >= 1.0) || std::abs(inv(q_inf) + inv(q2) - 0.5) > 1e-12)
        throw std::invalid_argument("commutator_norm: exponents must satisfy 1/q_inf + 1/q2 = 1/2 and p1 >= 1");
    const double p_inf = (p1 == 1.0) ? INFINITY : (std::isinf(p1) ? 1.0 : p1 / (p1 - 1.0));
    const std::size_t nx = f.x.n, nt = f.t.n;
    SpaceTimeField h(f.x, f.t, f.periodic_x), dg(g.x, g.t, g.periodic_x);
    auto slices = ordered_map<std::pair<std::vector<cplx>, std::vector<cplx>>>(
        nt,
        [&](std::size_t k) {
            GridFunction gf(f.x, f.periodic_x), ff = f.slice_t(k), gk = g.slice_t(k);
            for (std::size_t i = 0; i < nx; ++i) gf.v[i] = gk.v[i] * ff.v[i];
            auto a = lp_project(gf, j);
            auto b = lp_project(ff, j);
            std::vector<cplx> hk(nx);
            for (std::size_t i = 0; i < nx; ++i) hk[i] = a.v[i] - gk.v[i] * b.v[i];
            return std::make_pair(hk, derivative_fd4(gk.v, g.x.h));
        },
        exec);
    for (std::size_t k = 0; k < nt; ++k)
        for (std::size_t i = 0; i < nx; ++i) {
            h(i, k) = slices[k].first[i];
            dg(i, k) = slices[k].second[i];
        }
    CommutatorReport r;
    r.norm = mixed_norm(h, {Outer::x, 1.0, 2.0, std::nullopt}, exec);
    r.dg_norm = mixed_norm(dg, {Outer::x, p1, q_inf, std::nullopt}, exec);
    r.f_norm = mixed_norm(f, {Outer::x, p_inf, q2, std::nullopt}, exec);
    r.moment = LittlewoodPaleyBank::kernel_first_moment();
    r.bound = std::ldexp(1.0, -j) * r.moment * r.dg_norm * r.f_norm;
    return r;
}

// ---------------------------------------------------------------- calibration

double Calibration::at(const std::string& key) const {
    auto it = values.find(key);
    if (it == values.end()) throw std::out_of_range("calibration: no entry '" + key + "' in " + path);
    return it->second;
}

std::string default_calibration_path() {
    if (const char* e = std::getenv("BVLAB_CALIBRATION")) return e;
    return std::string(BVLAB_DATA_DIR) + "/calibration.json";
}

Calibration load_calibration(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("calibration file not found: " + path);
    nlohmann::json j;
    in >> j;
    Calibration c;
    c.path = path;
    c.version = j.at("version").get<int>();
    for (auto& [k, v] : j.at("values").items()) c.values[k] = v.get<double>();
    return c;
}

}  // namespace bvlab
