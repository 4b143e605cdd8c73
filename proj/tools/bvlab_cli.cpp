// bvlab command line.  Every output carries the config hash; errors go to
// stderr as a one-line JSON record and the exit status is nonzero.
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <toml.hpp>

#include "bvlab/acceptance.hpp"
#include "bvlab/counterexample.hpp"
#include "bvlab/estimates.hpp"
#include "bvlab/evolution.hpp"
#include "bvlab/heat_lp.hpp"
#include "bvlab/io.hpp"
#include "bvlab/resolvent.hpp"

using namespace bvlab;

namespace {

// Thrown when a pre-registered acceptance threshold fails; outputs are still written.
struct ThresholdFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// The hash covers every resolved option except output paths and the config
// file name, plus the bytes of every input file, so two runs with the same
// hash see the same inputs.
std::string config_hash(const CLI::App& sub, const std::vector<std::string>& inputs) {
    std::istringstream cfg(sub.config_to_str(true, false));
    std::string line, canon;
    while (std::getline(cfg, line)) {
        if (line.rfind("out", 0) == 0 || line.rfind("decay-out", 0) == 0 || line.rfind("config", 0) == 0) continue;
        canon += line + "\n";
    }
    for (const auto& p : inputs)
        if (!p.empty()) canon += read_file(p);
    return fnv1a_hex(sub.get_name() + "\n" + canon);
}

int calibration_version() {
    try {
        return load_calibration().version;
    } catch (const std::exception&) {
        return 0;
    }
}

void emit(const CsvTable& t, const std::string& out, const Provenance& prov) {
    if (out.empty() || out == "-")
        t.write(std::cout, prov);
    else
        t.save(out, prov);
}

Coefficient coefficient_arg(const std::string& s) {
    if (s == "flat") return StepCoefficient::constant(1.0);
    return load_coefficient(s);
}

bool is_step(const Coefficient& a) { return std::holds_alternative<StepCoefficient>(a); }

bool is_constant(const Coefficient& a) { return is_step(a) && std::get<StepCoefficient>(a).jumps() == 0; }

HillCoefficient hill_arg(const std::string& s) {
    for (const auto& n : hill_profile_names())
        if (n == s) return named_hill_profile(s);
    auto j = load_json(s);
    HillCoefficient h;
    h.name = j.value("name", std::string("custom"));
    h.delta = j.at("delta").get<double>();
    h.harmonic = j.at("harmonic").get<int>();
    h.flat = j.value("flat", h.flat);
    h.ramp = j.value("ramp", h.ramp);
    h.validate();
    return h;
}

// ------------------------------------------------------------------ resolvent

struct ResolventArgs {
    std::string coeff, out;
    std::vector<double> tau{1.0};
    double eps = NAN;
    double center = 0.0, width = 0.1, box = 16.0, h = 1.0 / 128.0;
};

void run_resolvent(const ResolventArgs& a, const Provenance& prov) {
    const auto c = coefficient_arg(a.coeff);
    const Grid g = Grid::with_step(-a.box, a.box, a.h);
    const auto src = unit_bump(g, a.center, a.width);
    auto rows = ordered_map<ResolventReport>(a.tau.size(), [&](std::size_t i) {
        auto sp = std::isnan(a.eps) ? SpectralParameter::with_default_eps(a.tau[i]) : SpectralParameter{a.tau[i], a.eps};
        sp.validate();
        auto sol = is_step(c) ? solve_step_resolvent(std::get<StepCoefficient>(c), sp, src) : solve_grid_resolvent(c, sp, src);
        return certify_bound(sol, c);
    });
    CsvTable t({"tau", "eps", "q_v", "q_flux", "omega_bound_ok", "energy_residual"});
    for (const auto& r : rows)
        t.row({CsvTable::cell(r.tau), CsvTable::cell(r.eps), CsvTable::cell(r.q_v), CsvTable::cell(r.q_flux),
               CsvTable::cell(r.omega_bound_ok), CsvTable::cell(r.energy_residual)});
    emit(t, a.out, prov);
    for (const auto& r : rows)
        if (!r.omega_bound_ok) throw ThresholdFailure("elliptic bound violated at tau = " + format_number(r.tau));
}

// ------------------------------------------------------------------ evolve

struct DatumArgs {
    std::string u0 = "wavepacket";
    double xi0 = 4.0, width = 1.0, center = 0.0;
    double box = 128.0, h = 1.0 / 32.0;
};

GridFunction datum(const DatumArgs& d) {
    if (d.u0 == "gaussian" || d.u0 == "wavepacket") {
        const Grid g = Grid::with_step(-d.box, d.box, d.h);
        return wave_packet(g, d.u0 == "gaussian" ? 0.0 : d.xi0, d.width, d.center);
    }
    return SpaceTimeField::load(d.u0).slice_t(0);
}

struct EvolveArgs {
    std::string coeff, out;
    DatumArgs d;
    double T = 1.0;
    std::size_t nt = 257;
    std::string propagator = "cn";
};

void run_evolve(const EvolveArgs& a, const Provenance& prov) {
    const auto c = coefficient_arg(a.coeff);
    RunOptions opt;
    opt.T = a.T;
    opt.nt = a.nt;
    opt.propagator = a.propagator == "flat" ? Propagator::flat_exact : Propagator::crank_nicolson;
    QuotientReport meta;
    auto u = propagate(c, datum(a.d), opt, &meta);
    u.save(a.out, prov.config_hash);
    nlohmann::json j = {{"config_hash", prov.config_hash}, {"field", a.out},       {"n_x", meta.n_x},
                        {"n_t", meta.n_t},                {"substeps", meta.substeps}, {"leak", meta.leak},
                        {"propagator", meta.propagator}};
    std::cout << j.dump() << "\n";
}

// ------------------------------------------------------------------ estimate / sweep

struct EstimateArgs {
    std::string kind = "smoothing", coeff = "flat", sweep, out;
    double s = 0.0, p = 8.0, q = 4.0;
    bool lebesgue = false, besov = false;
    double T = 0.0;
    std::size_t nt = 0;
};

StandardRun standard_run(EstimateKind k, const Coefficient& c) {
    if (k == EstimateKind::strichartz) return is_constant(c) ? strichartz_run(50.0, true) : strichartz_run(10.0, false, -12.0);
    auto r = smoothing_run();
    if (is_constant(c)) r.opt.propagator = Propagator::flat_exact;
    return r;
}

// Source for the inhomogeneous check: datum profile times sin^2(pi t / T).
SpaceTimeField packet_source(const GridFunction& u0, const RunOptions& opt) {
    const Grid tg{0.0, opt.T / static_cast<double>(opt.nt - 1), opt.nt};
    SpaceTimeField f(u0.grid, tg);
    for (std::size_t it = 0; it < tg.n; ++it) {
        const double e = std::sin(std::numbers::pi * tg.at(it) / opt.T);
        for (std::size_t ix = 0; ix < u0.grid.n; ++ix) f(ix, it) = u0.v[ix] * (e * e);
    }
    return f;
}

// Pre-registered reference for a single run: calibration or closed form, and the
// allowed factor (1.25 for a = 1, 4 for rough coefficients).
bool reference_for(EstimateKind k, double s, const Coefficient& c, double T, double* ref, double* factor) {
    const bool flat = is_constant(c);
    *factor = flat ? 1.25 : 4.0;
    if (k == EstimateKind::strichartz) {
        *ref = strichartz_gaussian_oracle(T, flat ? std::get<StepCoefficient>(c).values[0] : 1.0);
        return true;
    }
    if (k == EstimateKind::inhomogeneous) return false;
    std::string key = k == EstimateKind::smoothing ? "smoothing.s" : "maximal.s";
    key += s == 0.0 ? "0" : (s == 0.25 ? "0.25" : "");
    try {
        *ref = load_calibration().at(key);
        return true;
    } catch (const std::exception&) {
        return false;
    }
}

void run_estimate(const EstimateArgs& a, const Provenance& prov) {
    const auto kind = parse_estimate_kind(a.kind);
    if (a.lebesgue && a.besov) throw std::invalid_argument("--lebesgue and --besov are exclusive");
    const bool besov_valued = a.besov;
    if (kind == EstimateKind::strichartz) check_strichartz_pair(a.p, a.q, besov_valued);
    const auto c = coefficient_arg(a.coeff);
    auto run = standard_run(kind, c);
    if (a.T > 0.0) run.opt.T = a.T;
    if (a.nt > 0) run.opt.nt = a.nt;
    QuotientReport r;
    switch (kind) {
        case EstimateKind::smoothing: r = smoothing_quotient(c, run.u0, a.s, run.opt); break;
        case EstimateKind::maximal: r = maximal_quotient(c, run.u0, a.s, run.opt); break;
        case EstimateKind::strichartz: r = strichartz_quotient(c, run.u0, a.p, a.q, run.opt, besov_valued); break;
        case EstimateKind::inhomogeneous:
            run.opt.propagator = Propagator::crank_nicolson;
            r = inhomogeneous_smoothing_check(c, packet_source(run.u0, run.opt), run.opt);
            break;
    }
    double ref = NAN, factor = NAN;
    const bool has_ref = reference_for(kind, a.s, c, run.opt.T, &ref, &factor);
    const double ratio = has_ref ? r.quotient / ref : NAN;
    const bool pass = !has_ref || (ratio < factor && ratio > 1.0 / factor);
    CsvTable t({"kind", "coefficient", "jumps", "bv_norm", "s", "p", "q", "T", "n_x", "n_t", "dx", "dt", "substeps",
                "leak", "numerator", "denominator", "quotient", "reference", "ratio", "pass"});
    t.row({to_string(kind), r.coefficient, CsvTable::cell(r.jumps), CsvTable::cell(r.bv_norm), CsvTable::cell(r.s),
           CsvTable::cell(r.p), CsvTable::cell(r.q), CsvTable::cell(r.T), CsvTable::cell(r.n_x), CsvTable::cell(r.n_t),
           CsvTable::cell(r.dx), CsvTable::cell(r.dt), CsvTable::cell(r.substeps), CsvTable::cell(r.leak),
           CsvTable::cell(r.numerator), CsvTable::cell(r.denominator), CsvTable::cell(r.quotient), CsvTable::cell(ref),
           CsvTable::cell(ratio), CsvTable::cell(pass)});
    emit(t, a.out, prov);
    if (!pass)
        throw ThresholdFailure("quotient " + format_number(r.quotient) + " outside " + format_number(factor) +
                               "x of the reference " + format_number(ref));
}

struct SweepFile {
    EstimateKind kind = EstimateKind::smoothing;
    EstimateParams par;
    FamilySpec fam;
    double h = 1.0 / 32.0;
    double T = 1.0;
    std::size_t nt = 257;
};

template <class T>
std::vector<T> toml_array(const toml::table& t, std::string_view key, std::vector<T> fallback) {
    const auto* arr = t[key].as_array();
    if (!arr) return fallback;
    std::vector<T> out;
    for (const auto& e : *arr) {
        auto v = e.template value<T>();
        if (!v) throw std::invalid_argument("sweep file: bad entry in '" + std::string(key) + "'");
        out.push_back(*v);
    }
    return out;
}

SweepFile parse_sweep(const std::string& path) {
    toml::table t;
    try {
        t = toml::parse_file(path);
    } catch (const toml::parse_error& e) {
        throw std::invalid_argument("sweep file " + path + ": " + std::string(e.description()));
    }
    SweepFile s;
    s.kind = parse_estimate_kind(t["kind"].value_or(std::string("smoothing")));
    s.par.s = t["s"].value_or(0.0);
    s.par.p = t["p"].value_or(8.0);
    s.par.q = t["q"].value_or(4.0);
    s.par.besov_valued = t["besov"].value_or(false);
    if (const auto* f = t["family"].as_table()) {
        s.fam.n_jumps = toml_array<int>(*f, "n_jumps", s.fam.n_jumps);
        s.fam.tv_targets = toml_array<double>(*f, "tv_targets", s.fam.tv_targets);
        s.fam.m = (*f)["m"].value_or(s.fam.m);
        s.fam.seed = static_cast<std::uint64_t>((*f)["seed"].value_or(static_cast<std::int64_t>(s.fam.seed)));
        s.fam.span = (*f)["span"].value_or(s.fam.span);
    }
    if (const auto* r = t["run"].as_table()) {
        s.h = (*r)["h"].value_or(s.h);
        s.T = (*r)["T"].value_or(s.T);
        s.nt = static_cast<std::size_t>((*r)["nt"].value_or(static_cast<std::int64_t>(s.nt)));
    }
    return s;
}

void run_sweep(const std::string& path, const std::string& out, std::optional<std::uint64_t> seed,
               const Provenance& prov) {
    auto s = parse_sweep(path);
    if (seed) s.fam.seed = *seed;
    StandardRun run = s.kind == EstimateKind::strichartz ? strichartz_run(10.0, false, -12.0) : smoothing_run(s.h);
    if (s.kind != EstimateKind::strichartz) {
        run.opt.T = s.T;
        run.opt.nt = s.nt;
    }
    auto tab = uniformity_sweep(s.fam, s.kind, s.par, run.u0, run.opt);
    CsvTable t({"N_jumps", "tv_target", "bv_norm", "quotient"});
    for (const auto& m : tab.rows)
        t.row({CsvTable::cell(m.n_jumps), CsvTable::cell(m.tv_target), CsvTable::cell(m.report.bv_norm),
               CsvTable::cell(m.report.quotient)});
    t.row({"max/min", "", "", CsvTable::cell(tab.spread)});
    emit(t, out, prov);
    // A single BV level is the uniformity claim (K = 2); several levels are the control run.
    if (s.fam.tv_targets.size() == 1 && !(tab.spread < 2.0))
        throw ThresholdFailure("sweep spread " + format_number(tab.spread) + " is not below 2");
}

// ------------------------------------------------------------------ heatlp

struct HeatArgs {
    std::string coeff = "flat", out, decay_out;
    std::vector<double> t{0.01, 0.1, 1.0};
    std::vector<int> bands;
    int dmax = 4;
    double p = 2.0, box = 8.0, h = 0.01;
};

void run_heat(const HeatArgs& a, const Provenance& prov) {
    const auto c = coefficient_arg(a.coeff);
    const Grid g = Grid::with_step(-a.box, a.box, a.h);
    auto op = build_divergence_operator(c, g, Boundary::dirichlet);
    CsvTable fit({"t", "power", "C_fit", "c_fit", "residual", "shape", "C_envelope"});
    const char* names[] = {"value", "gradient", "generator"};
    for (double t : a.t) {
        auto K = kernel_matrix(op, t);
        for (auto shape : {KernelShape::value, KernelShape::gradient, KernelShape::generator}) {
            auto f = gaussian_fit(shaped_kernel(op, K, shape), g, t, shape);
            fit.row({CsvTable::cell(t), CsvTable::cell(f.power), CsvTable::cell(f.C_fit), CsvTable::cell(f.c_fit),
                     CsvTable::cell(f.residual), names[static_cast<int>(shape)], CsvTable::cell(f.C_envelope)});
        }
    }
    emit(fit, a.out, prov);
    if (a.bands.empty()) return;
    CsvTable dec({"k", "d", "ratio", "slope"});
    const LittlewoodPaleyBank bank;
    for (int k : a.bands) {
        auto prof = offdiagonal_profile(op, bank, k, a.dmax, a.p, band_probes(g, k, 0.0, 5, bank));
        for (std::size_t i = 0; i < prof.ratio.size(); ++i)
            dec.row({CsvTable::cell(k), CsvTable::cell(prof.distance[i]), CsvTable::cell(prof.ratio[i]),
                     CsvTable::cell(prof.slope)});
    }
    if (a.decay_out.empty()) throw std::invalid_argument("--bands needs --decay-out");
    dec.save(a.decay_out, prov);
}

// ------------------------------------------------------------------ counterexample

struct CounterArgs {
    std::string alpha = "resonant", out = "counterexample";
    int nmax = kMaxScales, kmin = 3, kmax = 6;
    double q = 6.0, r = 0.2, budget = 2e8;
};

void run_counter(const CounterArgs& a, const Provenance& prov) {
    check_blowup_params(a.q, a.r);
    if (a.kmin < 1 || a.kmax < a.kmin || a.kmax > a.nmax)
        throw std::invalid_argument("need 1 <= kmin <= kmax <= nmax");
    auto fl = floquet_mode(hill_arg(a.alpha));
    SingularMetric beta(fl, a.nmax);
    nlohmann::json metric = {{"config_hash", prov.config_hash},
                             {"alpha", {{"name", fl.alpha.name}, {"delta", fl.alpha.delta}, {"harmonic", fl.alpha.harmonic},
                                        {"flat", fl.alpha.flat}, {"ramp", fl.alpha.ramp}}},
                             {"floquet", {{"trace", fl.trace}, {"kappa", fl.kappa}, {"contracting", fl.contracting},
                                          {"shift", fl.shift}, {"parity", fl.parity}}},
                             {"pieces", nlohmann::json::array()}};
    for (const auto& p : beta.piece_norms())
        metric["pieces"].push_back({{"n", p.n}, {"center", p.center}, {"rate", p.rate}, {"lo", p.lo}, {"hi", p.hi},
                                    {"l1", p.l1}, {"w11", p.w11}, {"besov_half", p.besov_half}});
    save_json(a.out + ".json", metric);
    BlowupOptions bo;
    bo.max_work = a.budget;
    auto tab = blowup_experiment(beta, a.kmin, a.kmax, a.q, a.r, bo);
    CsvTable t({"k", "lambda", "residual", "Q_k", "envelope", "q_quasi", "complete", "window", "eps", "kept_mass"});
    for (const auto& row : tab.rows)
        t.row({CsvTable::cell(row.k), CsvTable::cell(row.lambda), CsvTable::cell(row.residual_h1),
               CsvTable::cell(row.q_avg), CsvTable::cell(row.envelope), CsvTable::cell(row.q_quasi),
               CsvTable::cell(row.complete), CsvTable::cell(row.window), CsvTable::cell(row.eps),
               CsvTable::cell(row.kept_mass)});
    t.save(a.out + ".csv", prov);
}

// ------------------------------------------------------------------ accept / calibrate

void run_accept(const AcceptanceOptions& opt, const std::string& out, const Provenance& prov) {
    CsvTable t({"id", "name", "pass", "measured", "threshold", "seconds", "budget"});
    int failed = 0;
    run_acceptance(opt, [&](const CriterionResult& r) {
        std::fprintf(stderr, "%s\n", format_result(r).c_str());
        t.row({CsvTable::cell(r.id), r.name, CsvTable::cell(r.pass), r.measured, r.threshold, CsvTable::cell(r.seconds),
               CsvTable::cell(r.budget)});
        failed += r.pass ? 0 : 1;
    });
    emit(t, out, prov);
    if (failed) throw ThresholdFailure(std::to_string(failed) + " acceptance criteria failed");
}

void run_calibrate(const std::string& out, const Provenance& prov) {
    nlohmann::json j = {{"version", kCalibrationVersion}, {"config_hash", prov.config_hash}, {"values", compute_calibration()}};
    save_json(out, j);
    std::cout << j.dump(2) << "\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Dispersive estimates for divergence-form Schrodinger operators with BV coefficients"};
    app.require_subcommand(1);
    app.set_config("--config", "", "TOML file with option values");
    app.allow_config_extras(false);
    std::uint64_t seed = 1;
    auto* seed_opt = app.add_option("--seed", seed, "seed for random coefficient families")->capture_default_str();
    bool dump = false;
    app.add_flag("--dump-config", dump, "print the resolved configuration as TOML and exit");

    ResolventArgs ra;
    auto* res = app.add_subcommand("resolvent", "step-resolvent solves and certified bounds");
    res->add_option("--coeff", ra.coeff, "coefficient JSON file or 'flat'")->required();
    res->add_option("--tau", ra.tau, "spectral parameters")->capture_default_str();
    res->add_option("--eps", ra.eps, "imaginary part (default: scaled to tau)");
    res->add_option("--source-center", ra.center)->capture_default_str();
    res->add_option("--source", ra.width, "bump width of the unit-L1 source")->capture_default_str();
    res->add_option("--box", ra.box, "half-width of the source grid")->capture_default_str();
    res->add_option("--dx", ra.h, "source grid step")->capture_default_str();
    res->add_option("--out", ra.out, "report CSV (default stdout)");

    EvolveArgs ea;
    auto* evo = app.add_subcommand("evolve", "Schrodinger evolution to a space-time field");
    evo->add_option("--coeff", ea.coeff, "coefficient JSON file or 'flat'")->required();
    evo->add_option("--u0", ea.d.u0, "gaussian, wavepacket, or a field .bin (first slice)")->capture_default_str();
    evo->add_option("--xi0", ea.d.xi0)->capture_default_str();
    evo->add_option("--width", ea.d.width)->capture_default_str();
    evo->add_option("--center", ea.d.center)->capture_default_str();
    evo->add_option("--box", ea.d.box)->capture_default_str();
    evo->add_option("--dx", ea.d.h)->capture_default_str();
    evo->add_option("--T", ea.T)->capture_default_str();
    evo->add_option("--nt", ea.nt)->capture_default_str();
    evo->add_option("--propagator", ea.propagator)->check(CLI::IsMember({"cn", "flat"}))->capture_default_str();
    evo->add_option("--out", ea.out, "field .bin (JSON sidecar alongside)")->required();

    EstimateArgs sa;
    auto* est = app.add_subcommand("estimate", "one estimate quotient, or a sweep");
    est->add_option("--kind", sa.kind)
        ->check(CLI::IsMember({"smoothing", "inhomog", "strichartz", "maximal"}))
        ->capture_default_str();
    est->add_option("--coeff", sa.coeff, "coefficient JSON file or 'flat'")->capture_default_str();
    est->add_option("--s", sa.s)->capture_default_str();
    est->add_option("--p", sa.p, "Strichartz time exponent")->capture_default_str();
    est->add_option("--q", sa.q, "Strichartz space exponent")->capture_default_str();
    est->add_flag("--lebesgue", sa.lebesgue, "Lebesgue-valued Strichartz norm (the default)");
    est->add_flag("--besov", sa.besov, "Besov-valued Strichartz norm");
    est->add_option("--T", sa.T, "window override");
    est->add_option("--nt", sa.nt, "time samples override");
    est->add_option("--sweep", sa.sweep, "TOML sweep file; runs the sweep instead");
    est->add_option("--out", sa.out, "CSV (default stdout)");

    std::string sweep_path, sweep_out;
    auto* swp = app.add_subcommand("sweep", "fixed-BV uniformity sweep from a TOML file");
    swp->add_option("file", sweep_path, "sweep TOML")->required();
    swp->add_option("--out", sweep_out, "CSV (default stdout)");

    HeatArgs ha;
    auto* heat = app.add_subcommand("heatlp", "heat-kernel Gaussian fits and off-diagonal decay");
    heat->add_option("--coeff", ha.coeff, "coefficient JSON file or 'flat'")->capture_default_str();
    heat->add_option("--t", ha.t, "times")->capture_default_str();
    heat->add_option("--bands", ha.bands, "base bands k for the off-diagonal profile");
    heat->add_option("--dmax", ha.dmax)->capture_default_str();
    heat->add_option("--p", ha.p)->capture_default_str();
    heat->add_option("--box", ha.box)->capture_default_str();
    heat->add_option("--dx", ha.h)->capture_default_str();
    heat->add_option("--out", ha.out, "fit CSV (default stdout)");
    heat->add_option("--decay-out", ha.decay_out, "off-diagonal CSV");

    CounterArgs ca;
    auto* ctr = app.add_subcommand("counterexample", "singular metric, quasimodes and the blow-up table");
    ctr->add_option("--alpha", ca.alpha, "named profile or JSON {delta, harmonic, flat, ramp}")->capture_default_str();
    ctr->add_option("--nmax", ca.nmax)->capture_default_str();
    ctr->add_option("--q", ca.q)->capture_default_str();
    ctr->add_option("--r", ca.r)->capture_default_str();
    ctr->add_option("--kmin", ca.kmin)->capture_default_str();
    ctr->add_option("--kmax", ca.kmax)->capture_default_str();
    ctr->add_option("--budget", ca.budget, "grid points x steps per scale")->capture_default_str();
    ctr->add_option("--out", ca.out, "prefix for <out>.json and <out>.csv")->capture_default_str();

    AcceptanceOptions ao;
    std::string accept_out;
    auto* acc = app.add_subcommand("accept", "run the acceptance criteria");
    acc->add_flag("--quick", ao.quick, "reduced grids, tolerances doubled");
    acc->add_option("--only", ao.only, "criterion ids")->check(CLI::Range(1, kCriteria));
    acc->add_option("--out", accept_out, "CSV report (default stdout)");

    std::string cal_out = default_calibration_path();
    auto* cal = app.add_subcommand("calibrate", "recompute the flat reference constants");
    cal->add_option("--out", cal_out)->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << error_record("schema", e.what()) << "\n";
        return 2;
    }
    configure_workers();
    CLI::App* sub = app.get_subcommands().front();
    if (dump) {
        // Reloadable with --config: top-level seed, then the subcommand section.
        // Unset options (empty value) are left out so that reloading keeps them unset.
        std::cout << "seed=" << seed << "\n[" << sub->get_name() << "]\n";
        std::istringstream lines(sub->config_to_str(true, false));
        for (std::string line; std::getline(lines, line);)
            if (!line.ends_with("=\"\"")) std::cout << line << "\n";
        return 0;
    }

    std::vector<std::string> inputs;
    auto add_coeff = [&](const std::string& c) {
        if (c != "flat") inputs.push_back(c);
    };
    if (sub == res) add_coeff(ra.coeff);
    if (sub == evo) {
        add_coeff(ea.coeff);
        if (ea.d.u0 != "gaussian" && ea.d.u0 != "wavepacket") inputs.push_back(ea.d.u0);
    }
    if (sub == est) add_coeff(sa.coeff), inputs.push_back(sa.sweep);
    if (sub == swp) inputs.push_back(sweep_path);
    if (sub == heat) add_coeff(ha.coeff);
    if (sub == ctr && ca.alpha.find('.') != std::string::npos) inputs.push_back(ca.alpha);

    try {
        Provenance prov;
        prov.command = sub->get_name();
        prov.config_hash = config_hash(*sub, inputs);
        prov.config_hash = fnv1a_hex(prov.config_hash + " seed=" + std::to_string(seed));
        prov.calibration_version = calibration_version();
        std::optional<std::uint64_t> seed_override;
        if (seed_opt->count() > 0) seed_override = seed;

        if (sub == res) run_resolvent(ra, prov);
        if (sub == evo) run_evolve(ea, prov);
        if (sub == est) {
            if (sa.sweep.empty())
                run_estimate(sa, prov);
            else
                run_sweep(sa.sweep, sa.out, seed_override, prov);
        }
        if (sub == swp) run_sweep(sweep_path, sweep_out, seed_override, prov);
        if (sub == heat) run_heat(ha, prov);
        if (sub == ctr) run_counter(ca, prov);
        if (sub == acc) run_accept(ao, accept_out, prov);
        if (sub == cal) run_calibrate(cal_out, prov);
    } catch (const ThresholdFailure& e) {
        std::cerr << error_record("threshold", e.what()) << "\n";
        return 1;
    } catch (const std::invalid_argument& e) {
        std::cerr << error_record("invalid_argument", e.what()) << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << error_record("runtime", e.what()) << "\n";
        return 3;
    }
    return 0;
}
