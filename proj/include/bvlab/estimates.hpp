#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "bvlab/coefficients.hpp"
#include "bvlab/evolution.hpp"
#include "bvlab/fields_norms.hpp"
#include "bvlab/grid.hpp"

namespace bvlab {

enum class EstimateKind { smoothing, inhomogeneous, strichartz, maximal };
std::string to_string(EstimateKind k);
EstimateKind parse_estimate_kind(const std::string& s);

enum class Propagator { crank_nicolson, flat_exact };

// Window, propagator and checks shared by every quotient.
struct RunOptions {
    double T = 1.0;
    std::size_t nt = 257;  // samples on [0, T]
    Propagator propagator = Propagator::crank_nicolson;
    double cn_tol = 1e-2;      // relative group-velocity error allowed at the top of the datum's spectrum
    double leak_tol = 1e-6;    // mass fraction allowed in the edge zones at t = T
    double leak_zone = 1.0 / 16.0;  // edge zone width as a fraction of the box
    double taper = 0.1;        // cosine taper on the last part of the window (time derivatives)
    Exec exec = Exec::parallel;
};

struct QuotientReport {
    EstimateKind kind = EstimateKind::smoothing;
    double s = 0.0, p = 0.0, q = 0.0, T = 0.0;
    double numerator = 0.0, denominator = 0.0, quotient = 0.0;
    std::string coefficient;
    double bv_norm = 0.0, tv = 0.0;
    std::size_t jumps = 0;
    std::size_t n_x = 0, n_t = 0;
    double dx = 0.0, dt = 0.0;
    int substeps = 0;
    double leak = 0.0;
    std::string propagator;
};

// Gaussian packet exp(-(x-c)^2 / (2 w^2)) e^{i xi0 x}.
GridFunction wave_packet(const Grid& g, double xi0, double width, double center);

// Field u(t) on [0, T] for datum u0 (Dirichlet box for Crank-Nicolson).  Throws
// when more than leak_tol of the mass sits in the edge zones at t = T.
SpaceTimeField propagate(const Coefficient& a, const GridFunction& u0, const RunOptions& opt,
                         QuotientReport* meta = nullptr);

// sup_x (sum_j (2^{j(s+1/2)} ||Delta_j u(x, .)||_{L^2(0,T)})^2)^{1/2} over ||u0||_{B^s_{2,2}}, -1 < s < 1/2.
QuotientReport smoothing_quotient(const Coefficient& a, const GridFunction& u0, double s, const RunOptions& opt = {});
// Same numerator on an already computed field.
double smoothing_numerator(const SpaceTimeField& u, double s, Exec exec = Exec::parallel);

// Zero data, source f: (||d_x u||_{L^inf_x L^2_t} + ||(-d_t^2)^{1/4} u||_{L^inf_x L^2_t}) / ||f||_{L^1_x L^2_t}.
// The window is f's time grid; f must vanish at the box edges and at the last time.
QuotientReport inhomogeneous_smoothing_check(const Coefficient& a, const SpaceTimeField& f,
                                             const RunOptions& opt = {});
// Flat solution of i u_t + u_xx = f with zero data (exponential integrator in Fourier).
SpaceTimeField flat_duhamel(const SpaceTimeField& f);

// Throws unless 2/p + 1/q = 1/2 and p >= 4; pure Lebesgue norms also need p > 4.
void check_strichartz_pair(double p, double q, bool besov_valued);
// ||u||_{L^p_t(L^q_x)} over [-T, T] (u(-t) = conj u(t) for real data and real
// a), or the L^p_t(B^{0,2}_q) norm when besov_valued, over ||u0||_2.
QuotientReport strichartz_quotient(const Coefficient& a, const GridFunction& u0, double p, double q,
                                   const RunOptions& opt = {}, bool besov_valued = false);

// (sum_j (2^{j(s-1/4)} || sup_t |Delta_j u| ||_{L^4_x})^2)^{1/2} over ||u0||_{B^s_{2,2}}, -3/4 < s < 1.
QuotientReport maximal_quotient(const Coefficient& a, const GridFunction& u0, double s, const RunOptions& opt = {});

struct FamilySpec {
    std::vector<int> n_jumps{1, 4, 16, 64};
    std::vector<double> tv_targets{2.0};
    double m = 1.0;
    std::uint64_t seed = 1;
    double span = 8.0;
};

struct SweepMember {
    int n_jumps = 0;
    double tv_target = 0.0;
    QuotientReport report;
};

struct SweepTable {
    std::vector<SweepMember> rows;
    double q_min = 0.0, q_max = 0.0, spread = 0.0;  // spread = q_max / q_min
    bool monotone_in_tv = false;  // quotient nondecreasing along tv_targets (per N)
};

struct EstimateParams {
    double s = 0.0;
    double p = 8.0, q = 4.0;
    bool besov_valued = false;
};

// One member per (N, tv) pair, evaluated in parallel and merged in order.
SweepTable uniformity_sweep(const FamilySpec& fam, EstimateKind kind, const EstimateParams& par,
                            const GridFunction& u0, const RunOptions& opt);

struct CommutatorReport {
    double norm = 0.0;      // ||[Delta_j, g] f||_{L^1_x L^2_t}
    double bound = 0.0;     // 2^{-j} M1 ||d_x g||_{L^{p1}_x L^{q_inf}_t} ||f||_{L^{p_inf}_x L^{q2}_t}
    double dg_norm = 0.0, f_norm = 0.0, moment = 0.0;
};

// Requires 1/q_inf + 1/q2 = 1/2; p_inf is the Hoelder dual of p1.
CommutatorReport commutator_norm(const SpaceTimeField& g, const SpaceTimeField& f, int j, double p1, double q_inf,
                                 double q2, Exec exec = Exec::parallel);

// Versioned reference constants computed by flat-group runs.
struct Calibration {
    int version = 0;
    std::string path;
    std::map<std::string, double> values;
    double at(const std::string& key) const;
};
std::string default_calibration_path();
Calibration load_calibration(const std::string& path = default_calibration_path());

}  // namespace bvlab
