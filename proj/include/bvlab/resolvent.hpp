#pragma once

#include <string>
#include <vector>

#include "bvlab/coefficients.hpp"
#include "bvlab/grid.hpp"
#include "bvlab/parallel.hpp"

namespace bvlab {

// sigma = tau + i*eps.  tau > 0 is the elliptic side, tau < 0 the hyperbolic one.
struct SpectralParameter {
    double tau = 1.0;
    double eps = 1e-6;

    cplx sigma() const { return {tau, eps}; }
    // eps = 1e-6 * max(1, |tau|).
    static SpectralParameter with_default_eps(double tau);
    void validate() const;
};

// Solution of (-sigma + d_x a d_x) v = g sampled on g's grid.
struct ResolventSolution {
    SpectralParameter sigma;
    GridFunction v;
    GridFunction flux;         // a v'; at a breakpoint node the right limit
    GridFunction dv;           // v'; same convention
    GridFunction omega_trace;  // running sup from the left of Omega
    std::vector<double> omega; // (|eps|+|tau|) a |v|^2 + |a v'|^2 per node

    // Exact values at the coefficient breakpoints (scattering solver only).
    std::vector<double> bp_x;
    std::vector<cplx> bp_v, bp_dv_left, bp_dv_right;
    double flux_jump_max = 0.0;  // max |[a v']| over breakpoints
    double v_jump_max = 0.0;     // max |[v]| over breakpoints

    // Whole-line integrals split into the part over g's grid and the exterior
    // tails.  tail_energy is the tails' share of tau int|v|^2 + int a|v'|^2,
    // evaluated in a cancellation-free form (it is O(eps) on the hyperbolic
    // side while each term alone is O(1/eps)).
    double box_v2 = 0.0, tail_v2 = 0.0;        // int |v|^2
    double box_dv2 = 0.0, tail_dv2 = 0.0;      // int |v'|^2
    double box_a_dv2 = 0.0, tail_a_dv2 = 0.0;  // int a |v'|^2
    double tail_energy = 0.0;
    cplx int_g_vbar = 0.0;  // int g conj(v)
    double g_l1 = 0.0;

    double int_v2() const { return box_v2 + tail_v2; }
    double int_dv2() const { return box_dv2 + tail_dv2; }
    double int_a_dv2() const { return box_a_dv2 + tail_a_dv2; }

    std::string method;  // "scattering" or "grid"
};

// Exact solve for piecewise-constant a.  g is read as the linear interpolant of
// its samples (zero outside the grid); g's grid must contain every breakpoint.
// Interfaces are composed with 2x2 scattering data, so only decaying
// exponentials e^{-mu L} with Re mu > 0 are ever formed.
ResolventSolution solve_step_resolvent(const StepCoefficient& a, SpectralParameter sigma, const GridFunction& g);

enum class GridBoundary { transparent, dirichlet };

// Flux-form second-order finite differences on g's grid.  The transparent
// boundary closes the box with the exact decaying discrete mode of the constant
// exterior problem, so the discrete system is the whole-line one.  The
// Dirichlet closure is checked a posteriori: |v| at the ends must stay below
// 1e-8 ||v||_inf.
ResolventSolution solve_grid_resolvent(const Coefficient& a, SpectralParameter sigma, const GridFunction& g,
                                       GridBoundary boundary = GridBoundary::transparent);

struct ResolventReport {
    double tau = 0.0, eps = 0.0;
    double g_l1 = 0.0, v_inf = 0.0, flux_inf = 0.0;
    double q_v = 0.0, q_flux = 0.0;  // ||v||_inf/||g||_1, ||a v'||_inf/||g||_1
    bool omega_applicable = false;   // tau > 0
    double omega_sup = 0.0, omega_bound = 0.0;
    bool omega_bound_ok = true;
    double energy_residual_im = 0.0;  // |eps int|v|^2 + Im int g conj v|
    double energy_residual_re = 0.0;  // |tau int|v|^2 + int a|v'|^2 + Re int g conj v|
    double energy_residual = 0.0;     // max of both over ||g||_1 ||v||_inf
    double apriori_ratio = 0.0;       // |eps| int|v|^2 / (||g||_1 ||v||_inf) <= 1
    double interpolation_ratio = 0.0; // ||v||_inf^2 / (2 ||v||_2 ||v'||_2) <= 1
    double flux_jump_rel = 0.0;
};

ResolventReport certify_bound(const ResolventSolution& sol, const Coefficient& a);

struct GronwallTrace {
    double C = 0.0;                  // 4 ||g~||_1^2 in normalized variables
    std::vector<double> alpha;       // |a_{i-1} - a_i| / m
    std::vector<double> gamma;       // gamma_1..gamma_N, then the global sup
    std::vector<double> partial_sums;  // S_I
    std::vector<double> product_bound; // C (prod_{i<=I}(1+alpha_i) - 1)
    double certified_bound = 0.0;    // C exp(sum alpha)
    int contdis_checks = 0, contdis_violations = 0;
    int recursion_violations = 0;
    int sum_violations = 0;
    double worst_contdis_ratio = 0.0;  // max lhs/rhs of the continuous inequality
};

// Discrete Gronwall quantities in the variables where a >= 1 and tau = -1.
GronwallTrace gronwall_trace(const StepCoefficient& a, const ResolventSolution& sol);

struct SweepRow {
    double tau = 0.0, eps = 0.0;
    ResolventReport report;
    double q_flux_rescaled = 0.0;  // same problem mapped to tau = +-1
    double scale_gap = 0.0;        // |q_flux / q_flux_rescaled - 1|
};

// Step solves over tau_grid (eps <= 0 selects the default eps per tau), each
// paired with the rescaled problem at tau = +-1.
std::vector<SweepRow> resolvent_sweep(const StepCoefficient& a, const std::vector<double>& tau_grid, double eps,
                                      const GridFunction& g, Exec exec = Exec::parallel);

// Unit-mass smooth bump of half width w at x0 sampled on grid.
GridFunction unit_bump(const Grid& grid, double x0, double w);

}  // namespace bvlab
