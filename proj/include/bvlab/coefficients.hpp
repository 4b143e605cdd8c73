#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "bvlab/grid.hpp"

namespace bvlab {

// a(x) = values[i] on [breakpoints[i-1], breakpoints[i]), constant beyond the
// first and last breakpoint.  values.size() == breakpoints.size() + 1.
struct StepCoefficient {
    std::vector<double> breakpoints;
    std::vector<double> values;
    double m = 0.0;  // declared lower bound; 0 means "use min(values)"

    StepCoefficient() = default;
    StepCoefficient(std::vector<double> bp, std::vector<double> vals, double m_ = 0.0);

    static StepCoefficient constant(double a);

    std::size_t jumps() const { return breakpoints.size(); }
    // Index of the piece containing x (right-continuous).
    std::size_t piece(double x) const;
    double operator()(double x) const { return values[piece(x)]; }
    // Exact integral of 1/a over [lo, hi].
    double integral_inverse(double lo, double hi) const;
    // a(x) -> a(x / s).
    StepCoefficient rescaled(double s) const;

    void validate() const;
};

// Uniform-grid samples, linear interpolation inside, constant extension outside.
struct SampledCoefficient {
    Grid grid;
    std::vector<double> samples;
    double m = 0.0;

    SampledCoefficient() = default;
    SampledCoefficient(Grid g, std::vector<double> s, double m_ = 0.0);

    double operator()(double x) const;
    void validate() const;
};

using Coefficient = std::variant<StepCoefficient, SampledCoefficient>;

double coefficient_at(const Coefficient& c, double x);
double coefficient_min(const Coefficient& c);
double coefficient_max(const Coefficient& c);
// Smallest interval outside which the coefficient is constant.
std::pair<double, double> coefficient_active_range(const Coefficient& c);
// a at the midpoints x_i + h/2, i = 0..n-2.  Step coefficients use the harmonic
// mean over the cell [x_i, x_{i+1}], which makes the discrete flux exact for
// piecewise-constant a; sampled coefficients are interpolated.
std::vector<double> half_point_values(const Coefficient& c, const Grid& g);
// Throws when a step coefficient has a piece inside the grid shorter than
// min_cells grid steps.
void require_resolved(const Coefficient& c, const Grid& g, double min_cells = 4.0);
// Short human-readable description (type, jump count).
std::string describe(const Coefficient& c);

struct AdmissibilityReport {
    double m = 0.0;        // observed infimum
    double M = 0.0;        // essential sup
    double tv = 0.0;       // total variation
    double bv_norm = 0.0;  // M + tv
    bool admissible = false;
};

double total_variation(const StepCoefficient& c);
double total_variation(const SampledCoefficient& c);
double total_variation(const Coefficient& c);

AdmissibilityReport check_admissible(const Coefficient& c, double m);

// Standard bump rho(x) ~ exp(-1/(1-x^2)) on (-1, 1), unit mass.
double mollifier(double x);
// Cumulative mass R(t) = int_{-1}^t rho.
double mollifier_cdf(double t);

// Samples of rho_eps * a on `grid`.  Throws if eps < grid.h.
SampledCoefficient mollify(const StepCoefficient& c, double eps, const Grid& grid);

// y(x) = int_{x_ref}^x omega with x_ref = 0 when it lies in the grid, else the
// left end.  The forward map is sampled on omega's grid; the inverse on a
// uniform y grid with the same number of points.
struct Diffeomorphism {
    Grid x_grid;
    std::vector<double> y_of_x;    // forward samples y(x_i)
    std::vector<double> omega;     // dy/dx at x_i
    Grid y_grid;
    std::vector<double> x_of_y;    // inverse samples x(y_k)
    double jac_lo = 0.0, jac_hi = 0.0;  // bounds of dx/dy = 1/omega

    double forward(double x) const;  // y = phi^{-1}(x)
    double inverse(double y) const;  // x = phi(y)
    double omega_at(double x) const;
};

Diffeomorphism build_diffeomorphism(const SampledCoefficient& omega);

// Seeded step coefficient with exactly n_jumps jumps whose heights sum to
// tv_target; min value == m.  Breakpoints are jittered-stratified in
// [-span/2, span/2] with gaps >= 0.6*span/n_jumps.
StepCoefficient step_family_fixed_bv(int n_jumps, double tv_target, double m, std::uint64_t seed,
                                     double span = 8.0);

}  // namespace bvlab
