#pragma once

#include <functional>
#include <memory>
#include <vector>

#include <Eigen/Dense>

#include "bvlab/coefficients.hpp"
#include "bvlab/grid.hpp"
#include "bvlab/parallel.hpp"
#include "bvlab/tridiag.hpp"

namespace bvlab {

enum class Boundary { periodic, dirichlet };

// L = -d_x a d_x >= 0 on a uniform grid, flux form:
// (L u)_i = -(a_{i+1/2}(u_{i+1} - u_i) - a_{i-1/2}(u_i - u_{i-1})) / h^2.
// Dirichlet closes with u_{-1} = u_n = 0; periodic wraps.  The matrix is
// symmetric by construction (one off-diagonal array serves both sides).
struct DivergenceOperator {
    Coefficient coefficient;
    Grid grid;
    Boundary boundary = Boundary::dirichlet;
    std::vector<double> half;  // a_{i-1/2}, i = 0..n (n+1 values; periodic: half[0] == half[n])
    std::vector<double> diag;  // size n
    std::vector<double> off;   // off[i] = L(i, i+1) = L(i+1, i), size n-1
    double corner = 0.0;       // L(0, n-1) = L(n-1, 0) when periodic

    std::size_t size() const { return grid.n; }
    std::vector<cplx> apply(const std::vector<cplx>& u) const;
    GridFunction apply(const GridFunction& u) const;
    Eigen::MatrixXd dense() const;
    // Gershgorin bound on the largest eigenvalue.
    double lambda_max_bound() const;
    // Factorization of alpha I + beta L.
    Tridiagonal shifted(cplx alpha, cplx beta) const;
};

DivergenceOperator build_divergence_operator(const Coefficient& a, const Grid& grid, Boundary boundary);

// Called once per output time, in order, with the state at t_grid.at(k).
using SliceVisitor = std::function<void(std::size_t k, const std::vector<cplx>& u)>;

// u(t) = e^{-i t L} u0 sampled at t_grid (u0 sits at t_grid.x0).  Each output
// interval is split into `substeps` Crank-Nicolson steps
// (1 + i dt/2 L) u+ = (1 - i dt/2 L) u with one factorization reused.
void crank_nicolson_visit(const DivergenceOperator& op, const GridFunction& u0, const Grid& t_grid, int substeps,
                          const SliceVisitor& visit);

struct EvolutionRun {
    DivergenceOperator op;
    GridFunction u0;
    Grid t_grid;
    SpaceTimeField field;
    Boundary boundary = Boundary::dirichlet;
    int substeps = 1;
};

EvolutionRun evolve_crank_nicolson(const DivergenceOperator& op, const GridFunction& u0, const Grid& t_grid,
                                   int substeps = 1);

// Zero data, source f: i u_t - L u = f, i.e. u_t = -i (L u + f); the source is
// sampled on its own time grid and interpolated linearly for substeps.
SpaceTimeField evolve_with_source(const DivergenceOperator& op, const SpaceTimeField& f, int substeps = 1);

// Substeps per output interval so that the CN phase error at the largest
// frequency that carries weight in u0 stays below tol over the whole run.
int crank_nicolson_substeps(const DivergenceOperator& op, const GridFunction& u0, const Grid& t_grid,
                            double tol = 1e-3);

// Exact multiplier e^{-i xi^2 t}.  Periodic data use the periodic DFT; other
// data are zero padded (fft convention).
void flat_group_visit(const GridFunction& u0, const Grid& t_grid, const SliceVisitor& visit,
                      Exec exec = Exec::parallel);
SpaceTimeField flat_group(const GridFunction& u0, const Grid& t_grid, Exec exec = Exec::parallel);

// Dense eigendecomposition of the discretized operator, cached per operator.
struct EigenBasis {
    Eigen::VectorXd lambda;
    Eigen::MatrixXd vectors;  // columns orthonormal in the plain l^2 inner product
};
std::shared_ptr<const EigenBasis> eigen_basis(const DivergenceOperator& op);

// u(t) = sum_k e^{-i lambda_k t} <u0, e_k> e_k.  n <= 4096.
SpaceTimeField eigen_oracle(const DivergenceOperator& op, const GridFunction& u0, const Grid& t_grid);
// Any spectral function: sum_k m(lambda_k) <f, e_k> e_k.
GridFunction eigen_apply(const DivergenceOperator& op, const GridFunction& f,
                         const std::function<cplx(double)>& m);

// Fraction of ||u||_2^2 within `zone` of either end of the grid.
double boundary_mass_fraction(const std::vector<cplx>& u, double h, double zone);

}  // namespace bvlab
