#include "bvlab/evolution.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

#include <Eigen/Eigenvalues>
#include <lapacke.h>

#include "bvlab/fft.hpp"

namespace bvlab {

// ------------------------------------------------------------------ operator

DivergenceOperator build_divergence_operator(const Coefficient& a, const Grid& grid, Boundary boundary) {
    if (grid.n < 3) throw std::invalid_argument("build_divergence_operator: need n >= 3");
    require_resolved(a, grid);
    DivergenceOperator op;
    op.coefficient = a;
    op.grid = grid;
    op.boundary = boundary;
    const std::size_t n = grid.n;
    // Half points x_{i-1/2} for i = 0..n come from the grid extended one cell left.
    Grid ext{grid.x0 - grid.h, grid.h, n + 2};
    std::vector<double> hv = half_point_values(a, ext);  // n+1 values
    if (boundary == Boundary::periodic) hv[0] = hv[n];
    op.half = hv;
    const double h2 = grid.h * grid.h;
    op.diag.resize(n);
    op.off.resize(n - 1);
    for (std::size_t i = 0; i < n; ++i) op.diag[i] = (hv[i] + hv[i + 1]) / h2;
    for (std::size_t i = 0; i + 1 < n; ++i) op.off[i] = -hv[i + 1] / h2;
    if (boundary == Boundary::periodic) op.corner = -hv[0] / h2;
    return op;
}

std::vector<cplx> DivergenceOperator::apply(const std::vector<cplx>& u) const {
    const std::size_t n = grid.n;
    if (u.size() != n) throw std::invalid_argument("DivergenceOperator::apply: size mismatch");
    std::vector<cplx> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        cplx s = diag[i] * u[i];
        if (i > 0) s += off[i - 1] * u[i - 1];
        if (i + 1 < n) s += off[i] * u[i + 1];
        out[i] = s;
    }
    out[0] += corner * u[n - 1];
    out[n - 1] += corner * u[0];
    return out;
}

GridFunction DivergenceOperator::apply(const GridFunction& u) const {
    return GridFunction(u.grid, apply(u.v), u.periodic);
}

Eigen::MatrixXd DivergenceOperator::dense() const {
    const auto n = static_cast<Eigen::Index>(grid.n);
    Eigen::MatrixXd M = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) M(i, i) = diag[i];
    for (Eigen::Index i = 0; i + 1 < n; ++i) M(i, i + 1) = M(i + 1, i) = off[i];
    M(0, n - 1) += corner;
    M(n - 1, 0) += corner;
    return M;
}

double DivergenceOperator::lambda_max_bound() const {
    double b = 0.0;
    for (std::size_t i = 0; i < grid.n; ++i) {
        double r = std::abs(diag[i]);
        if (i > 0) r += std::abs(off[i - 1]);
        if (i + 1 < grid.n) r += std::abs(off[i]);
        if (i == 0 || i + 1 == grid.n) r += std::abs(corner);
        b = std::max(b, r);
    }
    return b;
}

Tridiagonal DivergenceOperator::shifted(cplx alpha, cplx beta) const {
    const std::size_t n = grid.n;
    std::vector<cplx> d(n), o(n - 1);
    for (std::size_t i = 0; i < n; ++i) d[i] = alpha + beta * diag[i];
    for (std::size_t i = 0; i + 1 < n; ++i) o[i] = beta * off[i];
    return Tridiagonal(o, d, o, beta * corner, beta * corner);
}

// ----------------------------------------------------------- Crank-Nicolson

void crank_nicolson_visit(const DivergenceOperator& op, const GridFunction& u0, const Grid& t_grid, int substeps,
                          const SliceVisitor& visit) {
    if (u0.size() != op.size()) throw std::invalid_argument("crank_nicolson: datum and operator sizes differ");
    if (substeps < 1) throw std::invalid_argument("crank_nicolson: substeps must be >= 1");
    const double dt = t_grid.h / substeps;
    const cplx half_step(0.0, 0.5 * dt);
    Tridiagonal lhs = op.shifted(1.0, half_step);
    std::vector<cplx> u = u0.v, rhs;
    visit(0, u);
    for (std::size_t k = 1; k < t_grid.n; ++k) {
        for (int s = 0; s < substeps; ++s) {
            // Increment form: (1 + i dt/2 L) d = -i dt L u, u += d.  Forming
            // u - i dt/2 L u first biases the mass by ~1e-16 per step.
            rhs = op.apply(u);
            for (auto& z : rhs) z *= -2.0 * half_step;
            lhs.solve(rhs);
            for (std::size_t i = 0; i < u.size(); ++i) u[i] += rhs[i];
        }
        visit(k, u);
    }
}

EvolutionRun evolve_crank_nicolson(const DivergenceOperator& op, const GridFunction& u0, const Grid& t_grid,
                                   int substeps) {
    EvolutionRun run;
    run.op = op;
    run.u0 = u0;
    run.t_grid = t_grid;
    run.boundary = op.boundary;
    run.substeps = substeps;
    run.field = SpaceTimeField(op.grid, t_grid, op.boundary == Boundary::periodic);
    crank_nicolson_visit(op, u0, t_grid, substeps, [&](std::size_t k, const std::vector<cplx>& u) {
        std::copy(u.begin(), u.end(), run.field.values.begin() + static_cast<std::ptrdiff_t>(k * u.size()));
    });
    return run;
}

SpaceTimeField evolve_with_source(const DivergenceOperator& op, const SpaceTimeField& f, int substeps) {
    if (f.x.n != op.size()) throw std::invalid_argument("evolve_with_source: source and operator grids differ");
    if (substeps < 1) throw std::invalid_argument("evolve_with_source: substeps must be >= 1");
    const std::size_t n = op.size();
    const double dt = f.t.h / substeps;
    const cplx half_step(0.0, 0.5 * dt);
    Tridiagonal lhs = op.shifted(1.0, half_step);
    SpaceTimeField out(f.x, f.t, f.periodic_x);
    std::vector<cplx> u(n, 0.0), rhs(n);
    auto src = [&](std::size_t k, double frac, std::size_t i) {
        cplx a = f(i, k);
        cplx b = (k + 1 < f.t.n) ? f(i, k + 1) : cplx(0.0);
        return (1.0 - frac) * a + frac * b;
    };
    for (std::size_t k = 0; k + 1 < f.t.n; ++k) {
        for (int s = 0; s < substeps; ++s) {
            double f0 = static_cast<double>(s) / substeps, f1 = static_cast<double>(s + 1) / substeps;
            rhs = op.apply(u);
            for (std::size_t i = 0; i < n; ++i)
                rhs[i] = -half_step * (2.0 * rhs[i] + src(k, f0, i) + src(k, f1, i));
            lhs.solve(rhs);
            for (std::size_t i = 0; i < n; ++i) u[i] += rhs[i];
        }
        std::copy(u.begin(), u.end(), out.values.begin() + static_cast<std::ptrdiff_t>((k + 1) * n));
    }
    return out;
}

int crank_nicolson_substeps(const DivergenceOperator& op, const GridFunction& u0, const Grid& t_grid, double tol) {
    // Largest wavenumber below which all but 1e-12 of the datum's energy lies.
    Spectrum sp(u0, 1);
    const auto& c = sp.coefficients();
    const auto& xi = sp.xi();
    std::vector<std::pair<double, double>> e(c.size());
    double tot = 0.0;
    for (std::size_t i = 0; i < c.size(); ++i) {
        e[i] = {std::abs(xi[i]), std::norm(c[i])};
        tot += e[i].second;
    }
    std::sort(e.begin(), e.end());
    double acc = 0.0, kmax = 0.0;
    for (auto& [k, w] : e) {
        acc += w;
        kmax = k;
        if (acc >= tot * (1.0 - 1e-12)) break;
    }
    const double h = op.grid.h;
    double amax = coefficient_max(op.coefficient);
    double lam = amax * 4.0 / (h * h) * std::pow(std::sin(0.5 * std::min(kmax * h, 3.141592653589793)), 2);
    // CN group velocity is off by the factor 1/(1 + (lam dt / 2)^2).
    double dt = 2.0 * std::sqrt(tol) / std::max(lam, 1e-300);
    return std::max(1, static_cast<int>(std::ceil(t_grid.h / dt)));
}

// ---------------------------------------------------------------- flat group

void flat_group_visit(const GridFunction& u0, const Grid& t_grid, const SliceVisitor& visit, Exec exec) {
    Spectrum sp(u0);
    const std::size_t nt = t_grid.n;
    // Slices are computed in blocks so memory stays bounded; order is preserved.
    const std::size_t block = 64;
    for (std::size_t k0 = 0; k0 < nt; k0 += block) {
        std::size_t k1 = std::min(nt, k0 + block);
        auto slices = ordered_map<std::vector<cplx>>(
            k1 - k0,
            [&](std::size_t j) {
                double t = t_grid.at(k0 + j);
                return sp.apply([t](double x) { return std::exp(cplx(0.0, -x * x * t)); });
            },
            exec);
        for (std::size_t j = 0; j < slices.size(); ++j) visit(k0 + j, slices[j]);
    }
}

SpaceTimeField flat_group(const GridFunction& u0, const Grid& t_grid, Exec exec) {
    SpaceTimeField out(u0.grid, t_grid, u0.periodic);
    flat_group_visit(
        u0, t_grid,
        [&](std::size_t k, const std::vector<cplx>& u) {
            std::copy(u.begin(), u.end(), out.values.begin() + static_cast<std::ptrdiff_t>(k * u.size()));
        },
        exec);
    return out;
}

// ------------------------------------------------------------ eigen oracle

namespace {

struct BasisKey {
    std::vector<double> diag, off;
    double corner;
    bool operator<(const BasisKey& o) const {
        return std::tie(diag, off, corner) < std::tie(o.diag, o.off, o.corner);
    }
};

}  // namespace

std::shared_ptr<const EigenBasis> eigen_basis(const DivergenceOperator& op) {
    if (op.size() > 4096) throw std::invalid_argument("eigen_oracle: n > 4096 exceeds the dense cost guard");
    static std::mutex mu;
    static std::map<BasisKey, std::shared_ptr<const EigenBasis>> cache;
    BasisKey key{op.diag, op.off, op.corner};
    {
        std::lock_guard<std::mutex> lk(mu);
        auto it = cache.find(key);
        if (it != cache.end()) return it->second;
    }
    auto b = std::make_shared<EigenBasis>();
    if (op.corner == 0.0) {
        // Plain tridiagonal: MRRR on the band directly.  (The divide-and-conquer
        // driver returned non-orthogonal vectors for the flat Toeplitz case.)
        const auto n = static_cast<lapack_int>(op.size());
        std::vector<double> d(op.diag), e(op.off);
        e.resize(op.size());
        b->lambda.resize(n);
        b->vectors.resize(n, n);
        std::vector<lapack_int> support(2 * op.size());
        lapack_int found = 0;
        lapack_logical tryrac = 1;
        lapack_int info = LAPACKE_dstemr(LAPACK_COL_MAJOR, 'V', 'A', n, d.data(), e.data(), 0.0, 0.0, 0, 0, &found,
                                         b->lambda.data(), b->vectors.data(), n, n, support.data(), &tryrac);
        if (info != 0 || found != n) throw std::runtime_error("eigen_oracle: dstemr failed");
    } else {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(op.dense());
        if (es.info() != Eigen::Success) throw std::runtime_error("eigen_oracle: eigensolver failed");
        b->lambda = es.eigenvalues();
        b->vectors = es.eigenvectors();
    }
    std::lock_guard<std::mutex> lk(mu);
    if (cache.size() > 16) cache.clear();
    cache.emplace(std::move(key), b);
    return b;
}

SpaceTimeField eigen_oracle(const DivergenceOperator& op, const GridFunction& u0, const Grid& t_grid) {
    auto B = eigen_basis(op);
    const auto n = static_cast<Eigen::Index>(op.size());
    Eigen::VectorXcd u = Eigen::Map<const Eigen::VectorXcd>(u0.v.data(), n);
    Eigen::VectorXcd c = B->vectors.transpose() * u;
    SpaceTimeField out(op.grid, t_grid, op.boundary == Boundary::periodic);
    for (std::size_t k = 0; k < t_grid.n; ++k) {
        double t = t_grid.at(k);
        Eigen::VectorXcd ck(n);
        for (Eigen::Index j = 0; j < n; ++j) ck[j] = std::exp(cplx(0.0, -B->lambda[j] * t)) * c[j];
        Eigen::VectorXcd ut = B->vectors * ck;
        for (Eigen::Index i = 0; i < n; ++i) out(static_cast<std::size_t>(i), k) = ut[i];
    }
    return out;
}

GridFunction eigen_apply(const DivergenceOperator& op, const GridFunction& f, const std::function<cplx(double)>& m) {
    auto B = eigen_basis(op);
    const auto n = static_cast<Eigen::Index>(op.size());
    Eigen::VectorXcd u = Eigen::Map<const Eigen::VectorXcd>(f.v.data(), n);
    Eigen::VectorXcd c = B->vectors.transpose() * u;
    for (Eigen::Index j = 0; j < n; ++j) c[j] *= m(B->lambda[j]);
    Eigen::VectorXcd r = B->vectors * c;
    GridFunction out(f.grid, f.periodic);
    for (Eigen::Index i = 0; i < n; ++i) out.v[static_cast<std::size_t>(i)] = r[i];
    return out;
}

double boundary_mass_fraction(const std::vector<cplx>& u, double h, double zone) {
    const std::size_t n = u.size();
    auto k = std::min(n / 2, static_cast<std::size_t>(std::ceil(zone / h)));
    double edge = 0.0, tot = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double w = std::norm(u[i]);
        tot += w;
        if (i < k || i + k >= n) edge += w;
    }
    return tot > 0.0 ? edge / tot : 0.0;
}

}  // namespace bvlab
