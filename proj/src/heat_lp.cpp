#include "bvlab/heat_lp.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace bvlab {

namespace {

bool use_eigen(const DivergenceOperator& op, const HeatOptions& opt) {
    if (opt.method == HeatMethod::eigen) return true;
    if (opt.method == HeatMethod::implicit_euler) return false;
    return op.size() <= kKernelGuard;
}

GridFunction implicit_euler(const DivergenceOperator& op, const GridFunction& f, double t, int steps) {
    if (steps < 1) throw std::invalid_argument("heat_apply: need at least one implicit Euler step");
    const double dt = t / steps;
    auto sys = op.shifted(1.0, dt);
    std::vector<cplx> u = f.v;
    for (int s = 0; s < steps; ++s) sys.solve(u);
    return GridFunction(f.grid, std::move(u), f.periodic);
}

// K = V diag(m(lambda)) V^T / h, built in column blocks.
Eigen::MatrixXd spectral_kernel(const DivergenceOperator& op, const std::function<double(double)>& m, Exec exec) {
    if (op.size() > kKernelGuard) throw std::invalid_argument("kernel_matrix: n exceeds the dense guard (2048)");
    auto B = eigen_basis(op);
    const auto n = static_cast<Eigen::Index>(op.size());
    Eigen::VectorXd w(n);
    for (Eigen::Index i = 0; i < n; ++i) w[i] = m(B->lambda[i]);
    Eigen::MatrixXd W = B->vectors * w.asDiagonal();
    constexpr Eigen::Index block = 64;
    const auto nblocks = static_cast<std::size_t>((n + block - 1) / block);
    auto parts = ordered_map<Eigen::MatrixXd>(
        nblocks,
        [&](std::size_t b) {
            const Eigen::Index c0 = static_cast<Eigen::Index>(b) * block;
            const Eigen::Index nc = std::min(block, n - c0);
            Eigen::MatrixXd out = W * B->vectors.middleRows(c0, nc).transpose();
            return out;
        },
        exec);
    Eigen::MatrixXd K(n, n);
    for (std::size_t b = 0; b < nblocks; ++b) {
        const Eigen::Index c0 = static_cast<Eigen::Index>(b) * block;
        K.middleCols(c0, parts[b].cols()) = parts[b];
    }
    return K / op.grid.h;
}

}  // namespace

GridFunction heat_apply(const DivergenceOperator& op, const GridFunction& f, double t, const HeatOptions& opt) {
    if (!(t > 0.0)) throw std::invalid_argument("heat_apply: need t > 0");
    if (f.grid.n != op.size()) throw std::invalid_argument("heat_apply: grid mismatch");
    if (use_eigen(op, opt)) return eigen_apply(op, f, [t](double l) { return cplx(std::exp(-t * l)); });
    return implicit_euler(op, f, t, opt.steps);
}

HeatKernelMatrix kernel_matrix(const DivergenceOperator& op, double t, Exec exec) {
    if (!(t > 0.0)) throw std::invalid_argument("kernel_matrix: need t > 0");
    HeatKernelMatrix k;
    k.t = t;
    k.grid = op.grid;
    k.K = spectral_kernel(op, [t](double l) { return std::exp(-t * l); }, exec);
    return k;
}

double shape_power(KernelShape s) {
    switch (s) {
        case KernelShape::value: return 0.5;
        case KernelShape::gradient: return 1.0;
        case KernelShape::generator: return 1.5;
    }
    return 0.5;
}

Eigen::MatrixXd shaped_kernel(const DivergenceOperator& op, const HeatKernelMatrix& K, KernelShape s) {
    if (s == KernelShape::value) return K.K;
    if (s == KernelShape::generator) {
        const double t = K.t;
        return spectral_kernel(op, [t](double l) { return l * std::exp(-t * l); }, Exec::parallel);
    }
    // |d_x K| + |d_y K|; centered inside, one-sided at the edges.
    const auto n = K.K.rows();
    const double h = K.grid.h;
    auto diff_rows = [&](const Eigen::MatrixXd& M) {
        Eigen::MatrixXd D(n, n);
        for (Eigen::Index i = 1; i + 1 < n; ++i) D.row(i) = (M.row(i + 1) - M.row(i - 1)) / (2 * h);
        D.row(0) = (M.row(1) - M.row(0)) / h;
        D.row(n - 1) = (M.row(n - 1) - M.row(n - 2)) / h;
        return D;
    };
    Eigen::MatrixXd dx = diff_rows(K.K);
    Eigen::MatrixXd dy = diff_rows(K.K.transpose()).transpose();
    return dx.cwiseAbs() + dy.cwiseAbs();
}

GaussianFit gaussian_fit(const Eigen::MatrixXd& F, const Grid& grid, double t, KernelShape shape) {
    if (!(t > 0.0)) throw std::invalid_argument("gaussian_fit: need t > 0");
    constexpr int nbins = 40;
    constexpr double zmax = 36.0, floor = 1e-14;
    GaussianFit fit;
    fit.shape = shape;
    fit.t = t;
    fit.power = shape_power(shape);
    const double tp = std::pow(t, fit.power);
    std::vector<double> best(nbins, -INFINITY), best_z(nbins, 0.0);
    struct Sample {
        double z, y;
    };
    std::vector<Sample> samples;
    const auto n = F.rows();
    for (Eigen::Index j = 0; j < n; ++j)
        for (Eigen::Index i = 0; i < n; ++i) {
            double d = grid.h * static_cast<double>(i - j);
            double z = d * d / t;
            if (z > zmax) continue;
            double v = std::abs(F(i, j));
            if (v < floor) continue;
            double y = std::log(v * tp);
            samples.push_back({z, y});
            int b = std::min(nbins - 1, static_cast<int>(z / zmax * nbins));
            if (y > best[b]) best[b] = y, best_z[b] = z;
        }
    std::vector<double> xs, ys;
    for (int b = 0; b < nbins; ++b)
        if (std::isfinite(best[b])) xs.push_back(best_z[b]), ys.push_back(best[b]);
    if (xs.size() < 3) throw std::runtime_error("gaussian_fit: kernel below the 1e-14 floor on the fit window");
    const double slope = ls_slope(xs, ys);
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) mx += xs[i], my += ys[i];
    mx /= static_cast<double>(xs.size());
    my /= static_cast<double>(xs.size());
    const double logC = my - slope * mx;
    fit.c_fit = -slope;
    fit.C_fit = std::exp(logC);
    fit.residual = -INFINITY;
    for (const auto& s : samples) fit.residual = std::max(fit.residual, s.y - (logC + slope * s.z));
    fit.C_envelope = fit.C_fit * std::exp(std::max(fit.residual, 0.0));
    fit.samples = samples.size();
    return fit;
}

GridFunction lp_A_project(const DivergenceOperator& op, const GridFunction& f, int j, const HeatOptions& opt) {
    const double s = std::ldexp(1.0, -2 * j);
    if (use_eigen(op, opt)) return eigen_apply(op, f, [s](double l) { return cplx(s * l * std::exp(-s * l)); });
    auto g = implicit_euler(op, f, s, opt.steps);
    auto Ag = op.apply(g);
    for (auto& z : Ag.v) z *= s;
    return Ag;
}

std::vector<GridFunction> band_probes(const Grid& grid, int k, double x_c, int count, const LittlewoodPaleyBank& bank) {
    if (count < 1) throw std::invalid_argument("band_probes: need at least one probe");
    const double base = std::ldexp(1.0, k), width = 4.0 / base;
    std::vector<GridFunction> out;
    for (int m = 0; m < count; ++m) {
        double xi = base * (count == 1 ? 2.0 : 1.0 + 2.0 * m / (count - 1));
        auto p = GridFunction::sample(grid, [&](double x) {
            double y = (x - x_c) / width;
            return std::exp(-0.5 * y * y) * std::exp(cplx(0.0, xi * (x - x_c)));
        });
        out.push_back(lp_project(p, k, bank));
    }
    return out;
}

double offdiagonal_decay(const DivergenceOperator& op, const LittlewoodPaleyBank& bank, int j, int k, double p,
                         const std::vector<GridFunction>& probes, const HeatOptions& opt) {
    double best = 0.0;
    for (const auto& f : probes) {
        double nf = lp_norm(f, p);
        if (!(nf > 0.0)) continue;
        auto g = lp_A_project(op, lp_project(f, k, bank), j, opt);
        best = std::max(best, lp_norm(g, p) / nf);
    }
    return best;
}

DecayProfile offdiagonal_profile(const DivergenceOperator& op, const LittlewoodPaleyBank& bank, int k, int d_max,
                                 double p, const std::vector<GridFunction>& probes, Exec exec) {
    if (d_max < 1) throw std::invalid_argument("offdiagonal_profile: need d_max >= 1");
    DecayProfile prof;
    prof.k = k;
    eigen_basis(op);  // build the shared basis once before fanning out
    prof.ratio = ordered_map<double>(
        static_cast<std::size_t>(d_max + 1),
        [&](std::size_t d) { return offdiagonal_decay(op, bank, k + static_cast<int>(d), k, p, probes); }, exec);
    std::vector<double> xs, ys;
    for (int d = 0; d <= d_max; ++d) {
        prof.distance.push_back(d);
        xs.push_back(d);
        ys.push_back(std::log2(prof.ratio[static_cast<std::size_t>(d)]));
    }
    prof.slope = ls_slope(xs, ys);
    return prof;
}

double ls_slope(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("ls_slope: need two or more points");
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) mx += x[i], my += y[i];
    mx /= static_cast<double>(x.size());
    my /= static_cast<double>(y.size());
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
    }
    if (sxx == 0.0) throw std::invalid_argument("ls_slope: degenerate abscissae");
    return sxy / sxx;
}

}  // namespace bvlab
