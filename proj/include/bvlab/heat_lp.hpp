#pragma once

#include <vector>

#include <Eigen/Dense>

#include "bvlab/evolution.hpp"
#include "bvlab/fields_norms.hpp"
#include "bvlab/grid.hpp"
#include "bvlab/parallel.hpp"

namespace bvlab {

// automatic: exact eigen-decomposition up to n = 2048, implicit Euler beyond.
enum class HeatMethod { automatic, eigen, implicit_euler };

struct HeatOptions {
    HeatMethod method = HeatMethod::automatic;
    int steps = 64;  // implicit Euler steps per call
};

// e^{-tA} f, t > 0.
GridFunction heat_apply(const DivergenceOperator& op, const GridFunction& f, double t, const HeatOptions& opt = {});

// K(x_i, y_j, t); column j is e^{-tA} applied to the grid delta at y_j (1/h).
struct HeatKernelMatrix {
    double t = 0.0;
    Grid grid;
    Eigen::MatrixXd K;
};

constexpr std::size_t kKernelGuard = 2048;

HeatKernelMatrix kernel_matrix(const DivergenceOperator& op, double t, Exec exec = Exec::parallel);

// The three bound shapes: |K| ~ t^{-1/2}, |d_x K| + |d_y K| ~ t^{-1}, |A K| ~ t^{-3/2}.
enum class KernelShape { value, gradient, generator };
double shape_power(KernelShape s);
// Kernel of the given shape (gradients by centered differences, A K spectrally).
Eigen::MatrixXd shaped_kernel(const DivergenceOperator& op, const HeatKernelMatrix& K, KernelShape s);

// |F| <= C t^{-power} e^{-c |x-y|^2 / t} on |x-y| <= 6 sqrt(t).  The fit is a
// least-squares line through the per-bin maxima of log(t^power |F|) against
// z = |x-y|^2 / t (40 bins on [0, 36]); residual is the largest log-excess of
// any sample over the fitted bound (<= 0 means it holds everywhere sampled),
// and C_envelope = C_fit e^{max(residual, 0)} makes it hold with c_fit.
struct GaussianFit {
    KernelShape shape = KernelShape::value;
    double t = 0.0, power = 0.5;
    double C_fit = 0.0, c_fit = 0.0, residual = 0.0, C_envelope = 0.0;
    std::size_t samples = 0;
};

GaussianFit gaussian_fit(const Eigen::MatrixXd& F, const Grid& grid, double t, KernelShape shape);

// Delta^A_j f = 4^{-j} A e^{-4^{-j} A} f.
GridFunction lp_A_project(const DivergenceOperator& op, const GridFunction& f, int j, const HeatOptions& opt = {});

// Packets with central frequencies spread over band k, centred at x_c and
// projected onto band k by the Fourier bank.
std::vector<GridFunction> band_probes(const Grid& grid, int k, double x_c, int count = 5,
                                      const LittlewoodPaleyBank& bank = {});

// max over probes of ||Delta^A_j Delta_k f||_p / ||f||_p.
double offdiagonal_decay(const DivergenceOperator& op, const LittlewoodPaleyBank& bank, int j, int k, double p,
                         const std::vector<GridFunction>& probes, const HeatOptions& opt = {});

// Ratios for j = k + d, d = 0..d_max, and the least-squares slope of log2(ratio) in d.
struct DecayProfile {
    int k = 0;
    std::vector<int> distance;
    std::vector<double> ratio;
    double slope = 0.0;
};

DecayProfile offdiagonal_profile(const DivergenceOperator& op, const LittlewoodPaleyBank& bank, int k, int d_max,
                                 double p, const std::vector<GridFunction>& probes, Exec exec = Exec::parallel);

// Least-squares slope of y against x.
double ls_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace bvlab
