#pragma once

#include <cmath>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "bvlab/grid.hpp"
#include "bvlab/parallel.hpp"

namespace bvlab {

// C-infinity step: 0 for u <= 0, 1 for u >= 1.
double smooth_step(double u);

// Even bump equal to 1 on [-plateau, plateau], supported in ]-support, support[.
struct Cutoff {
    double plateau = 0.2, support = 0.25;
    double operator()(double z) const;
    double derivative(double z) const;
};
inline constexpr Cutoff kPsi1{0.2, 0.25};
inline constexpr Cutoff kPsi2{1.0 / 6.0, 0.2};

// alpha(x) = 4 pi^2 + delta cos(2 pi harmonic x) chi(x), chi 1-periodic, zero
// within `flat` of the integers and 1 beyond flat + ramp.  deviation = |delta|.
struct HillCoefficient {
    std::string name = "resonant";
    double delta = 0.9;
    int harmonic = 2;
    double flat = 0.15, ramp = 0.1;

    double operator()(double x) const;
    double derivative(double x) const;
    double deviation() const { return std::abs(delta); }
    // Throws unless deviation <= 1, harmonic >= 0, and the flat zone admits the gluing shift (flat > 1/8).
    void validate() const;
};

// "resonant" (cos 4 pi x, delta 0.9), "cosine" (cos 2 pi x, delta 0.9), "constant".
HillCoefficient named_hill_profile(const std::string& name);
std::vector<std::string> hill_profile_names();

inline constexpr int kMinStepsPerPeriod = 2048;

// The decaying solution is w(x) = c W(s + |x|) for x >= 0 and parity * c W(s + |x|)
// for x < 0, where W solves W'' + alpha W = 0 from the contracting eigenvector of
// the period map, and the shift s in [-1/8, 1/8] puts W'(s) = 0 (even) or W(s) = 0
// (odd) so the reflection glues in C^1.  The flat zone keeps alpha(|x| + s) equal to
// 4 pi^2 near 0.
struct FloquetSolution {
    HillCoefficient alpha;
    Eigen::Matrix2d monodromy = Eigen::Matrix2d::Identity();
    double trace = 2.0, det = 1.0;
    double kappa = 0.0;        // log of the spectral radius
    double contracting = 1.0;  // signed contracting eigenvalue
    double shift = 0.0;
    int parity = 1;
    int steps = kMinStepsPerPeriod;
    double scale = 1.0;  // makes ||w||_2 = 1
    // W and W' on s + [0, 1] at the RK4 nodes.
    std::vector<double> W, dW;

    double w(double x) const;
    double dw(double x) const;
    // p(x) = w(x) e^{kappa |x|}.
    double periodic_part(double x) const { return w(x) * std::exp(kappa * std::abs(x)); }
    // The potential seen by w: alpha(|x| + s).
    double potential(double x) const { return alpha(std::abs(x) + shift); }
};

// Matrix part only: columns are the period map applied to (1, 0) and (0, 1).
FloquetSolution monodromy(const HillCoefficient& alpha, int steps = 4096);
// Throws when |trace| <= 2 (no decaying mode).
FloquetSolution floquet_mode(const HillCoefficient& alpha, int steps = 4096);

// y(x) = int_0^x alpha(|t| + s) dt and its inverse; beta(Y) = alpha(|x(Y)| + s).
class ChangedVariable {
public:
    explicit ChangedVariable(const FloquetSolution& f);
    double y_of_x(double x) const;
    double x_of_y(double y) const;
    double beta(double y) const;
    // d beta / dy = alpha'(x) sign(x) / alpha(x).
    double dbeta(double y) const;
    // v(y) = w(x(y)).
    double v(double y) const;
    double dv(double y) const;
    const FloquetSolution& floquet() const { return f_; }

private:
    FloquetSolution f_;
    std::vector<double> cum_;  // Y(x) on s + [0, 1] relative to Y(s)
    double period_ = 0.0;      // int over one period
    double h_ = 0.0;
    double y_half(double x) const;  // x >= 0
};

inline constexpr int kMaxScales = 14;

struct MetricPieceNorms {
    int n = 0;
    double center = 0.0, rate = 0.0;
    double lo = 0.0, hi = 0.0;  // open support of Psi_1(2^n (y - m_n))
    double l1 = 0.0, w11 = 0.0;
    double besov_half = 0.0;  // B^{1/2}_{1,1} proxy ||b||_1^{1/2} ||b'||_1^{1/2}
};

// beta(y) = sum_n beta(lambda_n (y - m_n)) Psi_1(2^n (y - m_n)) + 4 pi (1 - sum_n Psi_1(2^n (y - m_n))),
// n = 1..n_max, m_n = 2^{-n}, lambda_n = n 2^n.
class SingularMetric {
public:
    // Throws on n_max outside [1, 14] and on overlapping piece supports.
    SingularMetric(const FloquetSolution& f, int n_max);

    int n_max() const { return n_max_; }
    static double center(int n) { return std::ldexp(1.0, -n); }
    static double rate(int n) { return n * std::ldexp(1.0, n); }
    double operator()(double y) const;
    double derivative(double y) const;
    const ChangedVariable& variable() const { return cv_; }
    // Per-piece norms by composite Simpson quadrature; `points` per piece.
    std::vector<MetricPieceNorms> piece_norms(int points = 1 << 16, Exec exec = Exec::parallel) const;
    // Minimum of beta over [lo, hi] at spacing h.
    double minimum(double lo, double hi, double h) const;

private:
    ChangedVariable cv_;
    int n_max_;
    double piece(int n, double y) const;
    double dpiece(int n, double y) const;
};

struct Quasimode {
    int k = 0;
    double lambda = 0.0;
    double lo = 0.0, hi = 0.0;  // open support
    GridFunction phi;           // real, on a uniform grid covering [lo, hi]
    double norm = 0.0;          // trapezoid L^2 norm after normalization
    double residual_l2 = 0.0, residual_h1 = 0.0;
};

// points: grid intervals across the support.
Quasimode build_quasimode(const SingularMetric& beta, int k, std::size_t points = 8192);

// Dense real-valued samples of the metric on a grid.
std::vector<double> sample_metric(const SingularMetric& beta, const Grid& g);

// The quasimode mechanism predicts u(t) ~ e^{i t lambda^2} phi_k on [-eps, eps],
// i.e. a time-averaged quotient q_quasi = ||phi_k||_q / ||phi_k||_{H^r}.  The
// evolved quotient is measured on [0, window] with window = eps when the run fits
// the work budget and the largest affordable prefix otherwise (complete = false).
struct BlowupRow {
    int k = 0;
    double lambda = 0.0, eps = 0.0;
    double residual_l2 = 0.0, residual_h1 = 0.0;
    double coherence = 0.0;  // 1 / ||r||_2: time over which ||u - e^{it lambda^2} phi|| stays below 1
    double hr_norm = 0.0, lq0 = 0.0;
    double q_quasi = 0.0;
    double envelope = 0.0;  // 2^{k(q-2)/q} / (k 2^k)^r
    // Direct evolution.
    bool complete = false;
    double window = 0.0;
    double lq_time_l1 = 0.0;  // int_{-window}^{window} ||u||_q dt
    double q_avg = 0.0;       // (2 window)^{-1} int ||u||_q dt / ||phi||_{H^r}
    double kept_mass = 0.0;   // min over the window of the mass fraction in the 3x support
    double leak = 0.0;
    std::size_t n_x = 0;
    long long steps = 0;
};

struct BlowupOptions {
    int nt = 33;                // samples of [0, window]
    double cn_tol = 1e-2;
    double energy_cut = 1e-6;   // spectral tail ignored when sizing dx and dt
    double max_work = 2e8;      // grid points x CN steps per scale
    Exec exec = Exec::parallel;
};

struct BlowupTable {
    double q = 6.0, r = 0.2;
    std::vector<BlowupRow> rows;
    bool feasible = false;        // every window complete
    bool increasing = false;      // q_avg strictly increasing in k (complete windows only)
    double slope = 0.0;           // least-squares slope of log2 q_avg in k
    double quasi_slope = 0.0;     // same for q_quasi
    double envelope_slope = 0.0;  // same for the envelope
};

// Throws unless 2 < q and 0 <= r < (q - 2) / (2q) (the Sobolev line).
void check_blowup_params(double q, double r);
BlowupTable blowup_experiment(const SingularMetric& beta, int k_min, int k_max, double q, double r,
                              const BlowupOptions& opt = {});

}  // namespace bvlab
