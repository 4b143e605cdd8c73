#pragma once

#include <optional>
#include <vector>

#include "bvlab/coefficients.hpp"
#include "bvlab/grid.hpp"
#include "bvlab/parallel.hpp"

namespace bvlab {

// Dyadic bank.  The mother cutoff is 1 on |xi| <= 1 and 0 on |xi| >= 3/2 with a
// C^2 quintic transition, so Delta_j has symbol 1 on 3*2^{j-1} <= |xi| <= 2^{j+1}
// and support in 2^j <= |xi| <= 3*2^j.
struct LittlewoodPaleyBank {
    int j_min = -8;
    int j_max = 8;

    static double mother(double xi);
    // Symbol of S_j: mother(2^{-j} xi).
    static double low_symbol(int j, double xi);
    // Symbol of Delta_j = S_{j+1} - S_j.
    static double band_symbol(int j, double xi);
    // Largest j whose band the grid resolves (2^{j+1} <= pi/h).
    static int finest_resolved(double h);
    // int |z| |phi(z)| dz for the spatial kernel phi of Delta_0.
    static double kernel_first_moment();

    // Bands of this bank that a grid with step h resolves.
    std::vector<int> bands_for(double h) const;
};

GridFunction lp_project(const GridFunction& f, int j, const LittlewoodPaleyBank& bank = {});

// (sum_j (2^{js} ||Delta_j f||_p)^r)^{1/r} over the resolved bands.
double besov_norm(const GridFunction& f, double s, double p, double r, const LittlewoodPaleyBank& bank = {},
                  Exec exec = Exec::parallel);
// Per-band weighted norms 2^{js}||Delta_j f||_p (same band order as bank.bands_for).
std::vector<double> besov_profile(const GridFunction& f, double s, double p, const LittlewoodPaleyBank& bank = {},
                                  Exec exec = Exec::parallel);

enum class Outer { x, t };

struct BesovWeight {
    double s = 0.0;
    double r = 2.0;
    LittlewoodPaleyBank bank{};
};

struct MixedNormSpec {
    Outer outer = Outer::x;
    double p_outer = 2.0;
    double q_inner = 2.0;
    std::optional<BesovWeight> besov;
};

// Inner L^q over the non-outer variable for every outer sample, then outer L^p.
// Trapezoid weights; an exponent of +inf is the grid max.  With a Besov weight
// the x-bands of the field are taken first and combined in l^r.
double mixed_norm(const SpaceTimeField& u, const MixedNormSpec& spec, Exec exec = Exec::parallel);
// Per-band weighted mixed norms (empty besov -> single entry).
std::vector<double> mixed_norm_profile(const SpaceTimeField& u, const MixedNormSpec& spec,
                                       Exec exec = Exec::parallel);

// Fourier multiplier |xi|^s (zero at xi = 0 unless s == 0).
GridFunction fractional_derivative(const GridFunction& f, double s);
// Spectral derivative d/dx.
GridFunction spectral_derivative(const GridFunction& f);

// v(y_k) = f(phi(y_k)) on the diffeomorphism's y grid, cubic interpolation.
GridFunction compose_with_diffeo(const GridFunction& f, const Diffeomorphism& d);

// Four-point cubic Lagrange interpolation of samples; zero outside the grid
// unless periodic.
cplx interpolate_cubic(const GridFunction& f, double x);

}  // namespace bvlab
