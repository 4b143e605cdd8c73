#pragma once

#include <complex>
#include <cstddef>
#include <string>
#include <vector>

namespace bvlab {

using cplx = std::complex<double>;

// Uniform grid x_i = x0 + i*h, i = 0..n-1.
struct Grid {
    double x0 = 0.0;
    double h = 1.0;
    std::size_t n = 0;

    double at(std::size_t i) const { return x0 + static_cast<double>(i) * h; }
    double back() const { return at(n - 1); }
    // Length of the periodic cell n*h.
    double period() const { return static_cast<double>(n) * h; }

    static Grid spanning(double lo, double hi, std::size_t n);
    static Grid with_step(double lo, double hi, double h);
};

// Complex samples on a uniform grid.  A periodic function is sampled on one
// period (the point x0 + n*h is not stored); otherwise the samples describe a
// function that is treated as zero outside [x0, x0+(n-1)h].
struct GridFunction {
    Grid grid;
    std::vector<cplx> v;
    bool periodic = false;

    GridFunction() = default;
    GridFunction(Grid g, bool periodic_ = false);
    GridFunction(Grid g, std::vector<cplx> values, bool periodic_ = false);

    std::size_t size() const { return v.size(); }
    cplx& operator[](std::size_t i) { return v[i]; }
    const cplx& operator[](std::size_t i) const { return v[i]; }

    // Throws when invariants fail (n >= 2, finite samples, sizes agree).
    void validate() const;

    template <class F>
    static GridFunction sample(Grid g, F&& f, bool periodic_ = false) {
        GridFunction out(g, periodic_);
        for (std::size_t i = 0; i < g.n; ++i) out.v[i] = cplx(f(g.at(i)));
        return out;
    }
};

// Values u(x_i, t_k), stored time-major: index k*n_x + i.
struct SpaceTimeField {
    Grid x;
    Grid t;
    std::vector<cplx> values;
    bool periodic_x = false;

    SpaceTimeField() = default;
    SpaceTimeField(Grid xg, Grid tg, bool periodic = false);

    cplx& operator()(std::size_t ix, std::size_t it) { return values[it * x.n + ix]; }
    const cplx& operator()(std::size_t ix, std::size_t it) const { return values[it * x.n + ix]; }

    GridFunction slice_t(std::size_t it) const;
    void set_slice_t(std::size_t it, const GridFunction& f);
    // Time series at spatial index ix, as a (non periodic) grid function of t.
    std::vector<cplx> series_x(std::size_t ix) const;

    void validate() const;

    // Flat little-endian doubles (re, im interleaved, time-major) plus a JSON
    // sidecar {n_x, n_t, x0, dx, t0, dt, periodic_x, complex}.
    void save(const std::string& bin_path, const std::string& config_hash = "") const;
    static SpaceTimeField load(const std::string& bin_path);
};

// Trapezoid L^p norm of samples with spacing h.  p = +inf gives the grid max.
// Periodic samples use equal weights.
double lp_norm(const std::vector<cplx>& v, double h, double p, bool periodic = false);
double lp_norm(const GridFunction& f, double p);

// Trapezoid integral of real samples.
double trapezoid(const std::vector<double>& v, double h, bool periodic = false);

}  // namespace bvlab
