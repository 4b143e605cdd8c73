#include "bvlab/fields_norms.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "bvlab/fft.hpp"

namespace bvlab {

namespace {

double smoothstep5(double t) { return t * t * t * (10.0 + t * (-15.0 + 6.0 * t)); }

double combine_lr(const std::vector<double>& vals, double r) {
    if (std::isinf(r)) {
        double m = 0.0;
        for (double v : vals) m = std::max(m, v);
        return m;
    }
    double mx = 0.0;
    for (double v : vals) mx = std::max(mx, v);
    if (mx == 0.0) return 0.0;
    double s = 0.0;
    for (double v : vals) s += std::pow(v / mx, r);
    return mx * std::pow(s, 1.0 / r);
}

// Common padded length for all time slices of a field.
std::size_t padded_length(const SpaceTimeField& u) {
    if (u.periodic_x) return u.x.n;
    std::size_t first = u.x.n, last = 0;
    for (std::size_t k = 0; k < u.t.n; ++k)
        for (std::size_t i = 0; i < u.x.n; ++i)
            if (u(i, k) != cplx(0.0)) {
                first = std::min(first, i);
                last = std::max(last, i);
            }
    std::size_t span = (first <= last) ? last - first + 1 : 1;
    return fft_good_size(std::max(u.x.n, 4 * span));
}

double weight_t(std::size_t k, std::size_t n) { return (k == 0 || k + 1 == n) ? 0.5 : 1.0; }

}  // namespace

// ------------------------------------------------------------------ bank

double LittlewoodPaleyBank::mother(double xi) {
    double a = std::abs(xi);
    if (a <= 1.0) return 1.0;
    if (a >= 1.5) return 0.0;
    return 1.0 - smoothstep5((a - 1.0) / 0.5);
}

double LittlewoodPaleyBank::low_symbol(int j, double xi) { return mother(std::ldexp(xi, -j)); }

double LittlewoodPaleyBank::band_symbol(int j, double xi) { return low_symbol(j + 1, xi) - low_symbol(j, xi); }

int LittlewoodPaleyBank::finest_resolved(double h) {
    return static_cast<int>(std::floor(std::log2(M_PI / h) + 1e-12)) - 1;
}

double LittlewoodPaleyBank::kernel_first_moment() {
    static const double moment = [] {
        const std::size_t N = 1 << 15;
        const double h = 0.02;
        auto xi = fft_frequencies(N, h);
        std::vector<cplx> k(N);
        for (std::size_t i = 0; i < N; ++i) k[i] = band_symbol(0, xi[i]);
        fft_inverse(k);  // samples of phi at z = i*h (wrapped), times h
        double s = 0.0;
        for (std::size_t i = 0; i < N; ++i) {
            double z = (2 * i < N) ? i * h : (static_cast<double>(i) - static_cast<double>(N)) * h;
            s += std::abs(z) * std::abs(k[i]) / h * h;
        }
        return s;
    }();
    return moment;
}

std::vector<int> LittlewoodPaleyBank::bands_for(double h) const {
    std::vector<int> js;
    int top = std::min(j_max, finest_resolved(h));
    for (int j = j_min; j <= top; ++j) js.push_back(j);
    return js;
}

// ------------------------------------------------------------- projections

GridFunction lp_project(const GridFunction& f, int j, const LittlewoodPaleyBank&) {
    f.validate();
    if (j > LittlewoodPaleyBank::finest_resolved(f.grid.h))
        throw std::invalid_argument("lp_project: band 2^" + std::to_string(j + 1) +
                                    " exceeds the grid Nyquist frequency");
    Spectrum sp(f);
    return GridFunction(f.grid, sp.apply([j](double xi) { return LittlewoodPaleyBank::band_symbol(j, xi); }),
                        f.periodic);
}

std::vector<double> besov_profile(const GridFunction& f, double s, double p, const LittlewoodPaleyBank& bank,
                                  Exec exec) {
    f.validate();
    auto bands = bank.bands_for(f.grid.h);
    Spectrum sp(f);
    return ordered_map<double>(
        bands.size(),
        [&](std::size_t b) {
            int j = bands[b];
            auto w = sp.apply([j](double xi) { return LittlewoodPaleyBank::band_symbol(j, xi); });
            return std::pow(2.0, j * s) * lp_norm(w, f.grid.h, p, f.periodic);
        },
        exec);
}

double besov_norm(const GridFunction& f, double s, double p, double r, const LittlewoodPaleyBank& bank, Exec exec) {
    return combine_lr(besov_profile(f, s, p, bank, exec), r);
}

// ------------------------------------------------------------- mixed norms

constexpr double kNegligibleBand = 1e-30;

std::vector<double> mixed_norm_profile(const SpaceTimeField& u, const MixedNormSpec& spec, Exec exec) {
    u.validate();
    const double p = spec.p_outer, q = spec.q_inner;
    if (!(p >= 1.0) || !(q >= 1.0)) throw std::invalid_argument("mixed_norm: exponents must be in [1, inf]");
    const std::size_t nx = u.x.n, nt = u.t.n;

    std::vector<int> bands;
    std::vector<std::vector<double>> symbols;
    std::size_t N = nx;
    if (spec.besov) {
        bands = spec.besov->bank.bands_for(u.x.h);
        N = padded_length(u);
        auto xi = fft_frequencies(N, u.x.h);
        for (int j : bands) {
            std::vector<double> m(N);
            for (std::size_t k = 0; k < N; ++k) m[k] = LittlewoodPaleyBank::band_symbol(j, xi[k]);
            symbols.push_back(std::move(m));
        }
    }
    const std::size_t nb = spec.besov ? bands.size() : 1;

    // Band content of time slice k, written into out[b][i].
    auto slice_bands = [&](std::size_t k, std::vector<std::vector<cplx>>& out) {
        out.assign(nb, std::vector<cplx>(nx));
        if (!spec.besov) {
            for (std::size_t i = 0; i < nx; ++i) out[0][i] = u(i, k);
            return;
        }
        std::vector<cplx> fh(N, cplx(0.0));
        for (std::size_t i = 0; i < nx; ++i) fh[i] = u(i, k);
        fft_forward(fh);
        double total = 0.0;
        for (const auto& z : fh) total += std::norm(z);
        for (std::size_t b = 0; b < nb; ++b) {
            std::vector<cplx> w(N);
            double e = 0.0;
            for (std::size_t m = 0; m < N; ++m) {
                w[m] = fh[m] * symbols[b][m];
                e += std::norm(w[m]);
            }
            // Bands below 1e-30 of the slice energy are left at zero.
            if (!(e > kNegligibleBand * total)) continue;
            fft_inverse(w);
            std::copy(w.begin(), w.begin() + static_cast<long>(nx), out[b].begin());
        }
    };

    std::vector<double> band_values(nb);
    if (spec.outer == Outer::t) {
        // val[k][b] = ||band_b(., t_k)||_{L^q_x}
        auto per_slice = ordered_map<std::vector<double>>(
            nt,
            [&](std::size_t k) {
                std::vector<std::vector<cplx>> bs;
                slice_bands(k, bs);
                std::vector<double> v(nb);
                for (std::size_t b = 0; b < nb; ++b) v[b] = lp_norm(bs[b], u.x.h, q, u.periodic_x);
                return v;
            },
            exec);
        for (std::size_t b = 0; b < nb; ++b) {
            std::vector<cplx> series(nt);
            for (std::size_t k = 0; k < nt; ++k) series[k] = per_slice[k][b];
            band_values[b] = (nt == 1) ? per_slice[0][b] : lp_norm(series, u.t.h, p, false);
        }
    } else {
        // acc[b][i] = sum_k w_k |band_b(x_i, t_k)|^q (or the max), accumulated in
        // fixed chunks of time slices and reduced in chunk order.
        constexpr std::size_t chunk = 8;
        const std::size_t nchunks = (nt + chunk - 1) / chunk;
        const bool qinf = std::isinf(q);
        auto partial = ordered_map<std::vector<double>>(
            nchunks,
            [&](std::size_t c) {
                std::vector<double> acc(nb * nx, 0.0);
                std::vector<std::vector<cplx>> bs;
                for (std::size_t k = c * chunk; k < std::min(nt, (c + 1) * chunk); ++k) {
                    slice_bands(k, bs);
                    const double w = (nt == 1) ? 1.0 : weight_t(k, nt);
                    for (std::size_t b = 0; b < nb; ++b)
                        for (std::size_t i = 0; i < nx; ++i) {
                            double a = std::abs(bs[b][i]);
                            if (qinf)
                                acc[b * nx + i] = std::max(acc[b * nx + i], a);
                            else
                                acc[b * nx + i] += w * (q == 2.0 ? a * a : std::pow(a, q));
                        }
                }
                return acc;
            },
            exec);
        std::vector<double> acc(nb * nx, 0.0);
        for (const auto& part : partial)
            for (std::size_t m = 0; m < acc.size(); ++m)
                acc[m] = qinf ? std::max(acc[m], part[m]) : acc[m] + part[m];
        const double dt = (nt == 1) ? 1.0 : u.t.h;
        for (std::size_t b = 0; b < nb; ++b) {
            std::vector<cplx> inner(nx);
            for (std::size_t i = 0; i < nx; ++i)
                inner[i] = qinf ? acc[b * nx + i] : std::pow(acc[b * nx + i] * dt, 1.0 / q);
            band_values[b] = lp_norm(inner, u.x.h, p, u.periodic_x);
        }
    }
    if (spec.besov)
        for (std::size_t b = 0; b < nb; ++b) band_values[b] *= std::pow(2.0, bands[b] * spec.besov->s);
    return band_values;
}

double mixed_norm(const SpaceTimeField& u, const MixedNormSpec& spec, Exec exec) {
    auto prof = mixed_norm_profile(u, spec, exec);
    if (!spec.besov) return prof[0];
    return combine_lr(prof, spec.besov->r);
}

// ------------------------------------------------------------ multipliers

GridFunction fractional_derivative(const GridFunction& f, double s) {
    f.validate();
    if (s == 0.0) return f;
    Spectrum sp(f);
    return GridFunction(f.grid, sp.apply([s](double xi) { return xi == 0.0 ? 0.0 : std::pow(std::abs(xi), s); }),
                        f.periodic);
}

GridFunction spectral_derivative(const GridFunction& f) {
    f.validate();
    Spectrum sp(f);
    return GridFunction(f.grid, sp.apply([](double xi) { return cplx(0.0, xi); }), f.periodic);
}

cplx interpolate_cubic(const GridFunction& f, double x) {
    const auto n = static_cast<long>(f.grid.n);
    double s = (x - f.grid.x0) / f.grid.h;
    auto sample = [&](long i) -> cplx {
        if (f.periodic) return f.v[static_cast<std::size_t>(((i % n) + n) % n)];
        if (i < 0 || i >= n) return cplx(0.0);
        return f.v[static_cast<std::size_t>(i)];
    };
    if (!f.periodic && (s < -1e-9 || s > static_cast<double>(n - 1) + 1e-9)) return cplx(0.0);
    long i = static_cast<long>(std::floor(s));
    if (!f.periodic) i = std::clamp(i, 1L, n - 3);
    double t = s - static_cast<double>(i);
    // Lagrange basis on nodes -1, 0, 1, 2.
    double wm = -t * (t - 1) * (t - 2) / 6.0;
    double w0 = (t + 1) * (t - 1) * (t - 2) / 2.0;
    double w1 = -(t + 1) * t * (t - 2) / 2.0;
    double w2 = (t + 1) * t * (t - 1) / 6.0;
    return wm * sample(i - 1) + w0 * sample(i) + w1 * sample(i + 1) + w2 * sample(i + 2);
}

GridFunction compose_with_diffeo(const GridFunction& f, const Diffeomorphism& d) {
    f.validate();
    const double lo = f.grid.x0, hi = f.grid.back(), tol = 1e-9 * (1.0 + std::abs(hi - lo));
    if (!f.periodic && (d.x_of_y.front() < lo - tol || d.x_of_y.back() > hi + tol))
        throw std::invalid_argument("compose_with_diffeo: diffeomorphism range exceeds the function's domain");
    GridFunction out(d.y_grid, false);
    for (std::size_t k = 0; k < d.y_grid.n; ++k) out.v[k] = interpolate_cubic(f, d.x_of_y[k]);
    return out;
}

}  // namespace bvlab
