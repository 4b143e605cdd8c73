#pragma once

#include <functional>
#include <vector>

#include "bvlab/grid.hpp"

namespace bvlab {

// In-place complex DFT, unnormalised forward and 1/N-normalised inverse.
// Plans are cached per size; execution is safe from several threads.
void fft_forward(std::vector<cplx>& data);
void fft_inverse(std::vector<cplx>& data);

// Angular frequencies of an N-point DFT with spacing h (FFT ordering).
std::vector<double> fft_frequencies(std::size_t N, double h);

// Smallest 2^a 3^b 5^c >= n.
std::size_t fft_good_size(std::size_t n);

// Index span [first, last] of samples with |f| > 0; empty -> {1, 0}.
std::pair<std::size_t, std::size_t> active_support(const std::vector<cplx>& v);

// Padded DFT of a grid function.  Non periodic data are zero-padded to at least
// four times their active support (and never shorter than the grid), which is
// the artifact-wide convention for Fourier multipliers on non periodic data.
class Spectrum {
public:
    explicit Spectrum(const GridFunction& f, std::size_t min_pad_factor = 4);
    explicit Spectrum(const std::vector<cplx>& v, double h, bool periodic, std::size_t min_pad_factor = 4);

    std::size_t size() const { return fhat_.size(); }
    const std::vector<double>& xi() const { return xi_; }
    const std::vector<cplx>& coefficients() const { return fhat_; }
    double nyquist() const { return 3.141592653589793 / h_; }

    // Apply a multiplier m(xi) and return the first n samples.
    std::vector<cplx> apply(const std::function<cplx(double)>& m) const;
    // Same, with the multiplier tabulated on xi().
    std::vector<cplx> apply_table(const std::vector<double>& m) const;

private:
    std::size_t n_ = 0;
    double h_ = 1.0;
    std::vector<cplx> fhat_;
    std::vector<double> xi_;
};

}  // namespace bvlab
