#include "bvlab/fft.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

#include <fftw3.h>

namespace bvlab {

namespace {

// SIMD plans for aligned buffers only.  Misaligned input is staged through an
// aligned scratch buffer, so the same codelets run whatever the allocation and
// results do not depend on which thread or vector did the work.
struct PlanPair {
    fftw_plan fwd = nullptr;
    fftw_plan inv = nullptr;
};

std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

const PlanPair& plans_for(std::size_t n) {
    static std::map<std::size_t, PlanPair> cache;
    std::lock_guard<std::mutex> lock(planner_mutex());
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;
    auto* p = fftw_alloc_complex(n);
    PlanPair pp;
    const int ni = static_cast<int>(n);
    pp.fwd = fftw_plan_dft_1d(ni, p, p, FFTW_FORWARD, FFTW_ESTIMATE);
    pp.inv = fftw_plan_dft_1d(ni, p, p, FFTW_BACKWARD, FFTW_ESTIMATE);
    fftw_free(p);
    if (!pp.fwd || !pp.inv) throw std::runtime_error("FFTW planning failed");
    return cache.emplace(n, pp).first->second;
}

void execute(std::vector<cplx>& data, bool forward) {
    const auto& pl = plans_for(data.size());
    fftw_plan plan = forward ? pl.fwd : pl.inv;
    auto* p = reinterpret_cast<fftw_complex*>(data.data());
    if (fftw_alignment_of(reinterpret_cast<double*>(p)) == 0) {
        fftw_execute_dft(plan, p, p);
        return;
    }
    struct Scratch {
        fftw_complex* buf = nullptr;
        std::size_t n = 0;
        ~Scratch() { fftw_free(buf); }
    };
    thread_local Scratch s;
    if (s.n < data.size()) {
        fftw_free(s.buf);
        s.buf = fftw_alloc_complex(data.size());
        s.n = data.size();
    }
    std::copy(data.begin(), data.end(), reinterpret_cast<cplx*>(s.buf));
    fftw_execute_dft(plan, s.buf, s.buf);
    std::copy(reinterpret_cast<cplx*>(s.buf), reinterpret_cast<cplx*>(s.buf) + data.size(), data.begin());
}

}  // namespace

void fft_forward(std::vector<cplx>& data) {
    if (data.empty()) return;
    execute(data, true);
}

void fft_inverse(std::vector<cplx>& data) {
    if (data.empty()) return;
    execute(data, false);
    const double s = 1.0 / static_cast<double>(data.size());
    for (auto& z : data) z *= s;
}

std::vector<double> fft_frequencies(std::size_t N, double h) {
    std::vector<double> xi(N);
    const double base = 2.0 * M_PI / (static_cast<double>(N) * h);
    for (std::size_t k = 0; k < N; ++k) {
        auto kk = static_cast<long long>(k);
        if (2 * k > N) kk -= static_cast<long long>(N);
        xi[k] = base * static_cast<double>(kk);
    }
    return xi;
}

std::size_t fft_good_size(std::size_t n) {
    std::size_t best = 1;
    while (best < n) best *= 2;
    for (std::size_t a = 1; a <= best; a *= 2)
        for (std::size_t b = a; b <= best; b *= 3)
            for (std::size_t c = b; c <= best; c *= 5)
                if (c >= n && c < best) best = c;
    return best;
}

std::pair<std::size_t, std::size_t> active_support(const std::vector<cplx>& v) {
    std::size_t first = v.size(), last = 0;
    for (std::size_t i = 0; i < v.size(); ++i)
        if (v[i] != cplx(0.0)) {
            if (first == v.size()) first = i;
            last = i;
        }
    if (first == v.size()) return {1, 0};
    return {first, last};
}

Spectrum::Spectrum(const GridFunction& f, std::size_t min_pad_factor)
    : Spectrum(f.v, f.grid.h, f.periodic, min_pad_factor) {}

Spectrum::Spectrum(const std::vector<cplx>& v, double h, bool periodic, std::size_t min_pad_factor)
    : n_(v.size()), h_(h) {
    std::size_t N = n_;
    if (!periodic) {
        auto [a, b] = active_support(v);
        std::size_t span = (b >= a) ? (b - a + 1) : 1;
        N = fft_good_size(std::max(n_, min_pad_factor * span));
    }
    fhat_.assign(N, cplx(0.0));
    std::copy(v.begin(), v.end(), fhat_.begin());
    fft_forward(fhat_);
    xi_ = fft_frequencies(N, h);
}

std::vector<cplx> Spectrum::apply(const std::function<cplx(double)>& m) const {
    std::vector<cplx> w(fhat_.size());
    for (std::size_t k = 0; k < w.size(); ++k) w[k] = fhat_[k] * m(xi_[k]);
    fft_inverse(w);
    w.resize(n_);
    return w;
}

std::vector<cplx> Spectrum::apply_table(const std::vector<double>& m) const {
    std::vector<cplx> w(fhat_.size());
    for (std::size_t k = 0; k < w.size(); ++k) w[k] = fhat_[k] * m[k];
    fft_inverse(w);
    w.resize(n_);
    return w;
}

}  // namespace bvlab
