#include "bvlab/tridiag.hpp"

#include <stdexcept>

#include <lapacke.h>

namespace bvlab {

namespace {
lapack_complex_double* as_lapack(std::vector<cplx>& v) { return reinterpret_cast<lapack_complex_double*>(v.data()); }
}  // namespace

Tridiagonal::Tridiagonal(std::vector<cplx> sub, std::vector<cplx> diag, std::vector<cplx> sup, cplx corner_bl,
                         cplx corner_tr)
    : n_(diag.size()), sub0_(std::move(sub)), diag0_(std::move(diag)), sup0_(std::move(sup)), bl_(corner_bl),
      tr_(corner_tr) {
    if (n_ < 3) throw std::invalid_argument("Tridiagonal: need n >= 3");
    if (sub0_.size() != n_ - 1 || sup0_.size() != n_ - 1) throw std::invalid_argument("Tridiagonal: band sizes");
    cyclic_ = (bl_ != cplx(0.0) || tr_ != cplx(0.0));
    factor();
}

void Tridiagonal::factor() {
    dl_ = sub0_;
    d_ = diag0_;
    du_ = sup0_;
    if (cyclic_) {
        gamma_ = -diag0_[0];
        d_[0] -= gamma_;
        d_[n_ - 1] -= bl_ * tr_ / gamma_;
    }
    du2_.assign(n_ - 2, 0.0);
    ipiv_.assign(n_, 0);
    lapack_int info = LAPACKE_zgttrf(static_cast<lapack_int>(n_), as_lapack(dl_), as_lapack(d_), as_lapack(du_),
                                     as_lapack(du2_), ipiv_.data());
    if (info != 0) throw std::runtime_error("Tridiagonal: singular matrix (zgttrf info " + std::to_string(info) + ")");
    if (cyclic_) {
        z_.assign(n_, 0.0);
        z_[0] = gamma_;
        z_[n_ - 1] = bl_;
        solve_plain(z_);
        vz_ = z_[0] + tr_ / gamma_ * z_[n_ - 1];
    }
}

void Tridiagonal::solve_plain(std::vector<cplx>& rhs) const {
    auto& dl = const_cast<std::vector<cplx>&>(dl_);
    auto& d = const_cast<std::vector<cplx>&>(d_);
    auto& du = const_cast<std::vector<cplx>&>(du_);
    auto& du2 = const_cast<std::vector<cplx>&>(du2_);
    lapack_int info =
        LAPACKE_zgttrs(LAPACK_COL_MAJOR, 'N', static_cast<lapack_int>(n_), 1, as_lapack(dl), as_lapack(d),
                       as_lapack(du), as_lapack(du2), ipiv_.data(), as_lapack(rhs), static_cast<lapack_int>(n_));
    if (info != 0) throw std::runtime_error("Tridiagonal: zgttrs failed");
}

void Tridiagonal::solve(std::vector<cplx>& rhs) const {
    if (rhs.size() != n_) throw std::invalid_argument("Tridiagonal::solve: size mismatch");
    solve_plain(rhs);
    if (cyclic_) {
        cplx vy = rhs[0] + tr_ / gamma_ * rhs[n_ - 1];
        cplx f = vy / (1.0 + vz_);
        for (std::size_t i = 0; i < n_; ++i) rhs[i] -= f * z_[i];
    }
}

std::vector<cplx> Tridiagonal::multiply(const std::vector<cplx>& x) const {
    std::vector<cplx> y(n_);
    for (std::size_t i = 0; i < n_; ++i) {
        cplx s = diag0_[i] * x[i];
        if (i > 0) s += sub0_[i - 1] * x[i - 1];
        if (i + 1 < n_) s += sup0_[i] * x[i + 1];
        y[i] = s;
    }
    y[0] += tr_ * x[n_ - 1];
    y[n_ - 1] += bl_ * x[0];
    return y;
}

}  // namespace bvlab
