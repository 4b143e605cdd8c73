#pragma once

#include <vector>

#include "bvlab/grid.hpp"

namespace bvlab {

// Complex tridiagonal system, optionally with the two cyclic corner entries
// A(n-1, 0) and A(0, n-1).  Factored once with partial pivoting (LAPACK
// zgttrf); cyclic systems use a Sherman-Morrison correction.
class Tridiagonal {
public:
    Tridiagonal() = default;
    Tridiagonal(std::vector<cplx> sub, std::vector<cplx> diag, std::vector<cplx> sup, cplx corner_bl = 0.0,
                cplx corner_tr = 0.0);

    std::size_t size() const { return n_; }
    void solve(std::vector<cplx>& rhs) const;
    std::vector<cplx> multiply(const std::vector<cplx>& x) const;

private:
    void factor();
    void solve_plain(std::vector<cplx>& rhs) const;

    std::size_t n_ = 0;
    std::vector<cplx> sub0_, diag0_, sup0_;  // original entries
    cplx bl_ = 0.0, tr_ = 0.0;
    bool cyclic_ = false;
    // LU factors.
    std::vector<cplx> dl_, d_, du_, du2_;
    std::vector<int> ipiv_;
    // Sherman-Morrison data.
    cplx gamma_ = 0.0;
    std::vector<cplx> z_;
    cplx vz_ = 0.0;
};

}  // namespace bvlab
