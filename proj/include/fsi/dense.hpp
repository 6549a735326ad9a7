#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace fsi {

using cplx = std::complex<double>;

/// Row-major dense matrix, sized for desk-scale eigenproblems and the
/// added-mass operator (a few hundred rows at most).
struct Mat {
    int rows = 0, cols = 0;
    std::vector<double> a;

    Mat() = default;
    Mat(int r, int c) : rows(r), cols(c), a(static_cast<std::size_t>(r) * c, 0.0) {}

    double& operator()(int i, int j) { return a[static_cast<std::size_t>(i) * cols + j]; }
    double operator()(int i, int j) const { return a[static_cast<std::size_t>(i) * cols + j]; }
};

/// Dense LU with partial pivoting; factor once, solve many.
class DenseLU {
public:
    void factor(const Mat& m);
    void solve(std::vector<double>& b) const;

private:
    Mat lu_;
    std::vector<int> ipiv_;
    std::vector<double> rscale_;
};

/// x := A y
void mat_vec(const Mat& m, const std::vector<double>& y, std::vector<double>& x);

/// Eigenvalues of a general real matrix via Hessenberg reduction followed by
/// complex shifted QR. Intended for small operators (beam block, Ritz systems).
std::vector<cplx> dense_eigenvalues(const Mat& m);

/// Eigenvalues of an upper Hessenberg matrix (complex shifted QR).
std::vector<cplx> hessenberg_eigenvalues(std::vector<cplx> h, int n);

/// Eigenvector of an upper Hessenberg matrix for a given (converged)
/// eigenvalue, by inverse iteration.
std::vector<cplx> hessenberg_eigenvector(const std::vector<cplx>& h, int n, cplx lambda);

} // namespace fsi
