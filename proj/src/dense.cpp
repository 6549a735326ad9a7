#include "fsi/dense.hpp"

#include <algorithm>
#include <cmath>

#include "fsi/errors.hpp"

namespace fsi {

void DenseLU::factor(const Mat& m)
{
    lu_ = m;
    const int n = m.rows;
    ipiv_.resize(n);
    // row equilibration keeps partial pivoting stable on badly scaled rows
    rscale_.assign(n, 1.0);
    for (int i = 0; i < n; ++i) {
        double rm = 0.0;
        for (int j = 0; j < n; ++j)
            rm = std::max(rm, std::abs(lu_(i, j)));
        if (rm > 0.0) {
            rscale_[i] = 1.0 / rm;
            for (int j = 0; j < n; ++j)
                lu_(i, j) *= rscale_[i];
        }
    }
    for (int k = 0; k < n; ++k) {
        int p = k;
        double pmax = std::abs(lu_(k, k));
        for (int i = k + 1; i < n; ++i)
            if (std::abs(lu_(i, k)) > pmax) {
                pmax = std::abs(lu_(i, k));
                p = i;
            }
        ipiv_[k] = p;
        if (pmax == 0.0)
            throw SolverError(FailureClass::SolverFailure, "dense LU: singular matrix");
        if (p != k)
            for (int j = 0; j < n; ++j)
                std::swap(lu_(k, j), lu_(p, j));
        for (int i = k + 1; i < n; ++i) {
            lu_(i, k) /= lu_(k, k);
            const double f = lu_(i, k);
            if (f != 0.0)
                for (int j = k + 1; j < n; ++j)
                    lu_(i, j) -= f * lu_(k, j);
        }
    }
}

void DenseLU::solve(std::vector<double>& b) const
{
    const int n = lu_.rows;
    for (int i = 0; i < n; ++i)
        b[i] *= rscale_[i];
    // factor swaps whole rows (multipliers included), so permute first
    for (int k = 0; k < n; ++k)
        if (ipiv_[k] != k)
            std::swap(b[k], b[ipiv_[k]]);
    for (int k = 0; k < n; ++k)
        for (int i = k + 1; i < n; ++i)
            b[i] -= lu_(i, k) * b[k];
    for (int k = n - 1; k >= 0; --k) {
        for (int j = k + 1; j < n; ++j)
            b[k] -= lu_(k, j) * b[j];
        b[k] /= lu_(k, k);
    }
}

void mat_vec(const Mat& m, const std::vector<double>& y, std::vector<double>& x)
{
    x.assign(m.rows, 0.0);
    for (int i = 0; i < m.rows; ++i) {
        double s = 0.0;
        for (int j = 0; j < m.cols; ++j)
            s += m(i, j) * y[j];
        x[i] = s;
    }
}

namespace {

inline cplx& H(std::vector<cplx>& h, int n, int i, int j) { return h[static_cast<std::size_t>(i) * n + j]; }
inline cplx Hc(const std::vector<cplx>& h, int n, int i, int j) { return h[static_cast<std::size_t>(i) * n + j]; }

// Householder reduction of a real matrix to upper Hessenberg form.
Mat to_hessenberg(Mat a)
{
    const int n = a.rows;
    for (int k = 0; k < n - 2; ++k) {
        double scale = 0.0;
        for (int i = k + 1; i < n; ++i)
            scale = std::max(scale, std::abs(a(i, k)));
        if (scale == 0.0)
            continue;
        std::vector<double> v(n, 0.0);
        double vv = 0.0;
        for (int i = k + 1; i < n; ++i) {
            v[i] = a(i, k) / scale;
            vv += v[i] * v[i];
        }
        double alpha = std::sqrt(vv);
        if (v[k + 1] > 0)
            alpha = -alpha;
        vv -= v[k + 1] * v[k + 1];
        v[k + 1] -= alpha;
        vv += v[k + 1] * v[k + 1];
        if (vv == 0.0)
            continue;
        for (int j = 0; j < n; ++j) { // A := P A
            double s = 0.0;
            for (int i = k + 1; i < n; ++i)
                s += v[i] * a(i, j);
            s *= 2.0 / vv;
            for (int i = k + 1; i < n; ++i)
                a(i, j) -= s * v[i];
        }
        for (int i = 0; i < n; ++i) { // A := A P
            double s = 0.0;
            for (int j = k + 1; j < n; ++j)
                s += a(i, j) * v[j];
            s *= 2.0 / vv;
            for (int j = k + 1; j < n; ++j)
                a(i, j) -= s * v[j];
        }
    }
    for (int i = 2; i < n; ++i)
        for (int j = 0; j < i - 1; ++j)
            a(i, j) = 0.0;
    return a;
}

// c = conj(x)/r, s = conj(y)/r so that [c s; -conj(s) conj(c)] * [x; y] = [r; 0].
void givens(cplx x, cplx y, cplx& c, cplx& s, double& r)
{
    r = std::sqrt(std::norm(x) + std::norm(y));
    if (r == 0.0) {
        c = 1.0;
        s = 0.0;
        return;
    }
    c = std::conj(x) / r;
    s = std::conj(y) / r;
}

} // namespace

std::vector<cplx> hessenberg_eigenvalues(std::vector<cplx> h, int n)
{
    std::vector<cplx> eig(n);
    const double eps = 1e-15;
    int hi = n - 1;
    int iter_total = 0;
    const int iter_cap = 80 * n + 400;
    while (hi >= 0) {
        if (hi == 0) {
            eig[0] = Hc(h, n, 0, 0);
            break;
        }
        if (std::abs(Hc(h, n, hi, hi - 1)) <= eps * (std::abs(Hc(h, n, hi - 1, hi - 1)) + std::abs(Hc(h, n, hi, hi)))) {
            eig[hi] = Hc(h, n, hi, hi);
            --hi;
            continue;
        }
        int lo = hi;
        while (lo > 0) {
            const double sub = std::abs(Hc(h, n, lo, lo - 1));
            if (sub <= eps * (std::abs(Hc(h, n, lo - 1, lo - 1)) + std::abs(Hc(h, n, lo, lo)))) {
                H(h, n, lo, lo - 1) = 0.0;
                break;
            }
            --lo;
        }
        if (++iter_total > iter_cap)
            throw SolverError(FailureClass::SolverFailure, "hessenberg QR: iteration cap reached");

        // Wilkinson shift from the trailing 2x2 of the active block
        const cplx a = Hc(h, n, hi - 1, hi - 1), b = Hc(h, n, hi - 1, hi);
        const cplx c2 = Hc(h, n, hi, hi - 1), d = Hc(h, n, hi, hi);
        const cplx tr = a + d;
        const cplx disc = std::sqrt(tr * tr - 4.0 * (a * d - b * c2));
        const cplx mu1 = 0.5 * (tr + disc), mu2 = 0.5 * (tr - disc);
        const cplx shift = (std::abs(mu1 - d) < std::abs(mu2 - d)) ? mu1 : mu2;

        for (int i = lo; i <= hi; ++i)
            H(h, n, i, i) -= shift;

        // explicit QR step restricted to the active block: H := R Q + shift I
        std::vector<cplx> cs(hi + 1), sn(hi + 1);
        for (int k = lo; k < hi; ++k) {
            cplx c, s;
            double r;
            givens(Hc(h, n, k, k), Hc(h, n, k + 1, k), c, s, r);
            cs[k] = c;
            sn[k] = s;
            H(h, n, k, k) = r;
            H(h, n, k + 1, k) = 0.0;
            for (int j = k + 1; j <= hi; ++j) {
                const cplx t1 = Hc(h, n, k, j), t2 = Hc(h, n, k + 1, j);
                H(h, n, k, j) = c * t1 + s * t2;
                H(h, n, k + 1, j) = -std::conj(s) * t1 + std::conj(c) * t2;
            }
        }
        for (int k = lo; k < hi; ++k) {
            // right-multiply by Q^H of rotation k: mixes columns k, k+1
            for (int i = lo; i <= std::min(hi, k + 1); ++i) {
                const cplx t1 = Hc(h, n, i, k), t2 = Hc(h, n, i, k + 1);
                H(h, n, i, k) = t1 * std::conj(cs[k]) + t2 * std::conj(sn[k]);
                H(h, n, i, k + 1) = -t1 * sn[k] + t2 * cs[k];
            }
        }
        for (int i = lo; i <= hi; ++i)
            H(h, n, i, i) += shift;
    }
    return eig;
}

std::vector<cplx> hessenberg_eigenvector(const std::vector<cplx>& h, int n, cplx lambda)
{
    std::vector<cplx> m = h;
    const double tiny = 1e-13;
    double scale = 0.0;
    for (int i = 0; i < n; ++i)
        scale = std::max(scale, std::abs(Hc(m, n, i, i)));
    if (scale == 0.0)
        scale = 1.0;
    for (int i = 0; i < n; ++i)
        H(m, n, i, i) -= lambda + cplx(tiny * scale, 0.0);

    std::vector<int> piv(n);
    for (int k = 0; k < n; ++k) {
        int p = k;
        double pm = std::abs(Hc(m, n, k, k));
        for (int i = k + 1; i < n; ++i)
            if (std::abs(Hc(m, n, i, k)) > pm) {
                pm = std::abs(Hc(m, n, i, k));
                p = i;
            }
        piv[k] = p;
        if (pm == 0.0)
            H(m, n, k, k) = cplx(tiny * scale, 0.0);
        else if (p != k)
            for (int j = 0; j < n; ++j)
                std::swap(H(m, n, k, j), H(m, n, p, j));
        for (int i = k + 1; i < n; ++i) {
            H(m, n, i, k) /= Hc(m, n, k, k);
            const cplx f = Hc(m, n, i, k);
            if (f != 0.0)
                for (int j = k + 1; j < n; ++j)
                    H(m, n, i, j) -= f * Hc(m, n, k, j);
        }
    }
    std::vector<cplx> v(n, cplx(1.0, 0.0));
    for (int pass = 0; pass < 2; ++pass) {
        for (int k = 0; k < n; ++k) {
            if (piv[k] != k)
                std::swap(v[k], v[piv[k]]);
            for (int i = k + 1; i < n; ++i)
                v[i] -= Hc(m, n, i, k) * v[k];
        }
        for (int k = n - 1; k >= 0; --k) {
            for (int j = k + 1; j < n; ++j)
                v[k] -= Hc(m, n, k, j) * v[j];
            v[k] /= Hc(m, n, k, k);
        }
        double nrm = 0.0;
        for (auto& z : v)
            nrm += std::norm(z);
        nrm = std::sqrt(nrm);
        for (auto& z : v)
            z /= nrm;
    }
    return v;
}

std::vector<cplx> dense_eigenvalues(const Mat& m)
{
    Mat hss = to_hessenberg(m);
    const int n = m.rows;
    std::vector<cplx> h(static_cast<std::size_t>(n) * n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            h[static_cast<std::size_t>(i) * n + j] = hss(i, j);
    return hessenberg_eigenvalues(std::move(h), n);
}

} // namespace fsi
