#include "fsi/band.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numeric>

#include "fsi/errors.hpp"

namespace fsi {

void BandLU::assemble(const TripletMatrix& t)
{
    n_ = t.n;
    kl_ = 0;
    ku_ = 0;
    for (std::size_t k = 0; k < t.row.size(); ++k) {
        kl_ = std::max(kl_, t.row[k] - t.col[k]);
        ku_ = std::max(ku_, t.col[k] - t.row[k]);
    }
    ldab_ = 2 * kl_ + ku_ + 1;
    ab_.assign(static_cast<std::size_t>(ldab_) * n_, 0.0);
    for (std::size_t k = 0; k < t.row.size(); ++k)
        at(t.row[k], t.col[k]) += t.val[k];
    factored_ = false;

    // CSR copy (accumulated) for residuals and raw applies
    std::vector<std::vector<std::pair<int, double>>> rows(n_);
    for (std::size_t k = 0; k < t.row.size(); ++k)
        rows[t.row[k]].push_back({t.col[k], t.val[k]});
    csr_ptr_.assign(n_ + 1, 0);
    csr_col_.clear();
    csr_val_.clear();
    for (int i = 0; i < n_; ++i) {
        auto& r = rows[i];
        std::sort(r.begin(), r.end());
        int last = -1;
        for (auto& [c, v] : r) {
            if (c == last) {
                csr_val_.back() += v;
            } else {
                csr_col_.push_back(c);
                csr_val_.push_back(v);
                last = c;
            }
        }
        csr_ptr_[i + 1] = static_cast<int>(csr_col_.size());
    }
}

void BandLU::factor()
{
    ipiv_.resize(n_);
    // row equilibration: partial pivoting alone misbehaves on the strongly
    // row-scaled coupled systems (beam rows vs continuity rows)
    rscale_.assign(n_, 1.0);
    for (int i = 0; i < n_; ++i) {
        double rm = 0.0;
        for (int j = std::max(0, i - kl_); j <= std::min(n_ - 1, i + ku_); ++j)
            rm = std::max(rm, std::abs(at(i, j)));
        if (rm > 0.0)
            rscale_[i] = 1.0 / rm;
    }
    for (int i = 0; i < n_; ++i)
        for (int j = std::max(0, i - kl_); j <= std::min(n_ - 1, i + ku_); ++j)
            at(i, j) *= rscale_[i];
    const int kv = kl_ + ku_; // number of stored superdiagonals after fill
    for (int j = 0; j < n_; ++j) {
        const int km = std::min(kl_, n_ - 1 - j);
        // partial pivot over rows j .. j+km
        int p = 0;
        double pmax = std::abs(at(j, j));
        for (int i = 1; i <= km; ++i) {
            const double a = std::abs(at(j + i, j));
            if (a > pmax) {
                pmax = a;
                p = i;
            }
        }
        ipiv_[j] = j + p;
        if (pmax == 0.0)
            throw SolverError(FailureClass::SolverFailure, "banded LU: singular pivot at column " + std::to_string(j));
        const int ju = std::min(n_ - 1, j + kv);
        if (p != 0)
            for (int c = j; c <= ju; ++c)
                std::swap(at(j, c), at(j + p, c));
        const double piv = at(j, j);
        for (int i = 1; i <= km; ++i)
            at(j + i, j) /= piv;
        for (int c = j + 1; c <= ju; ++c) {
            const double f = at(j, c);
            if (f != 0.0)
                for (int i = 1; i <= km; ++i)
                    at(j + i, c) -= at(j + i, j) * f;
        }
    }
    factored_ = true;
}

void BandLU::solve(std::vector<double>& b) const
{
    for (int i = 0; i < n_; ++i)
        b[i] *= rscale_[i];
    // forward: P L
    for (int j = 0; j < n_; ++j) {
        const int km = std::min(kl_, n_ - 1 - j);
        if (ipiv_[j] != j)
            std::swap(b[j], b[ipiv_[j]]);
        const double bj = b[j];
        for (int i = 1; i <= km; ++i)
            b[j + i] -= at(j + i, j) * bj;
    }
    // back: U
    const int kv = kl_ + ku_;
    for (int j = n_ - 1; j >= 0; --j) {
        b[j] /= at(j, j);
        const double bj = b[j];
        const int lo = std::max(0, j - kv);
        for (int i = lo; i < j; ++i)
            b[i] -= at(i, j) * bj;
    }
}

void BandLU::solve_transposed(std::vector<double>& b) const
{
    const int kv = kl_ + ku_;
    // U^T y = b (forward)
    for (int j = 0; j < n_; ++j) {
        const int lo = std::max(0, j - kv);
        double s = b[j];
        for (int i = lo; i < j; ++i)
            s -= at(i, j) * b[i];
        b[j] = s / at(j, j);
    }
    // L^T with interchanges (backward)
    for (int j = n_ - 1; j >= 0; --j) {
        const int km = std::min(kl_, n_ - 1 - j);
        double s = b[j];
        for (int i = 1; i <= km; ++i)
            s -= at(j + i, j) * b[j + i];
        b[j] = s;
        if (ipiv_[j] != j)
            std::swap(b[j], b[ipiv_[j]]);
    }
    // factored matrix is S A, so A^T x = b was solved as (SA)^T y = b, x = S y
    for (int i = 0; i < n_; ++i)
        b[i] *= rscale_[i];
}

void BandLU::apply(const std::vector<double>& x, std::vector<double>& y) const
{
    y.assign(n_, 0.0);
    for (int i = 0; i < n_; ++i) {
        double s = 0.0;
        for (int k = csr_ptr_[i]; k < csr_ptr_[i + 1]; ++k)
            s += csr_val_[k] * x[csr_col_[k]];
        y[i] = s;
    }
}

void BandLU::apply_transposed(const std::vector<double>& x, std::vector<double>& y) const
{
    y.assign(n_, 0.0);
    for (int i = 0; i < n_; ++i)
        for (int k = csr_ptr_[i]; k < csr_ptr_[i + 1]; ++k)
            y[csr_col_[k]] += csr_val_[k] * x[i];
}

double BandLU::residual(const std::vector<double>& x, const std::vector<double>& b) const
{
    std::vector<double> r;
    apply(x, r);
    double s = 0.0;
    for (int i = 0; i < n_; ++i)
        s += (r[i] - b[i]) * (r[i] - b[i]);
    return std::sqrt(s);
}

} // namespace fsi
