#pragma once

#include <cstddef>
#include <vector>

namespace fsi {

/// Sparse triplet accumulator used while assembling a system; converted to
/// banded storage once the stencil extents are known.
struct TripletMatrix {
    int n = 0;
    std::vector<int> row, col;
    std::vector<double> val;

    explicit TripletMatrix(int size = 0) : n(size) {}

    void add(int i, int j, double v)
    {
        row.push_back(i);
        col.push_back(j);
        val.push_back(v);
    }
};

/// Banded LU factorization with partial pivoting (LAPACK dgbtrf layout).
/// Entry (i,j) with i-j in [-ku, kl] lives at band(i - j + kl + ku, j);
/// the extra kl superdiagonals hold pivoting fill.
class BandLU {
public:
    BandLU() = default;

    /// Build banded storage from triplets (duplicate entries accumulate).
    void assemble(const TripletMatrix& t);

    /// Factor in place. Throws SolverError on exact singularity.
    void factor();

    /// Solve A x = b (overwrites b with x). Requires factor().
    void solve(std::vector<double>& b) const;

    /// Solve A^T x = b (overwrites b with x). Requires factor().
    void solve_transposed(std::vector<double>& b) const;

    /// Residual ||A x - b||_2 computed from a retained copy of the
    /// unfactored matrix (kept for post-solve verification).
    double residual(const std::vector<double>& x, const std::vector<double>& b) const;

    void apply(const std::vector<double>& x, std::vector<double>& y) const;
    void apply_transposed(const std::vector<double>& x, std::vector<double>& y) const;

    int size() const { return n_; }
    int lower_bandwidth() const { return kl_; }
    int upper_bandwidth() const { return ku_; }

private:
    double& at(int i, int j) { return ab_[static_cast<std::size_t>(j) * ldab_ + (i - j + kl_ + ku_)]; }
    double at(int i, int j) const { return ab_[static_cast<std::size_t>(j) * ldab_ + (i - j + kl_ + ku_)]; }

    int n_ = 0;
    int kl_ = 0;
    int ku_ = 0;
    int ldab_ = 0;
    bool factored_ = false;
    std::vector<double> ab_;
    std::vector<int> ipiv_;
    std::vector<double> rscale_;

    // unfactored copy in CSR for residual checks / transpose-free applies
    std::vector<int> csr_ptr_, csr_col_;
    std::vector<double> csr_val_;
};

} // namespace fsi
