#pragma once

#include "fsi/band.hpp"
#include "fsi/grid.hpp"

namespace fsi {

/// Boundary data for the mixed Poisson problem: outward Neumann flux on
/// Gamma_d (left, bottom, top) and Dirichlet values on Gamma_o (right).
struct MixedBC {
    std::vector<double> gn_left;    // size nz, dq/dn at x=0 (outward -x)
    std::vector<double> gn_bottom;  // size nx
    std::vector<double> gn_top;     // size nx
    std::vector<double> dirichlet_right; // size nz

    explicit MixedBC(const Grid2D& g)
        : gn_left(g.nz, 0.0), gn_bottom(g.nx, 0.0), gn_top(g.nx, 0.0), dirichlet_right(g.nz, 0.0)
    {
    }
};

/// 5-point solver with homogeneous Dirichlet closure on all four sides,
/// factored once per grid. Direct banded solve with a CG fallback guarded
/// by a residual check.
class PoissonDirichlet {
public:
    explicit PoissonDirichlet(const Grid2D& g);

    /// Solve  Laplacian p = rhs,  p = 0 on the whole boundary.
    ScalarField solve(const ScalarField& rhs) const;

private:
    const Grid2D* grid_;
    BandLU lu_;
};

/// 5-point solver with Neumann data on Gamma_d and Dirichlet data on
/// Gamma_o; this single context backs q_u, N_s, N_v and the Gamma_o lift.
class PoissonMixed {
public:
    explicit PoissonMixed(const Grid2D& g);

    /// Solve  Laplacian p = rhs  with the given boundary data. Passing a
    /// null rhs solves the harmonic problem.
    ScalarField solve(const ScalarField* rhs, const MixedBC& bc) const;

private:
    const Grid2D* grid_;
    BandLU lu_;
};

/// Shared residual-checked banded solve (CG fallback on SPD systems).
void checked_spd_solve(const BandLU& lu, std::vector<double>& b, const char* what);

} // namespace fsi
