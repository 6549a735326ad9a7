#pragma once

#include <memory>

#include "fsi/grid.hpp"
#include "fsi/poisson.hpp"

namespace fsi {

/// Result of projecting u onto the divergence-free fields with zero normal
/// trace on Gamma_d: u = proj + grad(pu) + grad(qu).
struct LerayDecomposition {
    VectorField proj;   // Pi u
    ScalarField pu;     // vanishes on the whole boundary
    ScalarField qu;     // vanishes on Gamma_o
};

/// Discrete Leray projector. Two elliptic solves: a Dirichlet Poisson for
/// pu and a harmonic mixed problem for qu whose Gamma_d Neumann data is
/// the residual flux (u - grad pu).n. The ghost-consistent fluxes used
/// here make div(Pi u) and (Pi u).n on Gamma_d vanish to solver roundoff.
class LerayProjector {
public:
    explicit LerayProjector(const Grid2D& g);

    ScalarField solve_poisson_dirichlet(const ScalarField& rhs) const;
    ScalarField solve_harmonic_mixed(const VectorField& u, const ScalarField& pu) const;

    LerayDecomposition project(const VectorField& u) const;
    VectorField project_velocity(const VectorField& u) const;

    /// N_p(f) = pu + qu: the potential with (I - Pi) f = grad N_p(f).
    ScalarField np_operator(const VectorField& f) const;

    /// Gradient with the decomposition's own boundary closures: odd ghosts
    /// everywhere for the Dirichlet potential; Neumann data on Gamma_d plus
    /// odd Gamma_o ghosts for the mixed potential.
    VectorField grad_dirichlet_potential(const ScalarField& p) const;
    VectorField grad_mixed_potential(const ScalarField& q, const MixedBC& bc) const;

    const Grid2D& grid() const { return *grid_; }
    const PoissonDirichlet& dirichlet_context() const { return pd_; }
    const PoissonMixed& mixed_context() const { return pm_; }

private:
    MixedBC residual_flux(const VectorField& u, const VectorField& grad_pu) const;

    const Grid2D* grid_;
    PoissonDirichlet pd_;
    PoissonMixed pm_;
};

} // namespace fsi
