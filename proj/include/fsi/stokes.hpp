#pragma once

#include <map>
#include <memory>
#include <vector>

#include "fsi/dense.hpp"
#include "fsi/grid.hpp"
#include "fsi/leray.hpp"
#include "fsi/saddle.hpp"

namespace fsi {

struct StokesSolution {
    VectorField vel;
    ScalarField pres;
    double div_residual = 0.0;
};

/// Report of the direct-vs-projected cross check.
struct ProjectionEquivalenceReport {
    double velocity_rel = 0.0;
    double pressure_rel = 0.0;
    int cg_iterations = 0;
};

/// Steady Stokes solves with the mixed boundary conditions, the reflection
/// liftings, and the pressure operators N_s, N_v (N_p lives on the Leray
/// projector). Shares one Leray projector per grid.
class StokesSolver {
public:
    StokesSolver(const Grid2D& g, double nu, std::shared_ptr<LerayProjector> leray = nullptr);

    double nu() const { return nu_; }
    const Grid2D& grid() const { return *grid_; }
    const LerayProjector& leray() const { return *leray_; }
    std::shared_ptr<LerayProjector> leray_ptr() const { return leray_; }

    /// lambda u - nu Lap u + grad p = f, div u = 0, u = g e2 on Gamma_s,
    /// u = omega e1 on Gamma_i, u = 0 on Gamma_b, u2 = 0 and p = 0 on
    /// Gamma_o. Null pointers mean zero data.
    StokesSolution solve_mixed(double lambda, const VectorField* f, const BeamField* g,
                               const std::vector<double>* omega) const;

    /// Beam-trace lifting by the doubled-domain construction: odd-reflect
    /// g to (0,2L), solve the Dirichlet problem there, average with the
    /// mirrored solution and restrict. Coincides with the mixed solve.
    /// midline_defect, when asked for, reports max |u2| of the raw doubled
    /// solution at x = L (zero up to solver roundoff by symmetry).
    StokesSolution lift_gamma_s(const BeamField& g, double* midline_defect = nullptr) const;

    /// Inflow lifting with the flux compensator on Gamma_s.
    StokesSolution lift_gamma_i(const std::vector<double>& omega) const;

    /// Compensator profile -phi/(int phi) * (int omega.n), phi = x^4(L-x)^4.
    BeamField corrector_profile(const std::vector<double>& omega) const;
    double inflow_flux(const std::vector<double>& omega) const; // int_{Gamma_i} omega.n

    /// Harmonic extension of Gamma_o data with zero flux on Gamma_d.
    ScalarField lift_gamma_o(const std::vector<double>& theta) const;

    /// N_s(g): harmonic, dp/dn = g on Gamma_s, 0 on Gamma_i u Gamma_b,
    /// p = 0 on Gamma_o.
    ScalarField ns_operator(const BeamField& g) const;
    BeamField ns_trace(const BeamField& g) const; // added-mass kernel action

    /// Full velocity from a state pair: pv + grad N_s(g), with the Gamma_s
    /// faces carrying g exactly (the Neumann flux of the N_s problem).
    VectorField velocity_from_state(const VectorField& pv, const BeamField& g) const;

    /// N_v(pv): harmonic with Neumann data nu*Lap(pv).n on Gamma_d.
    ScalarField nv_operator(const VectorField& pv) const;

    /// Dense added-mass matrix M[i][j] = (ns_trace(e_j))_i.
    Mat added_mass_matrix() const;

    /// Stokes operator action A_s y = nu Pi Lap y for y in the discrete
    /// domain (no-slip data closures).
    VectorField apply_As(const VectorField& y) const;

    /// Projected-formulation solve (omega = 0) and the cross check.
    StokesSolution solve_projected(double lambda, const VectorField* f, const BeamField* g,
                                   int* cg_iters = nullptr) const;
    ProjectionEquivalenceReport projection_equivalence(double lambda, const VectorField* f,
                                                       const BeamField* g) const;

    const SaddleSystem& steady_context(double lambda) const;

private:
    StokesSolution solve_dirichlet(const Grid2D& gd, const std::vector<double>& top,
                                   const std::vector<double>& left) const;

    const Grid2D* grid_;
    double nu_;
    std::shared_ptr<LerayProjector> leray_;
    mutable std::map<double, std::unique_ptr<SaddleSystem>> steady_;
    mutable std::unique_ptr<Grid2D> doubled_grid_;
    mutable std::unique_ptr<SaddleSystem> doubled_sys_;
    mutable std::unique_ptr<SaddleSystem> dirichlet_sys_;
};

} // namespace fsi
