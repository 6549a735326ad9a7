#pragma once

#include "fsi/grid.hpp"

namespace fsi {

/// Second-order MAC divergence, cell-centered. Rejects non-face input.
ScalarField divergence(const VectorField& v);

/// Centered pressure gradient onto faces; boundary faces use one-sided
/// differences so linear fields are reproduced exactly everywhere.
VectorField gradient(const ScalarField& p);

/// 5-point Laplacian of a cell-centered field with homogeneous Dirichlet
/// closure (odd ghosts) on all four sides.
ScalarField laplacian(const ScalarField& p);

/// Discrete L2 pairings. Face and edge sites on the boundary carry half
/// weights; this is what makes the Hodge decomposition exactly orthogonal.
double inner(const ScalarField& a, const ScalarField& b);
double inner(const VectorField& a, const VectorField& b);
double inner(const BeamField& a, const BeamField& b);
double norm(const ScalarField& a);
double norm(const VectorField& a);
double norm(const BeamField& a);

/// L2 plus interior first-difference seminorm.
double inner_h1(const ScalarField& a, const ScalarField& b);

/// Exact Gram energy of the discrete vector Laplacian with the mixed
/// closures (no-slip ghosts on Gamma_d, mirror/odd ghosts on Gamma_o):
/// equals <-Delta_h v, v> up to the boundary-data flux terms. Stored
/// boundary face values (inflow u, top/bottom w) enter as data.
double velocity_grad_energy(const VectorField& v);

// Gamma_s trace helpers shared by the coupling operators.
/// Top-cell value; the energy dual of the beam load injection.
BeamField gamma_s_trace_cell(const ScalarField& p);
/// Second-order one-sided extrapolation to z = 1 (used for forcing data).
BeamField gamma_s_trace_extrap(const ScalarField& p);
/// One-sided d(u2)/dz at z = 1 from the top z-faces.
BeamField gamma_s_wz_trace(const VectorField& v);

/// Component Laplacian of a MAC field with the solver's boundary closures:
/// odd tangential ghosts (no-slip walls), stored boundary faces as data,
/// mirror ghost for u1 and odd ghost for u2 beyond Gamma_o. Outputs on the
/// Gamma_d normal faces are zeroed (they carry data, not equations).
VectorField apply_velocity_laplacian(const VectorField& y);

double max_abs(const ScalarField& f);
double max_abs(const VectorField& f);
double max_abs(const BeamField& f);

} // namespace fsi
