#pragma once

#include <vector>

#include "fsi/band.hpp"
#include "fsi/beam.hpp"
#include "fsi/grid.hpp"

namespace fsi {

/// One banded assembler for every velocity-pressure(-beam) system in the
/// solver. Unknown layout, column-blocked in x so the matrix stays banded:
///   head: u(0,k), k=0..nz-1           (pinned to inflow data)
///   block i = 0..nx-1:
///     w(i,k), k=0..nz                 (k=0 pinned; k=nz pinned to data or
///                                      constrained to eta_t when coupled)
///     p(i,k), k=0..nz-1
///     u(i+1,k), k=0..nz-1             (pinned to data in Dirichlet mode)
///     [eta_i, etat_i]                 (coupled mode only)
///
/// Fluid rows: am*v - av*Lap(v) + grad p = f at free faces, div v = 0 per
/// cell. Closures: odd tangential ghosts at walls; at Gamma_o a mirror
/// ghost for u, an odd ghost for w and an odd pressure ghost (p = 0 trace).
/// Coupled rows: kin_eta*eta + kin_etat*etat = r_kin and
/// beam_mass*etat - beam_scale*(A eta + gamma Ds etat)
///   - p(i,nz-1) + trace_nu*(w(i,nz) - w(i,nz-1))/dz = r_beam,
/// the load trace being the energy dual of the interface constraint.
struct SaddleSpec {
    enum class Mode { Mixed, Dirichlet, Coupled };

    Mode mode = Mode::Mixed;
    double am = 0.0; // velocity mass coefficient
    double av = 0.0; // viscosity coefficient in the matrix
    double nu = 0.0; // physical viscosity (row scaling only)

    // coupled mode
    double kin_eta = 0.0, kin_etat = 0.0;
    double beam_mass = 0.0, beam_scale = 0.0, trace_nu = 0.0;
    const BeamOperator* beam = nullptr;
};

class SaddleSystem {
public:
    SaddleSystem(const Grid2D& g, const SaddleSpec& spec);

    int size() const { return n_; }
    const Grid2D& grid() const { return *grid_; }
    const SaddleSpec& spec() const { return spec_; }
    double pin_scale() const { return pin_; }

    // unknown indices
    int u_ix(int i, int k) const; // i = 0..nx
    int w_ix(int i, int k) const; // k = 0..nz
    int p_ix(int i, int k) const;
    int eta_ix(int i) const;
    int etat_ix(int i) const;

    /// Right-hand side with all data slots zero.
    std::vector<double> zero_rhs() const;

    // data injection (matches the pinned rows / data coefficients)
    void set_inflow(std::vector<double>& rhs, const std::vector<double>& omega_u) const;
    void set_top(std::vector<double>& rhs, const BeamField& g) const;            // data modes
    void set_right(std::vector<double>& rhs, const std::vector<double>& u_right) const; // Dirichlet mode
    void set_forcing(std::vector<double>& rhs, const VectorField& f) const;
    void set_kinematic_rhs(std::vector<double>& rhs, const BeamField& r) const;
    void set_beam_rhs(std::vector<double>& rhs, const BeamField& r) const;

    /// Solve with a post-solve residual check.
    void solve(std::vector<double>& rhs) const;

    /// Unchecked triangular solves with the factored matrix (used by the
    /// singular-value power iteration).
    void solve_raw(std::vector<double>& b) const;
    void solve_raw_transposed(std::vector<double>& b) const;

    // unpack
    void extract(const std::vector<double>& x, VectorField& vel, ScalarField& pres) const;
    void extract_beam(const std::vector<double>& x, BeamField& eta, BeamField& etat) const;

private:
    void assemble();

    const Grid2D* grid_;
    SaddleSpec spec_;
    int n_ = 0;
    int block_ = 0;
    double pin_ = 1.0;
    BandLU lu_;
};

} // namespace fsi
