#pragma once

#include <complex>
#include <map>
#include <memory>
#include <vector>

#include "fsi/beam.hpp"
#include "fsi/dense.hpp"
#include "fsi/krylov.hpp"
#include "fsi/saddle.hpp"
#include "fsi/stokes.hpp"

namespace fsi {

/// State (Pi v, eta, eta_t): projected fluid velocity plus beam position
/// and velocity.
struct CoupledState {
    VectorField pv;
    BeamField eta;
    BeamField eta_t;

    CoupledState() = default;
    explicit CoupledState(const Grid2D& g) : pv(g), eta(g), eta_t(g) {}
};

/// Right-hand side of the abstract evolution: (Pi F, 0, (I+N_s)^-1(N_p F + H)).
struct EvolutionRHS {
    VectorField pf;
    BeamField beam_load;

    EvolutionRHS() = default;
    explicit EvolutionRHS(const Grid2D& g) : pf(g), beam_load(g) {}
};

struct EigenPair {
    cplx lambda;
    double ritz_residual = 0.0;   // ||A^{-1}x - theta x||_H for the Ritz pair
    double energy_residual = 0.0; // defect of the eigenvalue energy identity
};

struct SpectrumReport {
    std::vector<EigenPair> pairs; // rightmost first
    double sigma_min = 0.0;       // smallest singular value of the lambda=0 system
};

/// The coupled evolution operator on H = V0 x H^2_0 x L^2 together with its
/// discrete semigroup (monolithic theta-stepper) and resolvent.
class CoupledOperator {
public:
    CoupledOperator(const Grid2D& g, const BeamParams& params);

    const Grid2D& grid() const { return *grid_; }
    const BeamOperator& beam() const { return *beam_; }
    const StokesSolver& stokes() const { return *stokes_; }
    const LerayProjector& leray() const { return stokes_->leray(); }
    const Mat& added_mass() const { return ma_; }

    /// x with (I + M_a) x = b, M_a the added-mass kernel trace(N_s(.)).
    BeamField added_mass_solve(const BeamField& b) const;
    BeamField apply_added_mass_plus_identity(const BeamField& b) const;

    /// Energy inner product on states; the eta_t slot carries the
    /// (I + M_a) weight so ||s||_H^2 is the kinetic energy of the full
    /// velocity plus the beam energies, the functional the stepper
    /// dissipates exactly.
    double state_inner(const CoupledState& a, const CoupledState& b) const;
    double state_norm(const CoupledState& a) const;

    CoupledState apply(const CoupledState& s) const;

    /// One theta-scheme step of s' = A s + f, solved monolithically in
    /// primitive variables; rhs given at both time levels.
    CoupledState step_semigroup(const CoupledState& s, double dt, const EvolutionRHS& rhs_n,
                                const EvolutionRHS& rhs_np1, double theta = 0.5) const;

    /// Marching context: the primitive velocity is carried between steps so
    /// one period costs a single banded backsolve per step.
    struct March {
        VectorField v;
        BeamField eta, eta_t;
    };
    March start_march(const CoupledState& s) const;
    void advance(March& m, double dt, double theta, const EvolutionRHS& rhs_n, const EvolutionRHS& rhs_np1) const;
    CoupledState finish_march(const March& m) const;

    /// (lambda I - A)^{-1} f via the primitive coupled steady solve.
    CoupledState resolvent_solve(double lambda, const CoupledState& f) const;

    /// k rightmost eigenvalues via Arnoldi on the resolvent at 0, each pair
    /// carrying an honest residual and the energy-identity defect.
    SpectrumReport rightmost_eigenvalues(int k, int arnoldi_m = 0, unsigned seed = 1234) const;

    /// Smallest singular value of the assembled lambda = 0 coupled matrix
    /// (certifies 0 is not an eigenvalue).
    double smallest_singular_value(int iterations = 50, unsigned seed = 4321) const;

    // packing used by the Krylov layers
    int state_size() const;
    void pack(const CoupledState& s, VecD& x) const;
    void unpack(const VecD& x, CoupledState& s) const;
    double packed_inner(const VecD& a, const VecD& b) const;

    CoupledState random_state(unsigned seed) const;

    const SaddleSystem& step_context(double dt, double theta) const;
    const SaddleSystem& resolvent_context(double lambda) const;

private:
    const Grid2D* grid_;
    std::shared_ptr<BeamOperator> beam_;
    std::shared_ptr<StokesSolver> stokes_;
    Mat ma_;
    DenseLU id_plus_ma_;
    mutable std::map<std::pair<double, double>, std::unique_ptr<SaddleSystem>> steps_;
    mutable std::map<double, std::unique_ptr<SaddleSystem>> resolvents_;
};

} // namespace fsi
