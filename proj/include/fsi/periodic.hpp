#pragma once

#include <functional>
#include <memory>
#include <vector>

#include "fsi/coupled.hpp"
#include "fsi/dense.hpp"

namespace fsi {

/// Truncated Fourier series in time, evaluable anywhere; T-periodic by
/// construction.
struct FourierSeries {
    double a0 = 0.0;
    std::vector<double> ac, as; // cos/sin coefficients for m = 1..M

    double eval(double t, double T) const;
    double deriv(double t, double T) const;
    bool zero() const;
};

/// Period plus the time-parametrized boundary data, and optionally the
/// volumetric quadruple (f, w, Theta, h) sampled at the time nodes.
struct PeriodicForcing {
    double period_T = 1.0;

    std::vector<double> profile1; // u1 profile on Gamma_i (per z cell)
    FourierSeries s1;
    std::vector<double> profile2; // pressure profile on Gamma_o (per z cell)
    FourierSeries s2;

    bool has_quadruple = false;
    std::vector<VectorField> f_vol;              // volumetric forcing per node
    std::vector<VectorField> w_div;              // divergence datum per node
    std::vector<std::vector<double>> theta_out;  // extra Gamma_o pressure per node
    std::vector<BeamField> h_beam;               // beam load per node

    bool boundary_zero() const { return s1.zero() && s2.zero(); }
};

/// Forcing translated to the abstract evolution right-hand side, plus the
/// pieces needed to reconstruct (u, p) from the projected trajectory.
struct AssembledForcing {
    std::vector<EvolutionRHS> rhs;      // per node 0..Nt
    std::vector<ScalarField> np_f;      // N_p(F) per node
    std::vector<VectorField> lift_vel;  // w + L_{Gamma_i,1}(omega1) per node
    std::vector<ScalarField> lift_pres; // L_{Gamma_o}(omega2 + Theta) + L_{Gamma_i,2}(omega1)
};

struct PeriodicTrajectory {
    std::vector<CoupledState> states;   // Nt + 1
    std::vector<VectorField> velocity;  // reconstructed full velocity
    std::vector<ScalarField> pressure;  // reconstructed pressure
    std::vector<BeamField> eta, eta_t;
    double periodicity_defect = 0.0;
    int krylov_iterations = 0;
};

struct SpectralCriterionReport {
    double rho_max = 0.0;
    double distance_to_one = 0.0;
    bool admissible = false;
    bool conclusive = false;
};

/// Poincare-map machinery over the coupled evolution: the monodromy map
/// S(T) realized by Nt theta-steps, the periodic initial condition
/// (I - S(T))^{-1} Duhamel, and full trajectory reconstruction.
class MonodromyContext {
public:
    MonodromyContext(std::shared_ptr<CoupledOperator> op, double T, int nt, double theta = 0.5);

    double period() const { return T_; }
    int steps() const { return nt_; }
    double dt() const { return T_ / nt_; }
    double theta() const { return theta_; }
    const CoupledOperator& op() const { return *op_; }

    AssembledForcing assemble_forcing(const PeriodicForcing& forcing) const;

    /// March one period from z; empty forcing pointer means homogeneous.
    CoupledState propagate_period(const CoupledState& z, const AssembledForcing* forcing,
                                  std::vector<CoupledState>* store = nullptr) const;

    /// Unique periodic initial condition via matrix-free GMRES on
    /// (I - S(T)) z = S-Duhamel(0 -> T). Throws on stagnation with the
    /// dominant monodromy estimate in the message.
    CoupledState solve_periodic_initial_condition(const AssembledForcing& forcing, double rel_tol = 1e-10,
                                                  int max_basis = 200, const CoupledState* initial_guess = nullptr,
                                                  int* iterations = nullptr) const;

    SpectralCriterionReport check_spectral_criterion(int arnoldi_m = 16, double margin = 1e-6,
                                                     unsigned seed = 97) const;

    PeriodicTrajectory solve_periodic_linear_fsi(const PeriodicForcing& forcing, double defect_tol = 1e-7) const;

    /// Dense monodromy for cross validation on small grids.
    Mat dense_monodromy() const;

private:
    std::shared_ptr<CoupledOperator> op_;
    double T_;
    int nt_;
    double theta_;
};

/// Discrete stand-ins for the trajectory and data norms (sup over nodes of
/// spatial norms plus difference-quotient seminorms).
double trajectory_norm(const MonodromyContext& ctx, const PeriodicTrajectory& traj);
double forcing_norm(const MonodromyContext& ctx, const PeriodicForcing& forcing);

/// max over probes of ||solution||_X / ||data||_W; feeds the nonlinear
/// smallness radius.
double empirical_linear_constant(const MonodromyContext& ctx, const std::vector<PeriodicForcing>& probes);

/// Theta-scheme periodic machinery over an explicit dense generator; the
/// surrogate used to pin the integrator against closed forms.
class DenseEvolution {
public:
    DenseEvolution(Mat a, double theta = 0.5);

    std::vector<double> step(const std::vector<double>& y, double dt, const std::vector<double>& f0,
                             const std::vector<double>& f1) const;
    std::vector<double> propagate(std::vector<double> y, double T, int nt,
                                  const std::function<std::vector<double>(double)>& f) const;
    Mat monodromy(double T, int nt) const;
    double monodromy_radius(double T, int nt) const;
    std::vector<double> periodic_solve(double T, int nt, const std::function<std::vector<double>(double)>& f) const;

private:
    Mat a_;
    double theta_;
    mutable double dt_cached_ = -1.0;
    mutable DenseLU lhs_;
    mutable Mat rhs_;
    void prepare(double dt) const;
    int n_;
};

} // namespace fsi
