#pragma once

#include <functional>
#include <vector>

#include "fsi/periodic.hpp"

namespace fsi {

/// T-periodic triple (u_hat, p_hat, eta) on the fixed rectangle; the
/// trajectory container of the linear solver is reused verbatim.
using TransformedSolution = PeriodicTrajectory;

/// The four nonlinear functionals evaluated along a trajectory, in the
/// slots the linear theory consumes: (f, w, Theta, h).
struct NonlinearEvaluation {
    std::vector<VectorField> G;
    std::vector<VectorField> w;
    std::vector<std::vector<double>> Theta;
    std::vector<BeamField> Psi;
};

struct BallConstraints {
    double radius = 1.0;  // R*
    double mu = 2.0;      // bound on ||(1+eta)^{-1}||_inf
};

struct PicardDiagnostics {
    std::vector<double> residuals;
    std::vector<double> rates;
    std::vector<double> radius_margins; // R* - ||X_k|| per iterate
    std::vector<double> mu_margins;     // min(1+eta_k) - 1/mu* per iterate
    int iterations = 0;
    bool converged = false;
    double radius_margin = 0.0; // final R* - ||X||
    double mu_margin = 0.0;     // final min(1+eta) - 1/mu*
};

struct NonlinearSolveOptions {
    BallConstraints ball;
    double picard_tol = 1e-8;
    int max_iterations = 40;
    double cl_estimate = 0.0;    // 0 disables the smallness precondition
    bool override_smallness = false;
};

/// Fixed-domain nonlinear layer: the change of variables, the transformed
/// terms, the fixed-point map and the Banach iteration.
class NonlinearSolver {
public:
    explicit NonlinearSolver(std::shared_ptr<MonodromyContext> ctx);

    const MonodromyContext& ctx() const { return *ctx_; }

    /// Sample a physical-domain function on the fixed grid through the map
    /// (x, y) -> (x, y/(1+eta)); cell-centered output.
    ScalarField to_transformed(const std::function<double(double, double)>& physical, const BeamField& eta) const;

    /// Evaluate a transformed cell field at a physical point (bilinear).
    double physical_value(const ScalarField& transformed, const BeamField& eta, double x, double y) const;

    /// min over Gamma_s of 1 + eta; throws DomainDegeneracy when <= 0.
    double min_one_plus_eta(const BeamField& eta) const;

    NonlinearEvaluation evaluate_terms(const TransformedSolution& X) const;

    /// One application of the map F: nonlinear terms from X, then the
    /// periodic linear solve with (omega1, omega2) plus the quadruple.
    TransformedSolution fixed_point_map(const TransformedSolution& X, const PeriodicForcing& boundary,
                                        const BallConstraints& ball) const;

    TransformedSolution zero_solution() const;
    double solution_norm(const TransformedSolution& X) const;
    double diff_norm(const TransformedSolution& a, const TransformedSolution& b) const;

    struct Result {
        TransformedSolution solution;
        PicardDiagnostics diagnostics;
    };
    Result solve_periodic_fsi(const PeriodicForcing& boundary, const NonlinearSolveOptions& opt) const;

    /// Residuals of the transformed system evaluated on a trajectory
    /// (momentum at interior faces, mass defect, beam equation, interface).
    struct SystemResidual {
        double momentum = 0.0;
        double mass = 0.0;
        double beam = 0.0;
        double interface = 0.0;
        double outflow = 0.0;
    };
    SystemResidual system_residual(const TransformedSolution& X, const PeriodicForcing& boundary) const;

private:
    void check_ball(const TransformedSolution& X, const BallConstraints& ball) const;

    std::shared_ptr<MonodromyContext> ctx_;
};

} // namespace fsi
