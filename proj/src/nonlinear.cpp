#include "fsi/nonlinear.hpp"

#include <algorithm>
#include <cmath>

#include "fsi/errors.hpp"
#include "fsi/operators.hpp"

namespace fsi {

namespace {

// clamped-end ghost values from the cubic through the wall conditions
inline double ghost_left1(const BeamField& e) { return 2.0 * e[0] - e[1] / 9.0; }
inline double ghost_right1(const BeamField& e)
{
    const int n = e.size();
    return 2.0 * e[n - 1] - e[n - 2] / 9.0;
}

// eta and its derivatives sampled at cell centers and dual nodes
struct BeamGeom {
    std::vector<double> eta_c, etax_c, etaxx_c, etat_c; // centers, nx
    std::vector<double> eta_d, etax_d, etat_d;          // duals, nx+1
};

BeamGeom beam_geom(const Grid2D& g, const BeamField& eta, const BeamField& etat)
{
    const int n = g.nx;
    const double h = g.dx;
    BeamGeom b;
    b.eta_c.resize(n);
    b.etax_c.resize(n);
    b.etaxx_c.resize(n);
    b.etat_c.resize(n);
    b.eta_d.assign(n + 1, 0.0);
    b.etax_d.assign(n + 1, 0.0);
    b.etat_d.assign(n + 1, 0.0);
    auto at = [&](const BeamField& e, int i) -> double {
        if (i < 0)
            return ghost_left1(e);
        if (i >= n)
            return ghost_right1(e);
        return e[i];
    };
    for (int i = 0; i < n; ++i) {
        b.eta_c[i] = eta[i];
        b.etat_c[i] = etat[i];
        b.etax_c[i] = (at(eta, i + 1) - at(eta, i - 1)) / (2.0 * h);
        b.etaxx_c[i] = (at(eta, i - 1) - 2.0 * eta[i] + at(eta, i + 1)) / (h * h);
    }
    for (int j = 1; j < n; ++j) {
        b.eta_d[j] = 0.5 * (eta[j - 1] + eta[j]);
        b.etax_d[j] = (eta[j] - eta[j - 1]) / h;
        b.etat_d[j] = 0.5 * (etat[j - 1] + etat[j]);
    }
    // clamped walls: value and slope vanish exactly
    return b;
}

// velocity component access with the no-slip tangential ghosts
struct VelView {
    const VectorField& v;
    const Grid2D& g;

    double u(int i, int k) const
    {
        if (k < 0)
            return -v.u_at(i, 0);
        if (k >= g.nz)
            return -v.u_at(i, g.nz - 1);
        return v.u_at(i, k);
    }
    double w(int i, int k) const
    {
        if (i < 0)
            return -v.w_at(0, k);
        if (i >= g.nx)
            return -v.w_at(g.nx - 1, k);
        return v.w_at(i, k);
    }
    double u_avg_at_w(int i, int k) const // u1 interpolated to a z-face
    {
        return 0.25 * (u(i, k - 1) + u(i + 1, k - 1) + u(i, k) + u(i + 1, k));
    }
    double w_avg_at_u(int i, int k) const // u2 interpolated to an x-face
    {
        if (i == 0)
            return 0.5 * (v.w_at(0, k) + v.w_at(0, k + 1));
        if (i == g.nx)
            return 0.5 * (v.w_at(g.nx - 1, k) + v.w_at(g.nx - 1, k + 1));
        return 0.25 * (v.w_at(i - 1, k) + v.w_at(i - 1, k + 1) + v.w_at(i, k) + v.w_at(i, k + 1));
    }
};

} // namespace

NonlinearSolver::NonlinearSolver(std::shared_ptr<MonodromyContext> ctx) : ctx_(std::move(ctx)) {}

double NonlinearSolver::min_one_plus_eta(const BeamField& eta) const
{
    double m = 1e300;
    for (double v : eta.v)
        m = std::min(m, 1.0 + v);
    if (m <= 0.0)
        throw SolverError(FailureClass::DomainDegeneracy, "change of variables: 1 + eta reached " + std::to_string(m));
    return m;
}

ScalarField NonlinearSolver::to_transformed(const std::function<double(double, double)>& physical,
                                            const BeamField& eta) const
{
    const Grid2D& g = ctx_->op().grid();
    min_one_plus_eta(eta);
    ScalarField out(g, Stag::Center);
    for (int i = 0; i < g.nx; ++i)
        for (int k = 0; k < g.nz; ++k)
            out[g.cidx(i, k)] = physical(g.xc(i), g.zc(k) * (1.0 + eta[i]));
    return out;
}

double NonlinearSolver::physical_value(const ScalarField& transformed, const BeamField& eta, double x, double y) const
{
    if (transformed.stag != Stag::Center)
        throw std::invalid_argument("physical_value: cell-centered fields only");
    const Grid2D& g = ctx_->op().grid();
    // eta at x: piecewise linear through the centers, pinned to the clamped
    // zero values at both walls
    const double h = g.dx;
    double eta_x;
    const double s = x / h - 0.5;
    if (x <= 0.0 || x >= g.length_L)
        eta_x = 0.0;
    else if (s < 0.0)
        eta_x = (x / (0.5 * h)) * eta[0];
    else if (s > g.nx - 1.0)
        eta_x = ((g.length_L - x) / (0.5 * h)) * eta[g.nx - 1];
    else {
        const int i0 = static_cast<int>(std::floor(s));
        const double f = s - i0;
        eta_x = (1.0 - f) * eta[i0] + f * eta[i0 + 1];
    }
    const double denom = 1.0 + eta_x;
    if (denom <= 0.0)
        throw SolverError(FailureClass::DomainDegeneracy, "physical_value: 1 + eta <= 0 at x = " + std::to_string(x));
    const double z = y / denom;
    // bilinear interpolation on cell centers with constant extension
    const double sx = std::clamp(x / g.dx - 0.5, 0.0, g.nx - 1.0);
    const double sz = std::clamp(z / g.dz - 0.5, 0.0, g.nz - 1.0);
    const int i0 = std::min(static_cast<int>(sx), g.nx - 2);
    const int k0 = std::min(static_cast<int>(sz), g.nz - 2);
    const double fx = sx - i0, fz = sz - k0;
    auto val = [&](int i, int k) { return transformed[g.cidx(i, k)]; };
    return (1 - fx) * (1 - fz) * val(i0, k0) + fx * (1 - fz) * val(i0 + 1, k0) + (1 - fx) * fz * val(i0, k0 + 1)
           + fx * fz * val(i0 + 1, k0 + 1);
}

NonlinearEvaluation NonlinearSolver::evaluate_terms(const TransformedSolution& X) const
{
    const Grid2D& g = ctx_->op().grid();
    const double nu = ctx_->op().beam().params().nu;
    const int nt = ctx_->steps();
    const double dt = ctx_->dt();
    const double dx = g.dx, dz = g.dz;

    NonlinearEvaluation out;
    out.G.assign(nt + 1, VectorField(g));
    out.w.assign(nt + 1, VectorField(g));
    out.Theta.assign(nt + 1, std::vector<double>(g.nz, 0.0));
    out.Psi.assign(nt + 1, BeamField(g));

    for (int n = 0; n < nt; ++n) {
        const int np = (n + 1) % nt, nm = (n - 1 + nt) % nt;
        const VectorField& v = X.velocity[n];
        const ScalarField& p = X.pressure[n];
        VelView vv{v, g};
        VelView vp{X.velocity[np], g}, vm{X.velocity[nm], g};
        const BeamGeom bg = beam_geom(g, X.eta[n], X.eta_t[n]);
        min_one_plus_eta(X.eta[n]);

        VectorField& G = out.G[n];
        VectorField& W = out.w[n];

        // first component, on x-faces
        for (int i = 0; i <= g.nx; ++i) {
            const double eta = bg.eta_d[i], etax = bg.etax_d[i], etat = bg.etat_d[i];
            const double etaxx = (i == 0 || i == g.nx)
                                     ? (i == 0 ? (108.0 * bg.eta_c[0] - 4.0 * bg.eta_c[1]) / (9.0 * dx * dx)
                                               : (108.0 * bg.eta_c[g.nx - 1] - 4.0 * bg.eta_c[g.nx - 2]) / (9.0 * dx * dx))
                                     : 0.5 * (bg.etaxx_c[i - 1] + bg.etaxx_c[i]);
            for (int k = 0; k < g.nz; ++k) {
                const double z = g.zc(k);
                const double u = vv.u(i, k);
                const double ut = (vp.u(i, k) - vm.u(i, k)) / (2.0 * dt);
                double ux, uxx;
                if (i == 0) {
                    ux = (-3.0 * vv.u(0, k) + 4.0 * vv.u(1, k) - vv.u(2, k)) / (2.0 * dx);
                    uxx = (2.0 * vv.u(0, k) - 5.0 * vv.u(1, k) + 4.0 * vv.u(2, k) - vv.u(3, k)) / (dx * dx);
                } else if (i == g.nx) {
                    ux = (3.0 * vv.u(g.nx, k) - 4.0 * vv.u(g.nx - 1, k) + vv.u(g.nx - 2, k)) / (2.0 * dx);
                    uxx = (2.0 * vv.u(g.nx, k) - 5.0 * vv.u(g.nx - 1, k) + 4.0 * vv.u(g.nx - 2, k) - vv.u(g.nx - 3, k))
                          / (dx * dx);
                } else {
                    ux = (vv.u(i + 1, k) - vv.u(i - 1, k)) / (2.0 * dx);
                    uxx = (vv.u(i - 1, k) - 2.0 * u + vv.u(i + 1, k)) / (dx * dx);
                }
                const double uz = (vv.u(i, k + 1) - vv.u(i, k - 1)) / (2.0 * dz);
                const double uzz = (vv.u(i, k - 1) - 2.0 * u + vv.u(i, k + 1)) / (dz * dz);
                double uxz;
                auto uz_at = [&](int ii) { return (vv.u(ii, k + 1) - vv.u(ii, k - 1)) / (2.0 * dz); };
                if (i == 0)
                    uxz = (-3.0 * uz_at(0) + 4.0 * uz_at(1) - uz_at(2)) / (2.0 * dx);
                else if (i == g.nx)
                    uxz = (3.0 * uz_at(g.nx) - 4.0 * uz_at(g.nx - 1) + uz_at(g.nx - 2)) / (2.0 * dx);
                else
                    uxz = (uz_at(i + 1) - uz_at(i - 1)) / (2.0 * dx);
                double px, pz;
                if (i == 0)
                    px = (p[g.cidx(1, k)] - p[g.cidx(0, k)]) / dx;
                else if (i == g.nx)
                    px = (p[g.cidx(g.nx - 1, k)] - p[g.cidx(g.nx - 2, k)]) / dx;
                else
                    px = (p[g.cidx(i, k)] - p[g.cidx(i - 1, k)]) / dx;
                auto pz_cell = [&](int ci) {
                    if (k == 0)
                        return (p[g.cidx(ci, 1)] - p[g.cidx(ci, 0)]) / dz;
                    if (k == g.nz - 1)
                        return (p[g.cidx(ci, g.nz - 1)] - p[g.cidx(ci, g.nz - 2)]) / dz;
                    return (p[g.cidx(ci, k + 1)] - p[g.cidx(ci, k - 1)]) / (2.0 * dz);
                };
                if (i == 0)
                    pz = pz_cell(0);
                else if (i == g.nx)
                    pz = pz_cell(g.nx - 1);
                else
                    pz = 0.5 * (pz_cell(i - 1) + pz_cell(i));
                const double u2 = vv.w_avg_at_u(i, k);
                const double ope = 1.0 + eta;

                G.u_at(i, k) = -eta * ut + (z * etat + nu * z * (etax * etax / ope - etaxx)) * uz
                               + nu * (-2.0 * z * etax * uxz + eta * uxx + (z * z * etax * etax - eta) / ope * uzz)
                               + z * etax * pz - z * eta * px - ope * u * ux + (z * etax * u - u2) * uz;
                W.u_at(i, k) = -eta * u;
            }
        }

        // second component, on z-faces
        for (int i = 0; i < g.nx; ++i) {
            const double eta = bg.eta_c[i], etax = bg.etax_c[i], etaxx = bg.etaxx_c[i], etat = bg.etat_c[i];
            const double ope = 1.0 + eta;
            for (int k = 0; k <= g.nz; ++k) {
                const double z = g.zf(k);
                const double w = vv.w(i, k);
                const double wt = (vp.w(i, k) - vm.w(i, k)) / (2.0 * dt);
                const double wx = (vv.w(i + 1, k) - vv.w(i - 1, k)) / (2.0 * dx);
                const double wxx = (vv.w(i - 1, k) - 2.0 * w + vv.w(i + 1, k)) / (dx * dx);
                double wz, wzz, wxz;
                auto wx_at = [&](int kk) { return (vv.w(i + 1, kk) - vv.w(i - 1, kk)) / (2.0 * dx); };
                if (k == 0) {
                    wz = (-3.0 * vv.w(i, 0) + 4.0 * vv.w(i, 1) - vv.w(i, 2)) / (2.0 * dz);
                    wzz = (2.0 * vv.w(i, 0) - 5.0 * vv.w(i, 1) + 4.0 * vv.w(i, 2) - vv.w(i, 3)) / (dz * dz);
                    wxz = (-3.0 * wx_at(0) + 4.0 * wx_at(1) - wx_at(2)) / (2.0 * dz);
                } else if (k == g.nz) {
                    wz = (3.0 * vv.w(i, g.nz) - 4.0 * vv.w(i, g.nz - 1) + vv.w(i, g.nz - 2)) / (2.0 * dz);
                    wzz = (2.0 * vv.w(i, g.nz) - 5.0 * vv.w(i, g.nz - 1) + 4.0 * vv.w(i, g.nz - 2) - vv.w(i, g.nz - 3))
                          / (dz * dz);
                    wxz = (3.0 * wx_at(g.nz) - 4.0 * wx_at(g.nz - 1) + wx_at(g.nz - 2)) / (2.0 * dz);
                } else {
                    wz = (vv.w(i, k + 1) - vv.w(i, k - 1)) / (2.0 * dz);
                    wzz = (vv.w(i, k - 1) - 2.0 * w + vv.w(i, k + 1)) / (dz * dz);
                    wxz = (wx_at(k + 1) - wx_at(k - 1)) / (2.0 * dz);
                }
                const double u1 = vv.u_avg_at_w(i, k);

                G.w_at(i, k) = -eta * wt + (z * etat + nu * z * (etax * etax / ope - etaxx)) * wz
                               + nu * (-2.0 * z * etax * wxz + eta * wxx + (z * z * etax * etax - eta) / ope * wzz)
                               - ope * u1 * wx + (z * etax * u1 - w) * wz;
                W.w_at(i, k) = z * etax * u1;
            }
        }

        // outflow trace Theta = |u|^2 / 2 (u2 vanishes on Gamma_o)
        for (int k = 0; k < g.nz; ++k)
            out.Theta[n][k] = 0.5 * v.u_at(g.nx, k) * v.u_at(g.nx, k);

        // beam load Psi on Gamma_s (z = 1)
        for (int i = 0; i < g.nx; ++i) {
            const double eta = bg.eta_c[i], etax = bg.etax_c[i];
            const double ope = 1.0 + eta;
            auto ucol = [&](int kk) { return 0.5 * (vv.u(i, kk) + vv.u(i + 1, kk)); };
            // one-sided d(u1)/dz at z = 1 using the zero tangential trace
            const double u1z_top = (-9.0 * ucol(g.nz - 1) + ucol(g.nz - 2)) / (3.0 * dz);
            auto etat_at = [&](int ii) -> double {
                if (ii < 0)
                    return ghost_left1(X.eta_t[n]);
                if (ii >= g.nx)
                    return ghost_right1(X.eta_t[n]);
                return X.eta_t[n][ii];
            };
            const double u2x = (etat_at(i + 1) - etat_at(i - 1)) / (2.0 * dx);
            const double u2z = (3.0 * v.w_at(i, g.nz) - 4.0 * v.w_at(i, g.nz - 1) + v.w_at(i, g.nz - 2)) / (2.0 * dz);
            out.Psi[n][i] = nu * (etax / ope * u1z_top + etax * u2x - (etax * etax - 2.0 * eta) / ope * u2z);
        }
    }
    out.G[nt] = out.G[0];
    out.w[nt] = out.w[0];
    out.Theta[nt] = out.Theta[0];
    out.Psi[nt] = out.Psi[0];
    return out;
}

TransformedSolution NonlinearSolver::zero_solution() const
{
    const Grid2D& g = ctx_->op().grid();
    const int nt = ctx_->steps();
    TransformedSolution X;
    X.states.assign(nt + 1, CoupledState(g));
    X.velocity.assign(nt + 1, VectorField(g));
    X.pressure.assign(nt + 1, ScalarField(g, Stag::Center));
    X.eta.assign(nt + 1, BeamField(g));
    X.eta_t.assign(nt + 1, BeamField(g));
    return X;
}

double NonlinearSolver::solution_norm(const TransformedSolution& X) const { return trajectory_norm(*ctx_, X); }

double NonlinearSolver::diff_norm(const TransformedSolution& a, const TransformedSolution& b) const
{
    TransformedSolution d = a;
    for (std::size_t n = 0; n < d.velocity.size(); ++n) {
        axpy(-1.0, b.velocity[n], d.velocity[n]);
        axpy(-1.0, b.pressure[n], d.pressure[n]);
        axpy(-1.0, b.eta[n], d.eta[n]);
        axpy(-1.0, b.eta_t[n], d.eta_t[n]);
    }
    return trajectory_norm(*ctx_, d);
}

void NonlinearSolver::check_ball(const TransformedSolution& X, const BallConstraints& ball) const
{
    const double nx = solution_norm(X);
    if (nx > ball.radius)
        throw SolverError(FailureClass::BallViolation,
                          "iterate norm " + std::to_string(nx) + " exceeds the ball radius "
                              + std::to_string(ball.radius));
    for (const auto& eta : X.eta) {
        const double m = min_one_plus_eta(eta);
        if (m < 1.0 / ball.mu)
            throw SolverError(FailureClass::BallViolation,
                              "min(1+eta) = " + std::to_string(m) + " below the 1/mu bound "
                                  + std::to_string(1.0 / ball.mu));
    }
}

TransformedSolution NonlinearSolver::fixed_point_map(const TransformedSolution& X, const PeriodicForcing& boundary,
                                                     const BallConstraints& ball) const
{
    check_ball(X, ball);
    NonlinearEvaluation terms = evaluate_terms(X);
    PeriodicForcing f = boundary;
    f.has_quadruple = true;
    f.f_vol = std::move(terms.G);
    f.w_div = std::move(terms.w);
    f.theta_out = std::move(terms.Theta);
    f.h_beam = std::move(terms.Psi);
    return ctx_->solve_periodic_linear_fsi(f);
}

NonlinearSolver::Result NonlinearSolver::solve_periodic_fsi(const PeriodicForcing& boundary,
                                                            const NonlinearSolveOptions& opt) const
{
    if (opt.cl_estimate > 0.0 && !opt.override_smallness) {
        const double fn = forcing_norm(*ctx_, boundary);
        const double thresh = opt.ball.radius / (2.0 * opt.cl_estimate);
        if (fn > thresh)
            throw SolverError(FailureClass::BallViolation,
                              "forcing norm " + std::to_string(fn) + " above the smallness threshold "
                                  + std::to_string(thresh));
    }
    Result res;
    TransformedSolution X = zero_solution();
    double prev_res = -1.0;
    int bad_streak = 0;
    for (int it = 0; it < opt.max_iterations; ++it) {
        TransformedSolution Xn = fixed_point_map(X, boundary, opt.ball);
        const double r = diff_norm(Xn, X);
        res.diagnostics.residuals.push_back(r);
        if (prev_res > 0.0) {
            const double rate = r / prev_res;
            res.diagnostics.rates.push_back(rate);
            if (rate >= 1.0) {
                if (++bad_streak >= 3)
                    throw SolverError(FailureClass::NonContraction,
                                      "Picard iteration not contracting; reduce the forcing amplitude",
                                      res.diagnostics.residuals);
            } else {
                bad_streak = 0;
            }
        }
        X = std::move(Xn);
        prev_res = r;
        res.diagnostics.iterations = it + 1;
        const double xn = solution_norm(X);
        double min_ope_it = 1e300;
        for (const auto& eta : X.eta)
            min_ope_it = std::min(min_ope_it, min_one_plus_eta(eta));
        res.diagnostics.radius_margins.push_back(opt.ball.radius - xn);
        res.diagnostics.mu_margins.push_back(min_ope_it - 1.0 / opt.ball.mu);
        if (r <= opt.picard_tol * std::max(1.0, xn)) {
            res.diagnostics.converged = true;
            break;
        }
    }
    if (!res.diagnostics.converged)
        throw SolverError(FailureClass::NonContraction, "Picard iteration cap reached",
                          res.diagnostics.residuals);
    res.diagnostics.radius_margin = opt.ball.radius - solution_norm(X);
    double min_ope = 1e300;
    for (const auto& eta : X.eta)
        min_ope = std::min(min_ope, min_one_plus_eta(eta));
    res.diagnostics.mu_margin = min_ope - 1.0 / opt.ball.mu;
    res.solution = std::move(X);
    return res;
}

NonlinearSolver::SystemResidual NonlinearSolver::system_residual(const TransformedSolution& X,
                                                                 const PeriodicForcing& boundary) const
{
    const Grid2D& g = ctx_->op().grid();
    const BeamOperator& beam = ctx_->op().beam();
    const double nu = beam.params().nu;
    const double gam = beam.params().gamma;
    const int nt = ctx_->steps();
    const double dt = ctx_->dt();
    NonlinearEvaluation terms = evaluate_terms(X);
    SystemResidual out;
    double mom_scale = 1e-300, beam_scale = 1e-300, int_scale = 1e-300;
    for (int n = 0; n < nt; ++n) {
        const int np = (n + 1) % nt, nm = (n - 1 + nt) % nt;
        // momentum residual at interior faces
        VectorField lap = apply_velocity_laplacian(X.velocity[n]);
        VectorField gp = gradient(X.pressure[n]);
        double r2 = 0.0, s2 = 0.0;
        for (int i = 1; i < g.nx; ++i)
            for (int k = 0; k < g.nz; ++k) {
                const double ut = (X.velocity[np].u_at(i, k) - X.velocity[nm].u_at(i, k)) / (2.0 * dt);
                const double r = ut - nu * lap.u_at(i, k) + gp.u_at(i, k) - terms.G[n].u_at(i, k);
                r2 += r * r;
                s2 += ut * ut + 1e-300;
            }
        for (int i = 0; i < g.nx; ++i)
            for (int k = 1; k < g.nz; ++k) {
                const double wt = (X.velocity[np].w_at(i, k) - X.velocity[nm].w_at(i, k)) / (2.0 * dt);
                const double r = wt - nu * lap.w_at(i, k) + gp.w_at(i, k) - terms.G[n].w_at(i, k);
                r2 += r * r;
                s2 += wt * wt + 1e-300;
            }
        out.momentum = std::max(out.momentum, std::sqrt(r2));
        mom_scale = std::max(mom_scale, std::sqrt(s2) + norm(X.velocity[n]));
        // mass defect
        ScalarField dv = divergence(X.velocity[n]);
        ScalarField dw = divergence(terms.w[n]);
        axpy(-1.0, dw, dv);
        out.mass = std::max(out.mass, norm(dv));
        // beam residual
        BeamField ett = X.eta_t[np];
        axpy(-1.0, X.eta_t[nm], ett);
        scale(ett, 1.0 / (2.0 * dt));
        BeamField rb = ett;
        axpy(-1.0, beam.apply_A(X.eta[n]), rb);
        BeamField ds = beam.apply_Ds(X.eta_t[n]);
        axpy(-gam, ds, rb);
        BeamField tp = gamma_s_trace_cell(X.pressure[n]);
        axpy(-1.0, tp, rb);
        for (int i = 0; i < g.nx; ++i)
            rb[i] += nu * (X.eta_t[n][i] - X.velocity[n].w_at(i, g.nz - 1)) / g.dz;
        axpy(-1.0, terms.Psi[n], rb);
        out.beam = std::max(out.beam, norm(rb));
        beam_scale = std::max(beam_scale, norm(ett) + norm(beam.apply_A(X.eta[n])) + norm(tp) + 1e-12);
        // interface
        for (int i = 0; i < g.nx; ++i) {
            out.interface = std::max(out.interface, std::abs(X.velocity[n].w_at(i, g.nz) - X.eta_t[n][i]));
            int_scale = std::max(int_scale, std::abs(X.eta_t[n][i]));
        }
        // outflow condition p + |u|^2/2 = omega2
        const double b = boundary.s2.eval(n * dt, ctx_->period());
        for (int k = 0; k < g.nz; ++k) {
            const double ptr = 1.5 * X.pressure[n][g.cidx(g.nx - 1, k)] - 0.5 * X.pressure[n][g.cidx(g.nx - 2, k)];
            const double datum = boundary.profile2.empty() ? 0.0 : b * boundary.profile2[k];
            out.outflow = std::max(out.outflow, std::abs(ptr + terms.Theta[n][k] - datum));
        }
    }
    out.momentum /= mom_scale;
    out.beam /= beam_scale;
    out.interface /= std::max(1e-300, int_scale);
    return out;
}

} // namespace fsi
