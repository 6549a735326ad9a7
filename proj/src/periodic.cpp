#include "fsi/periodic.hpp"

#include <cmath>
#include <sstream>

#include "fsi/errors.hpp"
#include "fsi/krylov.hpp"
#include "fsi/operators.hpp"

namespace fsi {

double FourierSeries::eval(double t, double T) const
{
    double s = a0;
    const double w = 2.0 * M_PI / T;
    for (std::size_t m = 0; m < ac.size(); ++m)
        s += ac[m] * std::cos((m + 1.0) * w * t);
    for (std::size_t m = 0; m < as.size(); ++m)
        s += as[m] * std::sin((m + 1.0) * w * t);
    return s;
}

double FourierSeries::deriv(double t, double T) const
{
    double s = 0.0;
    const double w = 2.0 * M_PI / T;
    for (std::size_t m = 0; m < ac.size(); ++m)
        s -= ac[m] * (m + 1.0) * w * std::sin((m + 1.0) * w * t);
    for (std::size_t m = 0; m < as.size(); ++m)
        s += as[m] * (m + 1.0) * w * std::cos((m + 1.0) * w * t);
    return s;
}

bool FourierSeries::zero() const
{
    if (a0 != 0.0)
        return false;
    for (double v : ac)
        if (v != 0.0)
            return false;
    for (double v : as)
        if (v != 0.0)
            return false;
    return true;
}

MonodromyContext::MonodromyContext(std::shared_ptr<CoupledOperator> op, double T, int nt, double theta)
    : op_(std::move(op)), T_(T), nt_(nt), theta_(theta)
{
    if (!(T > 0.0) || nt < 4)
        throw std::invalid_argument("MonodromyContext: need T > 0 and nt >= 4");
}

AssembledForcing MonodromyContext::assemble_forcing(const PeriodicForcing& forcing) const
{
    const Grid2D& g = op_->grid();
    const StokesSolver& st = op_->stokes();
    const LerayProjector& prj = op_->leray();
    const double nu = op_->beam().params().nu;
    const int nt = nt_;
    const double dtv = dt();

    AssembledForcing out;
    out.rhs.assign(nt + 1, EvolutionRHS(g));
    out.np_f.assign(nt + 1, ScalarField(g, Stag::Center));
    out.lift_vel.assign(nt + 1, VectorField(g));
    out.lift_pres.assign(nt + 1, ScalarField(g, Stag::Center));

    // stationary lifted profiles, scaled by the Fourier factors per node
    const bool has1 = !forcing.s1.zero();
    const bool has2 = !forcing.s2.zero();
    StokesSolution li; // L_{Gamma_i}(profile1), the paper's mixed-solve lifting
    BeamField li2_trace(g), li1_shear(g);
    if (has1) {
        li = st.solve_mixed(0.0, nullptr, nullptr, &forcing.profile1);
        li2_trace = gamma_s_trace_extrap(li.pres);
        li1_shear = gamma_s_wz_trace(li.vel);
    }
    ScalarField l2(g, Stag::Center);
    VectorField grad_l2(g);
    BeamField l2_trace(g);
    if (has2) {
        l2 = st.lift_gamma_o(forcing.profile2);
        MixedBC bc(g);
        bc.dirichlet_right = forcing.profile2;
        grad_l2 = prj.grad_mixed_potential(l2, bc);
        l2_trace = gamma_s_trace_extrap(l2);
    }

    for (int n = 0; n <= nt; ++n) {
        const double t = n * dtv;
        const double a = forcing.s1.eval(t, T_), ap = forcing.s1.deriv(t, T_);
        const double b = forcing.s2.eval(t, T_);

        VectorField F(g);
        BeamField H(g);
        if (has1) {
            axpy(-ap, li.vel, F);
            axpy(a, li2_trace, H);
            axpy(-2.0 * nu * a, li1_shear, H);
        }
        if (has2) {
            axpy(-b, grad_l2, F);
            axpy(b, l2_trace, H);
        }
        if (forcing.has_quadruple) {
            axpy(1.0, forcing.f_vol[n], F);
            // -w_t by periodic centered differences, + nu Lap w
            const int np = (n + 1) % nt, nm = (n - 1 + nt) % nt;
            VectorField wt = forcing.w_div[np];
            axpy(-1.0, forcing.w_div[nm], wt);
            scale(wt, 1.0 / (2.0 * dtv));
            axpy(-1.0, wt, F);
            VectorField lw = apply_velocity_laplacian(forcing.w_div[n]);
            axpy(nu, lw, F);
            // Gamma_o extra pressure lifting
            ScalarField lth = st.lift_gamma_o(forcing.theta_out[n]);
            MixedBC bc(g);
            bc.dirichlet_right = forcing.theta_out[n];
            VectorField glth = prj.grad_mixed_potential(lth, bc);
            axpy(-1.0, glth, F);
            axpy(1.0, gamma_s_trace_extrap(lth), H);
            axpy(1.0, forcing.h_beam[n], H);
            // the traction contribution of the divergence datum
            BeamField wz = gamma_s_wz_trace(forcing.w_div[n]);
            axpy(-2.0 * nu, wz, H);
            axpy(1.0, lth, out.lift_pres[n]);
            axpy(1.0, forcing.w_div[n], out.lift_vel[n]);
        }
        if (has1) {
            axpy(a, li.vel, out.lift_vel[n]);
            axpy(a, li.pres, out.lift_pres[n]);
        }
        if (has2)
            axpy(b, l2, out.lift_pres[n]);

        // abstract right-hand side: (Pi F, 0, (I+N_s)^{-1}(N_p F + H))
        LerayDecomposition dec = prj.project(F);
        out.rhs[n].pf = dec.proj;
        out.np_f[n] = dec.pu;
        axpy(1.0, dec.qu, out.np_f[n]);
        BeamField load = gamma_s_trace_cell(out.np_f[n]);
        axpy(1.0, H, load);
        out.rhs[n].beam_load = op_->added_mass_solve(load);
    }
    return out;
}

CoupledState MonodromyContext::propagate_period(const CoupledState& z, const AssembledForcing* forcing,
                                                std::vector<CoupledState>* store) const
{
    const double dtv = dt();
    CoupledOperator::March m = op_->start_march(z);
    if (store) {
        store->clear();
        store->push_back(z);
    }
    EvolutionRHS zero(op_->grid());
    for (int n = 0; n < nt_; ++n) {
        const EvolutionRHS& r0 = forcing ? forcing->rhs[n] : zero;
        const EvolutionRHS& r1 = forcing ? forcing->rhs[n + 1] : zero;
        op_->advance(m, dtv, theta_, r0, r1);
        if (store)
            store->push_back(op_->finish_march(m));
    }
    return store ? store->back() : op_->finish_march(m);
}

CoupledState MonodromyContext::solve_periodic_initial_condition(const AssembledForcing& forcing, double rel_tol,
                                                                int max_basis, const CoupledState* initial_guess,
                                                                int* iterations) const
{
    const Grid2D& g = op_->grid();
    CoupledState b = propagate_period(CoupledState(g), &forcing);
    VecD bv, x(op_->state_size(), 0.0);
    op_->pack(b, bv);
    if (initial_guess)
        op_->pack(*initial_guess, x);

    auto apply = [&](const VecD& xin, VecD& xout) {
        CoupledState zin;
        op_->unpack(xin, zin);
        CoupledState sz = propagate_period(zin, nullptr);
        CoupledState res = zin;
        axpy(-1.0, sz.pv, res.pv);
        axpy(-1.0, sz.eta, res.eta);
        axpy(-1.0, sz.eta_t, res.eta_t);
        op_->pack(res, xout);
    };
    auto ip = [&](const VecD& a, const VecD& bb) { return op_->packed_inner(a, bb); };

    KrylovResult kr = gmres(apply, bv, x, rel_tol, max_basis, ip);
    if (iterations)
        *iterations = kr.iterations;
    if (!kr.converged) {
        SpectralCriterionReport sp = check_spectral_criterion();
        std::ostringstream msg;
        msg << "periodic solve: Krylov stagnation, dominant monodromy eigenvalue estimate " << sp.rho_max;
        throw SolverError(FailureClass::SolverFailure, msg.str(), kr.res_history);
    }
    CoupledState z;
    op_->unpack(x, z);
    return z;
}

SpectralCriterionReport MonodromyContext::check_spectral_criterion(int arnoldi_m, double margin, unsigned seed) const
{
    SpectralCriterionReport rep;
    CoupledState s0 = op_->random_state(seed);
    VecD start;
    op_->pack(s0, start);
    auto apply = [&](const VecD& xin, VecD& xout) {
        CoupledState zin;
        op_->unpack(xin, zin);
        CoupledState sz = propagate_period(zin, nullptr);
        op_->pack(sz, xout);
    };
    auto ip = [&](const VecD& a, const VecD& b) { return op_->packed_inner(a, b); };
    ArnoldiData ar;
    try {
        ar = arnoldi(apply, start, arnoldi_m, ip);
    } catch (const SolverError&) {
        rep.conclusive = false;
        return rep;
    }
    const int m = ar.m;
    std::vector<cplx> hm(static_cast<std::size_t>(m) * m);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
            hm[static_cast<std::size_t>(i) * m + j] = ar.H[static_cast<std::size_t>(i) * arnoldi_m + j];
    std::vector<cplx> theta = hessenberg_eigenvalues(hm, m);
    double rho = 0.0, dist1 = 1e300;
    for (auto& th : theta) {
        rho = std::max(rho, std::abs(th));
        dist1 = std::min(dist1, std::abs(th - cplx(1.0, 0.0)));
    }
    rep.rho_max = rho;
    rep.distance_to_one = dist1;
    rep.conclusive = true;
    // solvability of the periodic problem needs 1 away from the monodromy
    // spectrum; a radius above one would mean instability, not insolvability
    rep.admissible = dist1 > margin;
    return rep;
}

PeriodicTrajectory MonodromyContext::solve_periodic_linear_fsi(const PeriodicForcing& forcing,
                                                               double defect_tol) const
{
    const Grid2D& g = op_->grid();
    const StokesSolver& st = op_->stokes();
    AssembledForcing af = assemble_forcing(forcing);

    PeriodicTrajectory traj;
    CoupledState z = solve_periodic_initial_condition(af, 1e-10, 200, nullptr, &traj.krylov_iterations);
    propagate_period(z, &af, &traj.states);

    CoupledState defect = traj.states.back();
    axpy(-1.0, z.pv, defect.pv);
    axpy(-1.0, z.eta, defect.eta);
    axpy(-1.0, z.eta_t, defect.eta_t);
    traj.periodicity_defect = op_->state_norm(defect);
    const double zn = op_->state_norm(z);
    if (traj.periodicity_defect > defect_tol * std::max(1.0, zn))
        throw SolverError(FailureClass::SolverFailure,
                          "periodic solve: periodicity defect " + std::to_string(traj.periodicity_defect)
                              + " above tolerance");

    // reconstruction: full velocity, pressure via the displayed formula,
    // then the lifted parts added back
    const int nt = nt_;
    std::vector<ScalarField> ns(nt + 1, ScalarField(g, Stag::Center));
    for (int n = 0; n <= nt; ++n)
        ns[n] = st.ns_operator(traj.states[n].eta_t);
    traj.velocity.assign(nt + 1, VectorField(g));
    traj.pressure.assign(nt + 1, ScalarField(g, Stag::Center));
    traj.eta.assign(nt + 1, BeamField(g));
    traj.eta_t.assign(nt + 1, BeamField(g));
    for (int n = 0; n <= nt; ++n) {
        const CoupledState& s = traj.states[n];
        traj.eta[n] = s.eta;
        traj.eta_t[n] = s.eta_t;
        traj.velocity[n] = st.velocity_from_state(s.pv, s.eta_t);
        axpy(1.0, af.lift_vel[n], traj.velocity[n]);
        // q = -d/dt N_s(eta_t) + N_v(pv) + N_p(F), periodic centered in time
        const int np = (n + 1) % nt, nm = (n - 1 + nt) % nt;
        ScalarField dns = ns[np];
        axpy(-1.0, ns[nm], dns);
        scale(dns, 1.0 / (2.0 * dt()));
        traj.pressure[n] = st.nv_operator(s.pv);
        axpy(-1.0, dns, traj.pressure[n]);
        axpy(1.0, af.np_f[n], traj.pressure[n]);
        axpy(1.0, af.lift_pres[n], traj.pressure[n]);
    }
    return traj;
}

Mat MonodromyContext::dense_monodromy() const
{
    const int n = op_->state_size();
    Mat m(n, n);
    VecD e(n, 0.0), col;
    for (int j = 0; j < n; ++j) {
        std::fill(e.begin(), e.end(), 0.0);
        e[j] = 1.0;
        CoupledState z;
        op_->unpack(e, z);
        CoupledState sz = propagate_period(z, nullptr);
        op_->pack(sz, col);
        for (int i = 0; i < n; ++i)
            m(i, j) = col[i];
    }
    return m;
}

double trajectory_norm(const MonodromyContext& ctx, const PeriodicTrajectory& traj)
{
    const CoupledOperator& op = ctx.op();
    const BeamOperator& beam = op.beam();
    const int nt = ctx.steps();
    double worst = 0.0;
    for (int n = 0; n < nt; ++n) {
        const int np = (n + 1) % nt, nm = (n - 1 + nt) % nt;
        double s = norm(traj.velocity[n]) + std::sqrt(velocity_grad_energy(traj.velocity[n]))
                   + norm(traj.pressure[n]);
        VectorField ut = traj.velocity[np];
        axpy(-1.0, traj.velocity[nm], ut);
        scale(ut, 1.0 / (2.0 * ctx.dt()));
        s += norm(ut);
        s += beam.h20_norm(traj.eta[n]) + norm(beam.apply_A(traj.eta[n]));
        s += beam.h20_norm(traj.eta_t[n]);
        BeamField ett = traj.eta_t[np];
        axpy(-1.0, traj.eta_t[nm], ett);
        scale(ett, 1.0 / (2.0 * ctx.dt()));
        s += norm(ett);
        worst = std::max(worst, s);
    }
    return worst;
}

double forcing_norm(const MonodromyContext& ctx, const PeriodicForcing& forcing)
{
    const CoupledOperator& op = ctx.op();
    const Grid2D& g = op.grid();
    const int nt = ctx.steps();
    double worst = 0.0;
    for (int n = 0; n < nt; ++n) {
        const double t = n * ctx.dt();
        double s = 0.0;
        if (!forcing.s1.zero()) {
            double pn = 0.0, pg = 0.0;
            for (int k = 0; k < g.nz; ++k)
                pn += forcing.profile1[k] * forcing.profile1[k] * g.dz;
            for (int k = 1; k < g.nz; ++k) {
                const double d = (forcing.profile1[k] - forcing.profile1[k - 1]) / g.dz;
                pg += d * d * g.dz;
            }
            s += (std::abs(forcing.s1.eval(t, ctx.period())) + std::abs(forcing.s1.deriv(t, ctx.period())))
                 * std::sqrt(pn + pg);
        }
        if (!forcing.s2.zero()) {
            double pn = 0.0;
            for (int k = 0; k < g.nz; ++k)
                pn += forcing.profile2[k] * forcing.profile2[k] * g.dz;
            s += std::abs(forcing.s2.eval(t, ctx.period())) * std::sqrt(pn);
        }
        if (forcing.has_quadruple) {
            s += norm(forcing.f_vol[n]);
            s += norm(forcing.w_div[n]) + std::sqrt(velocity_grad_energy(forcing.w_div[n]));
            const int np = (n + 1) % nt, nm = (n - 1 + nt) % nt;
            VectorField wt = forcing.w_div[np];
            axpy(-1.0, forcing.w_div[nm], wt);
            scale(wt, 1.0 / (2.0 * ctx.dt()));
            s += norm(wt);
            double tn = 0.0;
            for (int k = 0; k < g.nz; ++k)
                tn += forcing.theta_out[n][k] * forcing.theta_out[n][k] * g.dz;
            s += std::sqrt(tn);
            s += norm(forcing.h_beam[n]);
        }
        worst = std::max(worst, s);
    }
    return worst;
}

double empirical_linear_constant(const MonodromyContext& ctx, const std::vector<PeriodicForcing>& probes)
{
    double cl = 0.0;
    for (const auto& p : probes) {
        const double dn = forcing_norm(ctx, p);
        if (dn == 0.0)
            continue;
        PeriodicTrajectory traj = ctx.solve_periodic_linear_fsi(p);
        cl = std::max(cl, trajectory_norm(ctx, traj) / dn);
    }
    return cl;
}

DenseEvolution::DenseEvolution(Mat a, double theta) : a_(std::move(a)), theta_(theta), n_(a_.rows) {}

void DenseEvolution::prepare(double dt) const
{
    if (dt == dt_cached_)
        return;
    Mat lhs(n_, n_);
    rhs_ = Mat(n_, n_);
    for (int i = 0; i < n_; ++i)
        for (int j = 0; j < n_; ++j) {
            lhs(i, j) = (i == j ? 1.0 : 0.0) - dt * theta_ * a_(i, j);
            rhs_(i, j) = (i == j ? 1.0 : 0.0) + dt * (1.0 - theta_) * a_(i, j);
        }
    lhs_.factor(lhs);
    dt_cached_ = dt;
}

std::vector<double> DenseEvolution::step(const std::vector<double>& y, double dt, const std::vector<double>& f0,
                                         const std::vector<double>& f1) const
{
    prepare(dt);
    std::vector<double> out;
    mat_vec(rhs_, y, out);
    for (int i = 0; i < n_; ++i)
        out[i] += dt * (theta_ * f1[i] + (1.0 - theta_) * f0[i]);
    lhs_.solve(out);
    return out;
}

std::vector<double> DenseEvolution::propagate(std::vector<double> y, double T, int nt,
                                              const std::function<std::vector<double>(double)>& f) const
{
    const double dt = T / nt;
    for (int n = 0; n < nt; ++n)
        y = step(y, dt, f(n * dt), f((n + 1) * dt));
    return y;
}

Mat DenseEvolution::monodromy(double T, int nt) const
{
    Mat m(n_, n_);
    auto zf = [&](double) { return std::vector<double>(n_, 0.0); };
    for (int j = 0; j < n_; ++j) {
        std::vector<double> e(n_, 0.0);
        e[j] = 1.0;
        auto col = propagate(e, T, nt, zf);
        for (int i = 0; i < n_; ++i)
            m(i, j) = col[i];
    }
    return m;
}

double DenseEvolution::monodromy_radius(double T, int nt) const
{
    auto eig = dense_eigenvalues(monodromy(T, nt));
    double rho = 0.0;
    for (auto& z : eig)
        rho = std::max(rho, std::abs(z));
    return rho;
}

std::vector<double> DenseEvolution::periodic_solve(double T, int nt,
                                                   const std::function<std::vector<double>(double)>& f) const
{
    Mat s = monodromy(T, nt);
    std::vector<double> b = propagate(std::vector<double>(n_, 0.0), T, nt, f);
    Mat ims(n_, n_);
    for (int i = 0; i < n_; ++i)
        for (int j = 0; j < n_; ++j)
            ims(i, j) = (i == j ? 1.0 : 0.0) - s(i, j);
    DenseLU lu;
    lu.factor(ims);
    lu.solve(b);
    return propagate(b, T, nt, f);
}

} // namespace fsi
