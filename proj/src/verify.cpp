#include "fsi/verify.hpp"

#include <cmath>
#include <iomanip>
#include <iostream>
#include <random>
#include <sstream>

#include "fsi/nonlinear.hpp"
#include "fsi/operators.hpp"

namespace fsi {

namespace {

constexpr double kL = 2.0;
constexpr double kNu = 0.1;
constexpr double kT = 1.0;
constexpr int kNx = 48, kNz = 24, kNt = 64;

BeamParams default_params() { return BeamParams{1.0, 0.0, 0.5, kNu}; }

struct Harness {
    Grid2D grid{kNx, kNz, kL};
    std::shared_ptr<CoupledOperator> op;
    std::shared_ptr<MonodromyContext> ctx;
    std::unique_ptr<NonlinearSolver> solver;

    Harness()
    {
        op = std::make_shared<CoupledOperator>(grid, default_params());
        ctx = std::make_shared<MonodromyContext>(op, kT, kNt);
        solver = std::make_unique<NonlinearSolver>(ctx);
    }
};

VectorField random_field(const Grid2D& g, std::mt19937_64& rng)
{
    std::uniform_real_distribution<double> d(-1.0, 1.0);
    VectorField v(g);
    for (auto& x : v.u)
        x = d(rng);
    for (auto& x : v.w)
        x = d(rng);
    return v;
}

BeamField quartic_g(const Grid2D& g)
{
    BeamField f(g);
    for (int i = 0; i < g.nx; ++i) {
        const double x = g.xc(i);
        f[i] = x * x * (g.length_L - x) * (g.length_L - x);
    }
    return f;
}

PeriodicForcing outflow_forcing(const Grid2D& g, double eps)
{
    PeriodicForcing f;
    f.period_T = kT;
    f.profile1.assign(g.nz, 0.0);
    f.profile2.assign(g.nz, 0.0);
    for (int k = 0; k < g.nz; ++k)
        f.profile2[k] = eps * std::sin(M_PI * g.zc(k));
    f.s2.as = {1.0};
    return f;
}

// manufactured Stokes solution shared with the module tests: u = curl(psi),
// psi = sin^2(pi x/L) sin^2(pi z), pressure vanishing at x = L with zero
// curvature there
struct Manufactured {
    double L, nu;
    double u1(double x, double z) const
    {
        const double sx = std::sin(M_PI * x / L);
        return sx * sx * 2.0 * M_PI * std::sin(M_PI * z) * std::cos(M_PI * z);
    }
    double u2(double x, double z) const
    {
        const double sz = std::sin(M_PI * z);
        return -2.0 * (M_PI / L) * std::sin(M_PI * x / L) * std::cos(M_PI * x / L) * sz * sz;
    }
    double lap_u1(double x, double z) const
    {
        const double a = M_PI / L, b = M_PI, c2x = std::cos(2 * a * x), s2z = std::sin(2 * b * z);
        return M_PI * (2 * a * a * c2x) * s2z + M_PI * (1 - c2x) / 2 * (-4 * b * b * s2z);
    }
    double lap_u2(double x, double z) const
    {
        const double a = M_PI / L, b = M_PI, s2x = std::sin(2 * a * x), c2z = std::cos(2 * b * z);
        return a * (4 * a * a) * s2x * (1 - c2z) / 2 - a * s2x * (2 * b * b * c2z);
    }
    double px(double x, double z) const { return -(M_PI / L) * std::cos(M_PI * (L - x) / L) * std::cos(2 * M_PI * z); }
    double pz(double x, double z) const { return -2.0 * M_PI * std::sin(M_PI * (L - x) / L) * std::sin(2 * M_PI * z); }
    double f1(double x, double z) const { return -nu * lap_u1(x, z) + px(x, z); }
    double f2(double x, double z) const { return -nu * lap_u2(x, z) + pz(x, z); }
};

std::string fmt(double v)
{
    std::ostringstream os;
    os << std::scientific << std::setprecision(3) << v;
    return os.str();
}

CheckResult criterion_leray(unsigned seed)
{
    Grid2D g(kNx, kNz, kL);
    LerayProjector prj(g);
    std::mt19937_64 rng(seed);
    double worst_idem = 0.0, worst_orth = 0.0, worst_div = 0.0, worst_trace = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        VectorField u = random_field(g, rng);
        const double un = norm(u);
        LerayDecomposition d = prj.project(u);
        worst_div = std::max(worst_div, norm(divergence(d.proj)) / un);
        double tr = 0.0;
        for (int k = 0; k < g.nz; ++k)
            tr = std::max(tr, std::abs(d.proj.u_at(0, k)));
        for (int i = 0; i < g.nx; ++i) {
            tr = std::max(tr, std::abs(d.proj.w_at(i, 0)));
            tr = std::max(tr, std::abs(d.proj.w_at(i, g.nz)));
        }
        worst_trace = std::max(worst_trace, tr / un);
        VectorField grad_part = u;
        axpy(-1.0, d.proj, grad_part);
        worst_orth = std::max(worst_orth, std::abs(inner(d.proj, grad_part)) / (un * un));
        VectorField pp = prj.project_velocity(d.proj);
        axpy(-1.0, d.proj, pp);
        worst_idem = std::max(worst_idem, norm(pp) / un);
    }
    CheckResult r;
    r.name = "leray projector suite (idempotence, orthogonality, div, trace)";
    r.pass = worst_idem <= 1e-8 && worst_orth <= 1e-8 && worst_div <= 1e-8 && worst_trace <= 1e-8;
    r.detail = "idem " + fmt(worst_idem) + ", orth " + fmt(worst_orth) + ", div " + fmt(worst_div) + ", trace "
               + fmt(worst_trace) + " (all <= 1e-8)";
    return r;
}

CheckResult criterion_stokes_convergence()
{
    double err[2];
    int n = 32;
    for (int lev = 0; lev < 2; ++lev, n *= 2) {
        Grid2D g(n, n / 2, kL);
        Manufactured m{g.length_L, kNu};
        StokesSolver st(g, kNu);
        VectorField f(g);
        for (int i = 0; i <= g.nx; ++i)
            for (int k = 0; k < g.nz; ++k)
                f.u_at(i, k) = m.f1(g.xf(i), g.zc(k));
        for (int i = 0; i < g.nx; ++i)
            for (int k = 0; k <= g.nz; ++k)
                f.w_at(i, k) = m.f2(g.xc(i), g.zf(k));
        StokesSolution s = st.solve_mixed(0.0, &f, nullptr, nullptr);
        VectorField e(g);
        for (int i = 0; i <= g.nx; ++i)
            for (int k = 0; k < g.nz; ++k)
                e.u_at(i, k) = s.vel.u_at(i, k) - m.u1(g.xf(i), g.zc(k));
        for (int i = 0; i < g.nx; ++i)
            for (int k = 0; k <= g.nz; ++k)
                e.w_at(i, k) = s.vel.w_at(i, k) - m.u2(g.xc(i), g.zf(k));
        err[lev] = norm(e);
    }
    const double order = std::log2(err[0] / err[1]);
    CheckResult r;
    r.name = "stokes manufactured-solution convergence (32x16 -> 64x32)";
    r.pass = order >= 1.8;
    r.detail = "observed L2 velocity order " + fmt(order) + " (>= 1.8)";
    return r;
}

CheckResult criterion_liftings()
{
    Grid2D g(kNx, kNz, kL);
    StokesSolver st(g, kNu);
    BeamField gq = quartic_g(g);
    const double gn = norm(gq);
    double midline = 0.0;
    StokesSolution ls = st.lift_gamma_s(gq, &midline);
    double trace_s = 0.0;
    for (int i = 0; i < g.nx; ++i)
        trace_s = std::max(trace_s, std::abs(ls.vel.w_at(i, g.nz) - gq[i]));
    const double div_s = norm(divergence(ls.vel));

    std::vector<double> omega(g.nz);
    for (int k = 0; k < g.nz; ++k)
        omega[k] = std::pow(g.zc(k) * (1.0 - g.zc(k)), 2);
    BeamField wm = st.corrector_profile(omega);
    double comp = st.inflow_flux(omega);
    for (int i = 0; i < g.nx; ++i)
        comp += wm[i] * g.dx;
    StokesSolution li = st.lift_gamma_i(omega);
    double trace_i = 0.0;
    for (int k = 0; k < g.nz; ++k)
        trace_i = std::max(trace_i, std::abs(li.vel.u_at(0, k) - omega[k]));
    for (int i = 0; i < g.nx; ++i)
        trace_i = std::max(trace_i, std::abs(li.vel.w_at(i, g.nz)));
    const double div_i = norm(divergence(li.vel));

    CheckResult r;
    r.name = "lifting contracts (trace, divergence, midline, flux compensation)";
    r.pass = trace_s <= 1e-8 * gn && div_s <= 1e-8 * gn && midline <= 1e-8 * gn && std::abs(comp) <= 1e-10
             && trace_i <= 1e-8 && div_i <= 1e-8;
    r.detail = "trace " + fmt(std::max(trace_s / gn, trace_i)) + ", div " + fmt(std::max(div_s, div_i) / gn)
               + ", midline " + fmt(midline / gn) + ", flux comp " + fmt(std::abs(comp));
    return r;
}

CheckResult criterion_projection_equivalence(unsigned seed)
{
    Grid2D g(kNx, kNz, kL);
    StokesSolver st(g, kNu);
    std::mt19937_64 rng(seed + 1);
    VectorField f = random_field(g, rng);
    ProjectionEquivalenceReport r1 = st.projection_equivalence(0.0, &f, nullptr);
    BeamField gq = quartic_g(g);
    ProjectionEquivalenceReport r2 = st.projection_equivalence(1.0, nullptr, &gq);
    const double worst = std::max(r1.velocity_rel, r2.velocity_rel);
    CheckResult r;
    r.name = "direct vs projected Stokes formulation (velocity)";
    r.pass = worst <= 1e-6;
    r.detail = "velocity discrepancy " + fmt(worst) + " (<= 1e-6)";
    return r;
}

CheckResult criterion_spectrum(Harness& h)
{
    SpectrumReport rep = h.op->rightmost_eigenvalues(20, 130);
    double right = -1e300, worst_energy = 0.0;
    const bool enough = rep.pairs.size() >= 20;
    for (auto& p : rep.pairs) {
        right = std::max(right, p.lambda.real());
        worst_energy = std::max(worst_energy, p.energy_residual);
    }
    CheckResult r;
    r.name = "coupled spectrum: Re(lambda) < -1e-6, sigma_min, energy identity";
    r.pass = enough && right < -1e-6 && rep.sigma_min > 1e-8 && worst_energy <= 1e-4;
    r.detail = std::to_string(rep.pairs.size()) + " pairs, rightmost Re " + fmt(right) + ", sigma_min "
               + fmt(rep.sigma_min) + ", energy defect " + fmt(worst_energy);
    return r;
}

CheckResult criterion_monodromy(Harness& h)
{
    SpectralCriterionReport rep = h.ctx->check_spectral_criterion(16, 1e-6);
    Mat a(1, 1);
    a(0, 0) = -1.0;
    DenseEvolution ev(a, 0.5);
    const double rho_scalar = ev.monodromy_radius(kT, kNt);
    const double dt = kT / kNt;
    const double scalar_err = std::abs(rho_scalar - std::exp(-kT));
    CheckResult r;
    r.name = "monodromy criterion: rho(S(T)) < 1 - 1e-4, scalar surrogate";
    r.pass = rep.conclusive && rep.rho_max < 1.0 - 1e-4 && scalar_err <= 10.0 * dt * dt;
    r.detail = "rho_max " + fmt(rep.rho_max) + ", scalar |rho - exp(-T)| " + fmt(scalar_err);
    return r;
}

CheckResult criterion_periodic_linear(Harness& h)
{
    const Grid2D& g = h.grid;
    PeriodicForcing f = outflow_forcing(g, 1e-2);
    AssembledForcing af = h.ctx->assemble_forcing(f);
    CoupledState z = h.ctx->solve_periodic_initial_condition(af);
    CoupledState end = h.ctx->propagate_period(z, &af);
    CoupledState defect = end;
    axpy(-1.0, z.pv, defect.pv);
    axpy(-1.0, z.eta, defect.eta);
    axpy(-1.0, z.eta_t, defect.eta_t);
    const double dn = h.op->state_norm(defect) / std::max(1.0, h.op->state_norm(z));

    // linearity (exact homogeneity of the solver)
    PeriodicForcing f2 = outflow_forcing(g, 2e-2);
    AssembledForcing af2 = h.ctx->assemble_forcing(f2);
    CoupledState z2 = h.ctx->solve_periodic_initial_condition(af2);
    CoupledState lin = z2;
    scale(lin.pv, 0.5);
    scale(lin.eta, 0.5);
    scale(lin.eta_t, 0.5);
    axpy(-1.0, z.pv, lin.pv);
    axpy(-1.0, z.eta, lin.eta);
    axpy(-1.0, z.eta_t, lin.eta_t);
    const double linres = h.op->state_norm(lin) / std::max(1e-300, h.op->state_norm(z));

    // scalar closed-form benchmark
    Mat a(1, 1);
    a(0, 0) = -1.0;
    DenseEvolution ev(a, 0.5);
    const double w = 2.0 * M_PI / kT;
    auto fs = [&](double t) { return std::vector<double>{std::cos(w * t)}; };
    const double dt = kT / kNt;
    const double scalar_err = std::abs(ev.periodic_solve(kT, kNt, fs)[0] - 1.0 / (1.0 + w * w));

    // dt self-convergence on the beam trajectory
    PeriodicForcing fc = outflow_forcing(g, 1e-2);
    std::vector<std::vector<BeamField>> etas;
    for (int nt : {16, 32, 64}) {
        MonodromyContext cc(h.op, kT, nt);
        PeriodicTrajectory traj = cc.solve_periodic_linear_fsi(fc);
        std::vector<BeamField> e;
        for (int n = 0; n <= 16; ++n)
            e.push_back(traj.eta[n * (nt / 16)]);
        etas.push_back(std::move(e));
    }
    double d1 = 0.0, d2 = 0.0;
    for (int n = 0; n <= 16; ++n) {
        BeamField x = etas[0][n];
        axpy(-1.0, etas[1][n], x);
        d1 = std::max(d1, max_abs(x));
        BeamField y = etas[1][n];
        axpy(-1.0, etas[2][n], y);
        d2 = std::max(d2, max_abs(y));
    }
    const double order = std::log2(d1 / d2);

    CheckResult r;
    r.name = "periodic linear solver (defect, linearity, scalar benchmark, dt order)";
    r.pass = dn <= 1e-7 && linres <= 1e-8 && scalar_err <= 10.0 * dt * dt && order >= 1.8;
    r.detail = "defect " + fmt(dn) + ", linearity " + fmt(linres) + ", scalar err " + fmt(scalar_err) + ", dt order "
               + fmt(order);
    return r;
}

TransformedSolution synthetic_state(Harness& h, double amp)
{
    const Grid2D& g = h.grid;
    const int nt = h.ctx->steps();
    TransformedSolution X = h.solver->zero_solution();
    for (int n = 0; n <= nt; ++n) {
        const double t = (n % nt) * h.ctx->dt();
        const double c = std::cos(2.0 * M_PI * t / kT), s = std::sin(2.0 * M_PI * t / kT);
        for (int i = 0; i <= g.nx; ++i)
            for (int k = 0; k < g.nz; ++k)
                X.velocity[n].u_at(i, k) = amp * c * std::sin(M_PI * g.xf(i) / kL) * std::sin(M_PI * g.zc(k));
        for (int i = 0; i < g.nx; ++i)
            for (int k = 0; k <= g.nz; ++k)
                X.velocity[n].w_at(i, k) = amp * s * std::sin(M_PI * g.xc(i) / kL) * std::sin(M_PI * g.zf(k));
        for (int i = 0; i < g.nx; ++i)
            for (int k = 0; k < g.nz; ++k)
                X.pressure[n][g.cidx(i, k)] = amp * c * std::cos(M_PI * g.xc(i) / kL) * g.zc(k);
        for (int i = 0; i < g.nx; ++i) {
            const double x = g.xc(i);
            const double sh = x * x * (kL - x) * (kL - x) / (kL * kL);
            X.eta[n][i] = amp * s * sh;
            X.eta_t[n][i] = amp * (2.0 * M_PI / kT) * c * sh;
        }
    }
    return X;
}

CheckResult criterion_nonlinear_terms(Harness& h)
{
    std::vector<double> ratio;
    for (double eps : {1e-1, 1e-2, 1e-3}) {
        TransformedSolution X = synthetic_state(h, eps);
        NonlinearEvaluation t = h.solver->evaluate_terms(X);
        double s = 0.0;
        for (int n = 0; n < h.ctx->steps(); ++n) {
            s = std::max(s, norm(t.G[n]));
            s = std::max(s, norm(t.w[n]));
            s = std::max(s, norm(t.Psi[n]));
            for (double v : t.Theta[n])
                s = std::max(s, std::abs(v));
        }
        ratio.push_back(s / (eps * eps));
    }
    const double drift1 = std::abs(ratio[1] - ratio[0]) / ratio[0];
    const double drift2 = std::abs(ratio[2] - ratio[1]) / ratio[1];

    // paired-sample Lipschitz estimate
    TransformedSolution X1 = synthetic_state(h, 0.05);
    TransformedSolution X2 = synthetic_state(h, 0.04);
    NonlinearEvaluation t1 = h.solver->evaluate_terms(X1);
    NonlinearEvaluation t2 = h.solver->evaluate_terms(X2);
    double dnum = 0.0;
    for (int n = 0; n < h.ctx->steps(); ++n) {
        VectorField dg = t1.G[n];
        axpy(-1.0, t2.G[n], dg);
        dnum = std::max(dnum, norm(dg));
    }
    const double lip = dnum / h.solver->diff_norm(X1, X2);

    CheckResult r;
    r.name = "nonlinear terms: quadratic scaling stable to 20%, Lipschitz finite";
    r.pass = drift1 <= 0.2 && drift2 <= 0.2 && std::isfinite(lip) && lip > 0.0;
    r.detail = "ratio drift " + fmt(drift1) + " / " + fmt(drift2) + ", empirical Lipschitz " + fmt(lip);
    return r;
}

CheckResult criterion_nonlinear_solve(Harness& h, NonlinearSolver::Result& out_sol, PeriodicForcing& out_forcing)
{
    const Grid2D& g = h.grid;
    NonlinearSolveOptions opt;
    opt.picard_tol = 1e-8;

    PeriodicForcing fz;
    fz.period_T = kT;
    fz.profile1.assign(g.nz, 0.0);
    fz.profile2.assign(g.nz, 0.0);
    auto rz = h.solver->solve_periodic_fsi(fz, opt);
    const bool zero_ok = rz.diagnostics.iterations <= 1 && h.solver->solution_norm(rz.solution) == 0.0;

    PeriodicForcing f1 = outflow_forcing(g, 1e-3);
    auto r1 = h.solver->solve_periodic_fsi(f1, opt);
    bool geo = r1.diagnostics.converged;
    const auto& rates = r1.diagnostics.rates;
    for (std::size_t i = rates.size() >= 3 ? rates.size() - 3 : 0; i < rates.size(); ++i)
        geo = geo && rates[i] < 0.9;
    double min_ope = 1e300;
    for (const auto& eta : r1.solution.eta)
        for (double v : eta.v)
            min_ope = std::min(min_ope, 1.0 + v);

    PeriodicForcing f2 = outflow_forcing(g, 2e-3);
    auto r2 = h.solver->solve_periodic_fsi(f2, opt);
    TransformedSolution two_y = r1.solution;
    for (std::size_t n = 0; n < two_y.velocity.size(); ++n) {
        scale(two_y.velocity[n], 2.0);
        scale(two_y.pressure[n], 2.0);
        scale(two_y.eta[n], 2.0);
        scale(two_y.eta_t[n], 2.0);
    }
    const double yn = h.solver->solution_norm(r1.solution);
    const double doubling = h.solver->diff_norm(r2.solution, two_y) / yn;

    // halving the amplitude must shrink the doubling ratio
    PeriodicForcing fh = outflow_forcing(g, 5e-4);
    auto rh = h.solver->solve_periodic_fsi(fh, opt);
    TransformedSolution two_h = rh.solution;
    for (std::size_t n = 0; n < two_h.velocity.size(); ++n) {
        scale(two_h.velocity[n], 2.0);
        scale(two_h.pressure[n], 2.0);
        scale(two_h.eta[n], 2.0);
        scale(two_h.eta_t[n], 2.0);
    }
    const double doubling_half = h.solver->diff_norm(r1.solution, two_h) / h.solver->solution_norm(rh.solution);

    out_sol = std::move(r1);
    out_forcing = f1;
    CheckResult r;
    r.name = "nonlinear periodic solve (decay, defect, domain bound, doubling, zero)";
    r.pass = zero_ok && geo && out_sol.solution.periodicity_defect <= 1e-7 && min_ope > 0.5 && doubling <= 0.1
             && doubling_half < doubling;
    r.detail = std::to_string(out_sol.diagnostics.iterations) + " iterations, defect "
               + fmt(out_sol.solution.periodicity_defect) + ", min(1+eta) " + fmt(min_ope) + ", doubling "
               + fmt(doubling) + " -> " + fmt(doubling_half) + " at eps/2";
    return r;
}

CheckResult criterion_interface(Harness& h, const NonlinearSolver::Result& sol, const PeriodicForcing& forcing)
{
    auto res = h.solver->system_residual(sol.solution, forcing);

    // benchmark the residual level with the linear solution of the same data
    PeriodicTrajectory lin = h.ctx->solve_periodic_linear_fsi(forcing);
    auto res_lin = h.solver->system_residual(lin, forcing);

    CheckResult r;
    r.name = "interface condition and transformed-system residual";
    const double tol_extra = 10.0 * 1e-8;
    r.pass = res.interface <= 1e-6 && res.momentum <= 2.0 * res_lin.momentum + tol_extra
             && res.beam <= 2.0 * res_lin.beam + tol_extra
             && res.mass <= 2.0 * res_lin.mass + 1e-10;
    r.detail = "interface " + fmt(res.interface) + ", momentum " + fmt(res.momentum) + " (linear "
               + fmt(res_lin.momentum) + "), beam " + fmt(res.beam) + " (linear " + fmt(res_lin.beam) + ")";
    return r;
}

} // namespace

std::vector<CheckResult> run_acceptance_suite(std::ostream& out, unsigned seed)
{
    std::vector<CheckResult> results;
    auto emit = [&](CheckResult r) {
        out << "[" << std::setw(2) << results.size() + 1 << "] " << (r.pass ? "PASS" : "FAIL") << "  " << r.name
            << "\n     " << r.detail << "\n";
        out.flush();
        results.push_back(std::move(r));
    };

    emit(criterion_leray(seed));
    emit(criterion_stokes_convergence());
    emit(criterion_liftings());
    emit(criterion_projection_equivalence(seed));

    Harness h;
    emit(criterion_spectrum(h));
    emit(criterion_monodromy(h));
    emit(criterion_periodic_linear(h));
    emit(criterion_nonlinear_terms(h));

    NonlinearSolver::Result sol;
    PeriodicForcing forcing;
    emit(criterion_nonlinear_solve(h, sol, forcing));
    emit(criterion_interface(h, sol, forcing));
    return results;
}

bool all_passed(const std::vector<CheckResult>& results)
{
    for (const auto& r : results)
        if (!r.pass)
            return false;
    return true;
}

} // namespace fsi
