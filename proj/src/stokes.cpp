#include "fsi/stokes.hpp"

#include <cmath>

#include "fsi/errors.hpp"
#include "fsi/krylov.hpp"
#include "fsi/operators.hpp"

namespace fsi {

StokesSolver::StokesSolver(const Grid2D& g, double nu, std::shared_ptr<LerayProjector> leray)
    : grid_(&g), nu_(nu), leray_(std::move(leray))
{
    if (!(nu > 0.0))
        throw std::invalid_argument("StokesSolver: nu must be positive");
    if (!leray_)
        leray_ = std::make_shared<LerayProjector>(g);
}

const SaddleSystem& StokesSolver::steady_context(double lambda) const
{
    auto it = steady_.find(lambda);
    if (it == steady_.end()) {
        SaddleSpec spec;
        spec.mode = SaddleSpec::Mode::Mixed;
        spec.am = lambda;
        spec.av = nu_;
        spec.nu = nu_;
        it = steady_.emplace(lambda, std::make_unique<SaddleSystem>(*grid_, spec)).first;
    }
    return *it->second;
}

StokesSolution StokesSolver::solve_mixed(double lambda, const VectorField* f, const BeamField* g,
                                         const std::vector<double>* omega) const
{
    const SaddleSystem& sys = steady_context(lambda);
    auto rhs = sys.zero_rhs();
    if (f)
        sys.set_forcing(rhs, *f);
    if (g)
        sys.set_top(rhs, *g);
    if (omega)
        sys.set_inflow(rhs, *omega);
    sys.solve(rhs);
    StokesSolution out;
    sys.extract(rhs, out.vel, out.pres);
    out.div_residual = norm(divergence(out.vel));
    return out;
}

StokesSolution StokesSolver::solve_dirichlet(const Grid2D& gd, const std::vector<double>& top,
                                             const std::vector<double>& left) const
{
    SaddleSpec spec;
    spec.mode = SaddleSpec::Mode::Dirichlet;
    spec.am = 0.0;
    spec.av = nu_;
    spec.nu = nu_;
    SaddleSystem* sys = nullptr;
    if (&gd == grid_) {
        if (!dirichlet_sys_)
            dirichlet_sys_ = std::make_unique<SaddleSystem>(gd, spec);
        sys = dirichlet_sys_.get();
    } else {
        if (!doubled_sys_)
            doubled_sys_ = std::make_unique<SaddleSystem>(gd, spec);
        sys = doubled_sys_.get();
    }
    auto rhs = sys->zero_rhs();
    BeamField topf(gd);
    topf.v = top;
    sys->set_top(rhs, topf);
    sys->set_inflow(rhs, left);
    sys->solve(rhs);
    StokesSolution out;
    sys->extract(rhs, out.vel, out.pres);
    out.div_residual = norm(divergence(out.vel));
    return out;
}

StokesSolution StokesSolver::lift_gamma_s(const BeamField& g, double* midline_defect) const
{
    const Grid2D& gr = *grid_;
    if (!doubled_grid_)
        doubled_grid_ = std::make_unique<Grid2D>(2 * gr.nx, gr.nz, 2.0 * gr.length_L);
    const Grid2D& gd = *doubled_grid_;
    const int nx = gr.nx, nz = gr.nz;
    // odd reflection of the datum: ghat(2L - x) = -g(x); exact zero mean
    std::vector<double> ghat(2 * nx, 0.0);
    for (int i = 0; i < nx; ++i) {
        ghat[i] = g[i];
        ghat[2 * nx - 1 - i] = -g[i];
    }
    StokesSolution big = solve_dirichlet(gd, ghat, std::vector<double>(nz, 0.0));
    if (midline_defect) {
        // u2 of the raw doubled solution at the midline x = L: the average
        // of the two straddling z-face columns
        double m = 0.0;
        for (int k = 0; k <= nz; ++k)
            m = std::max(m, 0.5 * std::abs(big.vel.w_at(nx - 1, k) + big.vel.w_at(nx, k)));
        *midline_defect = m;
    }
    // average with the mirrored solution diag(1,-1) v(2L-x,z), pressure odd
    StokesSolution out;
    out.vel = VectorField(gr);
    out.pres = ScalarField(gr, Stag::Center);
    for (int i = 0; i <= nx; ++i)
        for (int k = 0; k < nz; ++k)
            out.vel.u_at(i, k) = 0.5 * (big.vel.u_at(i, k) + big.vel.u_at(2 * nx - i, k));
    for (int i = 0; i < nx; ++i)
        for (int k = 0; k <= nz; ++k)
            out.vel.w_at(i, k) = 0.5 * (big.vel.w_at(i, k) - big.vel.w_at(2 * nx - 1 - i, k));
    for (int i = 0; i < nx; ++i)
        for (int k = 0; k < nz; ++k)
            out.pres[gr.cidx(i, k)] = 0.5 * (big.pres[gd.cidx(i, k)] - big.pres[gd.cidx(2 * nx - 1 - i, k)]);
    out.div_residual = norm(divergence(out.vel));
    return out;
}

double StokesSolver::inflow_flux(const std::vector<double>& omega) const
{
    // omega is the u1 profile; the outward normal on Gamma_i is -e1
    double s = 0.0;
    for (int k = 0; k < grid_->nz; ++k)
        s += omega[k];
    return -s * grid_->dz;
}

BeamField StokesSolver::corrector_profile(const std::vector<double>& omega) const
{
    const Grid2D& g = *grid_;
    BeamField wm(g);
    const double flux = inflow_flux(omega);
    if (flux == 0.0)
        return wm;
    double phi_sum = 0.0;
    std::vector<double> phi(g.nx);
    for (int i = 0; i < g.nx; ++i) {
        const double x = g.xc(i);
        phi[i] = std::pow(x * (g.length_L - x), 4);
        phi_sum += phi[i] * g.dx;
    }
    for (int i = 0; i < g.nx; ++i)
        wm[i] = -phi[i] / phi_sum * flux;
    return wm;
}

StokesSolution StokesSolver::lift_gamma_i(const std::vector<double>& omega) const
{
    const BeamField wm = corrector_profile(omega);
    StokesSolution v = solve_dirichlet(*grid_, wm.v, omega);
    double corr = 0.0;
    for (double x : wm.v)
        corr = std::max(corr, std::abs(x));
    if (corr > 0.0) {
        StokesSolution phi_s = lift_gamma_s(wm);
        axpy(-1.0, phi_s.vel, v.vel);
        axpy(-1.0, phi_s.pres, v.pres);
    }
    v.div_residual = norm(divergence(v.vel));
    return v;
}

ScalarField StokesSolver::lift_gamma_o(const std::vector<double>& theta) const
{
    MixedBC bc(*grid_);
    bc.dirichlet_right = theta;
    return leray_->mixed_context().solve(nullptr, bc);
}

ScalarField StokesSolver::ns_operator(const BeamField& g) const
{
    MixedBC bc(*grid_);
    bc.gn_top = g.v;
    return leray_->mixed_context().solve(nullptr, bc);
}

BeamField StokesSolver::ns_trace(const BeamField& g) const { return gamma_s_trace_cell(ns_operator(g)); }

VectorField StokesSolver::velocity_from_state(const VectorField& pv, const BeamField& g) const
{
    const ScalarField ns = ns_operator(g);
    MixedBC bc(*grid_);
    bc.gn_top = g.v;
    VectorField grad_ns = leray_->grad_mixed_potential(ns, bc);
    VectorField out = pv;
    axpy(1.0, grad_ns, out);
    return out;
}

ScalarField StokesSolver::nv_operator(const VectorField& pv) const
{
    const Grid2D& g = *grid_;
    const double dx2 = g.dx * g.dx, dz2 = g.dz * g.dz;
    MixedBC bc(g);
    // one-sided second-order evaluation of nu*Lap(pv).n on each Gamma_d face
    for (int k = 0; k < g.nz; ++k) {
        // Gamma_i, n = -e1: -(u_xx + u_zz) at the inflow face
        const double uxx = (2.0 * pv.u_at(0, k) - 5.0 * pv.u_at(1, k) + 4.0 * pv.u_at(2, k) - pv.u_at(3, k)) / dx2;
        const double um = (k > 0) ? pv.u_at(0, k - 1) : -pv.u_at(0, 0);
        const double up = (k < g.nz - 1) ? pv.u_at(0, k + 1) : -pv.u_at(0, g.nz - 1);
        const double uzz = (um - 2.0 * pv.u_at(0, k) + up) / dz2;
        bc.gn_left[k] = -nu_ * (uxx + uzz);
    }
    for (int i = 0; i < g.nx; ++i) {
        auto wv = [&](int ii, int kk) -> double {
            if (ii < 0)
                return -pv.w_at(0, kk);
            if (ii >= g.nx)
                return -pv.w_at(g.nx - 1, kk);
            return pv.w_at(ii, kk);
        };
        // Gamma_b, n = -e2
        double wzz = (2.0 * wv(i, 0) - 5.0 * wv(i, 1) + 4.0 * wv(i, 2) - wv(i, 3)) / dz2;
        double wxx = (wv(i - 1, 0) - 2.0 * wv(i, 0) + wv(i + 1, 0)) / dx2;
        bc.gn_bottom[i] = -nu_ * (wxx + wzz);
        // Gamma_s, n = +e2
        wzz = (2.0 * wv(i, g.nz) - 5.0 * wv(i, g.nz - 1) + 4.0 * wv(i, g.nz - 2) - wv(i, g.nz - 3)) / dz2;
        wxx = (wv(i - 1, g.nz) - 2.0 * wv(i, g.nz) + wv(i + 1, g.nz)) / dx2;
        bc.gn_top[i] = nu_ * (wxx + wzz);
    }
    return leray_->mixed_context().solve(nullptr, bc);
}

Mat StokesSolver::added_mass_matrix() const
{
    const int nb = grid_->num_beam_nodes();
    Mat m(nb, nb);
    BeamField e(*grid_);
    for (int j = 0; j < nb; ++j) {
        std::fill(e.v.begin(), e.v.end(), 0.0);
        e[j] = 1.0;
        const BeamField col = ns_trace(e);
        for (int i = 0; i < nb; ++i)
            m(i, j) = col[i];
    }
    return m;
}

VectorField StokesSolver::apply_As(const VectorField& y) const
{
    VectorField lap = apply_velocity_laplacian(y);
    VectorField out = leray_->project_velocity(lap);
    scale(out, nu_);
    return out;
}

namespace {

void pack(const Grid2D& g, const VectorField& v, VecD& x)
{
    x.resize(g.num_xfaces() + g.num_zfaces());
    std::copy(v.u.begin(), v.u.end(), x.begin());
    std::copy(v.w.begin(), v.w.end(), x.begin() + g.num_xfaces());
}

void unpack(const Grid2D& g, const VecD& x, VectorField& v)
{
    v = VectorField(g);
    std::copy(x.begin(), x.begin() + g.num_xfaces(), v.u.begin());
    std::copy(x.begin() + g.num_xfaces(), x.end(), v.w.begin());
}

} // namespace

StokesSolution StokesSolver::solve_projected(double lambda, const VectorField* f, const BeamField* g,
                                             int* cg_iters) const
{
    const Grid2D& gr = *grid_;
    BeamField gz(gr);
    if (g)
        gz = *g;
    // lifting and its projection
    StokesSolution l1 = solve_mixed(0.0, nullptr, &gz, nullptr);
    VectorField pl1 = leray_->project_velocity(l1.vel);
    // right-hand side Pi f - lambda Pi L1(g), unknown y = Pi u - Pi L1(g)
    VectorField b(gr);
    if (f)
        b = leray_->project_velocity(*f);
    axpy(-lambda, pl1, b);

    auto apply = [&](const VecD& xin, VecD& xout) {
        VectorField y;
        unpack(gr, xin, y);
        VectorField lap = apply_velocity_laplacian(y);
        VectorField py = leray_->project_velocity(lap);
        VectorField res = y;
        scale(res, lambda);
        axpy(-nu_, py, res);
        pack(gr, res, xout);
    };
    auto ip = [&](const VecD& a, const VecD& bb) {
        VectorField va, vb;
        unpack(gr, a, va);
        unpack(gr, bb, vb);
        return inner(va, vb);
    };
    VecD rhs, x(gr.num_xfaces() + gr.num_zfaces(), 0.0);
    pack(gr, b, rhs);
    KrylovResult kr = cg(apply, rhs, x, 1e-12, 4000, ip);
    if (!kr.converged)
        throw SolverError(FailureClass::SolverFailure, "projected Stokes solve did not converge", kr.res_history);
    if (cg_iters)
        *cg_iters = kr.iterations;
    VectorField y;
    unpack(gr, x, y);
    // pv = y + Pi L1(g); u = pv + grad N_s(g); p = -lambda N_s + N_v + N_p
    VectorField pv = y;
    axpy(1.0, pl1, pv);
    StokesSolution out;
    out.vel = velocity_from_state(pv, gz);
    out.pres = nv_operator(pv);
    ScalarField ns = ns_operator(gz);
    axpy(-lambda, ns, out.pres);
    if (f) {
        ScalarField np = leray_->np_operator(*f);
        axpy(1.0, np, out.pres);
    }
    out.div_residual = norm(divergence(out.vel));
    return out;
}

ProjectionEquivalenceReport StokesSolver::projection_equivalence(double lambda, const VectorField* f,
                                                                 const BeamField* g) const
{
    ProjectionEquivalenceReport rep;
    StokesSolution direct = solve_mixed(lambda, f, g, nullptr);
    StokesSolution proj = solve_projected(lambda, f, g, &rep.cg_iterations);
    VectorField dv = direct.vel;
    axpy(-1.0, proj.vel, dv);
    ScalarField dp = direct.pres;
    axpy(-1.0, proj.pres, dp);
    const double un = norm(direct.vel), pn = norm(direct.pres);
    rep.velocity_rel = (un > 0.0) ? norm(dv) / un : norm(dv);
    rep.pressure_rel = (pn > 0.0) ? norm(dp) / pn : norm(dp);
    return rep;
}

} // namespace fsi
