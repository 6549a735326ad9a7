#include "fsi/coupled.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "fsi/errors.hpp"
#include "fsi/operators.hpp"

namespace fsi {

CoupledOperator::CoupledOperator(const Grid2D& g, const BeamParams& params) : grid_(&g)
{
    params.validate();
    beam_ = std::make_shared<BeamOperator>(g, params);
    stokes_ = std::make_shared<StokesSolver>(g, params.nu);
    ma_ = stokes_->added_mass_matrix();
    Mat id_ma = ma_;
    for (int i = 0; i < id_ma.rows; ++i)
        id_ma(i, i) += 1.0;
    id_plus_ma_.factor(id_ma);
}

BeamField CoupledOperator::added_mass_solve(const BeamField& b) const
{
    BeamField x(*grid_);
    x.v = b.v;
    id_plus_ma_.solve(x.v);
    return x;
}

BeamField CoupledOperator::apply_added_mass_plus_identity(const BeamField& b) const
{
    BeamField x(*grid_);
    mat_vec(ma_, b.v, x.v);
    axpy(1.0, b, x);
    return x;
}

double CoupledOperator::state_inner(const CoupledState& a, const CoupledState& b) const
{
    const BeamField wb = apply_added_mass_plus_identity(b.eta_t);
    return inner(a.pv, b.pv) + beam_->h20_inner(a.eta, b.eta) + inner(a.eta_t, wb);
}

double CoupledOperator::state_norm(const CoupledState& a) const { return std::sqrt(state_inner(a, a)); }

CoupledState CoupledOperator::apply(const CoupledState& s) const
{
    CoupledState out(*grid_);
    // row 1: A_s (Pi v - Pi L1(eta_t)), the lifted-corrected viscous term
    StokesSolution l1 = stokes_->solve_mixed(0.0, nullptr, &s.eta_t, nullptr);
    VectorField y = s.pv;
    axpy(-1.0, leray().project_velocity(l1.vel), y);
    out.pv = stokes_->apply_As(y);
    // row 2
    out.eta = s.eta_t;
    // row 3: (I + M_a)^{-1} (trace N_v(Pi v) + A eta + gamma Ds eta_t)
    BeamField load = gamma_s_trace_cell(stokes_->nv_operator(s.pv));
    axpy(1.0, beam_->apply_A(s.eta), load);
    BeamField damped = beam_->apply_Ds(s.eta_t);
    axpy(beam_->params().gamma, damped, load);
    out.eta_t = added_mass_solve(load);
    return out;
}

const SaddleSystem& CoupledOperator::step_context(double dt, double theta) const
{
    auto key = std::make_pair(dt, theta);
    auto it = steps_.find(key);
    if (it == steps_.end()) {
        SaddleSpec spec;
        spec.mode = SaddleSpec::Mode::Coupled;
        spec.am = 1.0 / dt;
        spec.av = theta * beam_->params().nu;
        spec.nu = beam_->params().nu;
        spec.kin_eta = 1.0;
        spec.kin_etat = -dt * theta;
        spec.beam_mass = 1.0 / dt;
        spec.beam_scale = theta;
        spec.trace_nu = theta * beam_->params().nu;
        spec.beam = beam_.get();
        it = steps_.emplace(key, std::make_unique<SaddleSystem>(*grid_, spec)).first;
    }
    return *it->second;
}

const SaddleSystem& CoupledOperator::resolvent_context(double lambda) const
{
    auto it = resolvents_.find(lambda);
    if (it == resolvents_.end()) {
        SaddleSpec spec;
        spec.mode = SaddleSpec::Mode::Coupled;
        spec.am = lambda;
        spec.av = beam_->params().nu;
        spec.nu = beam_->params().nu;
        spec.kin_eta = lambda;
        spec.kin_etat = -1.0;
        spec.beam_mass = lambda;
        spec.beam_scale = 1.0;
        spec.trace_nu = beam_->params().nu;
        spec.beam = beam_.get();
        it = resolvents_.emplace(lambda, std::make_unique<SaddleSystem>(*grid_, spec)).first;
    }
    return *it->second;
}

CoupledOperator::March CoupledOperator::start_march(const CoupledState& s) const
{
    March m;
    m.v = stokes_->velocity_from_state(s.pv, s.eta_t);
    m.eta = s.eta;
    m.eta_t = s.eta_t;
    return m;
}

void CoupledOperator::advance(March& m, double dt, double theta, const EvolutionRHS& rhs_n,
                              const EvolutionRHS& rhs_np1) const
{
    const Grid2D& g = *grid_;
    const SaddleSystem& sys = step_context(dt, theta);
    const double nu = beam_->params().nu;
    const double gam = beam_->params().gamma;

    VectorField fm(g);
    if (theta < 1.0) {
        fm = apply_velocity_laplacian(m.v);
        scale(fm, (1.0 - theta) * nu);
    }
    axpy(1.0 / dt, m.v, fm);
    axpy(theta, rhs_np1.pf, fm);
    axpy(1.0 - theta, rhs_n.pf, fm);

    BeamField kin = m.eta;
    axpy(dt * (1.0 - theta), m.eta_t, kin);

    BeamField brhs(g);
    axpy(1.0 / dt, m.eta_t, brhs);
    if (theta < 1.0) {
        BeamField expl = beam_->apply_A(m.eta);
        BeamField ds = beam_->apply_Ds(m.eta_t);
        axpy(gam, ds, expl);
        // explicit part of the interface shear, (eta_t - w(nz-1))/dz at level n
        for (int i = 0; i < g.nx; ++i)
            expl[i] -= nu * (m.eta_t[i] - m.v.w_at(i, g.nz - 1)) / g.dz;
        axpy(1.0 - theta, expl, brhs);
    }
    BeamField hl1 = apply_added_mass_plus_identity(rhs_np1.beam_load);
    BeamField hl0 = apply_added_mass_plus_identity(rhs_n.beam_load);
    axpy(theta, hl1, brhs);
    axpy(1.0 - theta, hl0, brhs);

    auto b = sys.zero_rhs();
    sys.set_forcing(b, fm);
    sys.set_kinematic_rhs(b, kin);
    sys.set_beam_rhs(b, brhs);
    sys.solve(b);
    ScalarField pres;
    sys.extract(b, m.v, pres);
    sys.extract_beam(b, m.eta, m.eta_t);
}

CoupledState CoupledOperator::finish_march(const March& m) const
{
    CoupledState s(*grid_);
    s.pv = leray().project_velocity(m.v);
    s.eta = m.eta;
    s.eta_t = m.eta_t;
    return s;
}

CoupledState CoupledOperator::step_semigroup(const CoupledState& s, double dt, const EvolutionRHS& rhs_n,
                                             const EvolutionRHS& rhs_np1, double theta) const
{
    March m = start_march(s);
    advance(m, dt, theta, rhs_n, rhs_np1);
    return finish_march(m);
}

int CoupledOperator::state_size() const
{
    return grid_->num_xfaces() + grid_->num_zfaces() + 2 * grid_->num_beam_nodes();
}

void CoupledOperator::pack(const CoupledState& s, VecD& x) const
{
    const Grid2D& g = *grid_;
    x.resize(state_size());
    std::size_t off = 0;
    std::copy(s.pv.u.begin(), s.pv.u.end(), x.begin() + off);
    off += s.pv.u.size();
    std::copy(s.pv.w.begin(), s.pv.w.end(), x.begin() + off);
    off += s.pv.w.size();
    std::copy(s.eta.v.begin(), s.eta.v.end(), x.begin() + off);
    off += g.num_beam_nodes();
    std::copy(s.eta_t.v.begin(), s.eta_t.v.end(), x.begin() + off);
}

void CoupledOperator::unpack(const VecD& x, CoupledState& s) const
{
    const Grid2D& g = *grid_;
    s = CoupledState(g);
    std::size_t off = 0;
    std::copy(x.begin(), x.begin() + s.pv.u.size(), s.pv.u.begin());
    off += s.pv.u.size();
    std::copy(x.begin() + off, x.begin() + off + s.pv.w.size(), s.pv.w.begin());
    off += s.pv.w.size();
    std::copy(x.begin() + off, x.begin() + off + g.num_beam_nodes(), s.eta.v.begin());
    off += g.num_beam_nodes();
    std::copy(x.begin() + off, x.begin() + off + g.num_beam_nodes(), s.eta_t.v.begin());
}

double CoupledOperator::packed_inner(const VecD& a, const VecD& b) const
{
    CoupledState sa, sb;
    unpack(a, sa);
    unpack(b, sb);
    return state_inner(sa, sb);
}

CoupledState CoupledOperator::random_state(unsigned seed) const
{
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    CoupledState s(*grid_);
    for (auto& v : s.pv.u)
        v = dist(rng);
    for (auto& v : s.pv.w)
        v = dist(rng);
    for (auto& v : s.eta.v)
        v = dist(rng);
    for (auto& v : s.eta_t.v)
        v = dist(rng);
    s.pv = leray().project_velocity(s.pv);
    return s;
}

CoupledState CoupledOperator::resolvent_solve(double lambda, const CoupledState& f) const
{
    const SaddleSystem& sys = resolvent_context(lambda);
    auto rhs = sys.zero_rhs();
    sys.set_forcing(rhs, f.pv);
    sys.set_kinematic_rhs(rhs, f.eta);
    sys.set_beam_rhs(rhs, apply_added_mass_plus_identity(f.eta_t));
    sys.solve(rhs);
    VectorField vel;
    ScalarField pres;
    sys.extract(rhs, vel, pres);
    CoupledState out(*grid_);
    sys.extract_beam(rhs, out.eta, out.eta_t);
    out.pv = leray().project_velocity(vel);
    return out;
}

SpectrumReport CoupledOperator::rightmost_eigenvalues(int k, int arnoldi_m, unsigned seed) const
{
    SpectrumReport rep;
    const int n = state_size();
    if (arnoldi_m <= 0)
        arnoldi_m = std::min(n, std::max(6 * k, 60));

    CoupledState s0 = random_state(seed);
    VecD start;
    pack(s0, start);

    // B = (0 - A)^{-1} = -A^{-1}; Arnoldi picks up the eigenvalues of A
    // closest to zero, which are the rightmost ones here
    auto apply_inv = [&](const VecD& xin, VecD& xout) {
        CoupledState sin_;
        unpack(xin, sin_);
        CoupledState sout = resolvent_solve(0.0, sin_);
        pack(sout, xout);
    };
    auto ip = [&](const VecD& a, const VecD& b) { return packed_inner(a, b); };

    ArnoldiData ar = arnoldi(apply_inv, start, arnoldi_m, ip);
    const int m = ar.m;
    std::vector<cplx> hm(static_cast<std::size_t>(m) * m);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
            hm[static_cast<std::size_t>(i) * m + j] = ar.H[static_cast<std::size_t>(i) * arnoldi_m + j];
    std::vector<cplx> theta = hessenberg_eigenvalues(hm, m);

    struct Cand {
        cplx lambda;
        cplx theta;
        std::vector<cplx> y;
    };
    std::vector<Cand> cands;
    for (auto& th : theta) {
        if (std::abs(th) < 1e-13)
            continue;
        cands.push_back({-1.0 / th, th, hessenberg_eigenvector(hm, m, th)});
    }
    std::sort(cands.begin(), cands.end(), [](const Cand& a, const Cand& b) {
        if (a.lambda.real() != b.lambda.real())
            return a.lambda.real() > b.lambda.real();
        return a.lambda.imag() > b.lambda.imag();
    });

    for (auto& c : cands) {
        if (static_cast<int>(rep.pairs.size()) >= k)
            break;
        // assemble the complex Ritz vector
        VecD xre(n, 0.0), xim(n, 0.0);
        for (int j = 0; j < m; ++j)
            for (int i = 0; i < n; ++i) {
                xre[i] += c.y[j].real() * ar.basis[j][i];
                xim[i] += c.y[j].imag() * ar.basis[j][i];
            }
        // honest Ritz residual ||B x - theta x||_H / ||x||_H
        VecD bre(n), bim(n);
        apply_inv(xre, bre);
        apply_inv(xim, bim);
        for (int i = 0; i < n; ++i) {
            const cplx bx(bre[i], bim[i]);
            const cplx tx = c.theta * cplx(xre[i], xim[i]);
            bre[i] = bx.real() - tx.real();
            bim[i] = bx.imag() - tx.imag();
        }
        const double xn = std::sqrt(packed_inner(xre, xre) + packed_inner(xim, xim));
        const double rn = std::sqrt(packed_inner(bre, bre) + packed_inner(bim, bim));
        EigenPair p;
        p.lambda = c.lambda;
        p.ritz_residual = (xn > 0.0) ? rn / (xn * std::abs(c.theta)) : rn;
        if (p.ritz_residual > 1e-6)
            continue; // unconverged Ritz value, not a trustworthy eigenvalue

        CoupledState re, im;
        unpack(xre, re);
        unpack(xim, im);
        VectorField ur = stokes_->velocity_from_state(re.pv, re.eta_t);
        VectorField ui = stokes_->velocity_from_state(im.pv, im.eta_t);
        // fluid mass over the momentum rows: the interface w-faces carry
        // the constraint, not an equation, so they do not enter
        double u2 = inner(ur, ur) + inner(ui, ui);
        for (int i = 0; i < grid_->nx; ++i) {
            const double wr = ur.w_at(i, grid_->nz), wi = ui.w_at(i, grid_->nz);
            u2 -= 0.5 * grid_->dx * grid_->dz * (wr * wr + wi * wi);
        }
        const double e2 = inner(re.eta_t, re.eta_t) + inner(im.eta_t, im.eta_t);
        const double bend = beam_->params().beta * (beam_->grad_energy(re.eta) + beam_->grad_energy(im.eta))
                            + beam_->params().alpha * (beam_->bend_energy(re.eta) + beam_->bend_energy(im.eta));
        const double grad_u = velocity_grad_energy(ur) + velocity_grad_energy(ui);
        const double grad_e2 = beam_->grad_energy(re.eta_t) + beam_->grad_energy(im.eta_t);
        const cplx lhs = p.lambda * (u2 + e2) + std::conj(p.lambda) * bend + beam_->params().nu * grad_u
                         + beam_->params().gamma * grad_e2;
        const double scale_terms = std::abs(p.lambda) * (u2 + e2 + bend) + beam_->params().nu * grad_u
                                   + beam_->params().gamma * grad_e2;
        p.energy_residual = std::abs(lhs) / (scale_terms > 0.0 ? scale_terms : 1.0);
        rep.pairs.push_back(std::move(p));
    }
    rep.sigma_min = smallest_singular_value();
    return rep;
}

double CoupledOperator::smallest_singular_value(int iterations, unsigned seed) const
{
    const SaddleSystem& sys = resolvent_context(0.0);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    std::vector<double> x(sys.size());
    for (auto& v : x)
        v = dist(rng);
    double rho = 0.0; // dominant eigenvalue of (M^T M)^{-1} = 1/sigma_min^2
    for (int it = 0; it < iterations; ++it) {
        double nn = 0.0;
        for (double v : x)
            nn += v * v;
        nn = std::sqrt(nn);
        for (auto& v : x)
            v /= nn;
        sys.solve_raw_transposed(x);
        sys.solve_raw(x);
        rho = 0.0;
        for (double v : x)
            rho += v * v;
        rho = std::sqrt(rho);
    }
    return 1.0 / std::sqrt(rho);
}

} // namespace fsi
