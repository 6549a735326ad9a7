#include "fsi/saddle.hpp"

#include <cmath>

#include "fsi/errors.hpp"

namespace fsi {

SaddleSystem::SaddleSystem(const Grid2D& g, const SaddleSpec& spec) : grid_(&g), spec_(spec)
{
    const int nz = g.nz;
    block_ = 3 * nz + 1 + (spec.mode == SaddleSpec::Mode::Coupled ? 2 : 0);
    n_ = nz + g.nx * block_;
    pin_ = spec_.am + 2.0 * spec_.av * (1.0 / (g.dx * g.dx) + 1.0 / (g.dz * g.dz));
    if (pin_ == 0.0)
        pin_ = 1.0;
    assemble();
}

int SaddleSystem::u_ix(int i, int k) const
{
    if (i == 0)
        return k;
    return grid_->nz + (i - 1) * block_ + (2 * grid_->nz + 1) + k;
}

int SaddleSystem::w_ix(int i, int k) const { return grid_->nz + i * block_ + k; }

int SaddleSystem::p_ix(int i, int k) const { return grid_->nz + i * block_ + (grid_->nz + 1) + k; }

int SaddleSystem::eta_ix(int i) const { return grid_->nz + i * block_ + 3 * grid_->nz + 1; }

int SaddleSystem::etat_ix(int i) const { return grid_->nz + i * block_ + 3 * grid_->nz + 2; }

void SaddleSystem::assemble()
{
    const Grid2D& g = *grid_;
    const int nx = g.nx, nz = g.nz;
    const double dx = g.dx, dz = g.dz;
    const double dx2 = dx * dx, dz2 = dz * dz;
    const double am = spec_.am, av = spec_.av;
    const bool coupled = spec_.mode == SaddleSpec::Mode::Coupled;
    const bool dirichlet = spec_.mode == SaddleSpec::Mode::Dirichlet;

    TripletMatrix t(n_);

    // pinned inflow column
    for (int k = 0; k < nz; ++k)
        t.add(u_ix(0, k), u_ix(0, k), pin_);

    // u momentum at faces i = 1..nx (i = nx pinned in Dirichlet mode)
    for (int i = 1; i <= nx; ++i)
        for (int k = 0; k < nz; ++k) {
            const int r = u_ix(i, k);
            if (i == nx && dirichlet) {
                t.add(r, r, pin_);
                continue;
            }
            double diag = am;
            if (i == nx) { // mirror ghost beyond Gamma_o
                t.add(r, u_ix(nx - 1, k), -2.0 * av / dx2);
                diag += 2.0 * av / dx2;
            } else {
                t.add(r, u_ix(i - 1, k), -av / dx2);
                t.add(r, u_ix(i + 1, k), -av / dx2);
                diag += 2.0 * av / dx2;
            }
            // z part with odd tangential ghosts at both walls
            if (k > 0)
                t.add(r, u_ix(i, k - 1), -av / dz2);
            if (k < nz - 1)
                t.add(r, u_ix(i, k + 1), -av / dz2);
            diag += ((k > 0 ? 1.0 : 2.0) + (k < nz - 1 ? 1.0 : 2.0)) * av / dz2;
            t.add(r, r, diag);
            // pressure gradient
            if (i == nx) { // odd pressure ghost, p = 0 trace on Gamma_o
                t.add(r, p_ix(nx - 1, k), -2.0 / dx);
            } else {
                t.add(r, p_ix(i, k), 1.0 / dx);
                t.add(r, p_ix(i - 1, k), -1.0 / dx);
            }
        }

    // w rows
    for (int i = 0; i < nx; ++i) {
        t.add(w_ix(i, 0), w_ix(i, 0), pin_); // bottom wall
        const int rtop = w_ix(i, nz);
        if (coupled) { // interface constraint w = eta_t
            t.add(rtop, rtop, pin_);
            t.add(rtop, etat_ix(i), -pin_);
        } else {
            t.add(rtop, rtop, pin_);
        }
        for (int k = 1; k < nz; ++k) {
            const int r = w_ix(i, k);
            double diag = am;
            // x part: odd ghosts at Gamma_i and Gamma_o
            if (i > 0)
                t.add(r, w_ix(i - 1, k), -av / dx2);
            if (i < nx - 1)
                t.add(r, w_ix(i + 1, k), -av / dx2);
            diag += ((i > 0 ? 1.0 : 2.0) + (i < nx - 1 ? 1.0 : 2.0)) * av / dx2;
            // z part: neighbours are unknowns (possibly pinned data rows)
            t.add(r, w_ix(i, k - 1), -av / dz2);
            t.add(r, w_ix(i, k + 1), -av / dz2);
            diag += 2.0 * av / dz2;
            t.add(r, r, diag);
            t.add(r, p_ix(i, k), 1.0 / dz);
            t.add(r, p_ix(i, k - 1), -1.0 / dz);
        }
    }

    // continuity per cell
    for (int i = 0; i < nx; ++i)
        for (int k = 0; k < nz; ++k) {
            const int r = p_ix(i, k);
            if (dirichlet && i == 0 && k == 0) {
                t.add(r, p_ix(0, 0), pin_); // pressure gauge
                continue;
            }
            t.add(r, u_ix(i + 1, k), 1.0 / dx);
            t.add(r, u_ix(i, k), -1.0 / dx);
            t.add(r, w_ix(i, k + 1), 1.0 / dz);
            t.add(r, w_ix(i, k), -1.0 / dz);
        }

    if (coupled) {
        const BeamOperator& beam = *spec_.beam;
        const Mat& A = beam.matrix_A();
        const Mat& Ds = beam.matrix_Ds();
        const double gam = beam.params().gamma;
        for (int i = 0; i < nx; ++i) {
            const int rk = eta_ix(i);
            t.add(rk, eta_ix(i), spec_.kin_eta);
            t.add(rk, etat_ix(i), spec_.kin_etat);

            const int rb = etat_ix(i);
            t.add(rb, etat_ix(i), spec_.beam_mass + spec_.trace_nu / dz);
            t.add(rb, w_ix(i, nz - 1), -spec_.trace_nu / dz);
            // note w(i,nz) = etat_i by the constraint row, so the interface
            // shear (w(i,nz) - w(i,nz-1))/dz is written on etat directly
            t.add(rb, p_ix(i, nz - 1), -1.0);
            for (int j = 0; j < nx; ++j) {
                const double aij = A(i, j);
                if (aij != 0.0)
                    t.add(rb, eta_ix(j), -spec_.beam_scale * aij);
                const double dij = Ds(i, j);
                if (dij != 0.0)
                    t.add(rb, etat_ix(j), -spec_.beam_scale * gam * dij);
            }
        }
    }

    lu_.assemble(t);
    lu_.factor();
}

std::vector<double> SaddleSystem::zero_rhs() const { return std::vector<double>(n_, 0.0); }

void SaddleSystem::set_inflow(std::vector<double>& rhs, const std::vector<double>& omega_u) const
{
    for (int k = 0; k < grid_->nz; ++k)
        rhs[u_ix(0, k)] = pin_ * omega_u[k];
}

void SaddleSystem::set_top(std::vector<double>& rhs, const BeamField& gdat) const
{
    for (int i = 0; i < grid_->nx; ++i)
        rhs[w_ix(i, grid_->nz)] = pin_ * gdat[i];
}

void SaddleSystem::set_right(std::vector<double>& rhs, const std::vector<double>& u_right) const
{
    for (int k = 0; k < grid_->nz; ++k)
        rhs[u_ix(grid_->nx, k)] = pin_ * u_right[k];
}

void SaddleSystem::set_forcing(std::vector<double>& rhs, const VectorField& f) const
{
    const Grid2D& g = *grid_;
    const bool dirichlet = spec_.mode == SaddleSpec::Mode::Dirichlet;
    const int iu_max = dirichlet ? g.nx - 1 : g.nx;
    for (int i = 1; i <= iu_max; ++i)
        for (int k = 0; k < g.nz; ++k)
            rhs[u_ix(i, k)] += f.u_at(i, k);
    for (int i = 0; i < g.nx; ++i)
        for (int k = 1; k < g.nz; ++k)
            rhs[w_ix(i, k)] += f.w_at(i, k);
}

void SaddleSystem::set_kinematic_rhs(std::vector<double>& rhs, const BeamField& r) const
{
    for (int i = 0; i < grid_->nx; ++i)
        rhs[eta_ix(i)] = r[i];
}

void SaddleSystem::set_beam_rhs(std::vector<double>& rhs, const BeamField& r) const
{
    for (int i = 0; i < grid_->nx; ++i)
        rhs[etat_ix(i)] = r[i];
}

void SaddleSystem::solve(std::vector<double>& rhs) const
{
    const std::vector<double> b = rhs;
    lu_.solve(rhs);
    double bn = 0.0;
    for (double v : b)
        bn += v * v;
    bn = std::sqrt(bn);
    if (bn == 0.0) {
        rhs.assign(n_, 0.0);
        return;
    }
    // one step of iterative refinement
    std::vector<double> r;
    lu_.apply(rhs, r);
    for (int i = 0; i < n_; ++i)
        r[i] = b[i] - r[i];
    lu_.solve(r);
    for (int i = 0; i < n_; ++i)
        rhs[i] += r[i];
    const double res = lu_.residual(rhs, b);
    if (res > 1e-9 * bn)
        throw SolverError(FailureClass::SolverFailure, "saddle system: direct solve residual too large", {res / bn});
}

void SaddleSystem::solve_raw(std::vector<double>& b) const { lu_.solve(b); }

void SaddleSystem::solve_raw_transposed(std::vector<double>& b) const { lu_.solve_transposed(b); }

void SaddleSystem::extract(const std::vector<double>& x, VectorField& vel, ScalarField& pres) const
{
    const Grid2D& g = *grid_;
    vel = VectorField(g);
    pres = ScalarField(g, Stag::Center);
    for (int i = 0; i <= g.nx; ++i)
        for (int k = 0; k < g.nz; ++k)
            vel.u_at(i, k) = x[u_ix(i, k)];
    for (int i = 0; i < g.nx; ++i)
        for (int k = 0; k <= g.nz; ++k)
            vel.w_at(i, k) = x[w_ix(i, k)];
    for (int i = 0; i < g.nx; ++i)
        for (int k = 0; k < g.nz; ++k)
            pres[g.cidx(i, k)] = x[p_ix(i, k)];
}

void SaddleSystem::extract_beam(const std::vector<double>& x, BeamField& eta, BeamField& etat) const
{
    const Grid2D& g = *grid_;
    eta = BeamField(g);
    etat = BeamField(g);
    for (int i = 0; i < g.nx; ++i) {
        eta[i] = x[eta_ix(i)];
        etat[i] = x[etat_ix(i)];
    }
}

} // namespace fsi
