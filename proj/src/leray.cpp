#include "fsi/leray.hpp"

#include "fsi/operators.hpp"

namespace fsi {

LerayProjector::LerayProjector(const Grid2D& g) : grid_(&g), pd_(g), pm_(g) {}

ScalarField LerayProjector::solve_poisson_dirichlet(const ScalarField& rhs) const { return pd_.solve(rhs); }

VectorField LerayProjector::grad_dirichlet_potential(const ScalarField& p) const
{
    const Grid2D& g = *grid_;
    VectorField out(g);
    for (int k = 0; k < g.nz; ++k) {
        out.u_at(0, k) = 2.0 * p[g.cidx(0, k)] / g.dx;
        for (int i = 1; i < g.nx; ++i)
            out.u_at(i, k) = (p[g.cidx(i, k)] - p[g.cidx(i - 1, k)]) / g.dx;
        out.u_at(g.nx, k) = -2.0 * p[g.cidx(g.nx - 1, k)] / g.dx;
    }
    for (int i = 0; i < g.nx; ++i) {
        out.w_at(i, 0) = 2.0 * p[g.cidx(i, 0)] / g.dz;
        for (int k = 1; k < g.nz; ++k)
            out.w_at(i, k) = (p[g.cidx(i, k)] - p[g.cidx(i, k - 1)]) / g.dz;
        out.w_at(i, g.nz) = -2.0 * p[g.cidx(i, g.nz - 1)] / g.dz;
    }
    return out;
}

VectorField LerayProjector::grad_mixed_potential(const ScalarField& q, const MixedBC& bc) const
{
    const Grid2D& g = *grid_;
    VectorField out(g);
    for (int k = 0; k < g.nz; ++k) {
        out.u_at(0, k) = -bc.gn_left[k]; // outward normal at the inflow is -e1
        for (int i = 1; i < g.nx; ++i)
            out.u_at(i, k) = (q[g.cidx(i, k)] - q[g.cidx(i - 1, k)]) / g.dx;
        out.u_at(g.nx, k) = (2.0 * bc.dirichlet_right[k] - 2.0 * q[g.cidx(g.nx - 1, k)]) / g.dx;
    }
    for (int i = 0; i < g.nx; ++i) {
        out.w_at(i, 0) = -bc.gn_bottom[i];
        for (int k = 1; k < g.nz; ++k)
            out.w_at(i, k) = (q[g.cidx(i, k)] - q[g.cidx(i, k - 1)]) / g.dz;
        out.w_at(i, g.nz) = bc.gn_top[i];
    }
    return out;
}

MixedBC LerayProjector::residual_flux(const VectorField& u, const VectorField& grad_pu) const
{
    const Grid2D& g = *grid_;
    MixedBC bc(g);
    for (int k = 0; k < g.nz; ++k)
        bc.gn_left[k] = -(u.u_at(0, k) - grad_pu.u_at(0, k));
    for (int i = 0; i < g.nx; ++i) {
        bc.gn_bottom[i] = -(u.w_at(i, 0) - grad_pu.w_at(i, 0));
        bc.gn_top[i] = u.w_at(i, g.nz) - grad_pu.w_at(i, g.nz);
    }
    return bc;
}

ScalarField LerayProjector::solve_harmonic_mixed(const VectorField& u, const ScalarField& pu) const
{
    const VectorField gp = grad_dirichlet_potential(pu);
    const MixedBC bc = residual_flux(u, gp);
    return pm_.solve(nullptr, bc);
}

LerayDecomposition LerayProjector::project(const VectorField& u) const
{
    const Grid2D& g = *grid_;
    LerayDecomposition d;
    d.pu = pd_.solve(divergence(u));
    const VectorField gp = grad_dirichlet_potential(d.pu);
    const MixedBC bc = residual_flux(u, gp);
    d.qu = pm_.solve(nullptr, bc);
    const VectorField gq = grad_mixed_potential(d.qu, bc);
    d.proj = u;
    axpy(-1.0, gp, d.proj);
    axpy(-1.0, gq, d.proj);
    // the Gamma_d normal faces cancel exactly by construction; pin them
    for (int k = 0; k < g.nz; ++k)
        d.proj.u_at(0, k) = 0.0;
    for (int i = 0; i < g.nx; ++i) {
        d.proj.w_at(i, 0) = 0.0;
        d.proj.w_at(i, g.nz) = 0.0;
    }
    return d;
}

VectorField LerayProjector::project_velocity(const VectorField& u) const { return project(u).proj; }

ScalarField LerayProjector::np_operator(const VectorField& f) const
{
    LerayDecomposition d = project(f);
    ScalarField p = d.pu;
    axpy(1.0, d.qu, p);
    return p;
}

} // namespace fsi
