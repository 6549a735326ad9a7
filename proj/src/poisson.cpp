#include "fsi/poisson.hpp"

#include <cmath>

#include "fsi/errors.hpp"

namespace fsi {

namespace {

constexpr double kDirectTol = 1e-11;

double vec_norm(const std::vector<double>& v)
{
    double s = 0.0;
    for (double x : v)
        s += x * x;
    return std::sqrt(s);
}

// conjugate gradients on the retained CSR copy
bool cg_solve(const BandLU& lu, const std::vector<double>& b, std::vector<double>& x, double tol, int maxit,
              std::vector<double>& history)
{
    const int n = lu.size();
    std::vector<double> r(b), p, Ap;
    lu.apply(x, Ap);
    for (int i = 0; i < n; ++i)
        r[i] -= Ap[i];
    p = r;
    double rr = 0.0;
    for (double v : r)
        rr += v * v;
    const double b0 = vec_norm(b);
    if (b0 == 0.0) {
        x.assign(n, 0.0);
        return true;
    }
    for (int it = 0; it < maxit; ++it) {
        history.push_back(std::sqrt(rr) / b0);
        if (std::sqrt(rr) <= tol * b0)
            return true;
        lu.apply(p, Ap);
        double pAp = 0.0;
        for (int i = 0; i < n; ++i)
            pAp += p[i] * Ap[i];
        if (pAp <= 0.0)
            return false;
        const double alpha = rr / pAp;
        for (int i = 0; i < n; ++i) {
            x[i] += alpha * p[i];
            r[i] -= alpha * Ap[i];
        }
        double rr2 = 0.0;
        for (double v : r)
            rr2 += v * v;
        const double beta = rr2 / rr;
        rr = rr2;
        for (int i = 0; i < n; ++i)
            p[i] = r[i] + beta * p[i];
    }
    history.push_back(std::sqrt(rr) / b0);
    return std::sqrt(rr) <= tol * b0;
}

} // namespace

void checked_spd_solve(const BandLU& lu, std::vector<double>& b, const char* what)
{
    const std::vector<double> rhs = b;
    lu.solve(b);
    const double bn = vec_norm(rhs);
    if (bn == 0.0)
        return;
    // one refinement step before judging the residual
    std::vector<double> r;
    lu.apply(b, r);
    for (std::size_t i = 0; i < r.size(); ++i)
        r[i] = rhs[i] - r[i];
    lu.solve(r);
    for (std::size_t i = 0; i < r.size(); ++i)
        b[i] += r[i];
    if (lu.residual(b, rhs) <= kDirectTol * bn)
        return;
    std::vector<double> history;
    if (!cg_solve(lu, rhs, b, 1e-12, 4 * lu.size(), history))
        throw SolverError(FailureClass::SolverFailure, std::string(what) + ": elliptic solve did not converge",
                          history);
}

PoissonDirichlet::PoissonDirichlet(const Grid2D& g) : grid_(&g)
{
    const double ax = g.dz / g.dx, az = g.dx / g.dz;
    TripletMatrix t(g.num_centers());
    for (int i = 0; i < g.nx; ++i)
        for (int k = 0; k < g.nz; ++k) {
            const int c = g.cidx(i, k);
            double diag = 0.0;
            if (i > 0)
                t.add(c, g.cidx(i - 1, k), -ax);
            diag += (i > 0) ? ax : 2.0 * ax;
            if (i < g.nx - 1)
                t.add(c, g.cidx(i + 1, k), -ax);
            diag += (i < g.nx - 1) ? ax : 2.0 * ax;
            if (k > 0)
                t.add(c, g.cidx(i, k - 1), -az);
            diag += (k > 0) ? az : 2.0 * az;
            if (k < g.nz - 1)
                t.add(c, g.cidx(i, k + 1), -az);
            diag += (k < g.nz - 1) ? az : 2.0 * az;
            t.add(c, c, diag);
        }
    lu_.assemble(t);
    lu_.factor();
}

ScalarField PoissonDirichlet::solve(const ScalarField& rhs) const
{
    const Grid2D& g = *grid_;
    if (rhs.stag != Stag::Center)
        throw std::invalid_argument("PoissonDirichlet: rhs must be cell-centered");
    std::vector<double> b(g.num_centers());
    const double vol = g.dx * g.dz;
    for (int c = 0; c < g.num_centers(); ++c)
        b[c] = -vol * rhs[c];
    checked_spd_solve(lu_, b, "poisson-dirichlet");
    ScalarField p(g, Stag::Center);
    p.v = std::move(b);
    return p;
}

PoissonMixed::PoissonMixed(const Grid2D& g) : grid_(&g)
{
    const double ax = g.dz / g.dx, az = g.dx / g.dz;
    TripletMatrix t(g.num_centers());
    for (int i = 0; i < g.nx; ++i)
        for (int k = 0; k < g.nz; ++k) {
            const int c = g.cidx(i, k);
            double diag = 0.0;
            if (i > 0) { // left neighbour; i==0 is a Neumann face (no entry)
                t.add(c, g.cidx(i - 1, k), -ax);
                diag += ax;
            }
            if (i < g.nx - 1) {
                t.add(c, g.cidx(i + 1, k), -ax);
                diag += ax;
            } else { // Gamma_o Dirichlet ghost
                diag += 2.0 * ax;
            }
            if (k > 0) {
                t.add(c, g.cidx(i, k - 1), -az);
                diag += az;
            }
            if (k < g.nz - 1) {
                t.add(c, g.cidx(i, k + 1), -az);
                diag += az;
            }
            t.add(c, c, diag);
        }
    lu_.assemble(t);
    lu_.factor();
}

ScalarField PoissonMixed::solve(const ScalarField* rhs, const MixedBC& bc) const
{
    const Grid2D& g = *grid_;
    std::vector<double> b(g.num_centers(), 0.0);
    const double vol = g.dx * g.dz;
    if (rhs) {
        if (rhs->stag != Stag::Center)
            throw std::invalid_argument("PoissonMixed: rhs must be cell-centered");
        for (int c = 0; c < g.num_centers(); ++c)
            b[c] = -vol * (*rhs)[c];
    }
    for (int k = 0; k < g.nz; ++k) {
        b[g.cidx(0, k)] += bc.gn_left[k] * g.dz;
        b[g.cidx(g.nx - 1, k)] += 2.0 * bc.dirichlet_right[k] * g.dz / g.dx;
    }
    for (int i = 0; i < g.nx; ++i) {
        b[g.cidx(i, 0)] += bc.gn_bottom[i] * g.dx;
        b[g.cidx(i, g.nz - 1)] += bc.gn_top[i] * g.dx;
    }
    checked_spd_solve(lu_, b, "poisson-mixed");
    ScalarField p(g, Stag::Center);
    p.v = std::move(b);
    return p;
}

} // namespace fsi
