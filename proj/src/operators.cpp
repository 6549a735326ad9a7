#include "fsi/operators.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fsi {

namespace {

void require(bool ok, const char* what)
{
    if (!ok)
        throw std::invalid_argument(what);
}

} // namespace

ScalarField divergence(const VectorField& v)
{
    require(v.grid != nullptr, "divergence: field not bound to a grid");
    const Grid2D& g = *v.grid;
    ScalarField d(g, Stag::Center);
    for (int i = 0; i < g.nx; ++i)
        for (int k = 0; k < g.nz; ++k)
            d[g.cidx(i, k)] = (v.u_at(i + 1, k) - v.u_at(i, k)) / g.dx + (v.w_at(i, k + 1) - v.w_at(i, k)) / g.dz;
    return d;
}

VectorField gradient(const ScalarField& p)
{
    require(p.grid != nullptr && p.stag == Stag::Center, "gradient: input must be cell-centered");
    const Grid2D& g = *p.grid;
    VectorField out(g);
    for (int k = 0; k < g.nz; ++k) {
        out.u_at(0, k) = (p[g.cidx(1, k)] - p[g.cidx(0, k)]) / g.dx;
        for (int i = 1; i < g.nx; ++i)
            out.u_at(i, k) = (p[g.cidx(i, k)] - p[g.cidx(i - 1, k)]) / g.dx;
        out.u_at(g.nx, k) = (p[g.cidx(g.nx - 1, k)] - p[g.cidx(g.nx - 2, k)]) / g.dx;
    }
    for (int i = 0; i < g.nx; ++i) {
        out.w_at(i, 0) = (p[g.cidx(i, 1)] - p[g.cidx(i, 0)]) / g.dz;
        for (int k = 1; k < g.nz; ++k)
            out.w_at(i, k) = (p[g.cidx(i, k)] - p[g.cidx(i, k - 1)]) / g.dz;
        out.w_at(i, g.nz) = (p[g.cidx(i, g.nz - 1)] - p[g.cidx(i, g.nz - 2)]) / g.dz;
    }
    return out;
}

ScalarField laplacian(const ScalarField& p)
{
    require(p.grid != nullptr && p.stag == Stag::Center, "laplacian: input must be cell-centered");
    const Grid2D& g = *p.grid;
    ScalarField out(g, Stag::Center);
    auto at = [&](int i, int k) -> double {
        if (i < 0)
            return -p[g.cidx(0, k)];
        if (i >= g.nx)
            return -p[g.cidx(g.nx - 1, k)];
        if (k < 0)
            return -p[g.cidx(i, 0)];
        if (k >= g.nz)
            return -p[g.cidx(i, g.nz - 1)];
        return p[g.cidx(i, k)];
    };
    for (int i = 0; i < g.nx; ++i)
        for (int k = 0; k < g.nz; ++k)
            out[g.cidx(i, k)] = (at(i - 1, k) - 2.0 * at(i, k) + at(i + 1, k)) / (g.dx * g.dx)
                                + (at(i, k - 1) - 2.0 * at(i, k) + at(i, k + 1)) / (g.dz * g.dz);
    return out;
}

double inner(const ScalarField& a, const ScalarField& b)
{
    require(a.grid == b.grid && a.stag == b.stag, "inner: mismatched discretization");
    const Grid2D& g = *a.grid;
    const double vol = g.dx * g.dz;
    double s = 0.0;
    switch (a.stag) {
    case Stag::Center:
        for (int i = 0; i < a.size(); ++i)
            s += a[i] * b[i];
        return s * vol;
    case Stag::XFace:
        for (int i = 0; i <= g.nx; ++i) {
            const double w = (i == 0 || i == g.nx) ? 0.5 : 1.0;
            for (int k = 0; k < g.nz; ++k)
                s += w * a[g.uidx(i, k)] * b[g.uidx(i, k)];
        }
        return s * vol;
    case Stag::ZFace:
        for (int i = 0; i < g.nx; ++i)
            for (int k = 0; k <= g.nz; ++k) {
                const double w = (k == 0 || k == g.nz) ? 0.5 : 1.0;
                s += w * a[g.widx(i, k)] * b[g.widx(i, k)];
            }
        return s * vol;
    case Stag::Corner:
        for (int i = 0; i <= g.nx; ++i)
            for (int k = 0; k <= g.nz; ++k) {
                double w = (i == 0 || i == g.nx) ? 0.5 : 1.0;
                w *= (k == 0 || k == g.nz) ? 0.5 : 1.0;
                s += w * a[i * (g.nz + 1) + k] * b[i * (g.nz + 1) + k];
            }
        return s * vol;
    case Stag::Beam:
        for (int i = 0; i < a.size(); ++i)
            s += a[i] * b[i];
        return s * g.dx;
    }
    return 0.0;
}

double inner(const VectorField& a, const VectorField& b)
{
    require(a.grid == b.grid, "inner: mismatched grids");
    const Grid2D& g = *a.grid;
    const double vol = g.dx * g.dz;
    double s = 0.0;
    for (int i = 0; i <= g.nx; ++i) {
        const double w = (i == 0 || i == g.nx) ? 0.5 : 1.0;
        for (int k = 0; k < g.nz; ++k)
            s += w * a.u[g.uidx(i, k)] * b.u[g.uidx(i, k)];
    }
    for (int i = 0; i < g.nx; ++i)
        for (int k = 0; k <= g.nz; ++k) {
            const double w = (k == 0 || k == g.nz) ? 0.5 : 1.0;
            s += w * a.w[g.widx(i, k)] * b.w[g.widx(i, k)];
        }
    return s * vol;
}

double inner(const BeamField& a, const BeamField& b)
{
    require(a.grid == b.grid, "inner: mismatched grids");
    double s = 0.0;
    for (int i = 0; i < a.size(); ++i)
        s += a[i] * b[i];
    return s * a.grid->dx;
}

double norm(const ScalarField& a) { return std::sqrt(inner(a, a)); }
double norm(const VectorField& a) { return std::sqrt(inner(a, a)); }
double norm(const BeamField& a) { return std::sqrt(inner(a, a)); }

double inner_h1(const ScalarField& a, const ScalarField& b)
{
    require(a.stag == Stag::Center && b.stag == Stag::Center, "inner_h1: cell-centered fields only");
    const Grid2D& g = *a.grid;
    double s = inner(a, b);
    const double vol = g.dx * g.dz;
    for (int i = 1; i < g.nx; ++i)
        for (int k = 0; k < g.nz; ++k)
            s += vol * (a[g.cidx(i, k)] - a[g.cidx(i - 1, k)]) * (b[g.cidx(i, k)] - b[g.cidx(i - 1, k)]) / (g.dx * g.dx);
    for (int i = 0; i < g.nx; ++i)
        for (int k = 1; k < g.nz; ++k)
            s += vol * (a[g.cidx(i, k)] - a[g.cidx(i, k - 1)]) * (b[g.cidx(i, k)] - b[g.cidx(i, k - 1)]) / (g.dz * g.dz);
    return s;
}

double velocity_grad_energy(const VectorField& v)
{
    const Grid2D& g = *v.grid;
    const double dx = g.dx, dz = g.dz;
    double e = 0.0;
    // u component: x differences over every gap (inflow column is data)
    for (int i = 1; i <= g.nx; ++i)
        for (int k = 0; k < g.nz; ++k) {
            const double d = (v.u_at(i, k) - v.u_at(i - 1, k)) / dx;
            e += d * d * dx * dz;
        }
    // u component: z differences plus the no-slip ghost terms at z = 0, 1
    for (int i = 1; i <= g.nx; ++i) {
        const double wcol = (i == g.nx) ? 0.5 : 1.0;
        double col = 0.0;
        for (int k = 1; k < g.nz; ++k) {
            const double d = (v.u_at(i, k) - v.u_at(i, k - 1)) / dz;
            col += d * d * dz;
        }
        col += 2.0 * v.u_at(i, 0) * v.u_at(i, 0) / dz;
        col += 2.0 * v.u_at(i, g.nz - 1) * v.u_at(i, g.nz - 1) / dz;
        e += wcol * col * dx;
    }
    // w component: z differences (top/bottom rows are data and participate)
    for (int i = 0; i < g.nx; ++i)
        for (int k = 1; k <= g.nz; ++k) {
            const double d = (v.w_at(i, k) - v.w_at(i, k - 1)) / dz;
            e += d * d * dx * dz;
        }
    // w component: x differences plus ghost terms at Gamma_i and Gamma_o
    for (int k = 1; k < g.nz; ++k) {
        double row = 0.0;
        for (int i = 1; i < g.nx; ++i) {
            const double d = (v.w_at(i, k) - v.w_at(i - 1, k)) / dx;
            row += d * d * dx;
        }
        row += 2.0 * v.w_at(0, k) * v.w_at(0, k) / dx;
        row += 2.0 * v.w_at(g.nx - 1, k) * v.w_at(g.nx - 1, k) / dx;
        e += row * dz;
    }
    return e;
}

BeamField gamma_s_trace_cell(const ScalarField& p)
{
    require(p.stag == Stag::Center, "gamma_s_trace_cell: cell-centered input");
    const Grid2D& g = *p.grid;
    BeamField t(g);
    for (int i = 0; i < g.nx; ++i)
        t[i] = p[g.cidx(i, g.nz - 1)];
    return t;
}

BeamField gamma_s_trace_extrap(const ScalarField& p)
{
    require(p.stag == Stag::Center, "gamma_s_trace_extrap: cell-centered input");
    const Grid2D& g = *p.grid;
    BeamField t(g);
    for (int i = 0; i < g.nx; ++i)
        t[i] = 1.5 * p[g.cidx(i, g.nz - 1)] - 0.5 * p[g.cidx(i, g.nz - 2)];
    return t;
}

BeamField gamma_s_wz_trace(const VectorField& v)
{
    const Grid2D& g = *v.grid;
    BeamField t(g);
    for (int i = 0; i < g.nx; ++i)
        t[i] = (3.0 * v.w_at(i, g.nz) - 4.0 * v.w_at(i, g.nz - 1) + v.w_at(i, g.nz - 2)) / (2.0 * g.dz);
    return t;
}

VectorField apply_velocity_laplacian(const VectorField& y)
{
    const Grid2D& g = *y.grid;
    const double dx2 = g.dx * g.dx, dz2 = g.dz * g.dz;
    VectorField out(g);
    auto uval = [&](int i, int k) -> double {
        if (k < 0)
            return -y.u_at(i, 0); // no-slip ghost below Gamma_b
        if (k >= g.nz)
            return -y.u_at(i, g.nz - 1); // no-slip ghost above Gamma_s
        if (i > g.nx)
            return y.u_at(g.nx - 1, k); // mirror beyond Gamma_o
        return y.u_at(i, k);
    };
    auto wval = [&](int i, int k) -> double {
        if (i < 0)
            return -y.w_at(0, k); // tangential ghost at Gamma_i
        if (i >= g.nx)
            return -y.w_at(g.nx - 1, k); // u2 = 0 on Gamma_o
        return y.w_at(i, k);
    };
    for (int i = 1; i <= g.nx; ++i)
        for (int k = 0; k < g.nz; ++k)
            out.u_at(i, k) = (uval(i - 1, k) - 2.0 * uval(i, k) + uval(i + 1, k)) / dx2
                             + (uval(i, k - 1) - 2.0 * uval(i, k) + uval(i, k + 1)) / dz2;
    for (int i = 0; i < g.nx; ++i)
        for (int k = 1; k < g.nz; ++k)
            out.w_at(i, k) = (wval(i - 1, k) - 2.0 * wval(i, k) + wval(i + 1, k)) / dx2
                             + (y.w_at(i, k - 1) - 2.0 * y.w_at(i, k) + y.w_at(i, k + 1)) / dz2;
    return out;
}

double max_abs(const ScalarField& f)
{
    double m = 0.0;
    for (double x : f.v)
        m = std::max(m, std::abs(x));
    return m;
}

double max_abs(const VectorField& f)
{
    double m = 0.0;
    for (double x : f.u)
        m = std::max(m, std::abs(x));
    for (double x : f.w)
        m = std::max(m, std::abs(x));
    return m;
}

double max_abs(const BeamField& f)
{
    double m = 0.0;
    for (double x : f.v)
        m = std::max(m, std::abs(x));
    return m;
}

} // namespace fsi
