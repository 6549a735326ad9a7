#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "fsi/beam.hpp"
#include "fsi/dense.hpp"
#include "fsi/operators.hpp"

using namespace fsi;

namespace {

std::mt19937_64 rng(31);
double urand() { return std::uniform_real_distribution<double>(-1.0, 1.0)(rng); }

// polynomial with exact integration: the independent oracle for the
// clamped energy identities
struct Poly {
    std::vector<double> c; // c[k] x^k

    Poly deriv() const
    {
        Poly d;
        for (std::size_t k = 1; k < c.size(); ++k)
            d.c.push_back(c[k] * static_cast<double>(k));
        return d;
    }
    Poly square() const
    {
        Poly s;
        s.c.assign(2 * c.size() - 1, 0.0);
        for (std::size_t i = 0; i < c.size(); ++i)
            for (std::size_t j = 0; j < c.size(); ++j)
                s.c[i + j] += c[i] * c[j];
        return s;
    }
    double integrate(double a, double b) const
    {
        double s = 0.0;
        for (std::size_t k = 0; k < c.size(); ++k)
            s += c[k] * (std::pow(b, k + 1.0) - std::pow(a, k + 1.0)) / (k + 1.0);
        return s;
    }
    double eval(double x) const
    {
        double s = 0.0;
        for (std::size_t k = c.size(); k-- > 0;)
            s = s * x + c[k];
        return s;
    }
};

// eta = x^2 (L-x)^2 = L^2 x^2 - 2L x^3 + x^4
Poly clamped_quartic(double L) { return Poly{{0.0, 0.0, L * L, -2.0 * L, 1.0}}; }

BeamField sample(const Grid2D& g, const Poly& p)
{
    BeamField f(g);
    for (int i = 0; i < g.nx; ++i)
        f[i] = p.eval(g.xc(i));
    return f;
}

} // namespace

TEST_CASE("parameter positivity is enforced")
{
    Grid2D g(16, 4, 1.0);
    CHECK_THROWS_AS(BeamOperator(g, BeamParams{-1.0, 0.0, 0.5, 0.1}), std::invalid_argument);
    CHECK_THROWS_AS(BeamOperator(g, BeamParams{1.0, -0.1, 0.5, 0.1}), std::invalid_argument);
    CHECK_THROWS_AS(BeamOperator(g, BeamParams{1.0, 0.0, 0.0, 0.1}), std::invalid_argument);
    CHECK_THROWS_AS(BeamOperator(g, BeamParams{1.0, 0.0, 0.5, 0.0}), std::invalid_argument);
}

TEST_CASE("A applied to zero is zero")
{
    Grid2D g(32, 4, 2.0);
    BeamOperator op(g, BeamParams{1.0, 0.3, 0.5, 0.1});
    BeamField zero(g);
    CHECK(max_abs(op.apply_A(zero)) == 0.0);
}

TEST_CASE("A on x^2(L-x)^2 matches the symbolic value at interior nodes, order 2")
{
    const double L = 2.0, alpha = 1.3, beta = 0.7;
    double err[2];
    int n = 64;
    for (int lev = 0; lev < 2; ++lev, n *= 2) {
        Grid2D g(n, 4, L);
        BeamOperator op(g, BeamParams{alpha, beta, 0.5, 0.1});
        BeamField eta = sample(g, clamped_quartic(L));
        BeamField a = op.apply_A(eta);
        double e = 0.0;
        for (int i = n / 3; i < 2 * n / 3; ++i) {
            const double x = g.xc(i);
            const double exact = beta * (2 * L * L - 12 * L * x + 12 * x * x) - 24.0 * alpha;
            e = std::max(e, std::abs(a[i] - exact));
        }
        err[lev] = e;
    }
    CHECK(std::log2(err[0] / err[1]) >= 1.9);
}

TEST_CASE("A is symmetric to machine precision and negative definite")
{
    Grid2D g(48, 4, 2.0);
    BeamOperator op(g, BeamParams{1.0, 0.4, 0.5, 0.1});
    const Mat& A = op.matrix_A();
    double asym = 0.0, scale = 0.0;
    for (int i = 0; i < A.rows; ++i)
        for (int j = 0; j < A.cols; ++j) {
            asym = std::max(asym, std::abs(A(i, j) - A(j, i)));
            scale = std::max(scale, std::abs(A(i, j)));
        }
    CHECK(asym <= 1e-12 * scale);

    for (int trial = 0; trial < 10; ++trial) {
        BeamField eta(g);
        for (auto& v : eta.v)
            v = urand();
        CHECK(inner(op.apply_A(eta), eta) < 0.0);
    }
}

TEST_CASE("symmetry of the pairing <A eta, k> = <eta, A k> on random fields")
{
    Grid2D g(40, 4, 1.0);
    BeamOperator op(g, BeamParams{2.0, 0.8, 0.5, 0.1});
    for (int trial = 0; trial < 5; ++trial) {
        BeamField a(g), b(g);
        for (auto& v : a.v)
            v = urand();
        for (auto& v : b.v)
            v = urand();
        const double x = inner(op.apply_A(a), b);
        const double y = inner(a, op.apply_A(b));
        CHECK(std::abs(x - y) <= 1e-12 * (std::abs(x) + std::abs(y)));
    }
}

TEST_CASE("H^2_0 pairing matches the integration-by-parts oracle after refinement")
{
    const double L = 1.0, alpha = 1.0, beta = 0.5;
    const Poly eta = clamped_quartic(L);
    const double exact =
        beta * eta.deriv().square().integrate(0, L) + alpha * eta.deriv().deriv().square().integrate(0, L);
    // Richardson-extrapolate the h^2 and h^3 quadrature errors away
    double q[3];
    int n = 256;
    for (int lev = 0; lev < 3; ++lev, n *= 2) {
        Grid2D g(n, 4, L);
        BeamOperator op(g, BeamParams{alpha, beta, 0.5, 0.1});
        BeamField e = sample(g, eta);
        q[lev] = op.h20_inner(e, e);
    }
    const double r1 = (4.0 * q[1] - q[0]) / 3.0;
    const double r2 = (4.0 * q[2] - q[1]) / 3.0;
    const double extrap = (8.0 * r2 - r1) / 7.0;
    CHECK(std::abs(extrap - exact) <= 1e-8 * std::abs(exact));
}

TEST_CASE("pairing equals <-A eta, eta> exactly (discrete integration by parts)")
{
    Grid2D g(48, 4, 2.0);
    BeamOperator op(g, BeamParams{1.0, 0.3, 0.5, 0.1});
    for (int trial = 0; trial < 5; ++trial) {
        BeamField e(g);
        for (auto& v : e.v)
            v = urand();
        const double lhs = op.h20_inner(e, e);
        const double rhs = -inner(op.apply_A(e), e);
        CHECK(std::abs(lhs - rhs) <= 1e-11 * std::abs(lhs));
    }
}

TEST_CASE("A solve inverts the operator")
{
    Grid2D g(40, 4, 2.0);
    BeamOperator op(g, BeamParams{1.5, 0.2, 0.5, 0.1});
    BeamField b(g);
    for (auto& v : b.v)
        v = urand();
    BeamField x = op.solve_A(b);
    BeamField r = op.apply_A(x);
    axpy(-1.0, b, r);
    CHECK(norm(r) <= 1e-9 * norm(b));
}

TEST_CASE("block operator structure: (eta, 0) maps to (0, A eta)")
{
    Grid2D g(24, 4, 1.0);
    BeamOperator op(g, BeamParams{1.0, 0.0, 1.0, 0.1});
    Mat blk = op.assemble_block();
    const int nb = op.nodes();
    std::vector<double> state(2 * nb, 0.0), out;
    BeamField eta(g);
    for (int i = 0; i < nb; ++i)
        state[i] = eta[i] = urand();
    mat_vec(blk, state, out);
    BeamField a = op.apply_A(eta);
    for (int i = 0; i < nb; ++i) {
        CHECK(out[i] == 0.0);
        CHECK(out[nb + i] == doctest::Approx(a[i]).epsilon(1e-13));
    }
}

TEST_CASE("beam block spectrum sits in the open left half-plane")
{
    Grid2D g(64, 4, 1.0);
    BeamOperator op(g, BeamParams{1.0, 0.0, 1.0, 0.1});
    auto eig = dense_eigenvalues(op.assemble_block());
    double right = -1e300;
    for (auto& z : eig)
        right = std::max(right, z.real());
    CHECK(right < 0.0);
}

TEST_CASE("spectral abscissa is non-increasing in the damping on a sampled grid")
{
    // sampled below the overdamping transition, where the slow branch of
    // the quadratic pencil would start moving back toward zero
    Grid2D g(48, 4, 1.0);
    double prev = 0.0;
    bool first = true;
    for (double gam : {0.25, 0.5, 1.0, 2.0}) {
        BeamOperator op(g, BeamParams{1.0, 0.0, gam, 0.1});
        auto eig = dense_eigenvalues(op.assemble_block());
        double right = -1e300;
        for (auto& z : eig)
            right = std::max(right, z.real());
        if (!first)
            CHECK(right <= prev + 1e-9);
        prev = right;
        first = false;
    }
}

TEST_CASE("unforced Crank-Nicolson trajectory dissipates the beam energy exactly")
{
    Grid2D g(32, 4, 1.0);
    const double gam = 0.7;
    BeamOperator op(g, BeamParams{1.0, 0.2, gam, 0.1});
    const int nb = op.nodes();
    Mat blk = op.assemble_block();
    const double dt = 0.01;
    // (I - dt/2 B) x+ = (I + dt/2 B) x
    Mat lhs(2 * nb, 2 * nb), rhs(2 * nb, 2 * nb);
    for (int i = 0; i < 2 * nb; ++i)
        for (int j = 0; j < 2 * nb; ++j) {
            lhs(i, j) = (i == j ? 1.0 : 0.0) - 0.5 * dt * blk(i, j);
            rhs(i, j) = (i == j ? 1.0 : 0.0) + 0.5 * dt * blk(i, j);
        }
    DenseLU lu;
    lu.factor(lhs);
    std::vector<double> x(2 * nb);
    for (auto& v : x)
        v = urand();
    BeamField eta(g), etat(g);
    for (int step = 0; step < 20; ++step) {
        for (int i = 0; i < nb; ++i) {
            eta[i] = x[i];
            etat[i] = x[nb + i];
        }
        const double e0 = beam_energy(op, eta, etat);
        std::vector<double> xn;
        mat_vec(rhs, x, xn);
        lu.solve(xn);
        BeamField eta1(g), etat1(g), etam(g);
        for (int i = 0; i < nb; ++i) {
            eta1[i] = xn[i];
            etat1[i] = xn[nb + i];
            etam[i] = 0.5 * (etat[i] + etat1[i]);
        }
        const double e1 = beam_energy(op, eta1, etat1);
        CHECK(e1 < e0);
        const double drop = -gam * dt * op.grad_energy(etam);
        CHECK(std::abs((e1 - e0) - drop) <= 1e-11 * (std::abs(e0) + std::abs(e1)));
        x = xn;
    }
}
