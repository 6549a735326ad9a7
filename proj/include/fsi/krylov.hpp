#pragma once

#include <cmath>
#include <functional>
#include <vector>

#include "fsi/errors.hpp"

namespace fsi {

using VecD = std::vector<double>;
using ApplyFn = std::function<void(const VecD&, VecD&)>;
using InnerFn = std::function<double(const VecD&, const VecD&)>;

struct KrylovResult {
    bool converged = false;
    int iterations = 0;
    std::vector<double> res_history;
};

inline double kry_norm(const InnerFn& ip, const VecD& v) { return std::sqrt(ip(v, v)); }

/// Conjugate gradients for SPD operators in a user inner product.
inline KrylovResult cg(const ApplyFn& apply, const VecD& b, VecD& x, double rel_tol, int maxit, const InnerFn& ip)
{
    KrylovResult out;
    const int n = static_cast<int>(b.size());
    VecD r(n), Ap(n);
    apply(x, Ap);
    for (int i = 0; i < n; ++i)
        r[i] = b[i] - Ap[i];
    VecD p = r;
    double rr = ip(r, r);
    const double b0 = kry_norm(ip, b);
    if (b0 == 0.0) {
        x.assign(n, 0.0);
        out.converged = true;
        return out;
    }
    for (int it = 0; it < maxit; ++it) {
        out.res_history.push_back(std::sqrt(rr) / b0);
        if (std::sqrt(rr) <= rel_tol * b0) {
            out.converged = true;
            out.iterations = it;
            return out;
        }
        apply(p, Ap);
        const double alpha = rr / ip(p, Ap);
        for (int i = 0; i < n; ++i) {
            x[i] += alpha * p[i];
            r[i] -= alpha * Ap[i];
        }
        const double rr2 = ip(r, r);
        const double beta = rr2 / rr;
        rr = rr2;
        for (int i = 0; i < n; ++i)
            p[i] = r[i] + beta * p[i];
    }
    out.res_history.push_back(std::sqrt(rr) / b0);
    out.converged = std::sqrt(rr) <= rel_tol * b0;
    out.iterations = maxit;
    return out;
}

/// Full-memory GMRES (no restart) with modified Gram-Schmidt in a user
/// inner product. x holds the initial guess on entry.
inline KrylovResult gmres(const ApplyFn& apply, const VecD& b, VecD& x, double rel_tol, int max_basis,
                          const InnerFn& ip)
{
    KrylovResult out;
    const int n = static_cast<int>(b.size());
    const double b0 = kry_norm(ip, b);
    if (b0 == 0.0) {
        x.assign(n, 0.0);
        out.converged = true;
        return out;
    }
    VecD r(n), t(n);
    apply(x, t);
    for (int i = 0; i < n; ++i)
        r[i] = b[i] - t[i];
    double beta = kry_norm(ip, r);
    if (beta <= rel_tol * b0) {
        out.converged = true;
        return out;
    }
    std::vector<VecD> V;
    V.push_back(r);
    for (double& v : V[0])
        v /= beta;
    const int m = max_basis;
    std::vector<double> H(static_cast<std::size_t>(m + 1) * m, 0.0);
    auto h = [&](int i, int j) -> double& { return H[static_cast<std::size_t>(i) * m + j]; };
    std::vector<double> cs(m), sn(m), g(m + 1, 0.0);
    g[0] = beta;
    int k = 0;
    for (; k < m; ++k) {
        apply(V[k], t);
        for (int i = 0; i <= k; ++i) {
            h(i, k) = ip(t, V[i]);
            for (int j = 0; j < n; ++j)
                t[j] -= h(i, k) * V[i][j];
        }
        h(k + 1, k) = kry_norm(ip, t);
        if (h(k + 1, k) > 0.0) {
            VecD vk = t;
            for (double& v : vk)
                v /= h(k + 1, k);
            V.push_back(std::move(vk));
        }
        for (int i = 0; i < k; ++i) {
            const double tmp = cs[i] * h(i, k) + sn[i] * h(i + 1, k);
            h(i + 1, k) = -sn[i] * h(i, k) + cs[i] * h(i + 1, k);
            h(i, k) = tmp;
        }
        const double denom = std::hypot(h(k, k), h(k + 1, k));
        cs[k] = h(k, k) / denom;
        sn[k] = h(k + 1, k) / denom;
        h(k, k) = denom;
        h(k + 1, k) = 0.0;
        g[k + 1] = -sn[k] * g[k];
        g[k] = cs[k] * g[k];
        out.res_history.push_back(std::abs(g[k + 1]) / b0);
        if (std::abs(g[k + 1]) <= rel_tol * b0) {
            ++k;
            out.converged = true;
            break;
        }
        if (static_cast<int>(V.size()) == k + 1) // breakdown: exact solution found
        {
            out.converged = true;
            ++k;
            break;
        }
    }
    const int kk = std::min(k, m);
    std::vector<double> y(kk, 0.0);
    for (int i = kk - 1; i >= 0; --i) {
        double s = g[i];
        for (int j = i + 1; j < kk; ++j)
            s -= h(i, j) * y[j];
        y[i] = s / h(i, i);
    }
    for (int i = 0; i < kk; ++i)
        for (int j = 0; j < n; ++j)
            x[j] += y[i] * V[i][j];
    out.iterations = kk;
    if (!out.converged && !out.res_history.empty())
        out.converged = out.res_history.back() <= rel_tol;
    return out;
}

/// Arnoldi factorization A V_m = V_{m+1} H; returns the basis and the
/// (m+1) x m Hessenberg for Ritz extraction by the caller.
struct ArnoldiData {
    std::vector<VecD> basis;
    std::vector<double> H; // (m+1) x m row-major
    int m = 0;
};

inline ArnoldiData arnoldi(const ApplyFn& apply, const VecD& start, int m, const InnerFn& ip)
{
    ArnoldiData a;
    const int n = static_cast<int>(start.size());
    a.m = m;
    a.H.assign(static_cast<std::size_t>(m + 1) * m, 0.0);
    auto h = [&](int i, int j) -> double& { return a.H[static_cast<std::size_t>(i) * m + j]; };
    VecD v = start;
    const double nrm = kry_norm(ip, v);
    if (nrm == 0.0)
        throw SolverError(FailureClass::SolverFailure, "arnoldi: zero start vector");
    for (double& x : v)
        x /= nrm;
    a.basis.push_back(v);
    VecD t(n);
    for (int k = 0; k < m; ++k) {
        apply(a.basis[k], t);
        for (int i = 0; i <= k; ++i) {
            h(i, k) = ip(t, a.basis[i]);
            for (int j = 0; j < n; ++j)
                t[j] -= h(i, k) * a.basis[i][j];
        }
        // one reorthogonalization pass keeps the basis clean
        for (int i = 0; i <= k; ++i) {
            const double c = ip(t, a.basis[i]);
            h(i, k) += c;
            for (int j = 0; j < n; ++j)
                t[j] -= c * a.basis[i][j];
        }
        h(k + 1, k) = kry_norm(ip, t);
        if (h(k + 1, k) <= 1e-14) {
            a.m = k + 1;
            break;
        }
        VecD vk = t;
        for (double& x : vk)
            x /= h(k + 1, k);
        a.basis.push_back(std::move(vk));
    }
    return a;
}

} // namespace fsi
