#include "fsi/beam.hpp"

#include "fsi/operators.hpp"

#include <cmath>
#include <stdexcept>

namespace fsi {

void BeamParams::validate() const
{
    if (!(alpha > 0.0))
        throw std::invalid_argument("BeamParams: alpha must be > 0");
    if (!(beta >= 0.0))
        throw std::invalid_argument("BeamParams: beta must be >= 0");
    if (!(gamma > 0.0))
        throw std::invalid_argument("BeamParams: gamma must be > 0");
    if (!(nu > 0.0))
        throw std::invalid_argument("BeamParams: nu must be > 0");
}

namespace {

// K = G^T diag(w) G scaled by 1/h, returned dense.
Mat gram(const Mat& G, const std::vector<double>& w, double h)
{
    Mat K(G.cols, G.cols);
    for (int r = 0; r < G.rows; ++r)
        for (int i = 0; i < G.cols; ++i) {
            const double gi = G(r, i);
            if (gi == 0.0)
                continue;
            for (int j = 0; j < G.cols; ++j) {
                const double gj = G(r, j);
                if (gj != 0.0)
                    K(i, j) += w[r] * gi * gj / h;
            }
        }
    return K;
}

double quad_form(const Mat& G, const std::vector<double>& w, const std::vector<double>& a, const std::vector<double>& b)
{
    double s = 0.0;
    for (int r = 0; r < G.rows; ++r) {
        double ga = 0.0, gb = 0.0;
        for (int j = 0; j < G.cols; ++j) {
            ga += G(r, j) * a[j];
            gb += G(r, j) * b[j];
        }
        s += w[r] * ga * gb;
    }
    return s;
}

} // namespace

BeamOperator::BeamOperator(const Grid2D& g, const BeamParams& p) : grid_(&g), params_(p), nb_(g.num_beam_nodes())
{
    p.validate();
    const double h = g.dx;

    // first differences on dual nodes, odd ghosts pinning the wall value
    G1_ = Mat(nb_ + 1, nb_);
    w1_.assign(nb_ + 1, h);
    G1_(0, 0) = 2.0 / h;
    w1_[0] = 0.5 * h;
    for (int j = 1; j < nb_; ++j) {
        G1_(j, j - 1) = -1.0 / h;
        G1_(j, j) = 1.0 / h;
    }
    G1_(nb_, nb_ - 1) = -2.0 / h;
    w1_[nb_] = 0.5 * h;

    // second differences: interior centers plus one clamped wall row per end
    G2_ = Mat(nb_, nb_);
    w2_.assign(nb_, h);
    G2_(0, 0) = 108.0 / (9.0 * h * h);
    G2_(0, 1) = -4.0 / (9.0 * h * h);
    for (int j = 1; j < nb_ - 1; ++j) {
        G2_(j, j - 1) = 1.0 / (h * h);
        G2_(j, j) = -2.0 / (h * h);
        G2_(j, j + 1) = 1.0 / (h * h);
    }
    G2_(nb_ - 1, nb_ - 1) = 108.0 / (9.0 * h * h);
    G2_(nb_ - 1, nb_ - 2) = -4.0 / (9.0 * h * h);

    Mat tension = gram(G1_, w1_, h);
    bend_ = gram(G2_, w2_, h);

    Ds_ = Mat(nb_, nb_);
    A_ = Mat(nb_, nb_);
    for (int i = 0; i < nb_; ++i)
        for (int j = 0; j < nb_; ++j) {
            Ds_(i, j) = -tension(i, j);
            A_(i, j) = -p.beta * tension(i, j) - p.alpha * bend_(i, j);
        }
    A_lu_.factor(A_);
}

BeamField BeamOperator::apply_A(const BeamField& eta) const
{
    BeamField out(*grid_);
    mat_vec(A_, eta.v, out.v);
    return out;
}

BeamField BeamOperator::apply_Ds(const BeamField& eta) const
{
    BeamField out(*grid_);
    mat_vec(Ds_, eta.v, out.v);
    return out;
}

BeamField BeamOperator::solve_A(const BeamField& rhs) const
{
    BeamField out(*grid_);
    out.v = rhs.v;
    A_lu_.solve(out.v);
    return out;
}

double BeamOperator::h20_inner(const BeamField& a, const BeamField& b) const
{
    return params_.beta * quad_form(G1_, w1_, a.v, b.v) + params_.alpha * quad_form(G2_, w2_, a.v, b.v);
}

double BeamOperator::h20_norm(const BeamField& a) const { return std::sqrt(h20_inner(a, a)); }

double BeamOperator::grad_energy(const BeamField& a) const { return quad_form(G1_, w1_, a.v, a.v); }

double BeamOperator::bend_energy(const BeamField& a) const { return quad_form(G2_, w2_, a.v, a.v); }

Mat BeamOperator::assemble_block() const
{
    Mat blk(2 * nb_, 2 * nb_);
    for (int i = 0; i < nb_; ++i) {
        blk(i, nb_ + i) = 1.0;
        for (int j = 0; j < nb_; ++j) {
            blk(nb_ + i, j) = A_(i, j);
            blk(nb_ + i, nb_ + j) = params_.gamma * Ds_(i, j);
        }
    }
    return blk;
}

double beam_energy(const BeamOperator& op, const BeamField& eta, const BeamField& eta_t)
{
    const double kin = inner(eta_t, eta_t);
    return 0.5 * kin + 0.5 * op.h20_inner(eta, eta);
}

} // namespace fsi
