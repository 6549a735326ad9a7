#pragma once

#include <vector>

#include "fsi/dense.hpp"
#include "fsi/grid.hpp"

namespace fsi {

/// Structure and fluid parameters; positivity as the model requires.
struct BeamParams {
    double alpha = 1.0; // bending
    double beta = 0.0;  // tension
    double gamma = 0.5; // structural damping
    double nu = 0.1;    // fluid viscosity, carried for the coupling

    void validate() const;
};

/// Clamped beam operators on the cell-center abscissae of Gamma_s.
///
/// Both operators are assembled as Gram forms -(G^T W G)/h of difference
/// operators that carry the clamped closure, so they are symmetric by
/// construction and the discrete integration-by-parts identities
///   <-A eta, eta> = beta ||eta_x||^2 + alpha ||eta_xx||^2,
///   <-Ds eta, eta> = ||eta_x||^2
/// hold exactly. First differences live on the dual nodes j*h with odd
/// ghosts (eta = 0 at the walls); second differences live at interior
/// cell centers plus one wall collocation row per end built from the
/// two-sided Taylor expansion under eta = eta_x = 0.
class BeamOperator {
public:
    BeamOperator(const Grid2D& g, const BeamParams& p);

    BeamField apply_A(const BeamField& eta) const;       // beta eta_xx - alpha eta_xxxx
    BeamField apply_Ds(const BeamField& eta) const;      // damping Laplacian
    BeamField solve_A(const BeamField& rhs) const;       // A_{alpha,beta} x = rhs

    /// H^2_0 pairing <(-A)^{1/2} a, (-A)^{1/2} b> = <-A a, b>.
    double h20_inner(const BeamField& a, const BeamField& b) const;
    double h20_norm(const BeamField& a) const;

    /// beta-independent seminorms entering the energy identities.
    double grad_energy(const BeamField& a) const;   // ||a_x||^2
    double bend_energy(const BeamField& a) const;   // ||a_xx||^2

    /// Block operator [[0, I], [A, gamma Ds]] acting on (eta, eta_t).
    Mat assemble_block() const;

    const Mat& matrix_A() const { return A_; }
    const Mat& matrix_Ds() const { return Ds_; }
    const Grid2D& grid() const { return *grid_; }
    const BeamParams& params() const { return params_; }
    int nodes() const { return nb_; }

private:
    const Grid2D* grid_;
    BeamParams params_;
    int nb_;
    Mat A_, Ds_, bend_; // bend_ = G2^T W2 G2 / h (positive definite)
    DenseLU A_lu_;

    // difference operators kept for the exact quadrature forms
    Mat G1_, G2_;
    std::vector<double> w1_, w2_;
};

/// Energy of a beam state, 0.5||eta_t||^2 + 0.5 <-A eta, eta>.
double beam_energy(const BeamOperator& op, const BeamField& eta, const BeamField& eta_t);

} // namespace fsi
