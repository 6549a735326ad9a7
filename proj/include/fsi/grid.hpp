#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

namespace fsi {

/// Staggering location of a discrete field on the MAC grid.
enum class Stag { Center, XFace, ZFace, Corner, Beam };

const char* stag_name(Stag s);
Stag stag_from_name(const std::string& name);

/// Uniform staggered (MAC) grid on the rectangle (0,L) x (0,1).
///
/// Boundary segments: Gamma_i = {0}x(0,1) inflow, Gamma_o = {L}x(0,1)
/// outflow, Gamma_b = (0,L)x{0} bottom wall, Gamma_s = (0,L)x{1} beam.
/// Layout per cell (i,k), i = 0..nx-1, k = 0..nz-1:
///   pressure/scalars at centers ((i+1/2)dx, (k+1/2)dz),
///   u1 on x-faces (i dx, (k+1/2)dz), i = 0..nx,
///   u2 on z-faces ((i+1/2)dx, k dz), k = 0..nz,
///   beam nodes on Gamma_s at the cell-center abscissae (i+1/2)dx.
struct Grid2D {
    int nx = 0;
    int nz = 0;
    double length_L = 0.0;
    double dx = 0.0;
    double dz = 0.0;

    Grid2D() = default;
    Grid2D(int nx_, int nz_, double L);

    int num_centers() const { return nx * nz; }
    int num_xfaces() const { return (nx + 1) * nz; }
    int num_zfaces() const { return nx * (nz + 1); }
    int num_corners() const { return (nx + 1) * (nz + 1); }
    int num_beam_nodes() const { return nx; }
    int site_count(Stag s) const;

    // index maps (column-major in x so banded orderings stay local)
    int cidx(int i, int k) const { return i * nz + k; }
    int uidx(int i, int k) const { return i * nz + k; }         // i = 0..nx
    int widx(int i, int k) const { return i * (nz + 1) + k; }   // k = 0..nz

    double xc(int i) const { return (i + 0.5) * dx; }
    double zc(int k) const { return (k + 0.5) * dz; }
    double xf(int i) const { return i * dx; }
    double zf(int k) const { return k * dz; }
};

/// Scalar field tied to a grid and a staggering location.
struct ScalarField {
    const Grid2D* grid = nullptr;
    Stag stag = Stag::Center;
    std::vector<double> v;

    ScalarField() = default;
    ScalarField(const Grid2D& g, Stag s);

    double& operator[](int i) { return v[i]; }
    double operator[](int i) const { return v[i]; }
    int size() const { return static_cast<int>(v.size()); }
};

/// MAC velocity field: u1 on x-faces, u2 on z-faces.
struct VectorField {
    const Grid2D* grid = nullptr;
    std::vector<double> u; // x-faces, (nx+1)*nz
    std::vector<double> w; // z-faces, nx*(nz+1)

    VectorField() = default;
    explicit VectorField(const Grid2D& g);

    double& u_at(int i, int k) { return u[grid->uidx(i, k)]; }
    double u_at(int i, int k) const { return u[grid->uidx(i, k)]; }
    double& w_at(int i, int k) { return w[grid->widx(i, k)]; }
    double w_at(int i, int k) const { return w[grid->widx(i, k)]; }
};

/// Beam quantity sampled at the cell-center abscissae of Gamma_s. The
/// clamped conditions eta = eta_x = 0 at x in {0,L} are realized by the
/// closures of the beam operators, never by extra stored nodes.
struct BeamField {
    const Grid2D* grid = nullptr;
    std::vector<double> v;

    BeamField() = default;
    explicit BeamField(const Grid2D& g);

    double& operator[](int i) { return v[i]; }
    double operator[](int i) const { return v[i]; }
    int size() const { return static_cast<int>(v.size()); }
};

// arithmetic used all over the solvers
void axpy(double a, const ScalarField& x, ScalarField& y);
void axpy(double a, const VectorField& x, VectorField& y);
void axpy(double a, const BeamField& x, BeamField& y);
void scale(ScalarField& x, double a);
void scale(VectorField& x, double a);
void scale(BeamField& x, double a);

/// Plain-text CSV dump: `# nx nz L staggering` header then one row
/// (i, j, x, z, value) per site at 17 significant digits.
void write_csv(const ScalarField& f, std::ostream& os);
ScalarField read_csv_scalar(const Grid2D& g, std::istream& is);
void write_csv(const BeamField& f, std::ostream& os);
void write_csv_vector(const VectorField& f, std::ostream& u_os, std::ostream& w_os);

} // namespace fsi
