#include "fsi/grid.hpp"

#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace fsi {

const char* stag_name(Stag s)
{
    switch (s) {
    case Stag::Center: return "cell-center";
    case Stag::XFace: return "x-face";
    case Stag::ZFace: return "z-face";
    case Stag::Corner: return "corner-node";
    case Stag::Beam: return "beam-node";
    }
    return "unknown";
}

Stag stag_from_name(const std::string& name)
{
    if (name == "cell-center") return Stag::Center;
    if (name == "x-face") return Stag::XFace;
    if (name == "z-face") return Stag::ZFace;
    if (name == "corner-node") return Stag::Corner;
    if (name == "beam-node") return Stag::Beam;
    throw std::invalid_argument("unknown staggering name: " + name);
}

Grid2D::Grid2D(int nx_, int nz_, double L) : nx(nx_), nz(nz_), length_L(L)
{
    if (nx < 4 || nz < 4)
        throw std::invalid_argument("Grid2D: nx and nz must both be >= 4");
    if (L <= 0.0)
        throw std::invalid_argument("Grid2D: length must be positive");
    dx = L / nx;
    dz = 1.0 / nz;
}

int Grid2D::site_count(Stag s) const
{
    switch (s) {
    case Stag::Center: return num_centers();
    case Stag::XFace: return num_xfaces();
    case Stag::ZFace: return num_zfaces();
    case Stag::Corner: return num_corners();
    case Stag::Beam: return num_beam_nodes();
    }
    return 0;
}

ScalarField::ScalarField(const Grid2D& g, Stag s) : grid(&g), stag(s), v(g.site_count(s), 0.0) {}

VectorField::VectorField(const Grid2D& g) : grid(&g), u(g.num_xfaces(), 0.0), w(g.num_zfaces(), 0.0) {}

BeamField::BeamField(const Grid2D& g) : grid(&g), v(g.num_beam_nodes(), 0.0) {}

void axpy(double a, const ScalarField& x, ScalarField& y)
{
    for (std::size_t i = 0; i < y.v.size(); ++i)
        y.v[i] += a * x.v[i];
}
void axpy(double a, const VectorField& x, VectorField& y)
{
    for (std::size_t i = 0; i < y.u.size(); ++i)
        y.u[i] += a * x.u[i];
    for (std::size_t i = 0; i < y.w.size(); ++i)
        y.w[i] += a * x.w[i];
}
void axpy(double a, const BeamField& x, BeamField& y)
{
    for (std::size_t i = 0; i < y.v.size(); ++i)
        y.v[i] += a * x.v[i];
}
void scale(ScalarField& x, double a)
{
    for (auto& t : x.v)
        t *= a;
}
void scale(VectorField& x, double a)
{
    for (auto& t : x.u)
        t *= a;
    for (auto& t : x.w)
        t *= a;
}
void scale(BeamField& x, double a)
{
    for (auto& t : x.v)
        t *= a;
}

namespace {

void site_coords(const Grid2D& g, Stag s, int i, int j, double& x, double& z)
{
    switch (s) {
    case Stag::Center: x = g.xc(i); z = g.zc(j); break;
    case Stag::XFace: x = g.xf(i); z = g.zc(j); break;
    case Stag::ZFace: x = g.xc(i); z = g.zf(j); break;
    case Stag::Corner: x = g.xf(i); z = g.zf(j); break;
    case Stag::Beam: x = g.xc(i); z = 1.0; break;
    }
}

void write_rows(const Grid2D& g, Stag s, const std::vector<double>& v, std::ostream& os)
{
    char buf[128];
    std::snprintf(buf, sizeof buf, "# %d %d %.17g %s\n", g.nx, g.nz, g.length_L, stag_name(s));
    os << buf;
    int ni = 0, nj = 0;
    switch (s) {
    case Stag::Center: ni = g.nx; nj = g.nz; break;
    case Stag::XFace: ni = g.nx + 1; nj = g.nz; break;
    case Stag::ZFace: ni = g.nx; nj = g.nz + 1; break;
    case Stag::Corner: ni = g.nx + 1; nj = g.nz + 1; break;
    case Stag::Beam: ni = g.nx; nj = 1; break;
    }
    for (int i = 0; i < ni; ++i)
        for (int j = 0; j < nj; ++j) {
            double x, z;
            site_coords(g, s, i, j, x, z);
            std::snprintf(buf, sizeof buf, "%d,%d,%.17g,%.17g,%.17g\n", i, j, x, z, v[i * nj + j]);
            os << buf;
        }
}

} // namespace

void write_csv(const ScalarField& f, std::ostream& os) { write_rows(*f.grid, f.stag, f.v, os); }

void write_csv(const BeamField& f, std::ostream& os) { write_rows(*f.grid, Stag::Beam, f.v, os); }

void write_csv_vector(const VectorField& f, std::ostream& u_os, std::ostream& w_os)
{
    write_rows(*f.grid, Stag::XFace, f.u, u_os);
    write_rows(*f.grid, Stag::ZFace, f.w, w_os);
}

ScalarField read_csv_scalar(const Grid2D& g, std::istream& is)
{
    std::string line;
    if (!std::getline(is, line) || line.empty() || line[0] != '#')
        throw std::invalid_argument("field CSV: missing header");
    std::istringstream hs(line.substr(1));
    int nx, nz;
    double L;
    std::string sname;
    hs >> nx >> nz >> L >> sname;
    if (nx != g.nx || nz != g.nz)
        throw std::invalid_argument("field CSV: grid mismatch");
    ScalarField f(g, stag_from_name(sname));
    int nj = 0;
    switch (f.stag) {
    case Stag::Center: nj = g.nz; break;
    case Stag::XFace: nj = g.nz; break;
    case Stag::ZFace: nj = g.nz + 1; break;
    case Stag::Corner: nj = g.nz + 1; break;
    case Stag::Beam: nj = 1; break;
    }
    while (std::getline(is, line)) {
        if (line.empty())
            continue;
        std::istringstream ls(line);
        std::string tok;
        int i, j;
        double x, z, val;
        std::getline(ls, tok, ','); i = std::stoi(tok);
        std::getline(ls, tok, ','); j = std::stoi(tok);
        std::getline(ls, tok, ','); x = std::stod(tok);
        std::getline(ls, tok, ','); z = std::stod(tok);
        std::getline(ls, tok, ','); val = std::stod(tok);
        (void)x;
        (void)z;
        f.v[i * nj + j] = val;
    }
    return f;
}

} // namespace fsi
