#pragma once

#include <iosfwd>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "fsi/nonlinear.hpp"

namespace fsi {

/// Every solver parameter in one place. Parsed from sectioned key = value
/// text; see docs/config.example.ini for the schema.
struct SolverConfig {
    // domain / fluid / beam
    double length = 2.0;
    double nu = 0.1;
    double alpha = 1.0;
    double beta = 0.0;
    double gamma = 0.5;

    // discretization (beam nodes ride on nx)
    int nx = 48;
    int nz = 24;
    int nt = 64;
    double theta = 0.5;

    // forcing
    double period = 1.0;
    double omega1_amplitude = 0.0;
    std::vector<double> omega1_cos, omega1_sin;
    std::string omega1_profile = "parabola"; // (z(1-z))^2
    double omega2_amplitude = 1e-3;
    std::vector<double> omega2_cos, omega2_sin = {1.0};
    std::string omega2_profile = "sin"; // sin(pi z) | constant

    // tolerances
    double tol_picard = 1e-8;
    double tol_krylov = 1e-10;
    double tol_defect = 1e-7;
    int picard_cap = 40;

    // ball constraints
    double ball_mu = 2.0;
    double ball_radius = 1.0;
    bool override_smallness = false;

    unsigned seed = 1234;

    // sweep specification
    std::vector<double> sweep_amplitudes;

    /// Throws SolverError(ConfigInvalid) listing every violated constraint.
    void validate() const;

    Grid2D make_grid() const;
    BeamParams make_params() const;
    PeriodicForcing make_forcing(const Grid2D& g) const;

    /// Canonical text form (sorted keys) used by the run manifest.
    std::string serialize() const;
};

/// Parse sectioned key = value text; '#' starts a comment.
SolverConfig parse_config(std::istream& in);
SolverConfig load_config(const std::string& path);

/// Apply "section.key=value" overrides.
void apply_override(SolverConfig& cfg, const std::string& spec);

} // namespace fsi
