#include "fsi/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "fsi/errors.hpp"

namespace fsi {

namespace {

std::vector<double> parse_list(const std::string& s)
{
    std::vector<double> out;
    std::istringstream is(s);
    double v;
    while (is >> v)
        out.push_back(v);
    return out;
}

std::string render_list(const std::vector<double>& v)
{
    std::ostringstream os;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i)
            os << ' ';
        os.precision(17);
        os << v[i];
    }
    return os.str();
}

void assign(SolverConfig& c, const std::string& key, const std::string& value)
{
    auto d = [&]() { return std::stod(value); };
    auto i = [&]() { return std::stoi(value); };
    if (key == "domain.length") c.length = d();
    else if (key == "fluid.nu") c.nu = d();
    else if (key == "beam.alpha") c.alpha = d();
    else if (key == "beam.beta") c.beta = d();
    else if (key == "beam.gamma") c.gamma = d();
    else if (key == "discretization.nx") c.nx = i();
    else if (key == "discretization.nz") c.nz = i();
    else if (key == "discretization.nt") c.nt = i();
    else if (key == "discretization.theta") c.theta = d();
    else if (key == "forcing.period") c.period = d();
    else if (key == "forcing.omega1_amplitude") c.omega1_amplitude = d();
    else if (key == "forcing.omega1_cos") c.omega1_cos = parse_list(value);
    else if (key == "forcing.omega1_sin") c.omega1_sin = parse_list(value);
    else if (key == "forcing.omega1_profile") c.omega1_profile = value;
    else if (key == "forcing.omega2_amplitude") c.omega2_amplitude = d();
    else if (key == "forcing.omega2_cos") c.omega2_cos = parse_list(value);
    else if (key == "forcing.omega2_sin") c.omega2_sin = parse_list(value);
    else if (key == "forcing.omega2_profile") c.omega2_profile = value;
    else if (key == "tolerances.picard") c.tol_picard = d();
    else if (key == "tolerances.krylov") c.tol_krylov = d();
    else if (key == "tolerances.defect") c.tol_defect = d();
    else if (key == "tolerances.picard_cap") c.picard_cap = i();
    else if (key == "ball.mu") c.ball_mu = d();
    else if (key == "ball.radius") c.ball_radius = d();
    else if (key == "ball.override_smallness") c.override_smallness = (value == "true" || value == "1");
    else if (key == "run.seed") c.seed = static_cast<unsigned>(std::stoul(value));
    else if (key == "sweep.amplitudes") c.sweep_amplitudes = parse_list(value);
    else
        throw SolverError(FailureClass::ConfigInvalid, "unknown configuration key: " + key);
}

} // namespace

void SolverConfig::validate() const
{
    std::vector<std::string> bad;
    if (!(length > 0.0)) bad.push_back("domain.length must be > 0");
    if (!(nu > 0.0)) bad.push_back("fluid.nu must be > 0");
    if (!(alpha > 0.0)) bad.push_back("beam.alpha must be > 0");
    if (!(beta >= 0.0)) bad.push_back("beam.beta must be >= 0");
    if (!(gamma > 0.0)) bad.push_back("beam.gamma must be > 0");
    if (nx < 4) bad.push_back("discretization.nx must be >= 4");
    if (nz < 4) bad.push_back("discretization.nz must be >= 4");
    if (nt < 4) bad.push_back("discretization.nt must be >= 4");
    if (!(theta > 0.0 && theta <= 1.0)) bad.push_back("discretization.theta must lie in (0, 1]");
    if (!(period > 0.0)) bad.push_back("forcing.period must be > 0");
    if (omega1_profile != "parabola") bad.push_back("forcing.omega1_profile must vanish at z = 0, 1 (parabola)");
    if (omega2_profile != "sin" && omega2_profile != "constant")
        bad.push_back("forcing.omega2_profile must be sin or constant");
    if (!(tol_picard > 0.0) || !(tol_krylov > 0.0) || !(tol_defect > 0.0))
        bad.push_back("tolerances must be positive");
    if (picard_cap < 1) bad.push_back("tolerances.picard_cap must be >= 1");
    if (!(ball_mu > 1.0)) bad.push_back("ball.mu must be > 1");
    if (!(ball_radius > 0.0)) bad.push_back("ball.radius must be > 0");
    if (!bad.empty()) {
        std::string msg = "configuration invalid:";
        for (auto& b : bad)
            msg += "\n  - " + b;
        throw SolverError(FailureClass::ConfigInvalid, msg);
    }
}

Grid2D SolverConfig::make_grid() const { return Grid2D(nx, nz, length); }

BeamParams SolverConfig::make_params() const { return BeamParams{alpha, beta, gamma, nu}; }

PeriodicForcing SolverConfig::make_forcing(const Grid2D& g) const
{
    PeriodicForcing f;
    f.period_T = period;
    f.profile1.assign(g.nz, 0.0);
    for (int k = 0; k < g.nz; ++k) {
        const double z = g.zc(k);
        f.profile1[k] = omega1_amplitude * std::pow(z * (1.0 - z), 2);
    }
    f.s1.ac = omega1_cos;
    f.s1.as = omega1_sin;
    if (omega1_amplitude == 0.0)
        f.s1 = FourierSeries{};
    f.profile2.assign(g.nz, 0.0);
    for (int k = 0; k < g.nz; ++k)
        f.profile2[k] = omega2_amplitude * (omega2_profile == "sin" ? std::sin(M_PI * g.zc(k)) : 1.0);
    f.s2.ac = omega2_cos;
    f.s2.as = omega2_sin;
    if (omega2_amplitude == 0.0)
        f.s2 = FourierSeries{};
    return f;
}

std::string SolverConfig::serialize() const
{
    std::ostringstream os;
    os.precision(17);
    os << "[domain]\nlength = " << length << "\n";
    os << "[fluid]\nnu = " << nu << "\n";
    os << "[beam]\nalpha = " << alpha << "\nbeta = " << beta << "\ngamma = " << gamma << "\n";
    os << "[discretization]\nnx = " << nx << "\nnz = " << nz << "\nnt = " << nt << "\ntheta = " << theta << "\n";
    os << "[forcing]\nperiod = " << period << "\nomega1_amplitude = " << omega1_amplitude
       << "\nomega1_cos = " << render_list(omega1_cos) << "\nomega1_sin = " << render_list(omega1_sin)
       << "\nomega1_profile = " << omega1_profile << "\nomega2_amplitude = " << omega2_amplitude
       << "\nomega2_cos = " << render_list(omega2_cos) << "\nomega2_sin = " << render_list(omega2_sin)
       << "\nomega2_profile = " << omega2_profile << "\n";
    os << "[tolerances]\npicard = " << tol_picard << "\nkrylov = " << tol_krylov << "\ndefect = " << tol_defect
       << "\npicard_cap = " << picard_cap << "\n";
    os << "[ball]\nmu = " << ball_mu << "\nradius = " << ball_radius
       << "\noverride_smallness = " << (override_smallness ? "true" : "false") << "\n";
    os << "[run]\nseed = " << seed << "\n";
    if (!sweep_amplitudes.empty())
        os << "[sweep]\namplitudes = " << render_list(sweep_amplitudes) << "\n";
    return os.str();
}

SolverConfig parse_config(std::istream& in)
{
    SolverConfig cfg;
    std::string line, section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos)
            line = line.substr(0, hash);
        auto ltrim = line.find_first_not_of(" \t\r");
        if (ltrim == std::string::npos)
            continue;
        auto rtrim = line.find_last_not_of(" \t\r");
        line = line.substr(ltrim, rtrim - ltrim + 1);
        if (line.front() == '[') {
            if (line.back() != ']')
                throw SolverError(FailureClass::ConfigInvalid,
                                  "config line " + std::to_string(lineno) + ": malformed section header");
            section = line.substr(1, line.size() - 2);
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw SolverError(FailureClass::ConfigInvalid,
                              "config line " + std::to_string(lineno) + ": expected key = value");
        std::string key = line.substr(0, eq);
        std::string value = line.substr(eq + 1);
        auto trim = [](std::string& s) {
            const auto a = s.find_first_not_of(" \t");
            const auto b = s.find_last_not_of(" \t");
            s = (a == std::string::npos) ? std::string() : s.substr(a, b - a + 1);
        };
        trim(key);
        trim(value);
        assign(cfg, section.empty() ? key : section + "." + key, value);
    }
    return cfg;
}

SolverConfig load_config(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw SolverError(FailureClass::ConfigInvalid, "cannot open config file: " + path);
    return parse_config(in);
}

void apply_override(SolverConfig& cfg, const std::string& spec)
{
    const auto eq = spec.find('=');
    if (eq == std::string::npos)
        throw SolverError(FailureClass::ConfigInvalid, "override must be section.key=value: " + spec);
    assign(cfg, spec.substr(0, eq), spec.substr(eq + 1));
}

} // namespace fsi
