// pfsi: time-periodic incompressible-flow / elastic-beam solver.
//
// Subcommands: stokes, eigs, periodic-linear, solve, verify, sweep.
// Every run writes a manifest (config echo, metrics, timings) into the
// output directory. Exit codes: 0 success, 2 invalid configuration,
// 3 solver failure, 4 non-contraction, 5 ball violation.
#include <CLI11.hpp>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "fsi/config.hpp"
#include "fsi/errors.hpp"
#include "fsi/nonlinear.hpp"
#include "fsi/operators.hpp"
#include "fsi/verify.hpp"

namespace fs = std::filesystem;
using namespace fsi;

namespace {

int exit_code_for(FailureClass c)
{
    switch (c) {
    case FailureClass::ConfigInvalid: return 2;
    case FailureClass::AssemblyFailure:
    case FailureClass::SolverFailure:
    case FailureClass::DomainDegeneracy: return 3;
    case FailureClass::NonContraction: return 4;
    case FailureClass::BallViolation: return 5;
    }
    return 3;
}

struct Manifest {
    std::ostringstream metrics;
    std::ostringstream timings;
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();

    void metric(const std::string& key, double value)
    {
        metrics << key << " = " << std::setprecision(17) << value << "\n";
    }
    void metric(const std::string& key, const std::string& value) { metrics << key << " = " << value << "\n"; }
    void lap(const std::string& what)
    {
        const auto now = std::chrono::steady_clock::now();
        timings << what << " = " << std::chrono::duration<double>(now - t0).count() << " s\n";
    }
    void write(const fs::path& dir, const SolverConfig& cfg) const
    {
        std::ofstream os(dir / "manifest.txt");
        os << "# run manifest\n[config]\n" << cfg.serialize() << "\n[metrics]\n" << metrics.str() << "\n[timings]\n"
           << timings.str();
    }
};

void dump_scalar(const ScalarField& f, const fs::path& p)
{
    std::ofstream os(p);
    write_csv(f, os);
}

void dump_beam(const BeamField& f, const fs::path& p)
{
    std::ofstream os(p);
    write_csv(f, os);
}

void dump_vector(const VectorField& v, const fs::path& pu, const fs::path& pw)
{
    std::ofstream ou(pu), ow(pw);
    write_csv_vector(v, ou, ow);
}

void dump_trajectory(const PeriodicTrajectory& traj, const fs::path& dir)
{
    fs::create_directories(dir);
    char name[64];
    for (std::size_t n = 0; n < traj.velocity.size(); ++n) {
        std::snprintf(name, sizeof name, "node_%03zu", n);
        dump_vector(traj.velocity[n], dir / (std::string(name) + "_u.csv"), dir / (std::string(name) + "_w.csv"));
        dump_scalar(traj.pressure[n], dir / (std::string(name) + "_p.csv"));
        dump_beam(traj.eta[n], dir / (std::string(name) + "_eta.csv"));
        dump_beam(traj.eta_t[n], dir / (std::string(name) + "_etat.csv"));
    }
}

// physical-domain dump on the deformed quadrilateral grid (x_i, z_k(1+eta))
void dump_physical(const PeriodicTrajectory& traj, const Grid2D& g, const fs::path& dir)
{
    fs::create_directories(dir);
    char name[64];
    for (std::size_t n = 0; n < traj.pressure.size(); ++n) {
        std::snprintf(name, sizeof name, "physical_%03zu.csv", n);
        std::ofstream os(dir / name);
        os << "# x, y, p, eta(x)\n";
        char buf[160];
        for (int i = 0; i < g.nx; ++i)
            for (int k = 0; k < g.nz; ++k) {
                const double y = g.zc(k) * (1.0 + traj.eta[n][i]);
                std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g\n", g.xc(i), y,
                              traj.pressure[n][g.cidx(i, k)], traj.eta[n][i]);
                os << buf;
            }
    }
}

int run_stokes(const SolverConfig& cfg, const fs::path& out)
{
    Manifest man;
    Grid2D g = cfg.make_grid();
    StokesSolver st(g, cfg.nu);
    // one inflow-driven mixed solve on the configured grid
    std::vector<double> omega(g.nz);
    for (int k = 0; k < g.nz; ++k)
        omega[k] = std::pow(g.zc(k) * (1.0 - g.zc(k)), 2);
    StokesSolution s = st.solve_mixed(0.0, nullptr, nullptr, &omega);
    man.metric("divergence_residual", s.div_residual);
    dump_vector(s.vel, out / "stokes_u.csv", out / "stokes_w.csv");
    dump_scalar(s.pres, out / "stokes_p.csv");
    man.lap("mixed_solve");

    // manufactured-solution convergence report across one grid doubling
    std::ofstream rep(out / "stokes_report.txt");
    double prev = 0.0;
    for (int lev = 0; lev < 2; ++lev) {
        const int n = (lev == 0) ? cfg.nx / 2 : cfg.nx;
        Grid2D gg(std::max(8, n), std::max(4, n / 2), cfg.length);
        StokesSolver stc(gg, cfg.nu);
        const double L = gg.length_L;
        VectorField f(gg);
        auto u1 = [&](double x, double z) {
            const double sx = std::sin(M_PI * x / L);
            return sx * sx * 2.0 * M_PI * std::sin(M_PI * z) * std::cos(M_PI * z);
        };
        auto u2 = [&](double x, double z) {
            const double sz = std::sin(M_PI * z);
            return -2.0 * (M_PI / L) * std::sin(M_PI * x / L) * std::cos(M_PI * x / L) * sz * sz;
        };
        auto lap1 = [&](double x, double z) {
            const double a = M_PI / L, b = M_PI, c2x = std::cos(2 * a * x), s2z = std::sin(2 * b * z);
            return M_PI * (2 * a * a * c2x) * s2z + M_PI * (1 - c2x) / 2 * (-4 * b * b * s2z);
        };
        auto lap2 = [&](double x, double z) {
            const double a = M_PI / L, b = M_PI, s2x = std::sin(2 * a * x), c2z = std::cos(2 * b * z);
            return a * (4 * a * a) * s2x * (1 - c2z) / 2 - a * s2x * (2 * b * b * c2z);
        };
        auto px = [&](double x, double z) { return -(M_PI / L) * std::cos(M_PI * (L - x) / L) * std::cos(2 * M_PI * z); };
        auto pz = [&](double x, double z) { return -2.0 * M_PI * std::sin(M_PI * (L - x) / L) * std::sin(2 * M_PI * z); };
        for (int i = 0; i <= gg.nx; ++i)
            for (int k = 0; k < gg.nz; ++k)
                f.u_at(i, k) = -cfg.nu * lap1(gg.xf(i), gg.zc(k)) + px(gg.xf(i), gg.zc(k));
        for (int i = 0; i < gg.nx; ++i)
            for (int k = 0; k <= gg.nz; ++k)
                f.w_at(i, k) = -cfg.nu * lap2(gg.xc(i), gg.zf(k)) + pz(gg.xc(i), gg.zf(k));
        StokesSolution sol = stc.solve_mixed(0.0, &f, nullptr, nullptr);
        VectorField e(gg);
        for (int i = 0; i <= gg.nx; ++i)
            for (int k = 0; k < gg.nz; ++k)
                e.u_at(i, k) = sol.vel.u_at(i, k) - u1(gg.xf(i), gg.zc(k));
        for (int i = 0; i < gg.nx; ++i)
            for (int k = 0; k <= gg.nz; ++k)
                e.w_at(i, k) = sol.vel.w_at(i, k) - u2(gg.xc(i), gg.zf(k));
        const double err = norm(e);
        rep << "grid " << gg.nx << "x" << gg.nz << "  velocity L2 error " << err;
        if (lev)
            rep << "  observed order " << std::log2(prev / err);
        rep << "\n";
        if (lev)
            man.metric("manufactured_order", std::log2(prev / err));
        prev = err;
    }
    man.lap("manufactured_report");
    man.write(out, cfg);
    return 0;
}

int run_eigs(const SolverConfig& cfg, const fs::path& out)
{
    Manifest man;
    Grid2D g = cfg.make_grid();
    auto op = std::make_shared<CoupledOperator>(g, cfg.make_params());
    SpectrumReport rep = op->rightmost_eigenvalues(20, 130, cfg.seed);
    man.lap("eigensolve");
    std::ofstream os(out / "eigs_report.txt");
    os << "# Re(lambda)  Im(lambda)  ritz_residual  energy_identity_residual\n";
    os << std::scientific << std::setprecision(9);
    double rightmost = -1e300;
    for (const auto& p : rep.pairs) {
        os << std::setw(18) << p.lambda.real() << "  " << std::setw(18) << p.lambda.imag() << "  " << p.ritz_residual
           << "  " << p.energy_residual << "\n";
        rightmost = std::max(rightmost, p.lambda.real());
    }
    os << "# sigma_min(lambda=0 system) = " << rep.sigma_min << "\n";
    man.metric("rightmost_real_part", rightmost);
    man.metric("sigma_min", rep.sigma_min);
    man.metric("pairs", static_cast<double>(rep.pairs.size()));
    man.write(out, cfg);
    return rightmost < 0.0 ? 0 : 3;
}

int run_periodic_linear(const SolverConfig& cfg, const fs::path& out)
{
    Manifest man;
    Grid2D g = cfg.make_grid();
    auto op = std::make_shared<CoupledOperator>(g, cfg.make_params());
    auto ctx = std::make_shared<MonodromyContext>(op, cfg.period, cfg.nt, cfg.theta);
    SpectralCriterionReport sp = ctx->check_spectral_criterion(16, 1e-6, cfg.seed);
    man.metric("rho_max", sp.rho_max);
    man.metric("admissible", sp.admissible ? "yes" : "no");
    man.lap("spectral_check");
    if (!sp.admissible)
        throw SolverError(FailureClass::SolverFailure, "spectral criterion not admissible");
    PeriodicForcing f = cfg.make_forcing(g);
    PeriodicTrajectory traj = ctx->solve_periodic_linear_fsi(f, cfg.tol_defect);
    man.metric("period", cfg.period);
    man.metric("dt", ctx->dt());
    man.metric("periodicity_defect", traj.periodicity_defect);
    man.metric("krylov_iterations", static_cast<double>(traj.krylov_iterations));
    man.lap("periodic_solve");
    dump_trajectory(traj, out / "fields");
    man.lap("dump");
    man.write(out, cfg);
    return 0;
}

struct SolveHeadline {
    int iterations = 0;
    double defect = 0.0;
    double max_eta = 0.0;
};

int run_solve(const SolverConfig& cfg, const fs::path& out, SolveHeadline* headline = nullptr)
{
    Manifest man;
    Grid2D g = cfg.make_grid();
    auto op = std::make_shared<CoupledOperator>(g, cfg.make_params());
    auto ctx = std::make_shared<MonodromyContext>(op, cfg.period, cfg.nt, cfg.theta);
    NonlinearSolver solver(ctx);
    PeriodicForcing f = cfg.make_forcing(g);
    NonlinearSolveOptions opt;
    opt.ball = BallConstraints{cfg.ball_radius, cfg.ball_mu};
    opt.picard_tol = cfg.tol_picard;
    opt.max_iterations = cfg.picard_cap;
    opt.override_smallness = cfg.override_smallness;
    // smallness precondition: estimate the linear constant with unit-scale
    // probes of both boundary channels, then require |data| <= R*/(2 C_L)
    {
        std::vector<PeriodicForcing> probes;
        PeriodicForcing p1;
        p1.period_T = cfg.period;
        p1.profile1.assign(g.nz, 0.0);
        p1.profile2.assign(g.nz, 0.0);
        for (int k = 0; k < g.nz; ++k)
            p1.profile2[k] = 1e-2 * std::sin(M_PI * g.zc(k));
        p1.s2.as = {1.0};
        probes.push_back(p1);
        PeriodicForcing p2 = p1;
        p2.profile2.assign(g.nz, 0.0);
        p2.s2 = FourierSeries{};
        for (int k = 0; k < g.nz; ++k)
            p2.profile1[k] = 1e-2 * std::pow(g.zc(k) * (1.0 - g.zc(k)), 2);
        p2.s1.ac = {1.0};
        probes.push_back(p2);
        opt.cl_estimate = empirical_linear_constant(*ctx, probes);
        man.metric("cl_estimate", opt.cl_estimate);
        man.lap("linear_constant");
        if (cfg.override_smallness)
            std::cerr << "warning: smallness precondition overridden\n";
    }
    auto res = solver.solve_periodic_fsi(f, opt);
    man.metric("picard_iterations", static_cast<double>(res.diagnostics.iterations));
    man.metric("periodicity_defect", res.solution.periodicity_defect);
    man.metric("radius_margin", res.diagnostics.radius_margin);
    man.metric("mu_margin", res.diagnostics.mu_margin);
    man.lap("picard");
    {
        std::ofstream log(out / "picard.log");
        log << "# iter  residual  rate  radius_margin  mu_margin\n" << std::scientific << std::setprecision(9);
        for (std::size_t i = 0; i < res.diagnostics.residuals.size(); ++i) {
            log << i + 1 << "  " << res.diagnostics.residuals[i] << "  "
                << (i > 0 ? res.diagnostics.rates[i - 1] : 0.0) << "  " << res.diagnostics.radius_margins[i] << "  "
                << res.diagnostics.mu_margins[i] << "\n";
        }
    }
    auto sysres = solver.system_residual(res.solution, f);
    man.metric("residual_interface", sysres.interface);
    man.metric("residual_momentum", sysres.momentum);
    man.metric("residual_mass", sysres.mass);
    man.metric("residual_beam", sysres.beam);
    man.metric("residual_outflow", sysres.outflow);
    dump_trajectory(res.solution, out / "fields");
    dump_physical(res.solution, g, out / "physical");
    man.lap("dump");
    man.write(out, cfg);
    if (headline) {
        headline->iterations = res.diagnostics.iterations;
        headline->defect = res.solution.periodicity_defect;
        for (const auto& eta : res.solution.eta)
            headline->max_eta = std::max(headline->max_eta, max_abs(eta));
    }
    return 0;
}

int run_verify(const SolverConfig& cfg, const fs::path& out)
{
    Manifest man;
    std::ofstream os(out / "verify_report.txt");
    struct Tee : std::streambuf {
        std::streambuf *a, *b;
        Tee(std::streambuf* a_, std::streambuf* b_) : a(a_), b(b_) {}
        int overflow(int c) override
        {
            if (c != EOF) {
                a->sputc(static_cast<char>(c));
                b->sputc(static_cast<char>(c));
            }
            return c;
        }
    } tee(std::cout.rdbuf(), os.rdbuf());
    std::ostream both(&tee);
    auto results = run_acceptance_suite(both, cfg.seed);
    man.lap("suite");
    int failed = 0;
    for (const auto& r : results)
        failed += r.pass ? 0 : 1;
    man.metric("criteria", static_cast<double>(results.size()));
    man.metric("failed", static_cast<double>(failed));
    man.write(out, cfg);
    both << (failed == 0 ? "ALL CRITERIA PASSED\n" : "CRITERIA FAILED: " + std::to_string(failed) + "\n");
    return failed == 0 ? 0 : 3;
}

int run_sweep(const SolverConfig& cfg, const fs::path& out)
{
    Manifest man;
    std::vector<double> amps = cfg.sweep_amplitudes;
    if (amps.empty())
        amps = {0.5 * cfg.omega2_amplitude, cfg.omega2_amplitude, 2.0 * cfg.omega2_amplitude};
    std::ofstream summary(out / "sweep_summary.txt");
    summary << "# amplitude  iterations  defect  max|eta|  status\n" << std::scientific << std::setprecision(6);
    for (double a : amps) {
        SolverConfig point = cfg;
        point.omega2_amplitude = a;
        std::ostringstream dirname;
        dirname << "amp_" << std::setprecision(6) << std::scientific << a;
        const fs::path sub = out / dirname.str();
        fs::create_directories(sub);
        try {
            SolveHeadline hl;
            run_solve(point, sub, &hl);
            summary << a << "  " << hl.iterations << "  " << hl.defect << "  " << hl.max_eta << "  ok\n";
        } catch (const SolverError& e) {
            summary << a << "  -  -  -  " << failure_class_name(e.failure_class) << ": " << e.what() << "\n";
        }
    }
    man.lap("sweep");
    man.write(out, cfg);
    return 0;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"time-periodic fluid-beam interaction solver"};
    app.require_subcommand(1);

    std::string config_path, out_dir = "out";
    unsigned seed_override = 0;
    bool seed_given = false;
    std::vector<std::string> overrides;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "configuration file (sectioned key = value)");
        sub->add_option("--out", out_dir, "output directory");
        sub->add_option("--seed", seed_override, "seed override")->each([&](const std::string&) { seed_given = true; });
        sub->add_option("--override", overrides, "section.key=value override (repeatable)");
    };

    CLI::App* c_stokes = app.add_subcommand("stokes", "one mixed-boundary Stokes solve plus a manufactured-solution report");
    CLI::App* c_eigs = app.add_subcommand("eigs", "rightmost spectrum of the coupled operator");
    CLI::App* c_plin = app.add_subcommand("periodic-linear", "periodic solution of the linear coupled system");
    CLI::App* c_solve = app.add_subcommand("solve", "full nonlinear periodic solve (Picard iteration)");
    CLI::App* c_verify = app.add_subcommand("verify", "run the complete invariant and acceptance suite");
    CLI::App* c_sweep = app.add_subcommand("sweep", "amplitude continuation over the nonlinear solver");
    for (auto* s : {c_stokes, c_eigs, c_plin, c_solve, c_verify, c_sweep})
        add_common(s);

    CLI11_PARSE(app, argc, argv);

    try {
        SolverConfig cfg;
        if (!config_path.empty())
            cfg = load_config(config_path);
        for (const auto& o : overrides)
            apply_override(cfg, o);
        if (seed_given)
            cfg.seed = seed_override;
        cfg.validate();
        fs::create_directories(out_dir);

        if (app.got_subcommand(c_stokes))
            return run_stokes(cfg, out_dir);
        if (app.got_subcommand(c_eigs))
            return run_eigs(cfg, out_dir);
        if (app.got_subcommand(c_plin))
            return run_periodic_linear(cfg, out_dir);
        if (app.got_subcommand(c_solve))
            return run_solve(cfg, out_dir);
        if (app.got_subcommand(c_verify))
            return run_verify(cfg, out_dir);
        if (app.got_subcommand(c_sweep))
            return run_sweep(cfg, out_dir);
    } catch (const SolverError& e) {
        std::cerr << "error [" << failure_class_name(e.failure_class) << "]: " << e.what() << "\n";
        if (!e.residual_history.empty()) {
            std::cerr << "residual history:";
            for (double r : e.residual_history)
                std::cerr << " " << r;
            std::cerr << "\n";
        }
        return exit_code_for(e.failure_class);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
