#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>

#include "fsi/config.hpp"
#include "fsi/errors.hpp"
#include "fsi/operators.hpp"

using namespace fsi;

TEST_CASE("config parses sections, comments and lists")
{
    std::istringstream in(R"(# sample
[domain]
length = 1.5
[beam]
alpha = 2.0   # trailing comment
gamma = 0.7
[forcing]
omega2_sin = 0.5 0.25
omega2_amplitude = 2e-3
[run]
seed = 99
)");
    SolverConfig cfg = parse_config(in);
    CHECK(cfg.length == doctest::Approx(1.5));
    CHECK(cfg.alpha == doctest::Approx(2.0));
    CHECK(cfg.gamma == doctest::Approx(0.7));
    REQUIRE(cfg.omega2_sin.size() == 2);
    CHECK(cfg.omega2_sin[1] == doctest::Approx(0.25));
    CHECK(cfg.seed == 99);
    cfg.validate();
}

TEST_CASE("validation lists every violated constraint")
{
    SolverConfig cfg;
    cfg.alpha = -1.0;
    cfg.gamma = 0.0;
    cfg.nx = 2;
    try {
        cfg.validate();
        CHECK(false);
    } catch (const SolverError& e) {
        CHECK(e.failure_class == FailureClass::ConfigInvalid);
        const std::string what = e.what();
        CHECK(what.find("alpha") != std::string::npos);
        CHECK(what.find("gamma") != std::string::npos);
        CHECK(what.find("nx") != std::string::npos);
    }
}

TEST_CASE("overrides reach nested keys and reject unknown ones")
{
    SolverConfig cfg;
    apply_override(cfg, "discretization.nx=32");
    apply_override(cfg, "forcing.omega2_amplitude=5e-4");
    CHECK(cfg.nx == 32);
    CHECK(cfg.omega2_amplitude == doctest::Approx(5e-4));
    CHECK_THROWS_AS(apply_override(cfg, "nope.key=1"), SolverError);
}

TEST_CASE("serialize -> parse round trip is the identity")
{
    SolverConfig cfg;
    cfg.nx = 20;
    cfg.nz = 10;
    cfg.omega2_amplitude = 3.5e-3;
    cfg.omega1_sin = {0.1, 0.2};
    cfg.omega1_amplitude = 1e-2;
    std::istringstream in(cfg.serialize());
    SolverConfig back = parse_config(in);
    CHECK(back.serialize() == cfg.serialize());
}

TEST_CASE("forcing profile vanishes at the corners")
{
    SolverConfig cfg;
    cfg.nx = 16;
    cfg.nz = 8;
    cfg.omega1_amplitude = 1.0;
    cfg.omega1_sin = {1.0};
    Grid2D g = cfg.make_grid();
    PeriodicForcing f = cfg.make_forcing(g);
    // (z(1-z))^2 at the cells nearest the walls is small and heads to zero
    CHECK(f.profile1.front() <= std::pow(g.zc(0), 2));
    CHECK(f.profile1.back() <= std::pow(1.0 - g.zc(g.nz - 1), 2));
}

TEST_CASE("identical configuration and seed reproduce the solve bit for bit")
{
    SolverConfig cfg;
    cfg.nx = 16;
    cfg.nz = 8;
    cfg.nt = 16;
    cfg.omega2_amplitude = 1e-3;
    cfg.validate();
    std::string dumps[2];
    for (int run = 0; run < 2; ++run) {
        Grid2D g = cfg.make_grid();
        auto op = std::make_shared<CoupledOperator>(g, cfg.make_params());
        auto ctx = std::make_shared<MonodromyContext>(op, cfg.period, cfg.nt, cfg.theta);
        NonlinearSolver solver(ctx);
        NonlinearSolveOptions opt;
        opt.picard_tol = cfg.tol_picard;
        auto res = solver.solve_periodic_fsi(cfg.make_forcing(g), opt);
        std::ostringstream os;
        for (const auto& eta : res.solution.eta)
            write_csv(eta, os);
        write_csv(res.solution.pressure[3], os);
        dumps[run] = os.str();
    }
    CHECK(dumps[0] == dumps[1]);
}
