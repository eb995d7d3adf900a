#include "doctest.h"
#include "helpers.hpp"

#include "cmlab/evolution.hpp"
#include "cmlab/gauge.hpp"
#include "cmlab/profiles.hpp"

#include <sstream>

using namespace cm;
using namespace cmtest;

namespace {

SimConfig quick(Equation eq, double t_end, double dt = 1e-3)
{
    SimConfig c;
    c.equation = eq;
    c.dt = dt;
    c.t_end = t_end;
    c.stride = 50;
    c.step_residual = false;
    return c;
}

// i u_t + u_xx = 0 from u(0) = exp(-x^2): exp(-x^2/(1+4it)) / sqrt(1+4it)
cplx free_gaussian(double x, double t)
{
    const cplx a = 1.0 + 4.0 * I * t;
    return std::exp(-x * x / a) / std::sqrt(a);
}

}  // namespace

TEST_CASE("SimConfig validation")
{
    SimConfig c;
    CHECK_NOTHROW(c.validate());
    auto bad = [](auto f) {
        SimConfig c;
        f(c);
        CHECK_THROWS_AS(c.validate(), std::invalid_argument);
    };
    bad([](SimConfig& c) { c.N = 7; });
    bad([](SimConfig& c) { c.L = 0; });
    bad([](SimConfig& c) { c.twist = 1.0; });
    bad([](SimConfig& c) { c.dt = -1e-3; });
    bad([](SimConfig& c) { c.t_end = 0; });
    bad([](SimConfig& c) { c.stride = 0; });
    bad([](SimConfig& c) { c.snapshot_stride = -1; });
    bad([](SimConfig& c) { c.resolution_tol = 0; });
    SimConfig c2 = quick(Equation::gauged, 0.01);
    CHECK_THROWS_AS(evolve(Field(Grid(1024, 50.0)), c2), GridMismatch);
}

TEST_CASE("small data follow the free Schrodinger flow")
{
    // amplitude 1e-4: the nonlinear terms are O(1e-8) relative
    const double a = 1e-4;
    for (Equation eq : {Equation::gauged, Equation::cm_dnls})
        for (Scheme sc : {Scheme::if_rk4, Scheme::strang}) {
            SimConfig c = quick(eq, 0.5);
            c.scheme = sc;
            const Field u0 = Field::sample(c.grid(), [&](double x) { return a * free_gaussian(x, 0); });
            const Trajectory tr = evolve(u0, c);
            REQUIRE(tr.stop_reason == "t_end");
            const Field ex = Field::sample(c.grid(), [&](double x) { return a * free_gaussian(x, 0.5); });
            CHECK(rel(tr.snapshots.back(), ex) < 1e-7);
        }
}

TEST_CASE("Q is a static solution of the gauged equation")
{
    // i Q_xx + N(Q) = 0 on the line.  The box-edge kink of Q spoils d2x near
    // +-L/2, so the residual is measured on the central half of the box.
    const Grid g(8192, 400.0);
    const Field q = soliton_Q(g);
    const Field r = I * d2x(q) + nonlinearity(Equation::gauged, q);
    double num = 0, den = 0;
    for (int j = 0; j < g.N; ++j) {
        if (std::abs(g.x(j)) > 100) continue;
        num += std::norm(r.v[j]);
        den += std::norm(q.v[j]);
    }
    const double e = std::sqrt(num / den);
    MESSAGE("||i Q_xx + N(Q)|| / ||Q|| at L = 400: " << e << " on |x| <= 100, " << norm_l2(r) / norm_l2(q) << " on the box");
    CHECK(e < 1e-4);
    CHECK(energy_sd(Equation::gauged, q) < 1e-8);
}

TEST_CASE("property: conservation of mass, energy and momentum for smooth data")
{
    for (Equation eq : {Equation::gauged, Equation::cm_dnls}) {
        SimConfig c = quick(eq, 0.5);
        const Field u0 = Field::sample(c.grid(), [](double x) { return 0.8 * std::exp(-x * x / 4) * std::exp(0.5 * I * x); });
        const Trajectory tr = evolve(u0, c);
        const auto& d0 = tr.diagnostics.front();
        const auto& d1 = tr.diagnostics.back();
        CHECK(d1.t == doctest::Approx(0.5));
        CHECK(std::abs(d1.M - d0.M) / d0.M < 1e-10);
        CHECK(std::abs(d1.E - d0.E) < 1e-7);
        CHECK(std::abs(d1.E_sd - d0.E_sd) < 1e-7);
        CHECK(std::abs(d1.P - d0.P) < 1e-7);
        // the two energy forms agree
        CHECK(d0.E == doctest::Approx(d0.E_sd).epsilon(1e-8));
    }
}

TEST_CASE("IF-RK4 is fourth order and agrees with Strang")
{
    SimConfig c = quick(Equation::gauged, 0.2);
    const Field u0 = Field::sample(c.grid(), [](double x) { return 1.2 * std::exp(-x * x / 2); });
    c.dt = 2.5e-4;
    const Field ref = evolve(u0, c).snapshots.back();
    double e[3];
    const double dts[3] = {0.02, 0.01, 0.005};
    for (int k = 0; k < 3; ++k) {
        c.dt = dts[k];
        e[k] = rel(evolve(u0, c).snapshots.back(), ref);
    }
    const double p1 = std::log2(e[0] / e[1]), p2 = std::log2(e[1] / e[2]);
    MESSAGE("IF-RK4 errors " << e[0] << " " << e[1] << " " << e[2] << " orders " << p1 << " " << p2);
    CHECK(p2 > 3.5);
    c.dt = 1e-3;
    c.scheme = Scheme::strang;
    CHECK(rel(evolve(u0, c).snapshots.back(), ref) < 1e-5);
}

TEST_CASE("evolution stops and records why")
{
    SimConfig c = quick(Equation::gauged, 1.0);
    const Field u0 = Field::sample_real(c.grid(), [](double x) { return std::exp(-x * x / 2); });
    const Trajectory th = evolve(u0, c, [](double t, const Field&, std::string& why) {
        if (t < 0.2) return false;
        why = "test hook";
        return true;
    });
    CHECK(th.stop_reason == "test hook");
    CHECK(th.t.back() == doctest::Approx(0.2));
    CHECK_FALSE(th.resolution_lost);

    c.max_dx_norm = 1e-3;
    CHECK(evolve(u0, c).stop_reason == "max-dx-norm");

    // a kink on the box is not resolved: flagged, not thrown
    SimConfig cr = quick(Equation::gauged, 0.1);
    const Field step = Field::sample_real(cr.grid(), [](double x) { return x > 0 ? 1.0 : 0.0; });
    Trajectory tr;
    CHECK_NOTHROW(tr = evolve(step, cr));
    CHECK(tr.resolution_lost);
    CHECK(tr.stop_reason == "resolution-lost");
    CHECK(tr.t_last_valid == 0.0);
}

TEST_CASE("snapshot strides")
{
    SimConfig c = quick(Equation::gauged, 0.1);
    c.snapshot_stride = 20;
    const Field u0 = Field::sample_real(c.grid(), [](double x) { return std::exp(-x * x); });
    const Trajectory tr = evolve(u0, c);
    CHECK(tr.snapshots.size() == 6);
    for (std::size_t i = 0; i < tr.t.size(); ++i) CHECK(tr.t[i] == doctest::Approx(0.02 * i));
    c.snapshot_stride = 0;
    CHECK(evolve(u0, c).snapshots.size() == 2);
}

TEST_CASE("step residual shrinks like dt^4")
{
    const Grid g(4096, 200.0);
    const Field v0 = Field::sample_real(g, [](double x) { return 1.5 * std::exp(-x * x / 2); });
    double r[2];
    for (int k = 0; k < 2; ++k) {
        SimConfig c;
        c.dt = k == 0 ? 4e-3 : 2e-3;
        r[k] = diagnose(v0, 0, c).step_residual;
    }
    // local error dt^5 over dt: order 4
    CHECK(std::log2(r[0] / r[1]) == doctest::Approx(4.0).epsilon(0.1));
}

TEST_CASE("Lax residual: converges for true trajectories, large for a fake one")
{
    const Grid g(4096, 200.0);
    const Field v0 = Field::sample_real(g, [](double x) { return std::exp(-x * x / 2); });
    const Field f = Field::sample_real(g, [](double x) { return std::exp(-(x - 0.5) * (x - 0.5)); });
    SimConfig c;
    c.dt = 1e-3;
    c.t_end = 3e-3;
    c.snapshot_stride = 1;
    c.stride = 1000;
    c.step_residual = false;
    const Trajectory tr = evolve(v0, c);
    const double good = lax_residual(tr, f, 1);
    // the middle snapshot replaced by a static copy of v0
    const double bad = lax_residual(tr.snapshots[0], tr.snapshots[0], tr.snapshots[0], 1e-3, f)
                       + lax_residual(tr.snapshots[0], tr.snapshots[1], tr.snapshots[0], 1e-3, f);
    MESSAGE("lax residual " << good << " control " << bad);
    CHECK(good < 1e-4);
    CHECK(bad > 1e3 * good);
    CHECK_THROWS_AS(lax_residual(tr, f, 0), std::out_of_range);
}

TEST_CASE("diagnostics csv")
{
    std::ostringstream os;
    DiagnosticsRecord d;
    d.t = 0.5;
    d.M = 2.0;
    write_diagnostics_csv(os, {d});
    const std::string s = os.str();
    CHECK(s.rfind("t,M,E,E_sd,P,virial,chirality,step_residual,spectral_tail\n", 0) == 0);
    CHECK(s.find("5.00000000000000000e-01,2.00000000000000000e+00") != std::string::npos);
}
