#include "doctest.h"
#include "helpers.hpp"

#include "cmlab/modulation.hpp"
#include "cmlab/profiles.hpp"

#include <sstream>

using namespace cm;
using namespace cmtest;

namespace {
const Grid G(4096, 200.0);
}

TEST_CASE("trigonometric interpolation is exact on grid modes")
{
    const Grid g(256, 20.0);
    const double k1 = 2 * pi * 3 / g.L, k2 = -2 * pi * 7 / g.L;
    auto f = [&](double x) { return std::exp(I * k1 * x) + 0.5 * std::exp(I * k2 * x); };
    const Field s = Field::sample(g, f);
    rvec pts;
    for (int i = 0; i < 50; ++i) pts.push_back(-10 + 0.4 * i + 0.0137);
    const cvec a = trig_interp(s, pts), b = trig_interp_serial(s, pts);
    for (std::size_t i = 0; i < pts.size(); ++i) {
        CHECK(std::abs(a[i] - f(pts[i])) < 1e-12);
        CHECK(std::abs(a[i] - b[i]) < 1e-13);
    }
    // at the nodes the samples come back
    const cvec c = trig_interp(s, g.nodes());
    for (int j = 0; j < g.N; ++j) CHECK(std::abs(c[j] - s.v[j]) < 1e-12);
}

TEST_CASE("property: renormalize inverts modulate")
{
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> U(-1, 1);
    for (int t = 0; t < 4; ++t) {
        const double lam = 1 + 0.4 * U(rng), gam = pi * U(rng), x0 = 5 * U(rng);
        const Field f = random_field(G, 10 + t, 4.0, 1.0);
        const Field m = modulate(f, lam, gam, x0);
        // mass is invariant under the symmetry group
        CHECK(mass(m) == doctest::Approx(mass(f)).epsilon(1e-10));
        CHECK(rel(renormalize(m, lam, gam, x0), f) < 1e-9);
    }
}

TEST_CASE("modulate refuses unresolved scales")
{
    CHECK_THROWS_AS(modulate([](double y) { return cplx(prof::Q(y)); }, G, 1e-3, 0, 0), ResolutionError);
    CHECK_THROWS(renormalize(soliton_Q(G), -1.0, 0, 0));
}

TEST_CASE("initial guess for a modulated soliton")
{
    const Field v = modulate([](double y) { return cplx(prof::Q(y)); }, G, 0.7, 1.1, -3.0);
    const ModulationState s = initial_guess(v);
    CHECK(s.lambda == doctest::Approx(0.7).epsilon(0.05));
    CHECK(s.x == doctest::Approx(-3.0).epsilon(0.05));
    CHECK(std::abs(std::remainder(s.gamma - 1.1, 2 * pi)) < 0.05);
}

TEST_CASE("decompose a modulated Q from a cold start")
{
    const Field v = modulate([](double y) { return cplx(prof::Q(y)); }, G, 1.3, -2.0, -7.0);
    DecomposeOptions o;
    o.fields = true;
    const DecompositionResult r = decompose(v, o);
    CHECK(r.state.lambda == doctest::Approx(1.3).epsilon(1e-9));
    CHECK(std::abs(std::remainder(r.state.gamma + 2.0, 2 * pi)) < 1e-9);
    CHECK(r.state.x == doctest::Approx(-7.0).epsilon(1e-9));
    for (double p : {r.state.b, r.state.eta, r.state.nu, r.state.mu}) CHECK(std::abs(p) < 1e-9);
    CHECK(norm_l2(r.eps) < 1e-8);
    CHECK(r.tube < 1e-8);
}

TEST_CASE("property: decomposition round trip on Q + P")
{
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> U(-1, 1);
    for (int t = 0; t < 5; ++t) {
        const double b = 0.08 * U(rng), ab = std::abs(b);
        const double eta = ab * U(rng) * 0.5, nu = ab * U(rng);
        const double lam = 1 + 0.3 * U(rng), gam = pi * U(rng), x0 = 3 * U(rng);
        const ProfileParams pp{b, eta, nu, 0};
        const Field v = modulate([&](double y) { return prof::Q(y) + prof::P(y, pp) * prof::chi_R(y, 21); }, G, lam, gam, x0);
        const ModulationState ex{lam, gam, x0, b, eta, nu, 0};
        DecomposeOptions o;
        o.delta_dec = 10;
        const DecompositionResult r = decompose(v, o, &ex);
        CHECK(std::abs(r.state.lambda - lam) < 1e-8);
        CHECK(std::abs(std::remainder(r.state.gamma - gam, 2 * pi)) < 1e-8);
        CHECK(std::abs(r.state.x - x0) < 1e-8);
        CHECK(std::abs(r.state.b - b) < 1e-8);
        CHECK(std::abs(r.state.eta - eta) < 1e-8);
        CHECK(std::abs(r.state.nu - nu) < 1e-8);
        for (double q : r.ortho) CHECK(std::abs(q) < 1e-10);
        CHECK(r.newton_iters <= 10);
    }
}

TEST_CASE("decomposition leaves the tube with a DecompositionError")
{
    const Field v = Field::sample_real(G, [](double x) { return std::exp(-x * x / 50); });
    DecomposeOptions o;
    o.delta_dec = 0.1;
    CHECK_THROWS_AS(decompose(v, o), DecompositionError);
}

TEST_CASE("refined parameters of P1 recover (b, eta, nu)")
{
    // the functionals are exact up to O(1/R1) tails of y^2 Q^2 - 2
    const double lam = 0.05;
    const Grid g(16384, 400.0);
    const ProfileParams p{0.02, 0.005, -0.01, 0};
    const double R1 = std::pow(lam, -0.75);
    const Field w1 = Field::sample(g, [&](double y) { return prof::P1(y, p); });
    const RefinedParams r = refined_params(w1, lam);
    CHECK(r.R1 == doctest::Approx(R1));
    CHECK(std::abs(r.b - p.b) < 3 * std::abs(p.b) / R1);
    CHECK(std::abs(r.eta - p.eta) < 3 * std::abs(p.eta) / R1);
    CHECK(std::abs(r.nu - p.nu) < 3 * std::abs(p.nu) / R1);
    CHECK_THROWS_AS(refined_params(w1, 1e-4), std::invalid_argument);
}

TEST_CASE("refined parameters agree in the lab and renormalized frames")
{
    const ProfileParams pp{0.04, 0.0, 0.0, 0};
    const ModulationState s{0.8, 0.4, 1.0, 0.04, 0, 0, 0};
    const Grid g(16384, 400.0);
    const Field v = modulate([&](double y) { return prof::Q(y) + prof::P(y, pp) * prof::chi_R(y, 40); }, g, s.lambda,
                             s.gamma, s.x);
    const RefinedParams lab = refined_params_lab(v, s);
    const Field w = renormalize(v, s.lambda, s.gamma, s.x);
    const RefinedParams ren = refined_params(w1_of(w), s.lambda);
    CHECK(lab.b == doctest::Approx(ren.b).epsilon(1e-4));
    CHECK(lab.nu == doctest::Approx(ren.nu).scale(1e-3));
}

TEST_CASE("track csv header")
{
    std::ostringstream os;
    write_track_csv(os, TrackResult{});
    CHECK(os.str() ==
          "t,lambda,gamma,x,b,eta,nu,mu,b_tilde,eta_tilde,nu_tilde,res1,res2,res3,res4,res5,res6,newton_iters,tube,ell,"
          "eta_over_lambda,nu_over_lambda\n");
}
