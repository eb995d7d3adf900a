#include "doctest.h"
#include "helpers.hpp"

#include "cmlab/operators.hpp"
#include "cmlab/profiles.hpp"

#include <gsl/gsl_integration.h>

using namespace cm;
using namespace cmtest;

namespace {
const Grid G(4096, 200.0);
}

TEST_CASE("Q and R at sample points")
{
    CHECK(prof::Q(0) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
    CHECK(prof::Q(1) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(std::abs(prof::R(0) - cplx(0, -std::sqrt(2.0))) < 1e-15);
    const Field q = soliton_Q(G), r = soliton_R(G);
    for (int j = 0; j < G.N; ++j) {
        CHECK(q.v[j].imag() == 0.0);
        CHECK(q.v[j].real() > 0.0);
        CHECK(std::abs(std::abs(r.v[j]) - q.v[j].real()) < 1e-15);
        if (j > 0) CHECK(q.v[j] == q.v[G.N - j]);  // even
    }
}

TEST_CASE("derivatives of Q against finite differences")
{
    for (double y : {-3.0, -0.4, 0.0, 0.7, 5.0}) {
        const double h = 1e-5;
        CHECK(prof::Qy(y) == doctest::Approx((prof::Q(y + h) - prof::Q(y - h)) / (2 * h)).epsilon(1e-8));
        CHECK(prof::Qyy(y) == doctest::Approx((prof::Qy(y + h) - prof::Qy(y - h)) / (2 * h)).epsilon(1e-7));
    }
}

TEST_CASE("profiles P and P1")
{
    const ProfileParams zero{};
    CHECK(max_abs(profile_P(zero, G)) == 0.0);
    CHECK(max_abs(profile_P1(zero, G)) == 0.0);
    const ProfileParams b1{1, 0, 0, 0};
    CHECK(std::abs(prof::P(2.0, b1) - cplx(0, -std::sqrt(2.0 / 5.0))) < 1e-15);
    // closed forms at a generic point
    const ProfileParams p{0.3, -0.2, 0.1, 0.05};
    const double y = 1.7, q = prof::Q(y);
    const cplx P = -I * p.b * (y * y / 4) * q - p.eta * ((1 + y * y) / 4) * q + I * p.nu * (y / 2) * q;
    const cplx P1 = -(I * p.b + p.eta) * (y / 2) * q + (I * p.nu + p.mu) * 0.5 * q;
    CHECK(std::abs(prof::P(y, p) - P) < 1e-15);
    CHECK(std::abs(prof::P1(y, p) - P1) < 1e-15);
}

TEST_CASE("property: P1 lies in the kernel of A_Q")
{
    // A_Q kills span_C{Q, yQ}; a padded grid keeps the 1/x tails of H inside
    const Grid g(32768, 1600.0);
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> U(-0.1, 0.1);
    for (int t = 0; t < 5; ++t) {
        const ProfileParams p{U(rng), U(rng), U(rng), U(rng)};
        const Field p1 = Field::sample(g, [&](double y) { return prof::P1(y, p) * prof::chi_R(y, g.L / 8); });
        const Field a = op_AQ(p1);
        double r = 0, n = 0;
        for (int j = 0; j < g.N; ++j)
            if (std::abs(g.x(j)) <= 100) r += std::norm(a.v[j]), n += std::norm(p1.v[j]);
        CHECK(std::sqrt(r / n) < 1e-5);
    }
}

TEST_CASE("cutoff chi and its normalisation")
{
    for (double x : {0.0, 0.5, 1.0, -1.0}) CHECK(prof::chi(x) == 1.0);
    for (double x : {2.0, 3.0, -2.5}) CHECK(prof::chi(x) == 0.0);
    for (double x = 1.1; x < 1.95; x += 0.1) {
        CHECK(prof::chi(x) > 0.0);
        CHECK(prof::chi(x) < 1.0);
        CHECK(prof::chi(x) == doctest::Approx(prof::chi(-x)));
    }
    // A = (1/2) int chi by adaptive quadrature
    gsl_integration_workspace* ws = gsl_integration_workspace_alloc(1000);
    gsl_function F{[](double x, void*) { return prof::chi(x); }, nullptr};
    double r = 0, err = 0;
    gsl_integration_qags(&F, -2, 2, 1e-14, 1e-13, 1000, ws, &r, &err);
    gsl_integration_workspace_free(ws);
    CHECK(0.5 * r == doctest::Approx(prof::chi_A).epsilon(1e-12));
    // smooth step is C^1 at the ends and symmetric about 1/2
    CHECK(prof::smooth_step(0.0) == 0.0);
    CHECK(prof::smooth_step(1.0) == 1.0);
    CHECK(prof::smooth_step(0.3) + prof::smooth_step(0.7) == doctest::Approx(1.0).epsilon(1e-15));
    const double h = 1e-6;
    CHECK(prof::smooth_step_deriv(0.4) ==
          doctest::Approx((prof::smooth_step(0.4 + h) - prof::smooth_step(0.4 - h)) / (2 * h)).epsilon(1e-7));
}

TEST_CASE("transversality matrix of the Z profiles is diagonal")
{
    const ZProfiles zp(10.0);
    const auto& M = zp.transversality();
    double diag_min = 1e300, off_max = 0;
    for (int j = 0; j < 6; ++j)
        for (int k = 0; k < 6; ++k) {
            if (j == k) diag_min = std::min(diag_min, std::abs(M[j][k]));
            else off_max = std::max(off_max, std::abs(M[j][k]));
        }
    CHECK(diag_min > 1e-3);
    CHECK(off_max < 1e-9);
    // support in |y| <= 2 R0
    for (int k = 1; k <= 6; ++k) {
        CHECK(zp.Z(k, 20.0) == cplx(0.0));
        CHECK(zp.Z(k, -25.0) == cplx(0.0));
    }
    // the grid basis reproduces the matrix by the rectangle rule
    const KernelBasis kb = kernel_basis(G);
    for (int j = 0; j < 6; ++j) {
        const double s = inner_r(kb.K[j], kb.Z[j]);
        CHECK(s == doctest::Approx(M[j][j]).epsilon(1e-6));
    }
}

TEST_CASE("kernel elements K_j in closed form")
{
    const double y = 0.9, q = prof::Q(y);
    CHECK(std::abs(ZProfiles::K(1, y) - prof::LamQ(y)) < 1e-15);
    CHECK(std::abs(ZProfiles::K(2, y) - I * q) < 1e-15);
    CHECK(std::abs(ZProfiles::K(3, y) - prof::Qy(y)) < 1e-15);
    CHECK(std::abs(ZProfiles::K(4, y) - I * y * y * q) < 1e-15);
    CHECK(std::abs(ZProfiles::K(5, y) - (1 + y * y) * q) < 1e-15);
    CHECK(std::abs(ZProfiles::K(6, y) - I * y * q) < 1e-15);
}
