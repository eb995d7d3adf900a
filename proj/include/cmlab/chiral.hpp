#pragma once
// Chiral modified profiles
//
//   omega_R(x)    = (R/i)(e^{ix/R} - 1)
//   R_{b,eta,nu}  = e^{i phi} R(x) (1 - eta (1+omega^2)/4 - i b omega^2/4 - i (eta-nu) omega/2)
//   phi           = 1/2 int_{-inf}^0 (|R_{b,eta,nu}|^2 - Q^2)
//
// with R(x) = sqrt(2)/(x+i).  The bracket is a trigonometric polynomial in
// e^{ix/R} with non-negative frequencies, so it keeps the Fourier support
// in [0, inf) when 1/R is a frequency of the grid.

#include "cmlab/grid.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace cm {

Field omega_R(const Grid& g, double R);

struct ChiralProfile {
    Field u;
    double phi = 0;
    double phi_tail = 0;  // part of phi from the power-law estimate left of the box
    bool periodized = false;
};

// pre: R > 10 and (|b| + |eta|) R^{3/2} <= 1, else std::invalid_argument.
// On an anti-periodic grid (twist = pi) with L/(2 pi R) an integer the
// samples are those of the box-periodic image sum_n (-1)^n R_{b,eta,nu}(x + nL),
// whose spectrum is exactly one-sided.  Otherwise R_{b,eta,nu} is sampled
// pointwise, and the part of R outside the box leaves a negative-frequency
// floor of order L^{-1/2}.
ChiralProfile chiral_profile(double b, double eta, double nu, double R, const Grid& g);

// smooth step in frequency: 0 for xi <= 0, 1 for xi >= lambda^4
double mollifier_step(double xi, double lambda);

struct MollifiedData {
    Field u0;       // e^{i phi} (R * chi^) bracket
    Field eps;      // e^{i phi} (R * chi^ - R) bracket
    double phi = 0;
    double eps_h2 = 0;  // ||eps||_{H^2} on the grid
    double R = 0;
};

// Built on the frequency side from the exact transform
//   R^(xi) = -2 sqrt(2) i pi e^{-xi} 1_{xi >= 0}
// shifted by the bracket frequencies 0, 1/R, 2/R, so the output spectrum is
// exactly one-sided.  The samples are the L-periodization of u0.
// R defaults to 1/lambda.  pre: lambda in (0, 1), lambda^4 > 2 pi / L, and
// a periodic grid.
MollifiedData mollified_data(double b, double eta, double nu, double lambda, const Grid& g, double R = 0);

// ||eps||_{H^2} from the frequency side: eps^ is a sum of copies of
// (chi - 1) R^ shifted by 0, 1/R, 2/R (disjoint supports for lambda^4 < 1/R)
double mollified_eps_h2_quadrature(double b, double eta, double nu, double lambda, double R = 0);

struct ScalingOptions {
    int N = 1 << 18;
    double L = 2.0 * 3.14159265358979323846 * 2560.0;
};

struct ScalingRow {
    double R = 0;
    double l2 = 0;      // ||G(R_b) + Q||
    double calH1 = 0;   // ||G(R_b) + Q||_{calH1}
    double calH2 = 0;   // ||G(R_b) + Q + P||_{calH2}
    double defect = 0;         // chirality defect of the emitted (periodized) profile
    double sample_defect = 0;  // same for the pointwise samples on the periodic grid
    double phi = 0;
};

struct ScalingReport {
    std::vector<ScalingRow> rows;
    double slope[3] = {0, 0, 0};
    double expected[3] = {1.5, 0.5, -0.5};
    double tol[3] = {0.1, 0.1, 0.15};
    bool pass[3] = {false, false, false};
};

// pre: at least 4 R values, each with L/(2 pi R) an integer and in the
// hypothesis range.  Derivatives are carried analytically through the
// bracket, phi and the gauge phase.
ScalingReport scaling_check(double b, double eta, double nu, const std::vector<double>& Rs,
                            const ScalingOptions& opt = {});

// Norms at b = lambda^{3/2}, eta = nu = 0, R = delta^{2/3}/lambda, divided by
// delta, delta^{1/3} lambda and delta^{-1/3} lambda^2.
struct RatioRow {
    double lambda = 0, R = 0, b = 0;
    double r_l2 = 0, r_h1 = 0, r_h2 = 0;
};
std::vector<RatioRow> scaling_ratio_table(double delta, const std::vector<double>& lambdas,
                                          const ScalingOptions& opt = {});

void write_scaling_csv(std::ostream& os, const ScalingReport& r);

}  // namespace cm
