#pragma once
// Formal modulation laws in the renormalized time s (ds/dt = 1/lambda^2):
//
//   lambda_s = -b lambda     gamma_s = eta/2      x_s = -lambda nu
//   b_s = -3/2 b^2 - 1/2 eta^2    eta_s = -b eta    nu_s = -b nu
//
// Conserved: l = (b^2 + eta^2)/lambda^3, eta/lambda, nu/lambda.  Closed form
// with eta0 = eta/lambda:
//   lambda(t) = (l/4)(t - T)^2 + eta0^2/l
//   gamma(t)  = gamma* + sgn(eta0) (arctan(l (t - T)/(2|eta0|)) + pi/2)

#include <iosfwd>
#include <string>
#include <vector>

namespace cm {

struct ModLawState {
    double lambda = 1.0, gamma = 0.0, x = 0.0, b = 0.0, eta = 0.0, nu = 0.0;
};

// d/ds of the state
ModLawState modlaw_rhs(const ModLawState& s);

struct ModLawConserved {
    double ell = 0, eta0 = 0, nu0 = 0;  // l, eta/lambda, nu/lambda
};
ModLawConserved modlaw_conserved(const ModLawState& s);

struct ModLawOptions {
    double dt_max = 1e-2;
    // step in s limited by ds * max(|b|, |eta|) <= step_fraction
    double step_fraction = 5e-3;
    double lambda_floor = 1e-8;
};

struct ModLawSeries {
    std::vector<double> t;
    std::vector<ModLawState> states;
    bool hit_floor = false;  // stopped at lambda_floor (blow-up trend)
    double t_stop = 0;
    double min_lambda = 0, t_at_min = 0;
    std::size_t steps = 0;
};

// RK4 in lab time; records the state at every entry of t_out (ascending or
// descending from t_out[0], the time of s0) and tracks the minimum of
// lambda over all internal steps.
ModLawSeries integrate_modlaw(const ModLawState& s0, const std::vector<double>& t_out, const ModLawOptions& opt = {});

struct ClosedFormValue {
    double lambda = 0, gamma = 0;
};

// throws std::invalid_argument for l <= 0
ClosedFormValue closed_form(double ell, double eta0, double T, double gamma_star, double t);

struct ClosedFormParams {
    double ell = 0, eta0 = 0, nu0 = 0, T = 0, gamma_star = 0;
};
// parameters of the closed-form solution through s at time t0
ClosedFormParams closed_form_params(const ModLawState& s, double t0);

struct ScanRow {
    double eta0 = 0, nu0 = 0;
    double min_lambda = 0, t_at_min = 0;
    double phase_jump = 0;
    double x_slope = 0;  // fitted dx/dt
    bool blowup = false;
    std::string classification;  // "blow-up" or "bounce"
};

struct ScanOptions {
    ModLawOptions ode{1e300, 2e-3, 1e-8};
    // integration window T +- tau with the arctan deficit 4|eta0|/(l tau)
    // below this
    double phase_tol = 1e-9;
};

// For every (eta0, nu0) the ODE runs through the focusing time T = 0 from
// the closed-form state at -tau to +tau.
std::vector<ScanRow> instability_scan(double ell, const std::vector<double>& eta0_grid,
                                      const std::vector<double>& nu0_grid, const ScanOptions& opt = {});

void write_scan_csv(std::ostream& os, const std::vector<ScanRow>& rows);
void write_modlaw_csv(std::ostream& os, const ModLawSeries& s);

}  // namespace cm
