#pragma once
// Modulated soliton decomposition
//
//   v = [Q + P(b, eta, nu) + eps]_{lambda, gamma, x},
//   [f]_{lambda,gamma,x}(x') = e^{i gamma} lambda^{-1/2} f((x' - x)/lambda)
//
// with (eps_hat, Z_k)_r = 0 for k = 1..3 fixing (lambda, gamma, x), and
// (eps, Z_k)_r = 0 for k = 4..6 fixing (b, eta, nu).  All functionals are
// evaluated in the lab frame against the modulated closed-form Z_k.

#include "cmlab/evolution.hpp"
#include "cmlab/grid.hpp"
#include "cmlab/profiles.hpp"

#include <array>
#include <functional>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace cm {

struct ModulationState {
    double lambda = 1.0, gamma = 0.0, x = 0.0;
    double b = 0.0, eta = 0.0, nu = 0.0, mu = 0.0;
};

struct DecompositionResult {
    ModulationState state;
    Field eps_hat, eps;  // renormalized frame; empty unless requested
    std::array<double, 6> ortho{};  // (eps, Z_k)_r
    int newton_iters = 0;
    double tube = 0;  // ||v - [Q]_{lambda,gamma,x}||
};

struct DecomposeOptions {
    double R0 = 10.0;
    double delta_dec = 0.3;  // tube radius for ||eps_hat||
    double tol = 1e-10;      // Newton stop on max |F_k|
    int max_iter = 50;
    double fd_step = 1e-6;   // centred differences in (log lambda, gamma, x)
    bool fields = false;     // also return eps_hat and eps
};

struct DecompositionError : std::runtime_error {
    ModulationState last;
    DecompositionError(const std::string& w, const ModulationState& s) : std::runtime_error(w), last(s) {}
};

struct ResolutionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Band-limited interpolation of f at arbitrary points (direct sum over the
// N Fourier modes, O(N) per point).  The OpenMP version splits the points.
cvec trig_interp(const Field& f, const rvec& pts);
cvec trig_interp_serial(const Field& f, const rvec& pts);

// w(y) = lambda^{1/2} e^{-i gamma} v(lambda y + x), sampled on v's grid
Field renormalize(const Field& v, double lambda, double gamma, double x0);
// [f]_{lambda,gamma,x} sampled on f's grid.  Throws ResolutionError when the
// result carries more than 1e-6 of its spectrum in the top 10 % band.
Field modulate(const Field& f, double lambda, double gamma, double x0);
Field modulate(const std::function<cplx(double)>& f, const Grid& g, double lambda, double gamma, double x0);

// (v, [f]_{lambda,gamma,x})_r for a closed-form f supported in |y| <= ymax
double lab_inner(const Field& v, const std::function<cplx(double)>& f, const ModulationState& s,
                 double ymax = 0);

// lambda from the half-maximum width of |v|^2, x from its peak, gamma from
// the phase there
ModulationState initial_guess(const Field& v);

// Z profiles for radius R0, built once per R0 and shared
std::shared_ptr<const ZProfiles> z_profiles(double R0 = 10.0);

DecompositionResult decompose(const Field& v, const DecomposeOptions& opt = {},
                              const ModulationState* guess = nullptr);

struct RefinedParams {
    double b = 0, eta = 0, nu = 0;
    double R1 = 0;
};

// w1 given in the renormalized frame; R1 = lambda^{-3/4} must fit in L/8
RefinedParams refined_params(const Field& w1, double lambda);
// same functionals from the lab-frame field v and its decomposition:
// (w1, f)_r = lambda (D_v v, [f]_{lambda,gamma,x})_r
RefinedParams refined_params_lab(const Field& v, const ModulationState& s, OpModel m = OpModel::line);

// w1 = D_w w
Field w1_of(const Field& w, OpModel m = OpModel::line);

struct TrackRow {
    double t = 0;
    ModulationState state;
    std::array<double, 6> ortho{};
    int newton_iters = 0;
    double tube = 0;  // ||v - [Q]_{lambda,gamma,x}||
    RefinedParams refined;
    double ell = 0;         // (b^2 + eta^2) / lambda^3
    double eta_over_lambda = 0, nu_over_lambda = 0;
};

struct TrackResult {
    std::vector<TrackRow> rows;
    bool truncated = false;
    std::string reason;
};

TrackRow track_one(const Field& v, double t, const DecomposeOptions& opt, const ModulationState* guess,
                   OpModel m = OpModel::line);
TrackResult track(const Trajectory& tr, const DecomposeOptions& opt = {}, const ModulationState* guess = nullptr);

void write_track_csv(std::ostream& os, const TrackResult& tr);

}  // namespace cm
