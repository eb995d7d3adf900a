#pragma once
// Time integration of the two equations
//
//   CM-DNLS:  i u_t + u_xx + 2 D_+(|u|^2) u = 0,   2 D_+ rho = -i rho_x + |D| rho
//   gauged:   i v_t + v_xx + |D|(|v|^2) v - 1/4 |v|^4 v = 0
//
// The linear part is integrated exactly in Fourier space (integrating
// factor RK4, or Strang splitting as a cross-check).

#include "cmlab/grid.hpp"
#include "cmlab/spectral.hpp"

#include <functional>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace cm {

enum class Equation { cm_dnls, gauged };
enum class Scheme { if_rk4, strang };

struct SimConfig {
    Equation equation = Equation::gauged;
    int N = 4096;
    double L = 200.0;
    double twist = 0.0;
    double dt = 1e-3;
    double t_end = 1.0;
    Scheme scheme = Scheme::if_rk4;
    bool dealias = true;
    OpModel model = OpModel::line;
    int stride = 10;            // steps between diagnostics records
    int snapshot_stride = 0;    // steps between stored fields; 0: first and last only
    double max_dx_norm = 1e8;   // stop when ||d_x v|| exceeds this
    double min_lambda = 1e-3;   // used by callers that extract a scale
    double resolution_tol = 1e-6;  // top 10 % of the spectrum
    bool step_residual = true;  // step-doubling estimate at each record

    Grid grid() const { return Grid(N, L, twist); }
    void validate() const;
};

// Raised when the field is no longer resolved (spectral tail or non-finite).
struct ResolutionLost : std::runtime_error {
    double t_last;
    ResolutionLost(const std::string& what, double t) : std::runtime_error(what), t_last(t) {}
};

struct DiagnosticsRecord {
    double t = 0;
    double M = 0;
    double E = 0;     // polynomial form
    double E_sd = 0;  // self-dual form
    double P = 0;
    double virial = 0;  // int x Im(conj(v) v_x)  (minus 1/2 int x |u|^4 for CM-DNLS)
    double chirality = 0;
    double step_residual = 0;  // ||one step - two half steps|| / (||v|| dt)
    double tail = 0;           // top-band spectral fraction
};

struct Trajectory {
    SimConfig config;
    std::vector<double> t;
    std::vector<Field> snapshots;
    std::vector<DiagnosticsRecord> diagnostics;
    std::string stop_reason;
    bool resolution_lost = false;
    double t_last_valid = 0;  // set when resolution_lost
};

// right-hand side without the linear part: v_t = i v_xx + nonlinearity(v)
Field nonlinearity(Equation eq, const Field& v, OpModel m = OpModel::line);

Field step_gauged(const Field& v, double dt, const SimConfig& cfg = {});
Field step_cmdnls(const Field& u, double dt, const SimConfig& cfg = {});
Field step(const Field& v, double dt, const SimConfig& cfg);

// conserved quantities of either equation
double energy_poly(Equation eq, const Field& v, OpModel m = OpModel::line);
double energy_sd(Equation eq, const Field& v, OpModel m = OpModel::line);
double momentum(Equation eq, const Field& v, OpModel m = OpModel::line);
DiagnosticsRecord diagnose(const Field& v, double t, const SimConfig& cfg);

// Return true from the hook to stop; the reason string is recorded.
using StopHook = std::function<bool(double t, const Field& v, std::string& reason)>;

// Stops at t_end, at a threshold or when the hook asks to.  Loss of
// resolution (spectral tail over cfg.resolution_tol or non-finite values)
// does not throw: the trajectory up to that point is returned with
// resolution_lost set.
Trajectory evolve(const Field& init, const SimConfig& cfg, const StopHook& hook = {});

// || -i (D~_{v(t+)} f - D~_{v(t-)} f)/(t+ - t-) + [H_v, D~_v] f ||  at v = v(t_index)
double lax_residual(const Trajectory& tr, const Field& f, int t_index);
double lax_residual(const Field& vm, const Field& v, const Field& vp, double dt, const Field& f,
                    OpModel m = OpModel::line);

// Snapshot files: little-endian int32 N, double L, double t, then N pairs (re, im).
void write_snapshot(std::ostream& os, const Field& f, double t);
Field read_snapshot(std::istream& is, double* t = nullptr, double twist = 0.0);

void write_diagnostics_csv(std::ostream& os, const std::vector<DiagnosticsRecord>& d);

}  // namespace cm
