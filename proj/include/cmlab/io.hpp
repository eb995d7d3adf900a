#pragma once
// Flat key = value configuration files and the mapping onto run settings.
//
// Files use INI/TOML syntax without nesting; a [section] header prefixes
// the keys below it with "section.".  Every key must be consumed by the
// command reading the file, otherwise ConfigError names the leftovers.

#include "cmlab/evolution.hpp"
#include "cmlab/modlaw.hpp"
#include "cmlab/modulation.hpp"

#include <iosfwd>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace cm {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

class KeyValueConfig {
public:
    KeyValueConfig() = default;
    explicit KeyValueConfig(std::map<std::string, std::string> kv) : kv_(std::move(kv)) {}

    static KeyValueConfig from_file(const std::string& path);
    static KeyValueConfig from_string(const std::string& text);

    bool has(const std::string& key) const { return kv_.count(key) != 0; }
    std::string get_string(const std::string& key, const std::string& def) const;
    double get_double(const std::string& key, double def) const;
    int get_int(const std::string& key, int def) const;
    bool get_bool(const std::string& key, bool def) const;

    // keys never read through a getter or has()
    std::vector<std::string> unused() const;
    // throws ConfigError listing unused keys
    void require_all_used() const;

    const std::map<std::string, std::string>& items() const { return kv_; }

private:
    const std::string* find(const std::string& key) const;
    std::map<std::string, std::string> kv_;
    mutable std::set<std::string> used_;
};

// Keys (defaults from SimConfig): equation = gauged | cm_dnls, N, L, twist,
// dt, t_end, scheme = if_rk4 | strang, dealias, model = line | periodic,
// stride, snapshot_stride, max_dx_norm, min_lambda, resolution_tol,
// step_residual.  Validated before returning.
SimConfig sim_config(const KeyValueConfig& c);

// Initial data selected by init.kind (default_kind when absent):
//   soliton      [Q]_{lambda,gamma,x0}
//   chiral       R(x) = sqrt(2)/(x+i) (needs twist = pi)
//   gaussian     amp exp(-(x-x0)^2/width^2) exp(i k0 x)
//   q_plus_p     [Q + P(b,eta,nu,mu) chi_{cutoff}]_{lambda,gamma,x0},
//                lambda defaulting to b^{2/3}
//   snapshot     read from init.file
// Parameters are read as init.<name>.
Field initial_field(const KeyValueConfig& c, const Grid& g, const std::string& default_kind = "soliton");

// Decomposition settings read as track.<name>: R0, delta_dec, tol, max_iter.
DecomposeOptions decompose_options(const KeyValueConfig& c);

// full-precision scientific text for a double
std::string fmt(double v);

// Shared-grid comparison of tracked parameters with the modulation ODE:
// t, the ODE state, the tracked lambda and b, and lambda / lambda_ode.
void write_prediction_csv(std::ostream& os, const TrackResult& tr, const ModLawSeries& ode);

}  // namespace cm
