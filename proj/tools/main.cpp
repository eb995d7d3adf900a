// cmlab: command-line front end.
//
// Exit codes: 0 success, 1 numerical failure, 2 usage or config error,
// 3 resolution lost during an evolution.

#include "cmlab/chiral.hpp"
#include "cmlab/evolution.hpp"
#include "cmlab/gauge.hpp"
#include "cmlab/identities.hpp"
#include "cmlab/io.hpp"
#include "cmlab/modlaw.hpp"
#include "cmlab/modulation.hpp"
#include "cmlab/operators.hpp"

#include "CLI11.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace fs = std::filesystem;
using namespace cm;

namespace {

enum Exit { ok = 0, numerical = 1, usage = 2, resolution = 3 };

struct NumericalFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::ofstream open_out(const fs::path& p)
{
    if (p.has_parent_path()) fs::create_directories(p.parent_path());
    std::ofstream os(p, std::ios::binary);
    if (!os) throw ConfigError("cannot write '" + p.string() + "'");
    return os;
}

// "a:b:n" -> n evenly spaced values, or a comma separated list
std::vector<double> parse_range(const std::string& s)
{
    std::vector<double> out;
    std::string tok;
    if (s.find(':') != std::string::npos) {
        std::istringstream is(s);
        std::vector<std::string> parts;
        while (std::getline(is, tok, ':')) parts.push_back(tok);
        if (parts.size() != 3) throw ConfigError("range '" + s + "' must be a:b:n");
        const double a = std::stod(parts[0]), b = std::stod(parts[1]);
        const int n = std::stoi(parts[2]);
        if (n < 1) throw ConfigError("range '" + s + "': n must be >= 1");
        for (int i = 0; i < n; ++i) out.push_back(n == 1 ? a : a + (b - a) * i / (n - 1));
        return out;
    }
    std::istringstream is(s);
    while (std::getline(is, tok, ',')) out.push_back(std::stod(tok));
    if (out.empty()) throw ConfigError("empty list '" + s + "'");
    return out;
}

// ---------------------------------------------------------------- verify

struct VerifyArgs {
    std::string out;
    double threshold = 1e-5;
    std::string only;
    int N = 4096;
    double L = 200;
    double delta_psi = 0.1;
    double mor_bound = 10.0;
};

int cmd_verify(const VerifyArgs& a)
{
    const Grid g(a.N, a.L);
    SuiteOptions so;
    so.threshold = a.threshold;
    so.only = a.only;
    auto rows = verify_identity_suite(g, so);
    // the Morawetz battery runs unless --only selects something else
    if (a.only.empty() || std::string("morawetz").find(a.only) != std::string::npos) {
        for (const auto& m : morawetz_battery(g, a.delta_psi)) {
            IdentityRow r;
            r.name = "morawetz " + m.name;
            r.anchor = "morawetz-repulsivity";
            r.residual = m.rhs > 0 ? m.ratio : INFINITY;
            r.box_residual = r.residual;
            r.threshold = a.mor_bound;
            r.pass = m.rhs > 0 && m.ratio <= a.mor_bound;
            rows.push_back(r);
        }
    }
    if (rows.empty()) throw ConfigError("verify: --only '" + a.only + "' matches no row");

    int fails = 0;
    std::printf("%-52s %-12s %-26s %s\n", "identity", "residual", "threshold", "");
    for (const auto& r : rows) {
        std::printf("%-52s %-12.3e %-26.3e %s\n", r.name.c_str(), r.residual, r.threshold, r.pass ? "pass" : "FAIL");
        fails += !r.pass;
    }
    std::printf("%zu rows, %d failed\n", rows.size(), fails);
    if (!a.out.empty()) {
        auto os = open_out(a.out);
        write_identity_csv(os, rows);
    }
    return fails ? numerical : ok;
}

// ---------------------------------------------------------------- evolve / blowup

void write_trajectory(const fs::path& dir, const Trajectory& tr)
{
    fs::create_directories(dir / "snapshots");
    {
        auto os = open_out(dir / "diagnostics.csv");
        write_diagnostics_csv(os, tr.diagnostics);
    }
    char name[32];
    for (std::size_t i = 0; i < tr.snapshots.size(); ++i) {
        std::snprintf(name, sizeof name, "snap_%05zu.bin", i);
        auto os = open_out(dir / "snapshots" / name);
        write_snapshot(os, tr.snapshots[i], tr.t[i]);
    }
}

double rel_l2(const Field& a, const Field& b)
{
    const double n = norm_l2(b);
    return n > 0 ? norm_l2(a - b) / n : norm_l2(a);
}

struct Summary {
    std::vector<std::pair<std::string, std::string>> kv;
    void add(const std::string& k, const std::string& v) { kv.emplace_back(k, v); }
    void add(const std::string& k, double v) { kv.emplace_back(k, fmt(v)); }
    void write(const fs::path& p) const
    {
        auto os = open_out(p);
        for (const auto& [k, v] : kv) os << k << " = " << v << '\n';
    }
    void print() const
    {
        for (const auto& [k, v] : kv) std::printf("%s = %s\n", k.c_str(), v.c_str());
    }
};

void summarize(Summary& s, const Trajectory& tr)
{
    const auto& d = tr.diagnostics;
    s.add("stop_reason", tr.stop_reason.empty() ? "t_end" : tr.stop_reason);
    s.add("resolution_lost", tr.resolution_lost ? "true" : "false");
    s.add("t_last", tr.resolution_lost ? tr.t_last_valid : (tr.t.empty() ? 0.0 : tr.t.back()));
    s.add("snapshots", std::to_string(tr.snapshots.size()));
    if (!d.empty()) {
        double dm = 0, de = 0;
        for (const auto& r : d) {
            dm = std::max(dm, std::abs(r.M - d[0].M) / std::abs(d[0].M));
            de = std::max(de, std::abs(r.E_sd - d[0].E_sd));
        }
        s.add("mass_drift_rel", dm);
        s.add("energy_sd_drift_abs", de);
    }
    if (tr.snapshots.size() > 1) s.add("field_drift_rel", rel_l2(tr.snapshots.back(), tr.snapshots.front()));
}

int cmd_evolve(const std::string& config, const std::string& out_flag)
{
    const auto c = KeyValueConfig::from_file(config);
    const SimConfig sc = sim_config(c);
    const Field v0 = initial_field(c, sc.grid());
    const std::string out = out_flag.empty() ? c.get_string("out", "trajectory") : out_flag;
    c.require_all_used();

    const Trajectory tr = evolve(v0, sc);
    write_trajectory(out, tr);
    Summary s;
    summarize(s, tr);
    s.write(fs::path(out) / "run.txt");
    s.print();
    return tr.resolution_lost ? resolution : ok;
}

int cmd_blowup(const std::string& config, const std::string& out_flag)
{
    const auto c = KeyValueConfig::from_file(config);
    const SimConfig sc = sim_config(c);
    if (c.get_string("init.kind", "q_plus_p") != "q_plus_p") throw ConfigError("blowup: init.kind must be q_plus_p");
    const Field v0 = initial_field(c, sc.grid(), "q_plus_p");
    // the construction parameters seed the first decomposition
    ModulationState guess;
    guess.b = c.get_double("init.b", 0.05);
    guess.eta = c.get_double("init.eta", 0.0);
    guess.nu = c.get_double("init.nu", 0.0);
    guess.mu = c.get_double("init.mu", 0.0);
    guess.lambda = c.get_double("init.lambda", std::pow(std::abs(guess.b), 2.0 / 3.0));
    guess.gamma = c.get_double("init.gamma", 0.0);
    guess.x = c.get_double("init.x0", 0.0);
    const DecomposeOptions dopt = decompose_options(c);
    ModLawOptions mo;
    mo.step_fraction = c.get_double("ode.step_fraction", mo.step_fraction);
    mo.dt_max = c.get_double("ode.dt_max", mo.dt_max);
    const std::string out = out_flag.empty() ? c.get_string("out", "blowup") : out_flag;
    c.require_all_used();

    const Trajectory tr = evolve(v0, sc);
    write_trajectory(out, tr);
    Summary s;
    summarize(s, tr);

    TrackResult tk;
    try {
        tk = track(tr, dopt, &guess);
    } catch (const DecompositionError& e) {
        s.add("tracking", std::string("failed at t = 0: ") + e.what());
        s.write(fs::path(out) / "run.txt");
        s.print();
        throw NumericalFailure(std::string("blowup: ") + e.what());
    }
    s.add("tracked_rows", std::to_string(tk.rows.size()));
    s.add("track_truncated", tk.truncated ? "true" : "false");
    if (tk.truncated) s.add("track_reason", tk.reason);
    {
        auto os = open_out(fs::path(out) / "modulation.csv");
        write_track_csv(os, tk);
    }
    const auto& s0 = tk.rows.front().state;
    const ModLawState m0{s0.lambda, s0.gamma, s0.x, s0.b, s0.eta, s0.nu};
    std::vector<double> ts;
    for (const auto& r : tk.rows) ts.push_back(r.t);
    const ModLawSeries ode = integrate_modlaw(m0, ts, mo);
    {
        auto os = open_out(fs::path(out) / "modlaw_prediction.csv");
        write_prediction_csv(os, tk, ode);
    }
    if (ode.hit_floor) s.add("ode_hit_floor_at", ode.t_stop);
    const std::size_t n = std::min(tk.rows.size(), ode.states.size());
    double worst = 0;
    for (std::size_t i = 0; i < n; ++i)
        worst = std::max(worst, std::abs(tk.rows[i].state.lambda / ode.states[i].lambda - 1.0));
    s.add("max_lambda_rel_dev", worst);
    s.write(fs::path(out) / "run.txt");
    s.print();
    return tr.resolution_lost ? resolution : ok;
}

// ---------------------------------------------------------------- modlaw

int cmd_closed_form(double ell, double eta0, double T, double gs, double t)
{
    const ClosedFormValue v = closed_form(ell, eta0, T, gs, t);
    std::printf("lambda = %s\ngamma = %s\n", fmt(v.lambda).c_str(), fmt(v.gamma).c_str());
    return ok;
}

int cmd_integrate(const ModLawState& s0, double t_end, int samples, const std::string& out)
{
    if (samples < 2) throw ConfigError("modlaw integrate: --samples must be >= 2");
    std::vector<double> ts(samples);
    for (int i = 0; i < samples; ++i) ts[i] = t_end * i / (samples - 1);
    const ModLawSeries s = integrate_modlaw(s0, ts);
    if (out.empty()) {
        write_modlaw_csv(std::cout, s);
    } else {
        auto os = open_out(out);
        write_modlaw_csv(os, s);
    }
    if (s.hit_floor) std::fprintf(stderr, "lambda reached the floor at t = %s\n", fmt(s.t_stop).c_str());
    return ok;
}

int cmd_scan(double ell, const std::string& eta, const std::string& nu, const std::string& out)
{
    const auto rows = instability_scan(ell, parse_range(eta), parse_range(nu));
    if (out.empty()) {
        write_scan_csv(std::cout, rows);
    } else {
        auto os = open_out(out);
        write_scan_csv(os, rows);
        std::size_t nb = 0;
        for (const auto& r : rows) nb += r.blowup;
        std::printf("%zu rows, %zu blow-up, %zu bounce\n", rows.size(), nb, rows.size() - nb);
    }
    return ok;
}

// ---------------------------------------------------------------- chiral

struct ChiralArgs {
    double b = 1e-4, eta = 0, nu = 0, R = 20, lambda = 0.5;
    int N = 16384, cells = 16;
    double L = 0;
    std::string out;
    std::string Rs = "20,40,80,160";
};

int cmd_chiral_profile(const ChiralArgs& a)
{
    const double L = a.L > 0 ? a.L : 2 * pi * a.R * a.cells;
    const Grid g(a.N, L, pi);
    const ChiralProfile p = chiral_profile(a.b, a.eta, a.nu, a.R, g);
    std::printf("phi = %s\nperiodized = %s\nchirality_defect = %s\n", fmt(p.phi).c_str(),
                p.periodized ? "true" : "false", fmt(chirality_defect(p.u)).c_str());
    if (!a.out.empty()) {
        {
            auto os = open_out(a.out);
            write_snapshot(os, p.u, 0.0);
        }
        std::ifstream in(a.out, std::ios::binary);
        const Field back = read_snapshot(in, nullptr, pi);
        if (back.v != p.u.v) throw NumericalFailure("chiral profile: reloaded field differs from the emitted one");
        std::printf("reload = bit-exact\n");
    }
    return ok;
}

int cmd_chiral_mollified(const ChiralArgs& a)
{
    const double L = a.L > 0 ? a.L : 2 * pi * 4096;
    const Grid g(a.N, L);
    const MollifiedData m = mollified_data(a.b, a.eta, a.nu, a.lambda, g);
    std::printf("R = %s\nphi = %s\neps_h2 = %s\nchirality_defect = %s\n", fmt(m.R).c_str(), fmt(m.phi).c_str(),
                fmt(m.eps_h2).c_str(), fmt(chirality_defect(m.u0)).c_str());
    if (!a.out.empty()) {
        auto os = open_out(a.out);
        write_snapshot(os, m.u0, 0.0);
    }
    return ok;
}

int cmd_chiral_scaling(const ChiralArgs& a)
{
    ScalingOptions so;
    if (a.L > 0) so.L = a.L;
    const ScalingReport r = scaling_check(a.b, a.eta, a.nu, parse_range(a.Rs), so);
    static const char* names[3] = {"L2", "calH1", "calH2"};
    for (const auto& row : r.rows)
        std::printf("R = %-6g l2 = %.6e calH1 = %.6e calH2 = %.6e defect = %.3e\n", row.R, row.l2, row.calH1,
                    row.calH2, row.defect);
    bool all = true;
    for (int k = 0; k < 3; ++k) {
        std::printf("slope %-6s %.4f expected %.2f +- %.2f %s\n", names[k], r.slope[k], r.expected[k], r.tol[k],
                    r.pass[k] ? "pass" : "FAIL");
        all = all && r.pass[k];
    }
    if (!a.out.empty()) {
        auto os = open_out(a.out);
        write_scaling_csv(os, r);
    }
    return all ? ok : numerical;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"cmlab: Calogero-Moser derivative NLS toolkit"};
    app.require_subcommand(1);

    VerifyArgs va;
    auto* verify = app.add_subcommand("verify", "identity suite and Morawetz battery");
    verify->add_option("--out", va.out, "CSV output path");
    verify->add_option("--threshold", va.threshold, "residual threshold per identity")->capture_default_str();
    verify->add_option("--only", va.only, "run rows whose name or anchor contains this");
    verify->add_option("--N", va.N, "grid points")->capture_default_str();
    verify->add_option("--L", va.L, "box length")->capture_default_str();
    verify->add_option("--delta", va.delta_psi, "delta in psi = <x> - delta log<x>")->capture_default_str();
    verify->add_option("--morawetz-bound", va.mor_bound, "largest accepted ||u||_Mor^2 / (-u_xx, Lambda_psi u)_r")
        ->capture_default_str();

    std::string config, out;
    auto* evolve_cmd = app.add_subcommand("evolve", "evolve a configured initial field");
    evolve_cmd->add_option("config", config, "config file")->required();
    evolve_cmd->add_option("--out", out, "trajectory directory (default: key out, else ./trajectory)");

    auto* blowup = app.add_subcommand("blowup", "evolve Q+P data, track modulation, compare with the ODE");
    blowup->add_option("config", config, "config file")->required();
    blowup->add_option("--out", out, "output directory (default: key out, else ./blowup)");

    auto* modlaw = app.add_subcommand("modlaw", "modulation-law closed form, integration and scans");
    modlaw->require_subcommand(1);
    double ell = 1, eta0 = 0, T = 0, gs = 0, t = 0;
    auto* cf = modlaw->add_subcommand("closed-form", "evaluate lambda(t), gamma(t)");
    cf->add_option("--ell", ell)->required();
    cf->add_option("--eta0", eta0)->capture_default_str();
    cf->add_option("--T", T)->capture_default_str();
    cf->add_option("--gamma-star", gs)->capture_default_str();
    cf->add_option("--t", t)->required();
    ModLawState ms{1.0, 0.0, 0.0, 0.1, 0.0, 0.0};
    double t_end = 1;
    int samples = 101;
    std::string mout;
    auto* integ = modlaw->add_subcommand("integrate", "integrate the ODE from a state at t = 0");
    integ->add_option("--lambda", ms.lambda)->capture_default_str();
    integ->add_option("--gamma", ms.gamma)->capture_default_str();
    integ->add_option("--x", ms.x)->capture_default_str();
    integ->add_option("--b", ms.b)->capture_default_str();
    integ->add_option("--eta", ms.eta)->capture_default_str();
    integ->add_option("--nu", ms.nu)->capture_default_str();
    integ->add_option("--t-end", t_end)->capture_default_str();
    integ->add_option("--samples", samples)->capture_default_str();
    integ->add_option("--out", mout, "CSV path (default stdout)");
    std::string eta_r = "-1:1:21", nu_r = "-1:1:21";
    auto* scan = modlaw->add_subcommand("scan", "rotational instability scan over (eta0, nu0)");
    scan->add_option("--ell", ell)->required();
    scan->add_option("--eta0", eta_r, "a:b:n or a comma list")->capture_default_str();
    scan->add_option("--nu0", nu_r, "a:b:n or a comma list")->capture_default_str();
    scan->add_option("--out", mout, "CSV path (default stdout)");

    auto* chiral = app.add_subcommand("chiral", "chiral profiles, mollified data, scaling check");
    chiral->require_subcommand(1);
    ChiralArgs ca;
    auto common = [&](CLI::App* s) {
        s->add_option("--b", ca.b)->capture_default_str();
        s->add_option("--eta", ca.eta)->capture_default_str();
        s->add_option("--nu", ca.nu)->capture_default_str();
        s->add_option("--L", ca.L, "box length (0: command default)");
        s->add_option("--out", ca.out);
    };
    auto* prof = chiral->add_subcommand("profile", "R_{b,eta,nu} on an anti-periodic grid (snapshot file)");
    common(prof);
    prof->add_option("--R", ca.R)->capture_default_str();
    prof->add_option("--N", ca.N)->capture_default_str();
    prof->add_option("--cells", ca.cells, "L = 2 pi R cells unless --L is given")->capture_default_str();
    auto* moll = chiral->add_subcommand("mollified", "Fourier-mollified chiral data (snapshot file)");
    common(moll);
    moll->add_option("--lambda", ca.lambda)->capture_default_str();
    moll->add_option("--N", ca.N)->capture_default_str();
    auto* scal = chiral->add_subcommand("scaling", "log-log slopes of the chiral profile norms in R");
    common(scal);
    scal->add_option("--R", ca.Rs, "R values, a:b:n or a comma list")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? ok : usage;
    }

    try {
        if (*verify) return cmd_verify(va);
        if (*evolve_cmd) return cmd_evolve(config, out);
        if (*blowup) return cmd_blowup(config, out);
        if (*cf) return cmd_closed_form(ell, eta0, T, gs, t);
        if (*integ) return cmd_integrate(ms, t_end, samples, mout);
        if (*scan) return cmd_scan(ell, eta_r, nu_r, mout);
        if (*prof) return cmd_chiral_profile(ca);
        if (*moll) return cmd_chiral_mollified(ca);
        if (*scal) return cmd_chiral_scaling(ca);
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return usage;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return usage;
    } catch (const ResolutionError& e) {
        std::fprintf(stderr, "resolution lost: %s\n", e.what());
        return resolution;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "numerical failure: %s\n", e.what());
        return numerical;
    }
    return usage;
}
