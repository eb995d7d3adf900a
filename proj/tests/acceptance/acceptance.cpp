// Acceptance checks 1-10.  Each prints one PASS/FAIL line followed by the
// measured numbers; the exit status is the number of failed checks.

#include "cmlab/chiral.hpp"
#include "cmlab/evolution.hpp"
#include "cmlab/gauge.hpp"
#include "cmlab/identities.hpp"
#include "cmlab/modlaw.hpp"
#include "cmlab/modulation.hpp"
#include "cmlab/operators.hpp"
#include "cmlab/profiles.hpp"
#include "cmlab/spectral.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

using namespace cm;

namespace {

using Clock = std::chrono::steady_clock;

double secs_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string f(const char* fm, ...) __attribute__((format(printf, 1, 2)));
std::string f(const char* fm, ...)
{
    char buf[1024];
    va_list ap;
    va_start(ap, fm);
    std::vsnprintf(buf, sizeof buf, fm, ap);
    va_end(ap);
    return buf;
}

SimConfig base(Equation eq, int N, double L, double twist, double dt, double t_end)
{
    SimConfig c;
    c.equation = eq;
    c.N = N;
    c.L = L;
    c.twist = twist;
    c.dt = dt;
    c.t_end = t_end;
    c.stride = 100;
    c.step_residual = false;
    return c;
}

double rel_drift(const Field& a, const Field& b) { return norm_l2(a - b) / norm_l2(b); }

// 1. identity suite on the default grid
Outcome c1()
{
    const auto t0 = Clock::now();
    const auto rows = verify_identity_suite(Grid(4096, 200.0));
    const double t = secs_since(t0);
    double worst = 0;
    std::string name;
    int failed = 0;
    for (const auto& r : rows) {
        if (r.residual > worst) worst = r.residual, name = r.name;
        if (!r.pass || !(r.residual < 1e-5)) ++failed;
    }
    return {failed == 0 && t < 10.0,
            f("%zu rows, %d over 1e-5, max residual %.2e (%s), %.1f s", rows.size(), failed, worst, name.c_str(), t)};
}

// 2. soliton facts
Outcome c2()
{
    const auto t0 = Clock::now();
    const int N = 8192;
    const double L = 400.0;
    const Grid g(N, L);
    const Field q = soliton_Q(g);
    const double M = mass(q), Mex = 4 * std::atan(L / 2);
    const double mrel = std::abs(M - Mex) / Mex;
    const double esd = energy_sd(Equation::gauged, q);
    const double mdef = std::abs(mass(soliton_Q(Grid(4096, 200.0))) - 4 * std::atan(100.0));

    const auto tq = Clock::now();
    const Trajectory trq = evolve(q, base(Equation::gauged, N, L, 0.0, 1e-3, 1.0));
    const double dq = rel_drift(trq.snapshots.back(), q), sq = secs_since(tq);

    const auto tr0 = Clock::now();
    const Field r = soliton_R(g.with_twist(pi));
    const Trajectory trr = evolve(r, base(Equation::cm_dnls, N, L, pi, 1e-3, 1.0));
    const double dr = rel_drift(trr.snapshots.back(), r), sr = secs_since(tr0);

    const bool ok = mrel < 1e-10 && esd < 1e-8 && dq < 1e-4 && dr < 1e-4 && trq.stop_reason == "t_end" &&
                    trr.stop_reason == "t_end" && sq < 60 && sr < 60;
    return {ok, f("L=%g N=%d: |M-4atan(L/2)|/M %.1e (default grid abs %.1e), E_sd(Q) %.1e, Q drift %.2e (%.0f s), "
                  "R drift %.2e (%.0f s), total %.0f s",
                  L, N, mrel, mdef, esd, dq, sq, dr, sr, secs_since(t0))};
}

// 3. gauge equivalence for three smooth data
Outcome c3()
{
    const auto t0 = Clock::now();
    const Grid g(4096, 200.0);
    const std::vector<std::function<cplx(double)>> data = {
        [](double x) { return cplx(std::exp(-x * x / 2)); },
        [](double x) { return 0.8 * std::exp(-x * x / 4) * std::exp(I * 0.5 * x); },
        [](double x) { return std::exp(-(x - 1) * (x - 1) / 3) * cplx(1.0, 0.5 * x); }};
    double worst = 0;
    std::string each;
    for (const auto& d : data) {
        const Field u0 = Field::sample(g, d);
        const Trajectory tu = evolve(u0, base(Equation::cm_dnls, g.N, g.L, 0.0, 1e-3, 0.5));
        const Field v0 = gauge_forward(u0);
        const Trajectory tv = evolve(v0, base(Equation::gauged, g.N, g.L, v0.grid.twist, 1e-3, 0.5));
        const double e = norm_l2(gauge_forward(tu.snapshots.back()) - tv.snapshots.back());
        worst = std::max(worst, e);
        each += f(" %.1e", e);
    }
    const double t = secs_since(t0);
    return {worst < 1e-4 && t < 120, f("||-G(u(0.5)) - v(0.5)||:%s, %.0f s", each.c_str(), t)};
}

// 4. chirality of a Szego-projected packet along the CM flow
Outcome c4()
{
    const auto t0 = Clock::now();
    const Grid g(4096, 200.0);
    const Field u0 = szego_project(Field::sample(g, [](double x) { return std::exp(2.0 * I * x - x * x / 4.0); }));
    SimConfig c = base(Equation::cm_dnls, g.N, g.L, 0.0, 1e-3, 1.0);
    c.stride = 10;
    const Trajectory tr = evolve(u0, c);
    double mx = 0;
    for (const auto& d : tr.diagnostics) mx = std::max(mx, d.chirality);
    return {mx < 1e-6 && tr.stop_reason == "t_end",
            f("max defect over %zu records %.2e (t=0: %.2e), %.0f s", tr.diagnostics.size(), mx,
              tr.diagnostics.front().chirality, secs_since(t0))};
}

double fit_slope(const std::vector<double>& x, const std::vector<double>& y)
{
    double mx = 0, my = 0;
    const std::size_t n = x.size();
    for (std::size_t i = 0; i < n; ++i) mx += std::log(x[i]), my += std::log(y[i]);
    mx /= n;
    my /= n;
    double sxy = 0, sxx = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sxy += (std::log(x[i]) - mx) * (std::log(y[i]) - my);
        sxx += (std::log(x[i]) - mx) * (std::log(x[i]) - mx);
    }
    return sxy / sxx;
}

// 5. Lax residual convergence with a reversed-time negative control
Outcome c5()
{
    const auto t0 = Clock::now();
    const Grid g(4096, 200.0);
    const Field v0 = Field::sample(g, [](double x) { return cplx(std::exp(-x * x / 2)); });
    const Field fp = Field::sample(g, [](double x) { return cplx(std::exp(-(x - 0.5) * (x - 0.5))); });
    std::vector<double> dts = {4e-3, 2e-3, 1e-3}, res, ctl;
    for (double dt : dts) {
        SimConfig c = base(Equation::gauged, g.N, g.L, 0.0, dt, 0);
        const long n = std::lround(0.1 / dt);
        c.t_end = (n + 1) * dt;
        c.snapshot_stride = 1;
        c.stride = 1000000;
        const Trajectory tr = evolve(v0, c);
        res.push_back(lax_residual(tr, fp, static_cast<int>(n)));
        // control: neighbours swapped, i.e. the time derivative with the wrong sign
        ctl.push_back(lax_residual(tr.snapshots[n + 1], tr.snapshots[n], tr.snapshots[n - 1], dt, fp));
    }
    const double s = fit_slope(dts, res), sc = fit_slope(dts, ctl);
    const bool ok = std::abs(s - 2.0) <= 0.2 && ctl.back() > 100 * res.back() && std::abs(sc) < 0.5 && secs_since(t0) < 120;
    return {ok, f("residuals %.2e %.2e %.2e slope %.3f; control %.2e %.2e %.2e slope %.2f, %.0f s", res[0], res[1],
                  res[2], s, ctl[0], ctl[1], ctl[2], sc, secs_since(t0))};
}

// 6. modulation laws against the closed form, and the instability scan
Outcome c6()
{
    const auto t0 = Clock::now();
    const ModLawState s{1.0, 0.3, 0.0, 0.1, 0.02, 0.05};
    const auto p = closed_form_params(s, 0.0);
    std::vector<double> ts;
    for (int i = 0; i <= 400; ++i) ts.push_back(2 * p.T * i / 400.0);
    const ModLawSeries r = integrate_modlaw(s, ts);
    const auto c0 = modlaw_conserved(s);
    double el = 0, eg = 0, dc = 0;
    for (std::size_t i = 0; i < r.t.size(); ++i) {
        const auto c = closed_form(p.ell, p.eta0, p.T, p.gamma_star, r.t[i]);
        el = std::max(el, std::abs(c.lambda - r.states[i].lambda));
        eg = std::max(eg, std::abs(c.gamma - r.states[i].gamma));
        const auto ci = modlaw_conserved(r.states[i]);
        dc = std::max({dc, std::abs(ci.ell / c0.ell - 1), std::abs(ci.eta0 / c0.eta0 - 1), std::abs(ci.nu0 / c0.nu0 - 1)});
    }
    const double ell = 1.0;
    const std::vector<double> etas = {1e-3, -1e-3, 0.01, -0.05, 0.1, 0.3, -0.5};
    const auto rows = instability_scan(ell, etas, {0.0, 0.2});
    double em = 0, ej = 0;
    bool cls = true;
    for (const auto& w : rows) {
        em = std::max(em, std::abs(w.min_lambda - w.eta0 * w.eta0 / ell));
        ej = std::max(ej, std::abs(w.phase_jump - (w.eta0 > 0 ? pi : -pi)));
        cls = cls && w.classification == "bounce";
    }
    const double t = secs_since(t0);
    const bool ok = r.t.size() == ts.size() && el < 1e-8 && eg < 1e-8 && dc < 1e-10 && em < 1e-9 && ej < 1e-6 && cls && t < 10;
    return {ok, f("lambda %.1e gamma %.1e conserved drift %.1e; scan %zu rows min-lambda %.1e phase %.1e, %.1f s", el,
                  eg, dc, rows.size(), em, ej, t)};
}

// 7. PDE blow-up trend against the modulation ODE
Outcome c7()
{
    const auto t0 = Clock::now();
    const double b0 = 0.05, lam0 = std::pow(b0, 2.0 / 3);
    SimConfig c = base(Equation::gauged, 8192, 200.0, 0.0, 1e-4, 0.4);
    c.snapshot_stride = 50;
    c.stride = 50;
    const ProfileParams pp{b0, 0, 0, 0};
    const Field v0 = modulate([&](double y) { return prof::Q(y) + prof::P(y, pp) * prof::chi_R(y, 40); }, c.grid(),
                              lam0, 0, 0);
    const Trajectory tr = evolve(v0, c);
    DecomposeOptions o;
    o.delta_dec = 10;
    const ModulationState guess{lam0, 0, 0, b0, 0, 0, 0};
    const TrackResult trk = track(tr, o, &guess);
    if (trk.rows.empty()) return {false, "no tracked rows"};
    const auto& s0 = trk.rows[0].state;
    std::vector<double> ts;
    for (const auto& r : trk.rows) ts.push_back(r.t);
    const ModLawSeries ode = integrate_modlaw({s0.lambda, s0.gamma, s0.x, s0.b, s0.eta, s0.nu}, ts);

    // window: from t = 0 while b >= 0.025
    std::size_t n = 0;
    while (n < trk.rows.size() && n < ode.states.size() && trk.rows[n].state.b >= 0.025) ++n;
    bool mono = true;
    double dev = 0, ell_drift = 0;
    const double ell0 = trk.rows[0].ell;
    for (std::size_t i = 0; i < n; ++i) {
        if (i > 0 && !(trk.rows[i].state.lambda < trk.rows[i - 1].state.lambda)) mono = false;
        dev = std::max(dev, std::abs(trk.rows[i].state.lambda / ode.states[i].lambda - 1));
        ell_drift = std::max(ell_drift, std::abs(trk.rows[i].ell / ell0 - 1));
    }
    const double b_end = trk.rows[n - 1].state.b;
    const bool halved = n < trk.rows.size();  // b fell below 0.025 inside the tracked range
    const double t = secs_since(t0);
    const bool ok = mono && dev < 0.10 && ell_drift < 0.20 && halved && t < 900;
    return {ok, f("%zu rows in window (t <= %.3f, b %.4f -> %.4f%s), monotone %s, max |lambda/lambda_ode - 1| %.2e, "
                  "ell drift %.2e; stop %s%s, %.0f s",
                  n, trk.rows[n - 1].t, trk.rows[0].state.b, b_end, halved ? "" : ", window not closed",
                  mono ? "yes" : "no", dev, ell_drift, tr.stop_reason.c_str(),
                  trk.truncated ? (", track truncated: " + trk.reason).c_str() : "", t)};
}

// 8. decomposition round trip over 100 random draws
Outcome c8()
{
    const auto t0 = Clock::now();
    const Grid g(4096, 200.0);
    const auto zp = z_profiles(10);
    // planted mu direction: y Q^3 chi_8 orthogonalised against Z_3
    auto ym = [](double y) { const double q = prof::Q(y); return cplx(y * q * q * q); };
    auto z3 = [&](double y) { return zp->Z(3, y); };
    const double beta = zp->inner([&](double y) { return ym(y) * prof::chi_R(y, 8); }, z3) / zp->inner(z3, z3);
    auto emu = [&](double y) { return ym(y) * prof::chi_R(y, 8) - beta * z3(y); };
    const double emu_ym = zp->inner(emu, ym);

    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> U(0, 1);
    double worst[7] = {0}, worst_o = 0, worst_p = 0;
    int maxit = 0, maxit_p = 0;
    for (int d = 0; d < 100; ++d) {
        const double b = 0.1 * (2 * U(rng) - 1), ab = std::abs(b);
        const double eta = std::pow(ab, 1.01) * (2 * U(rng) - 1), nu = std::pow(ab, 0.99) * (2 * U(rng) - 1);
        const double lam = 0.5 + U(rng), gam = pi * (2 * U(rng) - 1), x0 = 4 * (2 * U(rng) - 1);
        const double mu = 0.01 * (2 * U(rng) - 1);
        const double cm = -pi * mu / emu_ym;
        const ProfileParams pp{b, eta, nu, 0};
        const Field v = modulate(
            [&](double y) { return prof::Q(y) + prof::P(y, pp) * prof::chi_R(y, 21) + cm * emu(y); }, g, lam, gam, x0);
        const ModulationState ex{lam, gam, x0, b, eta, nu, mu};
        DecomposeOptions o;
        o.delta_dec = 10;
        const auto r = decompose(v, o, &ex);
        const double e[7] = {r.state.lambda - lam, std::remainder(r.state.gamma - gam, 2 * pi), r.state.x - x0,
                             r.state.b - b, r.state.eta - eta, r.state.nu - nu, r.state.mu - mu};
        for (int k = 0; k < 7; ++k) worst[k] = std::max(worst[k], std::abs(e[k]));
        for (double q : r.ortho) worst_o = std::max(worst_o, std::abs(q));
        maxit = std::max(maxit, r.newton_iters);
        // same field from a guess off by 1e-3 in (log lambda, gamma, x)
        const ModulationState off{lam * 1.001, gam + 1e-3, x0 - 1e-3, b, eta, nu, mu};
        const auto rp = decompose(v, o, &off);
        const double ep[7] = {rp.state.lambda - lam, std::remainder(rp.state.gamma - gam, 2 * pi), rp.state.x - x0,
                              rp.state.b - b, rp.state.eta - eta, rp.state.nu - nu, rp.state.mu - mu};
        for (double e : ep) worst_p = std::max(worst_p, std::abs(e));
        maxit_p = std::max(maxit_p, rp.newton_iters);
    }
    const double we = *std::max_element(worst, worst + 7), t = secs_since(t0);
    return {we < 1e-8 && worst_o < 1e-10 && maxit <= 10 && worst_p < 1e-8 && t < 60,
            f("max errors lambda %.1e gamma %.1e x %.1e b %.1e eta %.1e nu %.1e mu %.1e; ortho %.1e; Newton <= %d; "
              "perturbed guesses: max error %.1e, Newton <= %d; %.1f s",
              worst[0], worst[1], worst[2], worst[3], worst[4], worst[5], worst[6], worst_o, maxit, worst_p, maxit_p,
              t)};
}

// 9. chiral scaling slopes and chirality of the emitted profiles
Outcome c9()
{
    const auto t0 = Clock::now();
    const ScalingReport rep = scaling_check(1e-4, 0, 0, {20, 40, 80, 160});
    double dmax = 0, smax = 0;
    for (const auto& r : rep.rows) dmax = std::max(dmax, r.defect), smax = std::max(smax, r.sample_defect);
    const double t = secs_since(t0);
    const bool ok = rep.pass[0] && rep.pass[1] && rep.pass[2] && dmax < 1e-5 && t < 120;
    return {ok, f("slopes L2 %.3f calH1 %.3f calH2 %.3f; emitted defect <= %.1e (pointwise samples %.1e), %.1f s",
                  rep.slope[0], rep.slope[1], rep.slope[2], dmax, smax, t)};
}

// 10. refined parameter proximity |b~ - b| <= C b^{13/12}
Outcome c10()
{
    const auto t0 = Clock::now();
    const Grid g(16384, 400.0);
    std::vector<double> bs = {0.02, 0.05, 0.1}, C;
    std::string each;
    for (double b : bs) {
        const double lam = std::pow(b, 2.0 / 3);
        const ProfileParams p{b, 0.5 * b, 0.5 * b, 0};
        // radiation: a fixed localized packet scaled to ||.||_calH1 = lambda^2
        Field rad = Field::sample(g, [](double y) {
            return std::exp(-(y - 1.5) * (y - 1.5) / 8) * cplx(std::cos(0.7 * y), 0.4 * std::sin(1.3 * y));
        });
        rad = (lam * lam / norms(rad).calH1) * rad;
        const Field w1 = Field::sample(g, [&](double y) { return prof::P1(y, p); }) + rad;
        const RefinedParams r = refined_params(w1, lam);
        const double c = std::abs(r.b - b) / std::pow(b, 13.0 / 12.0);
        C.push_back(c);
        each += f(" b=%.2f: b~=%.6f C=%.3f;", b, r.b, c);
    }
    // stable: the constants at the smaller b do not exceed twice the b = 0.1 value
    const bool ok = C[0] <= 2 * C[2] && C[1] <= 2 * C[2];
    return {ok, f("%s %.1f s", each.c_str(), secs_since(t0))};
}

}  // namespace

int main()
{
    setvbuf(stdout, nullptr, _IONBF, 0);
    const std::vector<std::pair<const char*, std::function<Outcome()>>> checks = {
        {"1 identity suite", c1},           {"2 soliton facts", c2},
        {"3 gauge equivalence", c3},        {"4 chirality conservation", c4},
        {"5 Lax residual", c5},             {"6 modulation laws", c6},
        {"7 blow-up trend", c7},            {"8 decomposition", c8},
        {"9 chiral scaling", c9},           {"10 refined parameters", c10},
    };
    int failed = 0;
    for (const auto& [name, fn] : checks) {
        Outcome o;
        try {
            o = fn();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        if (!o.pass) ++failed;
        std::printf("%s criterion %s: %s\n", o.pass ? "PASS" : "FAIL", name, o.detail.c_str());
    }
    std::printf("%d of %zu criteria failed\n", failed, checks.size());
    return failed;
}
