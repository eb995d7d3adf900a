#include "cmlab/modlaw.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <iomanip>
#include <ostream>
#include <stdexcept>

namespace cm {
namespace {

constexpr double kPi = 3.14159265358979323846;

ModLawState axpy(const ModLawState& a, double h, const ModLawState& d)
{
    return {a.lambda + h * d.lambda, a.gamma + h * d.gamma, a.x + h * d.x,
            a.b + h * d.b,           a.eta + h * d.eta,     a.nu + h * d.nu};
}

// d/dt = (d/ds) / lambda^2
ModLawState rhs_t(const ModLawState& s)
{
    ModLawState d = modlaw_rhs(s);
    const double w = 1.0 / (s.lambda * s.lambda);
    return {d.lambda * w, d.gamma * w, d.x * w, d.b * w, d.eta * w, d.nu * w};
}

ModLawState rk4(const ModLawState& s, double h)
{
    const ModLawState k1 = rhs_t(s);
    const ModLawState k2 = rhs_t(axpy(s, 0.5 * h, k1));
    const ModLawState k3 = rhs_t(axpy(s, 0.5 * h, k2));
    const ModLawState k4 = rhs_t(axpy(s, h, k3));
    ModLawState o = s;
    o = axpy(o, h / 6.0, k1);
    o = axpy(o, h / 3.0, k2);
    o = axpy(o, h / 3.0, k3);
    o = axpy(o, h / 6.0, k4);
    return o;
}

// p(u) = h00 p0 + h10 m0 + h01 p1 + h11 m1 on u in [0, 1] (slopes scaled
// by the step); argmin found by bisection on p'
double hermite_eval(double p0, double m0, double p1, double m1, double u)
{
    const double u2 = u * u, u3 = u2 * u;
    return (2 * u3 - 3 * u2 + 1) * p0 + (u3 - 2 * u2 + u) * m0 + (-2 * u3 + 3 * u2) * p1 + (u3 - u2) * m1;
}
double hermite_slope(double p0, double m0, double p1, double m1, double u)
{
    const double u2 = u * u;
    return (6 * u2 - 6 * u) * p0 + (3 * u2 - 4 * u + 1) * m0 + (-6 * u2 + 6 * u) * p1 + (3 * u2 - 2 * u) * m1;
}
double hermite_argmin(double p0, double m0, double p1, double m1)
{
    double lo = 0, hi = 1;
    if (hermite_slope(p0, m0, p1, m1, lo) > 0) return 0;
    if (hermite_slope(p0, m0, p1, m1, hi) < 0) return 1;
    for (int i = 0; i < 100; ++i) {
        const double mid = 0.5 * (lo + hi);
        (hermite_slope(p0, m0, p1, m1, mid) < 0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}
double hermite_min(double p0, double m0, double p1, double m1)
{
    return hermite_eval(p0, m0, p1, m1, hermite_argmin(p0, m0, p1, m1));
}

double sgn(double a) { return a > 0 ? 1.0 : (a < 0 ? -1.0 : 0.0); }

}  // namespace

ModLawState modlaw_rhs(const ModLawState& s)
{
    if (!(s.lambda > 0)) throw std::invalid_argument("modlaw_rhs: lambda must be > 0");
    return {-s.b * s.lambda, 0.5 * s.eta, -s.lambda * s.nu, -1.5 * s.b * s.b - 0.5 * s.eta * s.eta,
            -s.b * s.eta, -s.b * s.nu};
}

ModLawConserved modlaw_conserved(const ModLawState& s)
{
    const double l3 = s.lambda * s.lambda * s.lambda;
    return {(s.b * s.b + s.eta * s.eta) / l3, s.eta / s.lambda, s.nu / s.lambda};
}

ModLawSeries integrate_modlaw(const ModLawState& s0, const std::vector<double>& t_out, const ModLawOptions& opt)
{
    if (t_out.empty()) throw std::invalid_argument("integrate_modlaw: empty output grid");
    if (!(s0.lambda > 0)) throw std::invalid_argument("integrate_modlaw: lambda must be > 0");
    const double dir = (t_out.size() > 1 && t_out.back() < t_out.front()) ? -1.0 : 1.0;
    for (std::size_t i = 1; i < t_out.size(); ++i)
        if (dir * (t_out[i] - t_out[i - 1]) < 0) throw std::invalid_argument("integrate_modlaw: t_out not monotone");

    ModLawSeries r;
    ModLawState s = s0;
    double t = t_out.front();
    r.t.push_back(t);
    r.states.push_back(s);
    r.min_lambda = s.lambda;
    r.t_at_min = t;
    for (std::size_t i = 1; i < t_out.size() && !r.hit_floor; ++i) {
        while (dir * (t_out[i] - t) > 0) {
            const double rate = std::max(std::abs(s.b), std::abs(s.eta));
            double h = opt.dt_max;
            if (rate > 0) h = std::min(h, s.lambda * s.lambda * opt.step_fraction / rate);
            h = std::min(h, dir * (t_out[i] - t));
            ModLawState n = rk4(s, dir * h);
            if (!(n.lambda > opt.lambda_floor) || !std::isfinite(n.lambda)) {
                r.hit_floor = true;
                break;
            }
            // lambda_t = -b/lambda changes sign inside the step: locate the
            // minimum on the cubic Hermite interpolant
            if (s.b * n.b <= 0 && s.b != n.b) {
                const double m = hermite_min(s.lambda, -s.b / s.lambda * dir * h, n.lambda, -n.b / n.lambda * dir * h);
                if (m < r.min_lambda) {
                    r.min_lambda = m;
                    r.t_at_min = t + dir * h * hermite_argmin(s.lambda, -s.b / s.lambda * dir * h, n.lambda,
                                                               -n.b / n.lambda * dir * h);
                }
            }
            s = n;
            t += dir * h;
            if (std::abs(t_out[i] - t) <= 1e-15 * std::max(1.0, std::abs(t))) t = t_out[i];
            ++r.steps;
            if (s.lambda < r.min_lambda) {
                r.min_lambda = s.lambda;
                r.t_at_min = t;
            }
        }
        if (r.hit_floor) break;
        r.t.push_back(t);
        r.states.push_back(s);
    }
    r.t_stop = t;
    return r;
}

ClosedFormValue closed_form(double ell, double eta0, double T, double gamma_star, double t)
{
    if (!(ell > 0)) throw std::invalid_argument("closed_form: l must be > 0");
    ClosedFormValue v;
    v.lambda = 0.25 * ell * (t - T) * (t - T) + eta0 * eta0 / ell;
    v.gamma = gamma_star;
    if (eta0 != 0.0) v.gamma += sgn(eta0) * (std::atan(ell * (t - T) / (2.0 * std::abs(eta0))) + 0.5 * kPi);
    return v;
}

ClosedFormParams closed_form_params(const ModLawState& s, double t0)
{
    const ModLawConserved c = modlaw_conserved(s);
    if (!(c.ell > 0)) throw std::invalid_argument("closed_form: l must be > 0");
    ClosedFormParams p{c.ell, c.eta0, c.nu0, 0, 0};
    // b/lambda = (l/2)(T - t)
    p.T = t0 + 2.0 * (s.b / s.lambda) / c.ell;
    p.gamma_star = s.gamma;
    if (c.eta0 != 0.0)
        p.gamma_star -= sgn(c.eta0) * (std::atan(c.ell * (t0 - p.T) / (2.0 * std::abs(c.eta0))) + 0.5 * kPi);
    return p;
}

std::vector<ScanRow> instability_scan(double ell, const std::vector<double>& eta0_grid,
                                      const std::vector<double>& nu0_grid, const ScanOptions& opt)
{
    if (!(ell > 0)) throw std::invalid_argument("instability_scan: l must be > 0");
    std::vector<ScanRow> rows(eta0_grid.size() * nu0_grid.size());
    const long n = static_cast<long>(rows.size());
#pragma omp parallel for schedule(dynamic)
    for (long idx = 0; idx < n; ++idx) {
        const double e0 = eta0_grid[idx / nu0_grid.size()], n0 = nu0_grid[idx % nu0_grid.size()];
        ScanRow& row = rows[idx];
        row.eta0 = e0;
        row.nu0 = n0;
        const double tau = e0 != 0.0 ? 4.0 * std::abs(e0) / (ell * opt.phase_tol) : 1.0;
        // closed-form state at t = -tau with T = 0, gamma* = 0
        const ClosedFormValue c = closed_form(ell, e0, 0.0, 0.0, -tau);
        ModLawState s0{c.lambda, c.gamma, 0.0, c.lambda * 0.5 * ell * tau, e0 * c.lambda, n0 * c.lambda};
        std::vector<double> t_out(401);
        for (std::size_t k = 0; k < t_out.size(); ++k) {
            // denser near T = 0: t = tau * sinh-like spacing
            const double u = -1.0 + 2.0 * k / (t_out.size() - 1.0);
            t_out[k] = tau * u * u * u;
        }
        const ModLawSeries sr = integrate_modlaw(s0, t_out, opt.ode);
        row.min_lambda = sr.min_lambda;
        row.t_at_min = sr.t_at_min;
        row.blowup = sr.hit_floor;
        row.classification = sr.hit_floor ? "blow-up" : "bounce";
        row.phase_jump = sr.states.back().gamma - sr.states.front().gamma;
        // least-squares slope of x(t)
        double mt = 0, mx = 0;
        for (std::size_t k = 0; k < sr.t.size(); ++k) mt += sr.t[k], mx += sr.states[k].x;
        mt /= sr.t.size();
        mx /= sr.t.size();
        double sxy = 0, sxx = 0;
        for (std::size_t k = 0; k < sr.t.size(); ++k) {
            sxy += (sr.t[k] - mt) * (sr.states[k].x - mx);
            sxx += (sr.t[k] - mt) * (sr.t[k] - mt);
        }
        row.x_slope = sxx > 0 ? sxy / sxx : 0.0;
    }
    return rows;
}

void write_scan_csv(std::ostream& os, const std::vector<ScanRow>& rows)
{
    os << "eta0,nu0,min_lambda,t_at_min,phase_jump,x_slope,classification\n";
    os << std::scientific << std::setprecision(17);
    for (const auto& r : rows)
        os << r.eta0 << ',' << r.nu0 << ',' << r.min_lambda << ',' << r.t_at_min << ',' << r.phase_jump << ','
           << r.x_slope << ',' << r.classification << '\n';
}

void write_modlaw_csv(std::ostream& os, const ModLawSeries& s)
{
    os << "t,lambda,gamma,x,b,eta,nu,ell,eta_over_lambda,nu_over_lambda\n";
    os << std::scientific << std::setprecision(17);
    for (std::size_t i = 0; i < s.t.size(); ++i) {
        const auto& q = s.states[i];
        const ModLawConserved c = modlaw_conserved(q);
        os << s.t[i] << ',' << q.lambda << ',' << q.gamma << ',' << q.x << ',' << q.b << ',' << q.eta << ','
           << q.nu << ',' << c.ell << ',' << c.eta0 << ',' << c.nu0 << '\n';
    }
}

}  // namespace cm
