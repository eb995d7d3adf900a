#include "cmlab/chiral.hpp"

#include "cmlab/gauge.hpp"
#include "cmlab/profiles.hpp"
#include "cmlab/spectral.hpp"

#include <gsl/gsl_integration.h>

#include <cmath>
#include <iomanip>
#include <ostream>
#include <stdexcept>

namespace cm {
namespace {

// bracket  1 - eta (1+w^2)/4 - i b w^2/4 - i (eta-nu) w/2  and its x-derivatives
struct Bracket {
    cplx v, d1, d2;
};

Bracket bracket(double b, double eta, double nu, double R, double x)
{
    const cplx e = std::polar(1.0, x / R);
    const cplx w = -I * R * (e - 1.0), w1 = e, w2 = I * e / R;
    const cplx a = cplx(eta, b);  // eta + i b
    const cplx c = I * (eta - nu);
    Bracket br;
    br.v = 1.0 - 0.25 * eta - 0.25 * a * w * w - 0.5 * c * w;
    br.d1 = -0.5 * a * w * w1 - 0.5 * c * w1;
    br.d2 = -0.5 * a * (w1 * w1 + w * w2) - 0.5 * c * w2;
    return br;
}

// bracket = c0 + c1 E + c2 E^2 with E = e^{ix/R}
cplx bracket_coeff(double b, double eta, double nu, double R, int m)
{
    const cplx a = cplx(eta, b);
    switch (m) {
    case 0: return 1.0 - 0.25 * eta + 0.25 * a * R * R + 0.5 * (eta - nu) * R;
    case 1: return -0.5 * a * R * R - 0.5 * (eta - nu) * R;
    default: return 0.25 * a * R * R;
    }
}

struct ChiralEval {
    Field F, F1, F2;
    double phi = 0, phi_tail = 0;
};

// e^{i phi} R bracket with analytic first and second derivatives
ChiralEval eval_chiral(double b, double eta, double nu, double R, const Grid& g, bool derivs)
{
    const int N = g.N;
    ChiralEval ce;
    ce.F = Field(g);
    if (derivs) {
        ce.F1 = Field(g);
        ce.F2 = Field(g);
    }
    rvec r(N);
    for (int j = 0; j < N; ++j) {
        const double x = g.x(j);
        const cplx z = cplx(x, 1.0);
        const cplx R0 = std::sqrt(2.0) / z;
        const Bracket br = bracket(b, eta, nu, R, x);
        ce.F.v[j] = R0 * br.v;
        if (derivs) {
            const cplx R1 = -std::sqrt(2.0) / (z * z), R2 = 2.0 * std::sqrt(2.0) / (z * z * z);
            ce.F1.v[j] = R1 * br.v + R0 * br.d1;
            ce.F2.v[j] = R2 * br.v + 2.0 * R1 * br.d1 + R0 * br.d2;
        }
        const double q = prof::Q(x);
        r[j] = std::norm(ce.F.v[j]) - q * q;
    }
    // phi = 1/2 int_{-inf}^0 r, the part left of the box from the power law
    const Grid gp(N, g.L);
    const rvec C = cumint_spectral(gp, r);
    ce.phi_tail = 0.5 * tail_mass(gp, r);
    ce.phi = 0.5 * C[N / 2] + ce.phi_tail;
    const cplx ph = std::polar(1.0, ce.phi);
    ce.F *= ph;
    if (derivs) {
        ce.F1 *= ph;
        ce.F2 *= ph;
    }
    return ce;
}

void check_hypothesis(double b, double eta, double R)
{
    if (!(R > 10)) throw std::invalid_argument("chiral_profile: requires R > 10");
    if ((std::abs(b) + std::abs(eta)) * std::pow(R, 1.5) > 1.0)
        throw std::invalid_argument("chiral_profile: requires (|b| + |eta|) R^{3/2} <= 1");
}

bool commensurate(double L, double R)
{
    const double m = L / (2.0 * pi * R);
    return std::abs(m - std::round(m)) <= 1e-9 * std::max(1.0, m) && std::round(m) >= 1;
}

double fit_slope(const rvec& x, const rvec& y)
{
    const std::size_t n = x.size();
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < n; ++i) mx += std::log(x[i]), my += std::log(y[i]);
    mx /= n;
    my /= n;
    double sxy = 0, sxx = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double a = std::log(x[i]) - mx;
        sxy += a * (std::log(y[i]) - my);
        sxx += a * a;
    }
    return sxy / sxx;
}

// norms of G(R_b) + Q and G(R_b) + Q + P with analytic derivatives
ScalingRow scaling_row(double b, double eta, double nu, double R, const Grid& g)
{
    ChiralEval ce = eval_chiral(b, eta, nu, R, g, true);
    const int N = g.N;
    const rvec C = gauge_phase(ce.F);
    Field gq(g), gx(g), f(g), fx(g), fxx(g);
    for (int j = 0; j < N; ++j) {
        const double x = g.x(j);
        const cplx F = ce.F.v[j], F1 = ce.F1.v[j], F2 = ce.F2.v[j];
        const double m = std::norm(F), m1 = 2.0 * (std::conj(F) * F1).real();
        const cplx ph = std::polar(1.0, -0.5 * C[j]);
        const cplx G = F * ph;
        const cplx G1 = (F1 - 0.5 * I * m * F) * ph;
        const cplx G2 = (F2 - 0.5 * I * m1 * F - I * m * F1 - 0.25 * m * m * F) * ph;
        const double q = prof::Q(x), q1 = prof::Qy(x), q2 = prof::Qyy(x);
        // P = Q p(x),  p = -eta (1+x^2)/4 - i b x^2/4 + i nu x/2
        const cplx p(-eta * (1 + x * x) / 4, -b * x * x / 4 + nu * x / 2);
        const cplx p1(-eta * x / 2, -b * x / 2 + nu / 2);
        const cplx p2(-eta / 2, -b / 2);
        gq.v[j] = G + q;
        gx.v[j] = G1 + q1;
        f.v[j] = gq.v[j] + q * p;
        fx.v[j] = gx.v[j] + q1 * p + q * p1;
        fxx.v[j] = G2 + q2 + q2 * p + 2.0 * q1 * p1 + q * p2;
    }
    ScalingRow row;
    row.R = R;
    row.phi = ce.phi;
    const NormReport n1 = norms(gq, gx, gx);
    const NormReport n2 = norms(f, fx, fxx);
    row.l2 = n1.l2;
    row.calH1 = n1.calH1;
    row.calH2 = n2.calH2;
    row.sample_defect = chirality_defect(ce.F);
    row.defect = chirality_defect(chiral_profile(b, eta, nu, R, g.with_twist(pi)).u);
    return row;
}

// -2 sqrt(2) i pi e^{-xi} for xi > 0, half of it at xi = 0 (jump)
cplx R_hat(double xi)
{
    if (xi < 0) return 0.0;
    const cplx v = -2.0 * std::sqrt(2.0) * I * pi * std::exp(-xi);
    return xi == 0.0 ? 0.5 * v : v;
}

}  // namespace

Field omega_R(const Grid& g, double R)
{
    if (!(R > 0)) throw std::invalid_argument("omega_R: R must be > 0");
    return Field::sample(g, [R](double x) { return -I * R * (std::polar(1.0, x / R) - 1.0); });
}

ChiralProfile chiral_profile(double b, double eta, double nu, double R, const Grid& g)
{
    check_hypothesis(b, eta, R);
    ChiralEval ce = eval_chiral(b, eta, nu, R, g, false);
    if (g.twist != pi || !commensurate(g.L, R)) return ChiralProfile{std::move(ce.F), ce.phi, ce.phi_tail, false};
    // sum_n (-1)^n R(x + nL) = sqrt(2) (pi/L) / sin(pi (x+i)/L); the bracket is L-periodic
    const cplx ph = std::polar(1.0, ce.phi);
    for (int j = 0; j < g.N; ++j) {
        const double x = g.x(j);
        const cplx rp = std::sqrt(2.0) * (pi / g.L) / std::sin(pi * cplx(x, 1.0) / g.L);
        ce.F.v[j] = ph * rp * bracket(b, eta, nu, R, x).v;
    }
    return ChiralProfile{std::move(ce.F), ce.phi, ce.phi_tail, true};
}

double mollifier_step(double xi, double lambda)
{
    const double l4 = lambda * lambda * lambda * lambda;
    return prof::smooth_step(xi / l4);
}

MollifiedData mollified_data(double b, double eta, double nu, double lambda, const Grid& g, double R)
{
    if (!(lambda > 0 && lambda < 1)) throw std::invalid_argument("mollified_data: lambda must lie in (0, 1)");
    const double l4 = std::pow(lambda, 4);
    if (!(l4 > 2.0 * pi / g.L))
        throw std::invalid_argument("mollified_data: lambda^4 is below the frequency resolution 2 pi/L; use a larger L");
    if (R <= 0) R = 1.0 / lambda;
    if (g.twist != 0.0) throw std::invalid_argument("mollified_data: needs a periodic grid");

    MollifiedData md;
    md.R = R;
    md.phi = eval_chiral(b, eta, nu, R, g, false).phi;
    // bracket = sum_m c_m e^{i m x/R}; multiplying by it shifts the transform
    // by m/R, so both spectra are assembled from exact one-sided values
    const cplx c[3] = {bracket_coeff(b, eta, nu, R, 0), bracket_coeff(b, eta, nu, R, 1), bracket_coeff(b, eta, nu, R, 2)};
    const cplx ph = std::polar(1.0, md.phi);
    Spectrum su{g, cvec(g.N)}, se{g, cvec(g.N)};
    for (int i = 0; i < g.N; ++i) {
        const double xi = g.xi(i);
        for (int m = 0; m < 3; ++m) {
            const double k = xi - m / R;
            const double st = mollifier_step(k, lambda);
            const cplx rh = R_hat(k);
            su.s[i] += ph * c[m] * st * rh;
            se.s[i] += ph * c[m] * (st - 1.0) * rh;
        }
    }
    md.u0 = inverse_fourier(su);
    md.eps = inverse_fourier(se);
    double h2 = 0;
    for (int i = 0; i < g.N; ++i) {
        const double xi = g.xi(i), w = 1 + xi * xi;
        h2 += w * w * std::norm(se.s[i]);
    }
    md.eps_h2 = std::sqrt(h2 / g.L);
    return md;
}

double mollified_eps_h2_quadrature(double b, double eta, double nu, double lambda, double R)
{
    const double l4 = std::pow(lambda, 4);
    if (R <= 0) R = 1.0 / lambda;
    if (!(l4 < 1.0 / R)) throw std::invalid_argument("mollified_eps_h2_quadrature: needs lambda^4 < 1/R");
    const cplx c[3] = {bracket_coeff(b, eta, nu, R, 0), bracket_coeff(b, eta, nu, R, 1), bracket_coeff(b, eta, nu, R, 2)};

    gsl_integration_workspace* ws = gsl_integration_workspace_alloc(1000);
    double total = 0;
    for (int m = 0; m < 3; ++m) {
        struct Ctx {
            double lambda, shift;
        } ctx{lambda, m / R};
        gsl_function fn;
        fn.function = [](double xi, void* p) {
            const auto* c = static_cast<Ctx*>(p);
            const double s = 1.0 - mollifier_step(xi, c->lambda);
            const double k = xi + c->shift, w = 1 + k * k;
            const double rh = 2.0 * std::sqrt(2.0) * pi * std::exp(-xi);
            return w * w * s * s * rh * rh;
        };
        fn.params = &ctx;
        double res = 0, err = 0;
        gsl_integration_qags(&fn, 0.0, l4, 0.0, 1e-12, 1000, ws, &res, &err);
        total += std::norm(c[m]) * res;
    }
    gsl_integration_workspace_free(ws);
    return std::sqrt(total / (2.0 * pi));
}

ScalingReport scaling_check(double b, double eta, double nu, const std::vector<double>& Rs, const ScalingOptions& opt)
{
    if (Rs.size() < 4) throw std::invalid_argument("scaling_check: needs at least 4 R values");
    const Grid g(opt.N, opt.L);
    for (double R : Rs) {
        check_hypothesis(b, eta, R);
        if (!commensurate(opt.L, R))
            throw std::invalid_argument("scaling_check: L/(2 pi R) must be an integer for every R");
    }
    ScalingReport rep;
    rep.rows.resize(Rs.size());
    for (std::size_t i = 0; i < Rs.size(); ++i) rep.rows[i] = scaling_row(b, eta, nu, Rs[i], g);
    rvec x, y[3];
    for (const auto& r : rep.rows) {
        x.push_back(r.R);
        y[0].push_back(r.l2);
        y[1].push_back(r.calH1);
        y[2].push_back(r.calH2);
    }
    for (int k = 0; k < 3; ++k) {
        rep.slope[k] = fit_slope(x, y[k]);
        rep.pass[k] = std::abs(rep.slope[k] - rep.expected[k]) <= rep.tol[k];
    }
    return rep;
}

std::vector<RatioRow> scaling_ratio_table(double delta, const std::vector<double>& lambdas, const ScalingOptions& opt)
{
    const Grid g(opt.N, opt.L);
    std::vector<RatioRow> out;
    for (double lam : lambdas) {
        RatioRow r;
        r.lambda = lam;
        r.b = std::pow(lam, 1.5);
        r.R = std::pow(delta, 2.0 / 3.0) / lam;
        if (!commensurate(opt.L, r.R))
            throw std::invalid_argument("scaling_ratio_table: L/(2 pi R) must be an integer for every lambda");
        const ScalingRow s = scaling_row(r.b, 0.0, 0.0, r.R, g);
        r.r_l2 = s.l2 / delta;
        r.r_h1 = s.calH1 / (std::cbrt(delta) * lam);
        r.r_h2 = s.calH2 / (lam * lam / std::cbrt(delta));
        out.push_back(r);
    }
    return out;
}

void write_scaling_csv(std::ostream& os, const ScalingReport& r)
{
    static const char* names[3] = {"L2", "calH1", "calH2"};
    os << "norm,R,value,slope,expected,pass\n";
    os << std::scientific << std::setprecision(17);
    for (int k = 0; k < 3; ++k)
        for (const auto& row : r.rows) {
            const double v = k == 0 ? row.l2 : (k == 1 ? row.calH1 : row.calH2);
            os << names[k] << ',' << row.R << ',' << v << ',' << r.slope[k] << ',' << r.expected[k] << ','
               << (r.pass[k] ? "PASS" : "FAIL") << '\n';
        }
}

}  // namespace cm
