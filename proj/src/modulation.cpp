#include "cmlab/modulation.hpp"

#include "cmlab/operators.hpp"
#include "cmlab/spectral.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <iomanip>
#include <ostream>

namespace cm {
namespace {

// f(p) = (1/L) sum_k fhat_k e^{i xi_k p}; the exponentials are advanced by
// e^{i 2 pi p / L} and re-seeded every 64 modes to bound round-off.
cplx interp_at(const Spectrum& s, double p)
{
    const Grid& g = s.grid;
    const int N = g.N;
    const double dxi = 2.0 * pi / g.L;
    const cplx step = std::polar(1.0, dxi * p);
    cplx acc = 0.0, e;
    for (int m = 0; m < N; ++m) {
        const int k = m - N / 2;
        if (m % 64 == 0) e = std::polar(1.0, (2.0 * pi * k + g.twist) / g.L * p);
        acc += s.s[k < 0 ? k + N : k] * e;
        e *= step;
    }
    return acc / g.L;
}

Field resample(const Field& f, const rvec& pts, cplx scale)
{
    cvec vals = trig_interp(f, pts);
    Field o(f.grid, std::move(vals));
    o *= scale;
    return o;
}

void check_resolved(const Field& f, const char* where)
{
    if (!f.finite() || top_band_fraction(f, 0.1) > 1e-6)
        throw ResolutionError(std::string(where) + ": rescaled field exceeds the grid bandwidth");
}

void check_lambda(double lambda, const char* where)
{
    if (!(lambda > 0) || !std::isfinite(lambda)) throw std::invalid_argument(std::string(where) + ": lambda must be > 0");
}


struct Unknowns {
    double loglam, gamma, x;
};

ModulationState to_state(const Unknowns& u) { return ModulationState{std::exp(u.loglam), u.gamma, u.x}; }

double wrap_angle(double a) { return std::remainder(a, 2.0 * pi); }

}  // namespace

cvec trig_interp_serial(const Field& f, const rvec& pts)
{
    const Spectrum s = fourier(f);
    cvec out(pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) out[i] = interp_at(s, pts[i]);
    return out;
}

cvec trig_interp(const Field& f, const rvec& pts)
{
    const Spectrum s = fourier(f);
    cvec out(pts.size());
    const long n = static_cast<long>(pts.size());
#pragma omp parallel for schedule(static)
    for (long i = 0; i < n; ++i) out[i] = interp_at(s, pts[i]);
    return out;
}

Field renormalize(const Field& v, double lambda, double gamma, double x0)
{
    check_lambda(lambda, "renormalize");
    if (lambda == 1.0 && gamma == 0.0 && x0 == 0.0) return v;
    const Grid& g = v.grid;
    rvec pts(g.N);
    for (int j = 0; j < g.N; ++j) pts[j] = lambda * g.x(j) + x0;
    Field w = resample(v, pts, std::sqrt(lambda) * std::polar(1.0, -gamma));
    check_resolved(w, "renormalize");
    return w;
}

Field modulate(const Field& f, double lambda, double gamma, double x0)
{
    check_lambda(lambda, "modulate");
    if (lambda == 1.0 && gamma == 0.0 && x0 == 0.0) return f;
    const Grid& g = f.grid;
    rvec pts(g.N);
    for (int j = 0; j < g.N; ++j) pts[j] = (g.x(j) - x0) / lambda;
    Field o = resample(f, pts, std::polar(1.0 / std::sqrt(lambda), gamma));
    check_resolved(o, "modulate");
    return o;
}

Field modulate(const std::function<cplx(double)>& f, const Grid& g, double lambda, double gamma, double x0)
{
    check_lambda(lambda, "modulate");
    const cplx s = std::polar(1.0 / std::sqrt(lambda), gamma);
    Field o = Field::sample(g, [&](double x) { return s * f((x - x0) / lambda); });
    check_resolved(o, "modulate");
    return o;
}

double lab_inner(const Field& v, const std::function<cplx(double)>& f, const ModulationState& s, double ymax)
{
    const Grid& g = v.grid;
    const double dx = g.dx();
    const cplx sc = std::polar(1.0 / std::sqrt(s.lambda), s.gamma);
    // lattice index n <-> x_n = -L/2 + n dx; n outside [0, N) wraps with the twist
    long n0 = 0, n1 = g.N - 1;
    if (ymax > 0) {
        const double half = ymax * s.lambda;
        if (2.0 * half < g.L && std::abs(s.x) < 2.0 * g.L) {
            n0 = static_cast<long>(std::ceil((s.x - half + 0.5 * g.L) / dx));
            n1 = static_cast<long>(std::floor((s.x + half + 0.5 * g.L) / dx));
        } else {
            n0 = static_cast<long>(std::floor((s.x + 0.5 * g.L) / dx)) - g.N / 2;
            n1 = n0 + g.N - 1;
        }
    }
    double acc = 0.0;
    for (long n = n0; n <= n1; ++n) {
        const long wraps = (n >= 0) ? n / g.N : -((-n + g.N - 1) / g.N);
        const long j = n - wraps * g.N;
        cplx val = v.v[j];
        if (wraps != 0 && g.twist != 0.0) val *= std::polar(1.0, g.twist * static_cast<double>(wraps));
        const double x = -0.5 * g.L + n * dx;
        acc += (val * std::conj(sc * f((x - s.x) / s.lambda))).real();
    }
    return acc * dx;
}

ModulationState initial_guess(const Field& v)
{
    const Grid& g = v.grid;
    const rvec r = v.abs2();
    const int N = g.N;
    int jm = static_cast<int>(std::max_element(r.begin(), r.end()) - r.begin());
    if (!(r[jm] > 0)) throw std::invalid_argument("initial_guess: field vanishes");
    const double dx = g.dx();
    // parabola through the three samples around the peak
    const double rm = r[(jm - 1 + N) % N], rp = r[(jm + 1) % N], r0 = r[jm];
    const double den = rm - 2.0 * r0 + rp;
    const double off = den < 0 ? 0.5 * (rm - rp) / den : 0.0;
    const double peak = r0 - 0.25 * (rm - rp) * off;
    const double half = 0.5 * peak;
    auto crossing = [&](int dir) {
        for (int n = 1; n < N / 2; ++n) {
            const int a = (jm + dir * (n - 1) + N) % N, b = (jm + dir * n + N) % N;
            if (r[b] <= half) return dir * ((n - 1) + (r[a] - half) / (r[a] - r[b])) * dx;
        }
        return dir * 0.25 * g.L;
    };
    const double fwhm = crossing(1) - crossing(-1);
    ModulationState s;
    s.lambda = 0.5 * fwhm;  // |Q|^2 = 2/(1+y^2) is at half height at y = +-1
    s.x = g.x(jm) + off * dx;
    s.gamma = std::arg(v.v[jm]);
    return s;
}

std::shared_ptr<const ZProfiles> z_profiles(double R0)
{
    static std::mutex mu;
    static std::map<double, std::shared_ptr<const ZProfiles>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(R0);
    if (it != cache.end()) return it->second;
    auto p = std::make_shared<const ZProfiles>(R0);
    cache.emplace(R0, p);
    return p;
}

DecompositionResult decompose(const Field& v, const DecomposeOptions& opt, const ModulationState* guess)
{
    if (!v.finite()) throw std::invalid_argument("decompose: non-finite field");
    const auto zp = z_profiles(opt.R0);
    const double ymax = 2.0 * opt.R0;
    auto eps_hat_k = [&](int k, const ModulationState& s) {
        return lab_inner(v, [&](double y) { return zp->Z(k, y); }, s, ymax) - zp->QZ(k);
    };
    auto F = [&](const Unknowns& u) {
        const ModulationState s = to_state(u);
        return Eigen::Vector3d(eps_hat_k(1, s), eps_hat_k(2, s), eps_hat_k(3, s));
    };

    const ModulationState g0 = guess ? *guess : initial_guess(v);
    check_lambda(g0.lambda, "decompose guess");
    Unknowns u{std::log(g0.lambda), g0.gamma, g0.x};
    Eigen::Vector3d Fu = F(u);
    int it = 0;
    for (; Fu.cwiseAbs().maxCoeff() >= opt.tol; ++it) {
        if (it >= opt.max_iter || !Fu.allFinite())
            throw DecompositionError("decompose: Newton did not converge in " + std::to_string(opt.max_iter) +
                                         " iterations (max |F| = " + std::to_string(Fu.cwiseAbs().maxCoeff()) + ")",
                                     to_state(u));
        const double h = opt.fd_step;
        const double steps[3] = {h, h, h * std::exp(u.loglam)};
        Eigen::Matrix3d J;
        for (int c = 0; c < 3; ++c) {
            Unknowns up = u, um = u;
            double* pu = c == 0 ? &up.loglam : c == 1 ? &up.gamma : &up.x;
            double* pm = c == 0 ? &um.loglam : c == 1 ? &um.gamma : &um.x;
            *pu += steps[c];
            *pm -= steps[c];
            J.col(c) = (F(up) - F(um)) / (2.0 * steps[c]);
        }
        const Eigen::Vector3d d = J.fullPivLu().solve(-Fu);
        if (!d.allFinite() || std::exp(u.loglam) > v.grid.L || std::exp(u.loglam) < 1e-4 * v.grid.dx() ||
            std::abs(u.x) > v.grid.L)
            throw DecompositionError("decompose: Newton left the admissible range (lambda or x)", to_state(u));
        // backtrack while the residual grows
        double t = 1.0;
        Unknowns un;
        Eigen::Vector3d Fn;
        for (int ls = 0; ls < 12; ++ls, t *= 0.5) {
            un = {u.loglam + t * d(0), u.gamma + t * d(1), u.x + t * d(2)};
            Fn = F(un);
            if (Fn.allFinite() && Fn.norm() < Fu.norm()) break;
        }
        u = un;
        Fu = Fn;
    }

    DecompositionResult r;
    r.newton_iters = it;
    ModulationState& s = r.state;
    s = to_state(u);
    s.gamma = wrap_angle(s.gamma);

    // tube: ||v - [Q]|| = ||w - Q||
    {
        const Field q = modulate([](double y) { return cplx(prof::Q(y)); }, v.grid, s.lambda, s.gamma, s.x);
        r.tube = norm_l2(v - q);
        if (!(r.tube < opt.delta_dec))
            throw DecompositionError("decompose: field outside the soliton tube (||eps_hat|| = " +
                                         std::to_string(r.tube) + ", delta_dec = " + std::to_string(opt.delta_dec) + ")",
                                     s);
    }

    double eh[6];
    for (int k = 0; k < 3; ++k) eh[k] = Fu(k);
    for (int k = 4; k <= 6; ++k) eh[k - 1] = eps_hat_k(k, s);
    s.b = -eh[3] / zp->denom_b();
    s.eta = -eh[4] / zp->denom_eta();
    s.nu = eh[5] / zp->denom_nu();
    // yQ^3 is odd and (Q + P, yQ^3)_r = 0, so only the odd part of eps enters.
    // The weight is cut off symmetrically about x inside the box so that the
    // odd and even parts cancel exactly rather than up to box asymmetry.
    {
        const double Y = 0.5 * (0.5 * v.grid.L - std::abs(s.x)) / s.lambda;
        if (!(Y > 0)) throw DecompositionError("decompose: centre outside the box", s);
        auto wmu = [Y](double y) {
            const double q = prof::Q(y);
            return cplx(y * q * q * q * prof::chi_R(y, 0.5 * Y));
        };
        s.mu = -lab_inner(v, wmu, s, Y) / pi;
    }

    // (eps, Z_k) = (eps_hat, Z_k) - (P, Z_k), P = -b/4 K4 - eta/4 K5 + nu/2 K6
    const auto& M = zp->transversality();
    for (int k = 0; k < 6; ++k)
        r.ortho[k] = eh[k] - (-0.25 * s.b * M[3][k] - 0.25 * s.eta * M[4][k] + 0.5 * s.nu * M[5][k]);

    if (opt.fields) {
        // only the lab residual v - [Q + P] is resampled, so interpolation
        // error scales with eps rather than with v
        const ProfileParams pp{s.b, s.eta, s.nu, 0.0};
        const Field qp = modulate([&](double y) { return prof::Q(y) + prof::P(y, pp); }, v.grid, s.lambda, s.gamma, s.x);
        rvec pts(v.grid.N);
        for (int j = 0; j < v.grid.N; ++j) pts[j] = s.lambda * v.grid.x(j) + s.x;
        r.eps = resample(v - qp, pts, std::sqrt(s.lambda) * std::polar(1.0, -s.gamma));
        r.eps_hat = r.eps + profile_P(pp, v.grid);
    }
    return r;
}

RefinedParams refined_params(const Field& w1, double lambda)
{
    check_lambda(lambda, "refined_params");
    RefinedParams r;
    r.R1 = std::pow(lambda, -0.75);
    if (r.R1 > w1.grid.L / 8)
        throw std::invalid_argument("refined_params: R1 = lambda^{-3/4} exceeds L/8; use a larger L or a larger lambda");
    const double R1 = r.R1, A = prof::chi_A;
    double ib = 0, e = 0, n = 0;
    for (int j = 0; j < w1.grid.N; ++j) {
        const double y = w1.grid.x(j), c = prof::chi_R(y, R1);
        if (c == 0.0) continue;
        const double q = prof::Q(y);
        const cplx w = w1.v[j];
        // (w, i f)_r = Im(w) f for real f
        ib += w.imag() * 0.5 * y * q * c;
        e += w.real() * 0.5 * y * q * c;
        n += w.imag() * 0.5 * q * c;
    }
    const double dx = w1.grid.dx();
    r.b = -ib * dx / (A * R1);
    r.eta = -e * dx / (A * R1);
    r.nu = n * dx / (0.5 * pi);  // ||Q/2||^2 = pi/2
    return r;
}

RefinedParams refined_params_lab(const Field& v, const ModulationState& s, OpModel m)
{
    RefinedParams r;
    r.R1 = std::pow(s.lambda, -0.75);
    if (r.R1 * s.lambda > v.grid.L / 8)
        throw std::invalid_argument("refined_params: lambda R1 exceeds L/8; use a larger L or a larger lambda");
    const double R1 = r.R1, A = prof::chi_A;
    const Field dv = op_Dv(v, v, m);
    auto win = [&](const std::function<cplx(double)>& f) { return s.lambda * lab_inner(dv, f, s, 2.0 * R1); };
    r.b = -win([&](double y) { return cplx(0.0, 0.5 * y * prof::Q(y) * prof::chi_R(y, R1)); }) / (A * R1);
    r.eta = -win([&](double y) { return cplx(0.5 * y * prof::Q(y) * prof::chi_R(y, R1)); }) / (A * R1);
    r.nu = win([&](double y) { return cplx(0.0, 0.5 * prof::Q(y) * prof::chi_R(y, R1)); }) / (0.5 * pi);
    return r;
}

Field w1_of(const Field& w, OpModel m) { return op_Dv(w, w, m); }

TrackRow track_one(const Field& v, double t, const DecomposeOptions& opt, const ModulationState* guess, OpModel m)
{
    const DecompositionResult d = decompose(v, opt, guess);
    TrackRow row;
    row.t = t;
    row.state = d.state;
    row.ortho = d.ortho;
    row.newton_iters = d.newton_iters;
    row.tube = d.tube;
    row.refined = refined_params_lab(v, d.state, m);
    const auto& s = d.state;
    row.ell = (s.b * s.b + s.eta * s.eta) / (s.lambda * s.lambda * s.lambda);
    row.eta_over_lambda = s.eta / s.lambda;
    row.nu_over_lambda = s.nu / s.lambda;
    return row;
}

TrackResult track(const Trajectory& tr, const DecomposeOptions& opt, const ModulationState* guess)
{
    TrackResult out;
    ModulationState prev;
    const ModulationState* g = guess;
    for (std::size_t i = 0; i < tr.snapshots.size(); ++i) {
        const Field& v = tr.snapshots[i];
        DecomposeOptions o = opt;
        o.fields = false;
        o.tol = std::max(opt.tol, 1e-8 * norm_l2(v));  // evolved fields carry scheme error
        try {
            // unwrap gamma against the previous state so the series is continuous
            TrackRow row = track_one(v, tr.t[i], o, g, tr.config.model);
            if (!out.rows.empty())
                row.state.gamma = prev.gamma + std::remainder(row.state.gamma - prev.gamma, 2.0 * pi);
            prev = row.state;
            g = &prev;
            out.rows.push_back(row);
        } catch (const std::exception& e) {
            if (out.rows.empty()) throw;
            out.truncated = true;
            out.reason = "t = " + std::to_string(tr.t[i]) + ": " + e.what();
            break;
        }
    }
    return out;
}

void write_track_csv(std::ostream& os, const TrackResult& tr)
{
    os << "t,lambda,gamma,x,b,eta,nu,mu,b_tilde,eta_tilde,nu_tilde,"
          "res1,res2,res3,res4,res5,res6,newton_iters,tube,ell,eta_over_lambda,nu_over_lambda\n";
    os << std::scientific << std::setprecision(17);
    for (const auto& r : tr.rows) {
        const auto& s = r.state;
        os << r.t << ',' << s.lambda << ',' << s.gamma << ',' << s.x << ',' << s.b << ',' << s.eta << ',' << s.nu
           << ',' << s.mu << ',' << r.refined.b << ',' << r.refined.eta << ',' << r.refined.nu;
        for (double o : r.ortho) os << ',' << o;
        os << ',' << r.newton_iters << ',' << r.tube << ',' << r.ell << ',' << r.eta_over_lambda << ',' << r.nu_over_lambda << '\n';
    }
}

}  // namespace cm
