#include "cmlab/spectral.hpp"

#include "cmlab/fft.hpp"
#include "cmlab/lattice.hpp"

#include <algorithm>
#include <cmath>

namespace cm {
namespace {

// e^{-i twist j / N}: turns a twisted field into a periodic sequence
cvec twist_factors(const Grid& g, double sign)
{
    cvec t(g.N);
    for (int j = 0; j < g.N; ++j) t[j] = std::polar(1.0, sign * g.twist * j / g.N);
    return t;
}

}  // namespace

Spectrum fourier(const Field& f)
{
    const Grid& g = f.grid;
    cvec a = f.v;
    if (!g.periodic()) {
        cvec t = twist_factors(g, -1.0);
        for (int j = 0; j < g.N; ++j) a[j] *= t[j];
    }
    cvec s = fft::forward(a);
    // x_0 = -L/2 contributes exp(i xi_k L/2) = (-1)^k exp(i twist/2)
    const cplx c0 = std::polar(g.dx(), 0.5 * g.twist);
    for (int i = 0; i < g.N; ++i) s[i] *= (g.wavenumber(i) % 2 == 0 ? c0 : -c0);
    return {g, std::move(s)};
}

Field inverse_fourier(const Spectrum& sp)
{
    const Grid& g = sp.grid;
    cvec s = sp.s;
    const cplx c0 = std::polar(1.0 / g.L, -0.5 * g.twist);
    for (int i = 0; i < g.N; ++i) s[i] *= (g.wavenumber(i) % 2 == 0 ? c0 : -c0);
    cvec a = fft::backward(s);
    if (!g.periodic()) {
        cvec t = twist_factors(g, 1.0);
        for (int j = 0; j < g.N; ++j) a[j] *= t[j];
    }
    return Field(g, std::move(a));
}

Field apply_multiplier(const Field& f, const cvec& m)
{
    const Grid& g = f.grid;
    if (static_cast<int>(m.size()) != g.N) throw std::invalid_argument("multiplier size != N");
    cvec a = f.v;
    cvec tm, tp;
    if (!g.periodic()) {
        tm = twist_factors(g, -1.0);
        for (int j = 0; j < g.N; ++j) a[j] *= tm[j];
    }
    cvec s = fft::forward(a);
    const double inv = 1.0 / g.N;
    for (int i = 0; i < g.N; ++i) s[i] *= m[i] * inv;
    a = fft::backward(s);
    if (!g.periodic()) {
        for (int j = 0; j < g.N; ++j) a[j] *= std::conj(tm[j]);
    }
    return Field(g, std::move(a));
}

Field apply_multiplier(const Field& f, const Multiplier& m)
{
    cvec mv(f.grid.N);
    for (int i = 0; i < f.grid.N; ++i) mv[i] = m(f.grid.xi(i));
    return apply_multiplier(f, mv);
}

Field ddx(const Field& f)
{
    return apply_multiplier(f, [](double xi) { return cplx(0.0, xi); });
}

Field d2x(const Field& f)
{
    return apply_multiplier(f, [](double xi) { return cplx(-xi * xi, 0.0); });
}

Field hilbert(const Field& f)
{
    return apply_multiplier(f, [](double xi) { return cplx(0.0, -sgn(xi)); });
}

Field abs_deriv(const Field& f)
{
    return apply_multiplier(f, [](double xi) { return cplx(std::abs(xi), 0.0); });
}

Field szego_project(const Field& f)
{
    return apply_multiplier(f, [](double xi) { return cplx(xi > 0 ? 1.0 : 0.0); });
}

Field dealias(const Field& f)
{
    const Grid& g = f.grid;
    cvec m(g.N);
    for (int i = 0; i < g.N; ++i) m[i] = 3 * std::abs(g.wavenumber(i)) > g.N ? 0.0 : 1.0;
    return apply_multiplier(f, m);
}

Field hilbert(const Field& f, OpModel m)
{
    return m == OpModel::periodic ? hilbert(f) : line_hilbert(f);
}

Field abs_deriv(const Field& f, OpModel m)
{
    return m == OpModel::periodic ? abs_deriv(f) : line_abs_deriv(f);
}

double inner_r(const Field& f, const Field& g)
{
    require_same(f.grid, g.grid, "inner_r");
    double s = 0.0;
    for (int j = 0; j < f.grid.N; ++j) s += (f.v[j] * std::conj(g.v[j])).real();
    return s * f.grid.dx();
}

double norm_l2(const Field& f) { return std::sqrt(std::max(0.0, inner_r(f, f))); }

double mass(const Field& f) { return inner_r(f, f); }

NormReport norms(const Field& f, const Field& fx, const Field& fxx)
{
    const Grid& g = f.grid;
    require_same(g, fx.grid, "norms");
    require_same(g, fxx.grid, "norms");
    double l2 = 0, d1 = 0, w0 = 0, d2 = 0, h2w = 0, m1 = 0, m0 = 0;
    for (int j = 0; j < g.N; ++j) {
        const double x = g.x(j);
        const double jx2 = 1.0 / (1.0 + x * x);
        const double a = std::norm(f.v[j]), b = std::norm(fx.v[j]);
        l2 += a;
        d1 += b;
        w0 += jx2 * a;
        d2 += std::norm(fxx.v[j]);
        const double bracket = std::max(std::sqrt(b), std::sqrt(jx2 * a));
        h2w += jx2 * bracket * bracket;
        m1 += jx2 * b;
        m0 += jx2 * jx2 * a;
    }
    const double dx = g.dx();
    NormReport r;
    r.l2 = std::sqrt(l2 * dx);
    r.h1dot = std::sqrt(d1 * dx);
    r.calH1 = std::sqrt((d1 + w0) * dx);
    r.calH2 = std::sqrt((d2 + h2w) * dx);
    r.mor = std::sqrt((m1 + m0) * dx);
    return r;
}

NormReport norms(const Field& f) { return norms(f, ddx(f), d2x(f)); }

rvec cumint_spectral(const Grid& g, const rvec& rho)
{
    const int N = g.N;
    cvec a(rho.begin(), rho.end());
    cvec s = fft::forward(a);
    const double mean = s[0].real() / N;
    for (int i = 0; i < N; ++i) {
        const int k = g.wavenumber(i);
        s[i] = (k == 0 || i == N / 2) ? cplx(0.0) : s[i] / cplx(0.0, 2.0 * pi * k / g.L) / double(N);
    }
    a = fft::backward(s);
    rvec c(N);
    const double a0 = a[0].real();
    for (int j = 0; j < N; ++j) c[j] = a[j].real() - a0 + mean * (g.x(j) + 0.5 * g.L);
    return c;
}

rvec cumint_trapezoid(const Grid& g, const rvec& rho)
{
    rvec c(g.N, 0.0);
    const double h = 0.5 * g.dx();
    for (int j = 1; j < g.N; ++j) c[j] = c[j - 1] + h * (rho[j - 1] + rho[j]);
    return c;
}

double top_band_fraction(const Field& f, double band)
{
    const Grid& g = f.grid;
    cvec s = fft::forward(f.v);
    const int kcut = static_cast<int>(std::lround((1.0 - band) * g.N / 2));
    double top = 0, all = 0;
    for (int i = 0; i < g.N; ++i) {
        const double e = std::norm(s[i]);
        all += e;
        if (std::abs(g.wavenumber(i)) >= kcut) top += e;
    }
    return all > 0 ? top / all : 0.0;
}

}  // namespace cm
