#include "cmlab/lattice.hpp"

#include "cmlab/fft.hpp"

#include <gsl/gsl_integration.h>

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <tuple>

namespace cm {
namespace {

enum class Kind { hilbert, absd, ddx };

double kernel(Kind k, long m, double dx)
{
    switch (k) {
    case Kind::hilbert:
        return (m % 2 != 0) ? 2.0 / (pi * double(m)) : 0.0;
    case Kind::absd:
        if (m == 0) return pi / (2.0 * dx);
        return ((m % 2 == 0 ? 1.0 : -1.0) - 1.0) / (pi * double(m) * double(m) * dx);
    case Kind::ddx:
        if (m == 0) return 0.0;
        return (m % 2 == 0 ? 1.0 : -1.0) / (double(m) * dx);
    }
    return 0.0;
}

// FFT of the circulant embedding of the N x N Toeplitz matrix, size 2N
std::shared_ptr<const cvec> kernel_fft(Kind k, int N, double dx)
{
    static std::mutex mtx;
    static std::map<std::tuple<int, int, double>, std::shared_ptr<const cvec>> cache;
    std::lock_guard<std::mutex> lock(mtx);
    auto key = std::make_tuple(static_cast<int>(k), N, dx);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;

    cvec c(2 * N, cplx(0.0));
    for (int m = 0; m < N; ++m) c[m] = kernel(k, m, dx);
    for (int m = 1; m < N; ++m) c[2 * N - m] = kernel(k, -m, dx);
    auto ptr = std::make_shared<const cvec>(fft::forward(c));
    cache.emplace(key, ptr);
    return ptr;
}

cvec toeplitz(Kind k, const cvec& f, double dx)
{
    const int N = static_cast<int>(f.size());
    auto kf = kernel_fft(k, N, dx);
    cvec a(2 * N, cplx(0.0));
    std::copy(f.begin(), f.end(), a.begin());
    cvec s = fft::forward(a);
    const double inv = 1.0 / (2.0 * N);
    for (int i = 0; i < 2 * N; ++i) s[i] *= (*kf)[i] * inv;
    a = fft::backward(s);
    a.resize(N);
    return a;
}

struct GaussLegendre {
    std::vector<double> s, w;
};

// nodes on (0,1)
const GaussLegendre& gauss_legendre()
{
    static const GaussLegendre gl = [] {
        const size_t n = 200;
        gsl_integration_glfixed_table* t = gsl_integration_glfixed_table_alloc(n);
        GaussLegendre r;
        r.s.resize(n);
        r.w.resize(n);
        for (size_t i = 0; i < n; ++i) gsl_integration_glfixed_point(0.0, 1.0, i, &r.s[i], &r.w[i], t);
        gsl_integration_glfixed_table_free(t);
        return r;
    }();
    return gl;
}

// substitution y = +-a/s, dy = a/s^2 ds; returns nodes y and weights fn(y) a/s^2 w
void far_nodes(const RealFn& fn, double a, rvec& y, rvec& wf)
{
    const auto& gl = gauss_legendre();
    const size_t n = gl.s.size();
    y.resize(2 * n);
    wf.resize(2 * n);
    for (size_t i = 0; i < n; ++i) {
        for (int side = 0; side < 2; ++side) {
            const double yy = (side == 0 ? 1.0 : -1.0) * a / gl.s[i];
            y[2 * i + side] = yy;
            wf[2 * i + side] = fn(yy) * a / (gl.s[i] * gl.s[i]) * gl.w[i] / pi;
        }
    }
}

Field extended_apply(Kind k, const Grid& g, const RealFn& fn, int extend)
{
    if (extend < 1) throw std::invalid_argument("lattice: extend must be >= 1");
    const int Ne = g.N * extend;
    const double dx = g.dx();
    // N is even, so the box sits on the extended lattice for any extend
    const int off = (extend - 1) * (g.N / 2);
    cvec fe(Ne);
    for (int j = 0; j < Ne; ++j) fe[j] = fn(g.x(0) + (j - off) * dx);
    cvec r = toeplitz(k, fe, dx);
    Field out(g);
    for (int j = 0; j < g.N; ++j) out.v[j] = r[off + j];
    return out;
}

}  // namespace

Field line_hilbert(const Field& f) { return Field(f.grid, toeplitz(Kind::hilbert, f.v, f.grid.dx())); }
Field line_abs_deriv(const Field& f) { return Field(f.grid, toeplitz(Kind::absd, f.v, f.grid.dx())); }
Field line_ddx(const Field& f) { return Field(f.grid, toeplitz(Kind::ddx, f.v, f.grid.dx())); }
Field line_hilbert_completed(const Field& f)
{
    const Grid& g = f.grid;
    const int N = g.N;
    Field h = line_hilbert(f);
    const double a = g.L / 2;
    const cplx c = 0.5 * (g.x(0) * f.v[0] + g.x(N - 1) * f.v[N - 1]);
    for (int j = 0; j < N; ++j) {
        const double x = g.x(j);
        // (1/pi) int_{|y|>a} (c/y)/(x - y) dy
        const double k = std::abs(x) < 1e-12 * a ? -2.0 / a : -std::log((a + x) / (a - x)) / x;
        h.v[j] += c * k / pi;
    }
    return h;
}


rvec far_field_hilbert_serial(const Grid& g, const RealFn& fn, double a)
{
    rvec y, wf;
    far_nodes(fn, a, y, wf);
    rvec out(g.N, 0.0);
    for (int j = 0; j < g.N; ++j) {
        const double x = g.x(j);
        double s = 0.0;
        for (size_t q = 0; q < y.size(); ++q) s += wf[q] / (x - y[q]);
        out[j] = s;
    }
    return out;
}

rvec far_field_hilbert(const Grid& g, const RealFn& fn, double a)
{
    rvec y, wf;
    far_nodes(fn, a, y, wf);
    rvec out(g.N, 0.0);
    const int nq = static_cast<int>(y.size());
#pragma omp parallel for schedule(static)
    for (int j = 0; j < g.N; ++j) {
        const double x = g.x(j);
        double s = 0.0;
        for (int q = 0; q < nq; ++q) s += wf[q] / (x - y[q]);
        out[j] = s;
    }
    return out;
}

Field lattice_hilbert(const Grid& g, const RealFn& fn, int extend)
{
    Field out = extended_apply(Kind::hilbert, g, fn, extend);
    const double a = 0.5 * g.L * extend;
    rvec far = far_field_hilbert(g, fn, a);
    for (int j = 0; j < g.N; ++j) out.v[j] += far[j];
    return out;
}

Field lattice_abs_deriv(const Grid& g, const RealFn& fn, const RealFn& dfn, int extend)
{
    Field out = extended_apply(Kind::absd, g, fn, extend);
    const double a = 0.5 * g.L * extend;
    rvec far = far_field_hilbert(g, dfn, a);
    // |D| = H d/dx on the far region plus the boundary terms of the
    // integration by parts at y = +-a
    const double ga = fn(a), gma = fn(-a);
    for (int j = 0; j < g.N; ++j) {
        const double x = g.x(j);
        out.v[j] += far[j] + (ga / (x - a) - gma / (x + a)) / pi;
    }
    return out;
}

}  // namespace cm
