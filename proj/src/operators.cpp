#include "cmlab/operators.hpp"

#include "cmlab/lattice.hpp"
#include "cmlab/profiles.hpp"

#include <cmath>
#include <stdexcept>

namespace cm {
namespace {

Field re_conj_mul(const Field& v, const Field& f)
{
    require_same(v.grid, f.grid, "operator");
    Field o(Grid(v.grid.N, v.grid.L));  // conj(v) f is periodic for either twist
    for (int j = 0; j < v.grid.N; ++j) o.v[j] = (std::conj(v.v[j]) * f.v[j]).real();
    return o;
}

Field conj_mul(const Field& v, const Field& f)
{
    require_same(v.grid, f.grid, "operator");
    Field o(Grid(v.grid.N, v.grid.L));  // conj(v) f is periodic for either twist
    for (int j = 0; j < v.grid.N; ++j) o.v[j] = std::conj(v.v[j]) * f.v[j];
    return o;
}

double jx(double x) { return 1.0 / std::sqrt(1.0 + x * x); }

}  // namespace

Background Background::of(const Field& v, OpModel m)
{
    Field rho = from_real(v.grid, v.abs2());
    rho.grid = Grid(v.grid.N, v.grid.L);  // |v|^2 is periodic for either twist
    Background bg{v, hilbert(rho, m), abs_deriv(rho, m), m};
    bg.H_rho.grid = v.grid;
    bg.D_rho.grid = v.grid;
    return bg;
}

Background Background::soliton(const Grid& g)
{
    auto q2 = [](double y) { return 2.0 / (1.0 + y * y); };
    auto dq2 = [](double y) { return -4.0 * y / ((1.0 + y * y) * (1.0 + y * y)); };
    return Background{soliton_Q(g), lattice_hilbert(g, q2), lattice_abs_deriv(g, q2, dq2), OpModel::line};
}

Field op_Dv(const Background& bg, const Field& f)
{
    require_same(bg.v.grid, f.grid, "D_v");
    Field o = ddx(f);
    for (int j = 0; j < f.grid.N; ++j) o.v[j] += 0.5 * bg.H_rho.v[j].real() * f.v[j];
    return o;
}

Field op_Dv_tilde(const Background& bg, const Field& f)
{
    Field h = hilbert(conj_mul(bg.v, f), bg.model);
    Field o = ddx(f);
    for (int j = 0; j < f.grid.N; ++j) o.v[j] += 0.5 * bg.v.v[j] * h.v[j];
    return o;
}

Field op_Lv(const Background& bg, const Field& f)
{
    Field h = hilbert(re_conj_mul(bg.v, f), bg.model);
    Field o = op_Dv(bg, f);
    for (int j = 0; j < f.grid.N; ++j) o.v[j] += bg.v.v[j] * h.v[j].real();
    return o;
}

Field op_Lv_star(const Background& bg, const Field& f)
{
    require_same(bg.v.grid, f.grid, "L_v^*");
    Field h = hilbert(re_conj_mul(bg.v, f), bg.model);
    Field o = -ddx(f);
    for (int j = 0; j < f.grid.N; ++j)
        o.v[j] += 0.5 * bg.H_rho.v[j].real() * f.v[j] - bg.v.v[j] * h.v[j].real();
    return o;
}

Field op_Hv(const Background& bg, const Field& f)
{
    Field d = abs_deriv(conj_mul(bg.v, f), bg.model);
    Field o = -d2x(f);
    for (int j = 0; j < f.grid.N; ++j) {
        const double r = std::norm(bg.v.v[j]);
        o.v[j] += 0.25 * r * r * f.v[j] - bg.v.v[j] * d.v[j];
    }
    return o;
}

Field op_Nv(const Background& bg, const Field& eps)
{
    Field h1 = hilbert(re_conj_mul(bg.v, eps), bg.model);
    Field e2 = from_real(Grid(eps.grid.N, eps.grid.L), eps.abs2());
    Field h2 = hilbert(e2, bg.model);
    Field o(eps.grid);
    for (int j = 0; j < eps.grid.N; ++j)
        o.v[j] = eps.v[j] * h1.v[j].real() + 0.5 * (bg.v.v[j] + eps.v[j]) * h2.v[j].real();
    return o;
}

Field op_Dv(const Field& v, const Field& f, OpModel m) { return op_Dv(Background::of(v, m), f); }
Field op_Dv_tilde(const Field& v, const Field& f, OpModel m) { return op_Dv_tilde(Background::of(v, m), f); }
Field op_Lv(const Field& v, const Field& f, OpModel m) { return op_Lv(Background::of(v, m), f); }
Field op_Lv_star(const Field& v, const Field& f, OpModel m) { return op_Lv_star(Background::of(v, m), f); }
Field op_Hv(const Field& v, const Field& f, OpModel m) { return op_Hv(Background::of(v, m), f); }
Field op_Nv(const Field& v, const Field& eps, OpModel m) { return op_Nv(Background::of(v, m), eps); }

Field op_calLQ_direct(const Background& q, const Field& f)
{
    Field rq = re_conj_mul(q.v, f);
    Field d = abs_deriv(rq, q.model);
    Field o = -d2x(f);
    for (int j = 0; j < f.grid.N; ++j) {
        const double Q = q.v.v[j].real(), Q2 = Q * Q;
        o.v[j] += -q.D_rho.v[j].real() * f.v[j] - 2.0 * Q * d.v[j].real() + 0.25 * Q2 * Q2 * f.v[j] +
                  Q2 * Q * rq.v[j].real();
    }
    return o;
}

Field op_Lambda(const Field& f)
{
    Field fx = ddx(f);
    Field o(f.grid);
    for (int j = 0; j < f.grid.N; ++j) o.v[j] = 0.5 * f.v[j] + f.grid.x(j) * fx.v[j];
    return o;
}

Field op_BQ(const Field& f, OpModel m)
{
    Field g = weight(jx, f);
    Field h = hilbert(g, m);
    Field o(f.grid);
    for (int j = 0; j < f.grid.N; ++j) o.v[j] = f.grid.x(j) * g.v[j] - h.v[j];
    return o;
}

Field op_BQ_star(const Field& f, OpModel m)
{
    Field h = hilbert(f, m);
    Field o(f.grid);
    for (int j = 0; j < f.grid.N; ++j) {
        const double x = f.grid.x(j);
        o.v[j] = jx(x) * (x * f.v[j] + h.v[j]);
    }
    return o;
}

// d/dx (x - H) g  =  d/dx(x g) - |D| g, avoiding the product d/dx o H
Field op_AQ(const Field& f, OpModel m)
{
    Field g = weight(jx, f);
    Field xg = weight([](double x) { return x; }, g);
    return ddx(xg) - abs_deriv(g, m);
}

Field op_AQ_star(const Field& f, OpModel m) { return -op_BQ_star(ddx(f), m); }

Field op_LQ_tilde(const Background& q, const Field& f)
{
    Field r(f.grid);
    for (int j = 0; j < f.grid.N; ++j) {
        const double Q = q.v.v[j].real();
        r.v[j] = (Q * Q * Q * f.v[j]).real();
    }
    Field h = hilbert(r, q.model);
    Field o = op_Dv(q, f);
    for (int j = 0; j < f.grid.N; ++j) o.v[j] += h.v[j].real() / q.v.v[j].real();
    return o;
}

Field op_LQ_tilde(const Field& f, OpModel m) { return op_LQ_tilde(Background::of(soliton_Q(f.grid), m), f); }

MorawetzResult verify_morawetz(const Field& u, double delta_psi, double odd_tol)
{
    if (!(delta_psi > 0 && delta_psi <= 0.1)) throw std::invalid_argument("morawetz: delta must lie in (0, 1/10]");
    const Grid& g = u.grid;
    const int N = g.N;
    // reflection x_j -> -x_j is j -> N - j on the periodic lattice
    Field odd(g);
    double even2 = 0, all2 = 0;
    for (int j = 0; j < N; ++j) {
        const cplx r = u.v[(N - j) % N];
        odd.v[j] = 0.5 * (u.v[j] - r);
        // x_0 = -L/2 is its own mirror image (it is also +L/2); the projection zeroes it
        if (j > 0) even2 += std::norm(0.5 * (u.v[j] + r));
        all2 += std::norm(u.v[j]);
    }
    if (all2 > 0 && std::sqrt(even2 / all2) > odd_tol) throw std::invalid_argument("morawetz: input is not odd");

    Field ux = ddx(odd), uxx = d2x(odd);
    MorawetzResult r;
    const double d = delta_psi;
    double lhs = 0, rhs = 0;
    for (int j = 0; j < N; ++j) {
        const double x = g.x(j), b2 = 1.0 + x * x, b = std::sqrt(b2);
        const double p1 = x / b - d * x / b2;
        const double p2 = 1.0 / (b2 * b) - d * (1.0 - x * x) / (b2 * b2);
        lhs += std::norm(ux.v[j]) / b2 + std::norm(odd.v[j]) / (b2 * b2);
        rhs += (-uxx.v[j] * std::conj(p1 * ux.v[j] + 0.5 * p2 * odd.v[j])).real();
    }
    r.lhs = lhs * g.dx();
    r.rhs = rhs * g.dx();
    r.ratio = (r.rhs != 0.0) ? r.lhs / r.rhs : 0.0;
    return r;
}

}  // namespace cm
