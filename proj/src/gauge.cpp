#include "cmlab/gauge.hpp"

#include "cmlab/spectral.hpp"

#include <cmath>

namespace cm {
namespace {

double wrap_twist(double t)
{
    double r = std::fmod(t, 2.0 * pi);
    if (r < 0) r += 2.0 * pi;
    // only 0 and pi are representable
    return (std::abs(r - pi) < 0.5 * pi) ? pi : 0.0;
}

Field apply_phase(const Field& f, const rvec& C, double sign, double twist)
{
    Field o(f.grid.with_twist(twist));
    for (int j = 0; j < f.grid.N; ++j) o.v[j] = -f.v[j] * std::polar(1.0, sign * 0.5 * C[j]);
    return o;
}

}  // namespace

double tail_mass(const Grid& g, const rvec& rho)
{
    const int n = g.N / 8;
    double A = 0;
    for (int j = 0; j < n; ++j) A += g.x(j) * g.x(j) * rho[j];
    A /= n;
    return A / (0.5 * g.L);
}

rvec gauge_phase(const Field& u, const GaugeOptions& opt)
{
    const rvec rho = u.abs2();
    rvec C = opt.quad == Cumint::spectral ? cumint_spectral(u.grid, rho) : cumint_trapezoid(u.grid, rho);
    if (opt.tail == TailModel::power_law) {
        const double t = tail_mass(u.grid, rho);
        for (auto& c : C) c += t;
    }
    return C;
}

Field gauge_forward(const Field& u, const GaugeOptions& opt)
{
    const rvec C = gauge_phase(u, opt);
    const double M = mass(u);
    return apply_phase(u, C, -1.0, wrap_twist(u.grid.twist - pi * std::round(M / (2 * pi))));
}

Field gauge_inverse(const Field& v, const GaugeOptions& opt)
{
    const rvec C = gauge_phase(v, opt);
    const double M = mass(v);
    return apply_phase(v, C, 1.0, wrap_twist(v.grid.twist + pi * std::round(M / (2 * pi))));
}

double chirality_defect(const Field& u)
{
    const Spectrum s = fourier(u);
    double neg = 0, all = 0;
    for (int i = 0; i < u.grid.N; ++i) {
        const double p = std::norm(s.s[i]);
        all += p;
        if (u.grid.xi(i) < 0) neg += p;
    }
    return all > 0 ? std::sqrt(neg / all) : 0.0;
}

}  // namespace cm
