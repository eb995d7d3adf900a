#pragma once
// Shared fixtures for the unit tests.

#include "cmlab/grid.hpp"
#include "cmlab/spectral.hpp"

#include <cmath>
#include <random>

namespace cmtest {

using namespace cm;

// localized band-limited random field: Gaussian envelope of width w times
// a few random modes with |xi| <= kmax
inline Field random_field(const Grid& g, unsigned seed, double w = 5.0, double kmax = 2.0, int modes = 6)
{
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    std::vector<cplx> a(modes);
    std::vector<double> k(modes);
    for (int m = 0; m < modes; ++m) {
        a[m] = cplx(U(rng), U(rng));
        k[m] = kmax * U(rng);
    }
    const double x0 = 0.2 * w * U(rng);
    return Field::sample(g, [&](double x) {
        cplx s = 0;
        for (int m = 0; m < modes; ++m) s += a[m] * std::exp(I * (k[m] * x));
        const double z = (x - x0) / w;
        return s * std::exp(-z * z);
    });
}

inline double rel(const Field& a, const Field& b)
{
    const double n = norm_l2(b);
    return norm_l2(a - b) / (n > 0 ? n : 1.0);
}

inline double max_abs(const Field& f)
{
    double m = 0;
    for (const auto& z : f.v) m = std::max(m, std::abs(z));
    return m;
}

}  // namespace cmtest
