#include "cmlab/profiles.hpp"

#include <cmath>
#include <stdexcept>

namespace cm {
namespace prof {

cplx P(double y, const ProfileParams& p)
{
    const double q = Q(y);
    return cplx(-p.eta * (1.0 + y * y) / 4.0 * q, -p.b * y * y / 4.0 * q + p.nu * y / 2.0 * q);
}

cplx P1(double y, const ProfileParams& p)
{
    const double q = Q(y);
    return -cplx(p.eta, p.b) * (0.5 * y * q) + cplx(p.mu, p.nu) * (0.5 * q);
}

namespace {
double f_step(double t) { return t > 0 ? std::exp(-1.0 / t) : 0.0; }
double df_step(double t) { return t > 0 ? std::exp(-1.0 / t) / (t * t) : 0.0; }
}  // namespace

double smooth_step(double t)
{
    if (t <= 0) return 0.0;
    if (t >= 1) return 1.0;
    const double a = f_step(t), b = f_step(1.0 - t);
    return a / (a + b);
}

double smooth_step_deriv(double t)
{
    if (t <= 0 || t >= 1) return 0.0;
    const double a = f_step(t), b = f_step(1.0 - t);
    return (df_step(t) * b + a * df_step(1.0 - t)) / ((a + b) * (a + b));
}

double chi_R_deriv(double x, double R)
{
    const double s = x > 0 ? 1.0 : (x < 0 ? -1.0 : 0.0);
    return -s / R * smooth_step_deriv(2.0 - std::abs(x) / R);
}

}  // namespace prof

using namespace prof;

Field soliton_Q(const Grid& g) { return Field::sample_real(g, Q); }
Field soliton_R(const Grid& g) { return Field::sample(g, R); }

Field soliton_R_image(const Grid& g)
{
    if (g.twist != pi) throw std::invalid_argument("soliton_R_image: needs an anti-periodic grid (twist = pi)");
    // sum_n (-1)^n / (z + nL) = (pi/L) / sin(pi z/L)
    return Field::sample(g, [&g](double x) { return std::sqrt(2.0) * (pi / g.L) / std::sin(pi * cplx(x, 1.0) / g.L); });
}

Field profile_P(const ProfileParams& p, const Grid& g)
{
    return Field::sample(g, [&](double y) { return prof::P(y, p); });
}

Field profile_P1(const ProfileParams& p, const Grid& g)
{
    return Field::sample(g, [&](double y) { return prof::P1(y, p); });
}

// D_Q^* g = -g' + y/(1+y^2) g
cplx ZProfiles::DstarYQchi(double y) const
{
    const double c = chi_R(y, R0_), cp = chi_R_deriv(y, R0_);
    const double g = y * Q(y) * c;
    const double gp = (Q(y) + y * Qy(y)) * c + y * Q(y) * cp;
    return -gp + y / (1.0 + y * y) * g;
}

cplx ZProfiles::DstarQchi(double y) const
{
    const double c = chi_R(y, R0_), cp = chi_R_deriv(y, R0_);
    const double g = Q(y) * c;
    const double gp = Qy(y) * c + Q(y) * cp;
    return -gp + y / (1.0 + y * y) * g;
}

cplx ZProfiles::K(int j, double y)
{
    switch (j) {
    case 1: return LamQ(y);
    case 2: return cplx(0.0, Q(y));
    case 3: return Qy(y);
    case 4: return cplx(0.0, y * y * Q(y));
    case 5: return (1.0 + y * y) * Q(y);
    case 6: return cplx(0.0, y * Q(y));
    }
    throw std::out_of_range("K index");
}

cplx ZProfiles::Z(int k, double y) const
{
    const double c = chi_R(y, R0_);
    if (c == 0.0 && std::abs(y) >= 2.0 * R0_) return 0.0;
    const double q = Q(y);
    switch (k) {
    case 1: return y * y * q * c - c1_ * DstarYQchi(y);
    case 2: return I * ((1.0 + y * y) * q * c) - c2_ * I * DstarYQchi(y);
    case 3: return y * q * c;
    case 4: return I * DstarYQchi(y);
    case 5: return DstarYQchi(y) - c5_ * q * c;
    case 6: return I * DstarQchi(y);
    }
    throw std::out_of_range("Z index");
}

ZProfiles::ZProfiles(double R0) : R0_(R0)
{
    if (!(R0 > 0)) throw std::invalid_argument("R0 must be positive");
    auto c = [this](double y) { return chi_R(y, R0_); };
    auto yQ = [](double y) { return y * Q(y); };
    auto yQc = [&](double y) { return y * Q(y) * c(y); };
    const double yQ_yQc = inner(yQ, yQc);
    c1_ = inner([](double y) { return (1 + y * y) * Q(y); }, [&](double y) { return y * y * Q(y) * c(y); }) /
          (2.0 * yQ_yQc);
    c2_ = inner([](double y) { return y * y * Q(y); }, [&](double y) { return (1 + y * y) * Q(y) * c(y); }) /
          (2.0 * yQ_yQc);
    c5_ = inner(LamQ, [&](double y) { return DstarYQchi(y); }) /
          inner(LamQ, [&](double y) { return Q(y) * c(y); });

    for (int k = 1; k <= 6; ++k) {
        auto zk = [&](double y) { return Z(k, y); };
        QZ_[k - 1] = inner(Q, zk);
        for (int j = 1; j <= 6; ++j) M_[j - 1][k - 1] = inner([&](double y) { return K(j, y); }, zk);
    }
    db_ = inner([](double y) { return cplx(0.0, y * y / 4.0 * Q(y)); }, [&](double y) { return Z(4, y); });
    de_ = inner([](double y) { return (1 + y * y) / 4.0 * Q(y); }, [&](double y) { return Z(5, y); });
    dn_ = inner([](double y) { return cplx(0.0, y / 2.0 * Q(y)); }, [&](double y) { return Z(6, y); });

    double diag_min = 1e300, off_max = 0.0;
    for (int j = 0; j < 6; ++j)
        for (int k = 0; k < 6; ++k) {
            if (j == k) diag_min = std::min(diag_min, std::abs(M_[j][k]));
            else off_max = std::max(off_max, std::abs(M_[j][k]));
        }
    if (!(diag_min > 1e-6) || off_max > 1e-8 * diag_min)
        throw std::runtime_error("Z profiles: transversality matrix is not diagonal/nonsingular");
}

KernelBasis kernel_basis(const Grid& g, double R0)
{
    KernelBasis kb{g, {}, {}, ZProfiles(R0)};
    for (int j = 1; j <= 6; ++j) {
        kb.K[j - 1] = Field::sample(g, [j](double y) { return ZProfiles::K(j, y); });
        kb.Z[j - 1] = Field::sample(g, [&](double y) { return kb.zp.Z(j, y); });
    }
    return kb;
}

}  // namespace cm
