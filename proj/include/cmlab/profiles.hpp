#pragma once
// Closed-form profiles: the soliton Q, the chiral soliton R, the
// modulation profiles P and P1, the generalized kernel elements K_j, the
// smooth cutoff chi and the transversal test profiles Z_k.

#include "cmlab/grid.hpp"

#include <array>
#include <cmath>

namespace cm {

struct ProfileParams {
    double b = 0, eta = 0, nu = 0, mu = 0;
};

namespace prof {

inline double Q(double y) { return std::sqrt(2.0 / (1.0 + y * y)); }
inline double Qy(double y) { double q = Q(y); return -0.5 * y * q * q * q; }
inline double Qyy(double y)
{
    double q = Q(y), q3 = q * q * q;
    return -0.5 * q3 + 0.75 * y * y * q3 * q * q;
}
// Lambda = 1/2 + y d/dy
inline double LamQ(double y) { return 0.5 * Q(y) + y * Qy(y); }
inline cplx R(double x) { return std::sqrt(2.0) / cplx(x, 1.0); }

cplx P(double y, const ProfileParams& p);
cplx P1(double y, const ProfileParams& p);

// C-infinity step: 0 for t <= 0, 1 for t >= 1
double smooth_step(double t);
double smooth_step_deriv(double t);
// chi = 1 on |x| <= 1, 0 on |x| >= 2; chi_R(x) = chi(x/R)
inline double chi(double x) { return smooth_step(2.0 - std::abs(x)); }
inline double chi_R(double x, double R) { return chi(x / R); }
double chi_R_deriv(double x, double R);
// A = (1/2) int chi for the shipped chi
inline constexpr double chi_A = 1.5;

}  // namespace prof

Field soliton_Q(const Grid& g);
Field soliton_R(const Grid& g);
// sum_n (-1)^n R(x + nL) on an anti-periodic grid: one-sided spectrum
Field soliton_R_image(const Grid& g);
Field profile_P(const ProfileParams& p, const Grid& g);
Field profile_P1(const ProfileParams& p, const Grid& g);

// Transversal profiles Z_1..Z_6 (supported in |y| <= 2 R0) together with
// the constants entering the decomposition.
class ZProfiles {
public:
    explicit ZProfiles(double R0 = 10.0);

    double R0() const { return R0_; }
    // k = 1..6
    cplx Z(int k, double y) const;
    // K_1..K_6 = Lambda Q, iQ, Q_y, i y^2 Q, (1+y^2) Q, i y Q
    static cplx K(int j, double y);

    // (Q, Z_k)_r, k = 1..6
    double QZ(int k) const { return QZ_[k - 1]; }
    // (K_j, Z_k)_r
    const std::array<std::array<double, 6>, 6>& transversality() const { return M_; }
    // (i y^2/4 Q, Z_4), ((1+y^2)/4 Q, Z_5), (i y/2 Q, Z_6)
    double denom_b() const { return db_; }
    double denom_eta() const { return de_; }
    double denom_nu() const { return dn_; }
    double c1() const { return c1_; }
    double c2() const { return c2_; }
    double c5() const { return c5_; }

    // (f, g)_r over the support of Z by fine trapezoid quadrature
    template <class F, class G>
    double inner(const F& f, const G& g) const;

private:
    double R0_;
    double c1_ = 0, c2_ = 0, c5_ = 0;
    std::array<double, 6> QZ_{};
    std::array<std::array<double, 6>, 6> M_{};
    double db_ = 0, de_ = 0, dn_ = 0;
    cplx DstarYQchi(double y) const;
    cplx DstarQchi(double y) const;
};

// Sampled kernel elements and Z profiles on a grid.
struct KernelBasis {
    Grid grid;
    std::array<Field, 6> K;
    std::array<Field, 6> Z;
    ZProfiles zp;
};

KernelBasis kernel_basis(const Grid& g, double R0 = 10.0);

template <class F, class G>
double ZProfiles::inner(const F& f, const G& g) const
{
    const int n = 200000;
    const double a = 2.0 * R0_, h = 2.0 * a / n;
    double s = 0.0;
    for (int i = 1; i < n; ++i) {
        const double y = -a + i * h;
        s += (cplx(f(y)) * std::conj(cplx(g(y)))).real();
    }
    return s * h;
}

}  // namespace cm
