#pragma once
// Fourier transforms, multipliers, quadrature and adapted norms.
//
// Convention: fhat(xi_k) = dx * sum_j f(x_j) exp(-i xi_k x_j), so that
// dx * sum |f|^2 = (1/L) * sum |fhat|^2.  Spectra are stored in FFT order.

#include "cmlab/grid.hpp"

#include <functional>

namespace cm {

struct Spectrum {
    Grid grid;
    cvec s;
};

Spectrum fourier(const Field& f);
Field inverse_fourier(const Spectrum& s);

using Multiplier = std::function<cplx(double)>;

Field apply_multiplier(const Field& f, const Multiplier& m);
// m given per FFT-ordered frequency index
Field apply_multiplier(const Field& f, const cvec& m);

// sgn(0) = 0; the Nyquist frequency is negative and gets sgn = -1
inline double sgn(double xi) { return xi > 0 ? 1.0 : (xi < 0 ? -1.0 : 0.0); }

Field ddx(const Field& f);
Field d2x(const Field& f);
Field hilbert(const Field& f);
Field abs_deriv(const Field& f);
// strict projector onto xi > 0
Field szego_project(const Field& f);
// 2/3 rule: zero modes with |k| > N/3
Field dealias(const Field& f);

// How H and |D| are realised.  periodic: Fourier multipliers on the box.
// line: the free-space operators restricted to the lattice dx*Z (Toeplitz
// kernels applied by zero-padded convolution); no periodic images.
enum class OpModel { periodic, line };

Field hilbert(const Field& f, OpModel m);
Field abs_deriv(const Field& f, OpModel m);

double inner_r(const Field& f, const Field& g);
double norm_l2(const Field& f);
double mass(const Field& f);

struct NormReport {
    double l2 = 0, h1dot = 0, calH1 = 0, calH2 = 0, mor = 0;
};

NormReport norms(const Field& f);
// same, with derivatives supplied by the caller
NormReport norms(const Field& f, const Field& fx, const Field& fxx);

// C(x_j) = int_{-L/2}^{x_j} rho.  rho must be periodic (e.g. |u|^2 of any
// field), the antiderivative is computed spectrally plus the linear part.
rvec cumint_spectral(const Grid& g, const rvec& rho);
rvec cumint_trapezoid(const Grid& g, const rvec& rho);

// fraction of |fhat|^2 carried by the top `band` of |k| (0.1 = top 10 %)
double top_band_fraction(const Field& f, double band = 0.1);

}  // namespace cm
