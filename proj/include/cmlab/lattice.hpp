#pragma once
// Free-space operators on the sampling lattice dx*Z.
//
// For band-limited data the Hilbert transform, |D| and d/dx act on
// samples through Toeplitz matrices with kernels
//   H:    2/(pi m)               m odd,  0 otherwise
//   |D|:  ((-1)^m - 1)/(pi m^2 dx),  pi/(2 dx) at m = 0
//   d/dx: (-1)^m/(m dx),          0 at m = 0
// The line_* functions apply them to the N box samples (values outside the
// box taken as zero).  The lattice_* functions evaluate them on a closed
// form g that is known everywhere: the sum runs over an extended lattice of
// E boxes and the far field |y| > E L/2 is added as a quadrature integral.

#include "cmlab/grid.hpp"

#include <functional>

namespace cm {

Field line_hilbert(const Field& f);
Field line_abs_deriv(const Field& f);
Field line_ddx(const Field& f);
// line_hilbert plus the contribution of a c/x tail outside the box, with c
// read off the two end samples (for data decaying like 1/x)
Field line_hilbert_completed(const Field& f);

using RealFn = std::function<double(double)>;

Field lattice_hilbert(const Grid& g, const RealFn& fn, int extend = 16);
// needs the derivative of fn for the far-field part of |D| = H d/dx
Field lattice_abs_deriv(const Grid& g, const RealFn& fn, const RealFn& dfn, int extend = 16);

// (1/pi) int_{|y|>a} fn(y)/(x - y) dy at every node; serial reference and
// OpenMP version (identical up to summation order)
rvec far_field_hilbert_serial(const Grid& g, const RealFn& fn, double a);
rvec far_field_hilbert(const Grid& g, const RealFn& fn, double a);

}  // namespace cm
