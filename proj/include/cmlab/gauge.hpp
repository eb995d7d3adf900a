#pragma once
// Gauge transform between the CM-DNLS and the gauged equation.
//
//   gauge_forward(u)  = -u exp(-(i/2) C),   gauge_inverse(v) = -v exp((i/2) C)
//
// with C(x) = int_{-L/2}^x |.|^2 (+ optional estimate of the part left of
// the box).  Since |v| = |u| both directions use the same C, so the round
// trip is exact up to rounding.

#include "cmlab/grid.hpp"

namespace cm {

enum class Cumint { spectral, trapezoid };

// Estimate of int_{-inf}^{-L/2} |u|^2 added to C.
//   none:      0
//   power_law: |u|^2 ~ A/x^2 fitted on the left eighth of the box, giving A/(L/2)
enum class TailModel { none, power_law };

struct GaugeOptions {
    Cumint quad = Cumint::spectral;
    TailModel tail = TailModel::power_law;
};

// C(x_j) including the tail term selected in opt
rvec gauge_phase(const Field& u, const GaugeOptions& opt = {});
// power-law estimate of int_{-inf}^{-L/2} rho for a periodic density rho
double tail_mass(const Grid& g, const rvec& rho);

// The output lives on the grid with twist  theta - pi round(M/2pi)  (mod 2pi),
// M the total phase mass: the phase factor winds by about M/2 across the box.
Field gauge_forward(const Field& u, const GaugeOptions& opt = {});
Field gauge_inverse(const Field& v, const GaugeOptions& opt = {});

// ||P_{xi<0} u|| / ||u||, 0 for u = 0.  The xi = 0 mode counts as chiral.
double chirality_defect(const Field& u);

}  // namespace cm
