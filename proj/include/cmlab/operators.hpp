#pragma once
// Linear and nonlinear operators built around a background field v.
//
//   D_v f      = f_x + 1/2 H(|v|^2) f
//   D~_v f     = f_x + 1/2 v H(conj(v) f)
//   L_v f      = D_v f + v H(Re(conj(v) f))
//   L_v^* f    = -f_x + 1/2 H(|v|^2) f - v H(Re(conj(v) f))
//   H_v f      = -f_xx + 1/4 |v|^4 f - v |D|(conj(v) f)
//   N_v(e)     = e H(Re(conj(v) e)) + 1/2 (v + e) H(|e|^2)
//
// and the operators at the soliton
//
//   A_Q f  = d/dx (x - H)(<x>^{-1} f)      A_Q^* f = -<x>^{-1}(x + H) f_x
//   B_Q f  = (x - H)(<x>^{-1} f)           B_Q^* f = <x>^{-1}(x + H) f
//   L~_Q f = D_Q f + Q^{-1} H Re(Q^3 f)

#include "cmlab/grid.hpp"
#include "cmlab/spectral.hpp"

namespace cm {

// v together with the potentials H(|v|^2) and |D|(|v|^2).
struct Background {
    Field v;
    Field H_rho;
    Field D_rho;
    OpModel model = OpModel::line;

    static Background of(const Field& v, OpModel m = OpModel::line);
    // Q with its potentials evaluated as lattice sums (no box truncation)
    static Background soliton(const Grid& g);
};

Field op_Dv(const Background& bg, const Field& f);
Field op_Dv_tilde(const Background& bg, const Field& f);
Field op_Lv(const Background& bg, const Field& f);
Field op_Lv_star(const Background& bg, const Field& f);
Field op_Hv(const Background& bg, const Field& f);
Field op_Nv(const Background& bg, const Field& eps);

Field op_Dv(const Field& v, const Field& f, OpModel m = OpModel::line);
Field op_Dv_tilde(const Field& v, const Field& f, OpModel m = OpModel::line);
Field op_Lv(const Field& v, const Field& f, OpModel m = OpModel::line);
Field op_Lv_star(const Field& v, const Field& f, OpModel m = OpModel::line);
Field op_Hv(const Field& v, const Field& f, OpModel m = OpModel::line);
Field op_Nv(const Field& v, const Field& eps, OpModel m = OpModel::line);

// script L_Q from its second-order expression
//   -f_xx - |D|(Q^2) f - 2Q|D|Re(Qf) + 1/4 Q^4 f + Q^3 Re(Qf)
Field op_calLQ_direct(const Background& q, const Field& f);
// Lambda f = f/2 + x f_x
Field op_Lambda(const Field& f);

Field op_AQ(const Field& f, OpModel m = OpModel::line);
Field op_AQ_star(const Field& f, OpModel m = OpModel::line);
Field op_BQ(const Field& f, OpModel m = OpModel::line);
Field op_BQ_star(const Field& f, OpModel m = OpModel::line);
Field op_LQ_tilde(const Background& q, const Field& f);
Field op_LQ_tilde(const Field& f, OpModel m = OpModel::line);

struct MorawetzResult {
    double lhs = 0;    // ||u||_Mor^2
    double rhs = 0;    // (-u_xx, Lambda_psi u)_r
    double ratio = 0;  // lhs / rhs (0 when both vanish)
};

// u must be odd about 0 up to `odd_tol` (relative); it is then projected
// to its odd part.  psi = <x> - delta log<x>, Lambda_psi = psi' d/dx + psi''/2.
MorawetzResult verify_morawetz(const Field& u, double delta_psi, double odd_tol = 1e-8);

}  // namespace cm
