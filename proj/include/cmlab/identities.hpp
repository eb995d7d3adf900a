#pragma once
// Residual table for the operator identities around the soliton.
//
// Two evaluation paths are used.  Closed-form fixtures (functions known on
// the whole line, many of them not square integrable) go through the
// lattice sums of lattice.hpp with analytic derivatives.  Operator
// identities are checked on a fixed battery of sampled test functions with
// the line operators.

#include "cmlab/grid.hpp"
#include "cmlab/operators.hpp"

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

namespace cm {

using CplxFn = std::function<cplx(double)>;

// f with its derivative
struct ClosedForm {
    CplxFn f, df;
};

// Operators at Q acting on closed forms.
class FixtureCalculus {
public:
    explicit FixtureCalculus(const Grid& g, int extend = 16);

    const Grid& grid() const { return g_; }
    Field sample(const CplxFn& f) const { return Field::sample(g_, f); }

    Field H(const CplxFn& f) const;
    Field absD(const CplxFn& f, const CplxFn& df) const;
    Field DQ(const ClosedForm& c) const;
    Field LQ(const ClosedForm& c) const;
    Field LQ_star(const ClosedForm& c) const;
    Field LQ_tilde(const ClosedForm& c) const;
    Field AQ(const ClosedForm& c) const;

private:
    Grid g_;
    int extend_;
    Field HQ2_;
};

struct NamedField {
    std::string name;
    Field f;
};

// 3 Gaussians (widths 1, 5, 25), Q, xQ*window, 4 random localized
// band-limited fields (fixed seed), 3 chiral fields.
// With 0 < box < g.L the members are laid out for residuals measured on
// |x| <= box/2 of the longer grid g: the xQ window scales with box and every
// member is cut off smoothly by chi_{g.L/4}, so it is unchanged on the box.
std::vector<NamedField> test_battery(const Grid& g, unsigned seed = 20240611u, double box = 0);

struct IdentityRow {
    std::string name;
    std::string anchor;
    double residual = 0;
    double threshold = 0;
    bool pass = false;
    // residual over the whole box for windowed rows (else equal to residual)
    double box_residual = 0;
};

struct SuiteOptions {
    double threshold = 1e-5;  // applied to every row unless a row is stricter
    std::string only;         // run rows whose name or anchor contains this
};

std::vector<IdentityRow> verify_identity_suite(const Grid& g, const SuiteOptions& opt = {});

struct MorawetzRow {
    std::string name;
    double lhs = 0, rhs = 0, ratio = 0;
};

std::vector<MorawetzRow> morawetz_battery(const Grid& g, double delta_psi = 0.1);

void write_identity_csv(std::ostream& os, const std::vector<IdentityRow>& rows);

// ||a - b|| / ||ref|| restricted to |x| <= window (window <= 0: whole box)
double rel_residual(const Field& a, const Field& b, const Field& ref, double window = 0);

}  // namespace cm
