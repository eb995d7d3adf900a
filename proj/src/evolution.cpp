#include "cmlab/evolution.hpp"

#include "cmlab/gauge.hpp"
#include "cmlab/operators.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <iomanip>
#include <istream>
#include <ostream>

namespace cm {

static_assert(std::endian::native == std::endian::little, "snapshot IO assumes a little-endian host");

void SimConfig::validate() const
{
    if (N < 8 || N % 2 != 0) throw std::invalid_argument("config: N must be even and >= 8");
    if (!(L > 0)) throw std::invalid_argument("config: L must be positive");
    if (twist != 0.0 && twist != pi) throw std::invalid_argument("config: twist must be 0 or pi");
    if (!(dt > 0)) throw std::invalid_argument("config: dt must be positive");
    if (!(t_end > 0)) throw std::invalid_argument("config: t_end must be positive");
    if (stride < 1) throw std::invalid_argument("config: stride must be >= 1");
    if (snapshot_stride < 0) throw std::invalid_argument("config: snapshot_stride must be >= 0");
    if (!(max_dx_norm > 0) || !(min_lambda > 0) || !(resolution_tol > 0))
        throw std::invalid_argument("config: thresholds must be positive");
}

namespace {

Field density(const Field& v) { return from_real(Grid(v.grid.N, v.grid.L), v.abs2()); }

// exp(-i xi^2 h) in FFT order
cvec propagator(const Grid& g, double h)
{
    cvec m(g.N);
    for (int i = 0; i < g.N; ++i) {
        const double xi = g.xi(i);
        m[i] = std::polar(1.0, -xi * xi * h);
    }
    return m;
}

struct Stepper {
    const SimConfig& cfg;
    double dt;
    cvec half;

    Stepper(const SimConfig& c, const Grid& g, double h) : cfg(c), dt(h), half(propagator(g, 0.5 * h)) {}

    Field P(const Field& f) const { return apply_multiplier(f, half); }

    Field Nl(const Field& v) const
    {
        Field n = nonlinearity(cfg.equation, v, cfg.model);
        return cfg.dealias ? dealias(n) : n;
    }

    Field if_rk4(const Field& v) const
    {
        const Field a = Nl(v);
        const Field b = Nl(P(v + (0.5 * dt) * a));
        const Field Pv = P(v);
        const Field c = Nl(Pv + (0.5 * dt) * b);
        const Field d = Nl(P(Pv) + dt * P(c));
        return P(P(v + (dt / 6.0) * a)) + (dt / 3.0) * P(b + c) + (dt / 6.0) * d;
    }

    Field nonlinear_flow(const Field& v) const
    {
        if (cfg.equation == Equation::gauged) {
            // i(|D|rho - rho^2/4) v keeps |v| fixed, so the substep is a phase
            const Field rho = density(v);
            const Field d = abs_deriv(rho, cfg.model);
            Field o(v.grid);
            for (int j = 0; j < v.grid.N; ++j) {
                const double r = rho.v[j].real();
                o.v[j] = v.v[j] * std::polar(1.0, dt * (d.v[j].real() - 0.25 * r * r));
            }
            return cfg.dealias ? dealias(o) : o;
        }
        const Field k1 = Nl(v);
        const Field k2 = Nl(v + (0.5 * dt) * k1);
        const Field k3 = Nl(v + (0.5 * dt) * k2);
        const Field k4 = Nl(v + dt * k3);
        return v + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }

    Field strang(const Field& v) const { return P(nonlinear_flow(P(v))); }

    Field operator()(const Field& v) const { return cfg.scheme == Scheme::if_rk4 ? if_rk4(v) : strang(v); }
};

}  // namespace

Field nonlinearity(Equation eq, const Field& v, OpModel m)
{
    const Field rho = density(v);
    const Field d = abs_deriv(rho, m);
    Field o(v.grid);
    if (eq == Equation::gauged) {
        for (int j = 0; j < v.grid.N; ++j) {
            const double r = rho.v[j].real();
            o.v[j] = I * ((d.v[j].real() - 0.25 * r * r) * v.v[j]);
        }
    } else {
        const Field rx = ddx(rho);
        for (int j = 0; j < v.grid.N; ++j) o.v[j] = cplx(rx.v[j].real(), d.v[j].real()) * v.v[j];
    }
    return o;
}

Field step(const Field& v, double dt, const SimConfig& cfg) { return Stepper(cfg, v.grid, dt)(v); }

Field step_gauged(const Field& v, double dt, const SimConfig& cfg)
{
    SimConfig c = cfg;
    c.equation = Equation::gauged;
    return step(v, dt, c);
}

Field step_cmdnls(const Field& u, double dt, const SimConfig& cfg)
{
    SimConfig c = cfg;
    c.equation = Equation::cm_dnls;
    return step(u, dt, c);
}

double energy_poly(Equation eq, const Field& v, OpModel m)
{
    if (eq == Equation::cm_dnls) return energy_poly(Equation::gauged, gauge_forward(v), m);
    // 1/2 int |v_x|^2 - 1/4 int rho |D|rho + 1/24 int rho^3
    const Field vx = ddx(v);
    const Field rho = density(v);
    const Field d = abs_deriv(rho, m);
    double s = 0;
    for (int j = 0; j < v.grid.N; ++j) {
        const double r = rho.v[j].real();
        s += 0.5 * std::norm(vx.v[j]) - 0.25 * r * d.v[j].real() + r * r * r / 24.0;
    }
    return s * v.grid.dx();
}

double energy_sd(Equation eq, const Field& v, OpModel m)
{
    if (eq == Equation::gauged) {
        const double n = norm_l2(op_Dv(v, v, m));
        return 0.5 * n * n;
    }
    // 1/2 || u_x - i Pi_+(|u|^2) u ||^2 with Pi_+ = (1 + iH)/2
    const Field ux = ddx(v);
    const Field rho = density(v);
    const Field h = hilbert(rho, m);
    double s = 0;
    for (int j = 0; j < v.grid.N; ++j) {
        const cplx p = 0.5 * I * cplx(rho.v[j].real(), h.v[j].real());
        s += std::norm(ux.v[j] - p * v.v[j]);
    }
    return 0.5 * s * v.grid.dx();
}

namespace {

// int w(x) Im(conj(v) v_x)  (- 1/2 int w |v|^4 for CM-DNLS)
double moment(Equation eq, const Field& v, OpModel, bool weighted)
{
    const Field vx = ddx(v);
    double s = 0;
    for (int j = 0; j < v.grid.N; ++j) {
        double q = (std::conj(v.v[j]) * vx.v[j]).imag();
        if (eq == Equation::cm_dnls) {
            const double r = std::norm(v.v[j]);
            q -= 0.5 * r * r;
        }
        s += weighted ? v.grid.x(j) * q : q;
    }
    return s * v.grid.dx();
}

}  // namespace

double momentum(Equation eq, const Field& v, OpModel m) { return moment(eq, v, m, false); }

DiagnosticsRecord diagnose(const Field& v, double t, const SimConfig& cfg)
{
    DiagnosticsRecord d;
    d.t = t;
    d.M = mass(v);
    d.E = energy_poly(cfg.equation, v, cfg.model);
    d.E_sd = energy_sd(cfg.equation, v, cfg.model);
    d.P = momentum(cfg.equation, v, cfg.model);
    d.virial = moment(cfg.equation, v, cfg.model, true);
    d.chirality = chirality_defect(v);
    d.tail = top_band_fraction(v);
    if (cfg.step_residual) {
        const double n = norm_l2(v);
        if (n > 0) {
            const Field one = step(v, cfg.dt, cfg);
            const Field two = step(step(v, 0.5 * cfg.dt, cfg), 0.5 * cfg.dt, cfg);
            d.step_residual = norm_l2(one - two) / (n * cfg.dt);
        }
    }
    return d;
}

Trajectory evolve(const Field& init, const SimConfig& cfg, const StopHook& hook)
{
    cfg.validate();
    if (init.grid != cfg.grid()) throw GridMismatch("evolve: initial field is not on the configured grid");
    Trajectory tr;
    tr.config = cfg;
    const long nsteps = std::lround(cfg.t_end / cfg.dt);
    const Stepper stp(cfg, init.grid, cfg.dt);

    Field v = init;
    auto record = [&](long n) {
        const double t = n * cfg.dt;
        tr.diagnostics.push_back(diagnose(v, t, cfg));
        return tr.diagnostics.back();
    };
    auto store = [&](long n) {
        if (!tr.t.empty() && tr.t.back() == n * cfg.dt) return;
        tr.t.push_back(n * cfg.dt);
        tr.snapshots.push_back(v);
    };
    auto check = [&](long n, const DiagnosticsRecord& d) -> bool {
        const double t = n * cfg.dt;
        if (d.tail > cfg.resolution_tol) {
            tr.stop_reason = "resolution-lost";
            tr.resolution_lost = true;
            tr.t_last_valid = t;
            return false;
        }
        if (norm_l2(ddx(v)) > cfg.max_dx_norm) {
            tr.stop_reason = "max-dx-norm";
            return false;
        }
        std::string why;
        if (hook && hook(t, v, why)) {
            tr.stop_reason = why.empty() ? "hook" : why;
            return false;
        }
        return true;
    };

    store(0);
    if (!check(0, record(0))) return tr;
    long n = 0;
    while (n < nsteps) {
        Field next = stp(v);
        if (!next.finite()) {
            tr.stop_reason = "resolution-lost";
            tr.resolution_lost = true;
            tr.t_last_valid = n * cfg.dt;
            store(n);
            return tr;
        }
        v = std::move(next);
        ++n;
        if (cfg.snapshot_stride > 0 && n % cfg.snapshot_stride == 0) store(n);
        if (n % cfg.stride == 0 || n == nsteps) {
            if (!check(n, record(n))) {
                store(n);
                return tr;
            }
        }
    }
    store(n);
    tr.stop_reason = "t_end";
    return tr;
}

namespace {

Field commutator_HD(const Field& v, const Field& f, OpModel m)
{
    const Background bg = Background::of(v, m);
    return op_Hv(bg, op_Dv_tilde(bg, f)) - op_Dv_tilde(bg, op_Hv(bg, f));
}

}  // namespace

double lax_residual(const Field& vm, const Field& v, const Field& vp, double dt, const Field& f, OpModel m)
{
    const Field dD = op_Dv_tilde(vp, f, m) - op_Dv_tilde(vm, f, m);
    const Field r = (-I / (2.0 * dt)) * dD + commutator_HD(v, f, m);
    return norm_l2(r);
}

double lax_residual(const Trajectory& tr, const Field& f, int i)
{
    if (i < 1 || i + 1 >= static_cast<int>(tr.snapshots.size()))
        throw std::out_of_range("lax_residual: snapshot index needs neighbours on both sides");
    const double dt = 0.5 * (tr.t[i + 1] - tr.t[i - 1]);
    return lax_residual(tr.snapshots[i - 1], tr.snapshots[i], tr.snapshots[i + 1], dt, f, tr.config.model);
}

void write_snapshot(std::ostream& os, const Field& f, double t)
{
    const std::int32_t n = f.grid.N;
    const double L = f.grid.L;
    os.write(reinterpret_cast<const char*>(&n), sizeof n);
    os.write(reinterpret_cast<const char*>(&L), sizeof L);
    os.write(reinterpret_cast<const char*>(&t), sizeof t);
    os.write(reinterpret_cast<const char*>(f.v.data()), static_cast<std::streamsize>(sizeof(cplx) * f.v.size()));
    if (!os) throw std::runtime_error("snapshot: write failed");
}

Field read_snapshot(std::istream& is, double* t, double twist)
{
    std::int32_t n = 0;
    double L = 0, tt = 0;
    is.read(reinterpret_cast<char*>(&n), sizeof n);
    is.read(reinterpret_cast<char*>(&L), sizeof L);
    is.read(reinterpret_cast<char*>(&tt), sizeof tt);
    if (!is || n < 8) throw std::runtime_error("snapshot: bad header");
    Field f(Grid(n, L, twist));
    is.read(reinterpret_cast<char*>(f.v.data()), static_cast<std::streamsize>(sizeof(cplx) * f.v.size()));
    if (!is) throw std::runtime_error("snapshot: truncated data");
    if (t) *t = tt;
    return f;
}

void write_diagnostics_csv(std::ostream& os, const std::vector<DiagnosticsRecord>& d)
{
    os << "t,M,E,E_sd,P,virial,chirality,step_residual,spectral_tail\n";
    os << std::scientific << std::setprecision(17);
    for (const auto& r : d)
        os << r.t << ',' << r.M << ',' << r.E << ',' << r.E_sd << ',' << r.P << ',' << r.virial << ','
           << r.chirality << ',' << r.step_residual << ',' << r.tail << '\n';
}

}  // namespace cm
