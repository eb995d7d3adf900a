#include "cmlab/io.hpp"

#include "cmlab/profiles.hpp"

#include "CLI11.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

namespace cm {
namespace {

KeyValueConfig from_items(const std::vector<CLI::ConfigItem>& items)
{
    std::map<std::string, std::string> kv;
    for (const auto& it : items) {
        // section enter/leave markers
        if (it.name == "++" || it.name == "--") continue;
        if (it.inputs.size() != 1) throw ConfigError("config: key '" + it.fullname() + "' must have one value");
        if (!kv.emplace(it.fullname(), it.inputs[0]).second)
            throw ConfigError("config: duplicate key '" + it.fullname() + "'");
    }
    return KeyValueConfig(std::move(kv));
}

template <class T>
T parse_number(const std::string& key, const std::string& s)
{
    T v{};
    const char* b = s.data();
    const char* e = b + s.size();
    if (b != e && *b == '+') ++b;
    auto [p, ec] = std::from_chars(b, e, v);
    if (ec != std::errc() || p != e) throw ConfigError("config: key '" + key + "': cannot parse '" + s + "'");
    return v;
}

}  // namespace

KeyValueConfig KeyValueConfig::from_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open '" + path + "'");
    try {
        return from_items(CLI::ConfigINI().from_config(in));
    } catch (const CLI::Error& e) {
        throw ConfigError("config: " + path + ": " + e.what());
    }
}

KeyValueConfig KeyValueConfig::from_string(const std::string& text)
{
    std::istringstream in(text);
    try {
        return from_items(CLI::ConfigINI().from_config(in));
    } catch (const CLI::Error& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
}

const std::string* KeyValueConfig::find(const std::string& key) const
{
    used_.insert(key);
    auto it = kv_.find(key);
    return it == kv_.end() ? nullptr : &it->second;
}

std::string KeyValueConfig::get_string(const std::string& key, const std::string& def) const
{
    const std::string* s = find(key);
    return s ? *s : def;
}

double KeyValueConfig::get_double(const std::string& key, double def) const
{
    const std::string* s = find(key);
    if (!s) return def;
    const double v = parse_number<double>(key, *s);
    if (!std::isfinite(v)) throw ConfigError("config: key '" + key + "' must be finite");
    return v;
}

int KeyValueConfig::get_int(const std::string& key, int def) const
{
    const std::string* s = find(key);
    return s ? parse_number<int>(key, *s) : def;
}

bool KeyValueConfig::get_bool(const std::string& key, bool def) const
{
    const std::string* s = find(key);
    if (!s) return def;
    std::string t = *s;
    std::transform(t.begin(), t.end(), t.begin(), [](unsigned char c) { return std::tolower(c); });
    if (t == "true" || t == "1" || t == "yes" || t == "on") return true;
    if (t == "false" || t == "0" || t == "no" || t == "off") return false;
    throw ConfigError("config: key '" + key + "': expected a boolean, got '" + *s + "'");
}

std::vector<std::string> KeyValueConfig::unused() const
{
    std::vector<std::string> out;
    for (const auto& [k, v] : kv_)
        if (!used_.count(k)) out.push_back(k);
    return out;
}

void KeyValueConfig::require_all_used() const
{
    const auto u = unused();
    if (u.empty()) return;
    std::string msg = "config: unknown key";
    msg += u.size() > 1 ? "s" : "";
    for (std::size_t i = 0; i < u.size(); ++i) msg += (i ? ", '" : " '") + u[i] + "'";
    throw ConfigError(msg);
}

SimConfig sim_config(const KeyValueConfig& c)
{
    SimConfig s;
    const std::string eq = c.get_string("equation", "gauged");
    if (eq == "gauged") s.equation = Equation::gauged;
    else if (eq == "cm_dnls") s.equation = Equation::cm_dnls;
    else throw ConfigError("config: equation must be gauged or cm_dnls, got '" + eq + "'");

    s.N = c.get_int("N", s.N);
    s.L = c.get_double("L", s.L);
    // twist accepts "pi" for the anti-periodic box
    if (c.get_string("twist", "") == "pi") s.twist = pi;
    else s.twist = c.get_double("twist", s.twist);
    s.dt = c.get_double("dt", s.dt);
    s.t_end = c.get_double("t_end", s.t_end);

    const std::string sc = c.get_string("scheme", "if_rk4");
    if (sc == "if_rk4") s.scheme = Scheme::if_rk4;
    else if (sc == "strang") s.scheme = Scheme::strang;
    else throw ConfigError("config: scheme must be if_rk4 or strang, got '" + sc + "'");

    s.dealias = c.get_bool("dealias", s.dealias);
    const std::string m = c.get_string("model", "line");
    if (m == "line") s.model = OpModel::line;
    else if (m == "periodic") s.model = OpModel::periodic;
    else throw ConfigError("config: model must be line or periodic, got '" + m + "'");

    s.stride = c.get_int("stride", s.stride);
    s.snapshot_stride = c.get_int("snapshot_stride", s.snapshot_stride);
    s.max_dx_norm = c.get_double("max_dx_norm", s.max_dx_norm);
    s.min_lambda = c.get_double("min_lambda", s.min_lambda);
    s.resolution_tol = c.get_double("resolution_tol", s.resolution_tol);
    s.step_residual = c.get_bool("step_residual", s.step_residual);
    try {
        s.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    return s;
}

Field initial_field(const KeyValueConfig& c, const Grid& g, const std::string& default_kind)
{
    const std::string kind = c.get_string("init.kind", default_kind);
    if (kind == "soliton") {
        const double lam = c.get_double("init.lambda", 1.0);
        if (!(lam > 0)) throw ConfigError("config: init.lambda must be > 0");
        return modulate([](double y) { return cplx(prof::Q(y)); }, g, lam, c.get_double("init.gamma", 0.0),
                        c.get_double("init.x0", 0.0));
    }
    if (kind == "chiral") {
        if (std::abs(std::abs(std::remainder(g.twist, 2 * pi)) - pi) > 1e-12)
            throw ConfigError("config: init.kind = chiral needs twist = pi (R winds by half a turn)");
        return soliton_R(g);
    }
    if (kind == "gaussian") {
        const double amp = c.get_double("init.amp", 1.0), w = c.get_double("init.width", 1.0);
        const double x0 = c.get_double("init.x0", 0.0), k0 = c.get_double("init.k0", 0.0);
        if (!(w > 0)) throw ConfigError("config: init.width must be > 0");
        if (!g.periodic()) throw ConfigError("config: init.kind = gaussian needs twist = 0");
        return Field::sample(g, [&](double x) {
            const double z = (x - x0) / w;
            return amp * std::exp(-z * z) * std::exp(I * (k0 * x));
        });
    }
    if (kind == "q_plus_p") {
        ProfileParams p{c.get_double("init.b", 0.05), c.get_double("init.eta", 0.0), c.get_double("init.nu", 0.0),
                        c.get_double("init.mu", 0.0)};
        const double lam = c.get_double("init.lambda", std::pow(std::abs(p.b), 2.0 / 3.0));
        const double cut = c.get_double("init.cutoff", 40.0);
        if (!(lam > 0)) throw ConfigError("config: init.lambda must be > 0");
        if (!(cut > 0)) throw ConfigError("config: init.cutoff must be > 0");
        return modulate([&](double y) { return prof::Q(y) + prof::P(y, p) * prof::chi_R(y, cut); }, g, lam,
                        c.get_double("init.gamma", 0.0), c.get_double("init.x0", 0.0));
    }
    if (kind == "snapshot") {
        const std::string path = c.get_string("init.file", "");
        std::ifstream in(path, std::ios::binary);
        if (!in) throw ConfigError("config: cannot open init.file '" + path + "'");
        Field f = read_snapshot(in, nullptr, g.twist);
        if (f.grid != g) throw ConfigError("config: init.file grid differs from N, L, twist");
        return f;
    }
    throw ConfigError("config: init.kind must be soliton, chiral, gaussian, q_plus_p or snapshot, got '" + kind + "'");
}

DecomposeOptions decompose_options(const KeyValueConfig& c)
{
    DecomposeOptions o;
    o.R0 = c.get_double("track.R0", o.R0);
    o.delta_dec = c.get_double("track.delta_dec", o.delta_dec);
    o.tol = c.get_double("track.tol", o.tol);
    o.max_iter = c.get_int("track.max_iter", o.max_iter);
    if (!(o.R0 > 0 && o.delta_dec > 0 && o.tol > 0 && o.max_iter > 0))
        throw ConfigError("config: track.R0, track.delta_dec, track.tol, track.max_iter must be > 0");
    return o;
}

std::string fmt(double v)
{
    std::ostringstream os;
    os << std::scientific << std::setprecision(17) << v;
    return os.str();
}

void write_prediction_csv(std::ostream& os, const TrackResult& tr, const ModLawSeries& ode)
{
    os << "t,lambda_ode,gamma_ode,x_ode,b_ode,eta_ode,nu_ode,ell_ode,lambda_pde,b_pde,lambda_ratio\n";
    os << std::scientific << std::setprecision(17);
    const std::size_t n = std::min(tr.rows.size(), ode.states.size());
    for (std::size_t i = 0; i < n; ++i) {
        const auto& q = ode.states[i];
        const auto& s = tr.rows[i].state;
        os << ode.t[i] << ',' << q.lambda << ',' << q.gamma << ',' << q.x << ',' << q.b << ',' << q.eta << ','
           << q.nu << ',' << modlaw_conserved(q).ell << ',' << s.lambda << ',' << s.b << ',' << s.lambda / q.lambda
           << '\n';
    }
}

}  // namespace cm
