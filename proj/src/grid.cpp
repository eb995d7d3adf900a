#include "cmlab/grid.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace cm {

Grid::Grid(int n, double len, double tw) : N(n), L(len), twist(tw)
{
    if (n < 8 || n % 2 != 0)
        throw std::invalid_argument("grid: N must be even and >= 8, got " + std::to_string(n));
    if (!(len > 0.0) || !std::isfinite(len))
        throw std::invalid_argument("grid: L must be positive");
    if (!(tw == 0.0 || tw == pi))
        throw std::invalid_argument("grid: twist must be 0 or pi");
}

rvec Grid::nodes() const
{
    rvec x(N);
    for (int j = 0; j < N; ++j) x[j] = this->x(j);
    return x;
}

rvec Grid::freqs_fft() const
{
    rvec k(N);
    for (int i = 0; i < N; ++i) k[i] = xi(i);
    return k;
}

rvec Grid::freqs() const
{
    rvec k = freqs_fft();
    std::sort(k.begin(), k.end());
    return k;
}

void require_same(const Grid& a, const Grid& b, const char* where)
{
    if (a != b) throw GridMismatch(std::string(where) + ": fields live on different grids");
}

Field::Field(const Grid& g, cvec vals) : grid(g), v(std::move(vals))
{
    if (static_cast<int>(v.size()) != g.N) throw std::invalid_argument("field: sample count != N");
}

Field Field::sample(const Grid& g, const std::function<cplx(double)>& f)
{
    Field out(g);
    for (int j = 0; j < g.N; ++j) out.v[j] = f(g.x(j));
    return out;
}

Field Field::sample_real(const Grid& g, const std::function<double(double)>& f)
{
    Field out(g);
    for (int j = 0; j < g.N; ++j) out.v[j] = f(g.x(j));
    return out;
}

bool Field::finite() const
{
    return std::all_of(v.begin(), v.end(),
                       [](const cplx& z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); });
}

Field Field::conj() const
{
    Field o(grid);
    for (int j = 0; j < grid.N; ++j) o.v[j] = std::conj(v[j]);
    return o;
}

Field Field::real() const
{
    Field o(grid);
    for (int j = 0; j < grid.N; ++j) o.v[j] = v[j].real();
    return o;
}

Field Field::imag() const
{
    Field o(grid);
    for (int j = 0; j < grid.N; ++j) o.v[j] = v[j].imag();
    return o;
}

rvec Field::abs2() const
{
    rvec r(grid.N);
    for (int j = 0; j < grid.N; ++j) r[j] = std::norm(v[j]);
    return r;
}

Field& Field::operator+=(const Field& o)
{
    require_same(grid, o.grid, "add");
    for (int j = 0; j < grid.N; ++j) v[j] += o.v[j];
    return *this;
}

Field& Field::operator-=(const Field& o)
{
    require_same(grid, o.grid, "sub");
    for (int j = 0; j < grid.N; ++j) v[j] -= o.v[j];
    return *this;
}

Field& Field::operator*=(cplx a)
{
    for (auto& z : v) z *= a;
    return *this;
}

Field& Field::operator*=(const Field& o)
{
    require_same(grid, o.grid, "mul");
    for (int j = 0; j < grid.N; ++j) v[j] *= o.v[j];
    return *this;
}

Field operator+(Field a, const Field& b) { return a += b; }
Field operator-(Field a, const Field& b) { return a -= b; }
Field operator-(Field a) { return a *= cplx(-1.0); }
Field operator*(Field a, const Field& b) { return a *= b; }
Field operator*(cplx s, Field a) { return a *= s; }
Field operator*(Field a, cplx s) { return a *= s; }
Field operator*(double s, Field a) { return a *= cplx(s); }

Field weight(const std::function<double(double)>& w, Field a)
{
    for (int j = 0; j < a.grid.N; ++j) a.v[j] *= w(a.grid.x(j));
    return a;
}

Field from_real(const Grid& g, const rvec& r)
{
    Field o(g);
    for (int j = 0; j < g.N; ++j) o.v[j] = r[j];
    return o;
}

}  // namespace cm
