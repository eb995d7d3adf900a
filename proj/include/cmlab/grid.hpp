#pragma once
// Uniform grid on [-L/2, L/2) and complex sampled fields living on it.

#include <complex>
#include <functional>
#include <stdexcept>
#include <vector>

namespace cm {

using cplx = std::complex<double>;
using cvec = std::vector<cplx>;
using rvec = std::vector<double>;

inline constexpr double pi = 3.14159265358979323846;
inline constexpr cplx I{0.0, 1.0};

struct GridMismatch : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Nodes x_j = -L/2 + j dx.  Frequencies (2 pi k + twist)/L for
// k = -N/2 .. N/2-1; twist = pi gives an anti-periodic box, used for
// fields that wind by half a turn at infinity such as sqrt(2)/(x+i).
struct Grid {
    int N = 0;
    double L = 0.0;
    double twist = 0.0;

    Grid() = default;
    Grid(int n, double len, double tw = 0.0);

    double dx() const { return L / N; }
    double x(int j) const { return -0.5 * L + j * dx(); }
    rvec nodes() const;

    // FFT-ordered index i -> integer wavenumber k
    int wavenumber(int i) const { return i < N / 2 ? i : i - N; }
    double xi(int i) const { return (2.0 * pi * wavenumber(i) + twist) / L; }
    // frequencies in FFT order / sorted ascending
    rvec freqs_fft() const;
    rvec freqs() const;

    bool periodic() const { return twist == 0.0; }
    Grid with_twist(double tw) const { return Grid(N, L, tw); }

    bool operator==(const Grid& o) const { return N == o.N && L == o.L && twist == o.twist; }
    bool operator!=(const Grid& o) const { return !(*this == o); }
};

struct Field {
    Grid grid;
    cvec v;

    Field() = default;
    explicit Field(const Grid& g) : grid(g), v(g.N, cplx(0.0)) {}
    Field(const Grid& g, cvec vals);

    static Field sample(const Grid& g, const std::function<cplx(double)>& f);
    static Field sample_real(const Grid& g, const std::function<double(double)>& f);

    int size() const { return grid.N; }
    cplx& operator[](int j) { return v[j]; }
    const cplx& operator[](int j) const { return v[j]; }

    bool finite() const;
    Field conj() const;
    Field real() const;
    Field imag() const;
    rvec abs2() const;

    Field& operator+=(const Field& o);
    Field& operator-=(const Field& o);
    Field& operator*=(cplx a);
    Field& operator*=(const Field& o);
};

void require_same(const Grid& a, const Grid& b, const char* where);

Field operator+(Field a, const Field& b);
Field operator-(Field a, const Field& b);
Field operator-(Field a);
Field operator*(Field a, const Field& b);
Field operator*(cplx s, Field a);
Field operator*(Field a, cplx s);
Field operator*(double s, Field a);
// pointwise multiply by a real weight sampled at the nodes
Field weight(const std::function<double(double)>& w, Field a);
Field from_real(const Grid& g, const rvec& r);

}  // namespace cm
