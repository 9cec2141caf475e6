#pragma once
// Independent reference computations for the tests. Nothing here calls into
// the routines it is used to check.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <numbers>
#include <optional>
#include <queue>
#include <random>
#include <set>
#include <vector>

#include "canon/farey.hpp"

namespace oracle {

using Complex = std::complex<double>;
constexpr double kPi = std::numbers::pi;

// ---- Farey tree ----

using Frac = std::pair<std::int64_t, std::int64_t>;  // (p, q), q >= 0, 1/0 is infinity

inline Frac norm(std::int64_t p, std::int64_t q) {
    if (q < 0 || (q == 0 && p < 0)) p = -p, q = -q;
    std::int64_t a = p < 0 ? -p : p, b = q;
    while (b) {
        std::int64_t t = a % b;
        a = b;
        b = t;
    }
    return {p / a, q / a};
}

using Tri = std::array<Frac, 3>;

inline Tri sorted(Tri t) {
    std::sort(t.begin(), t.end());
    return t;
}

// The two triangles on the edge {a, b} are {a, b, a+b} and {a, b, a-b}.
inline std::vector<Tri> neighbours(const Tri& t) {
    std::vector<Tri> out;
    for (int i = 0; i < 3; ++i) {
        const Frac a = t[(i + 1) % 3], b = t[(i + 2) % 3], c = t[i];
        for (int s : {1, -1}) {
            const Frac m = norm(a.first + s * b.first, a.second + s * b.second);
            if (m != c) out.push_back(sorted({a, b, m}));
        }
    }
    return out;
}

// Breadth first search from the start triangle to the first triangle holding m,
// pruned to slopes no bigger than m's numerator and denominator.
inline std::vector<Tri> farey_path(const Tri& start, const Frac& m) {
    const std::int64_t P = std::max<std::int64_t>(1, m.first < 0 ? -m.first : m.first);
    const std::int64_t Q = std::max<std::int64_t>(1, m.second);
    auto small = [&](const Frac& f) { return (f.first < 0 ? -f.first : f.first) <= P && f.second <= Q; };
    std::map<Tri, Tri> parent;
    std::queue<Tri> todo;
    const Tri s = sorted(start);
    parent[s] = s;
    todo.push(s);
    while (!todo.empty()) {
        const Tri t = todo.front();
        todo.pop();
        if (t[0] == m || t[1] == m || t[2] == m) {
            std::vector<Tri> path{t};
            for (Tri x = t; !(x == s);) {
                x = parent[x];
                path.push_back(x);
            }
            std::reverse(path.begin(), path.end());
            return path;
        }
        for (const Tri& n : neighbours(t)) {
            if (parent.count(n)) continue;
            if (!small(n[0]) || !small(n[1]) || !small(n[2])) continue;
            parent[n] = t;
            todo.push(n);
        }
    }
    return {};
}

// ---- Lobachevsky function by quadrature ----

// -int_0^theta log|2 sin t| dt; the log singularity at 0 is integrated exactly.
inline double lobachevsky(double theta) {
    theta = std::remainder(theta, kPi);
    if (theta == 0) return 0;
    const double sgn = theta < 0 ? -1 : 1;
    const double x = std::abs(theta);
    // log(2 sin t) = log(2t) + log(sin t / t); the second part is smooth.
    const double singular = x * std::log(2 * x) - x;
    const int n = 2000;  // Simpson panels
    const double h = x / n;
    auto g = [](double t) { return t == 0 ? 0.0 : std::log(std::sin(t) / t); };
    double s = g(0) + g(x);
    for (int i = 1; i < n; ++i) s += (i % 2 ? 4 : 2) * g(i * h);
    return -sgn * (singular + s * h / 3);
}

inline double tet_volume(Complex z) {
    const Complex z1 = 1.0 / (1.0 - z), z2 = 1.0 - 1.0 / z;
    return lobachevsky(std::arg(z)) + lobachevsky(std::arg(z1)) + lobachevsky(std::arg(z2));
}

// ---- Minkowski model ----

// Light-cone vector of the horoball of diameter d at x + iy, or of height h at infinity.
inline std::array<double, 4> light_vector(Complex c, double d) {
    const double r2 = std::norm(c);
    return {2 * c.real() / d, 2 * c.imag() / d, (1 - r2) / d, (1 + r2) / d};
}
inline std::array<double, 4> light_vector_inf(double h) { return {0, 0, -h, h}; }

inline double form(const std::array<double, 4>& u, const std::array<double, 4>& v) {
    return u[0] * v[0] + u[1] * v[1] + u[2] * v[2] - u[3] * v[3];
}

// ---- random configurations ----

struct Rng {
    std::mt19937_64 gen;
    explicit Rng(std::uint64_t seed) : gen(seed) {}
    double uniform(double a, double b) { return std::uniform_real_distribution<double>(a, b)(gen); }
    int integer(int a, int b) { return std::uniform_int_distribution<int>(a, b)(gen); }
    Complex upper(double re = 3, double im = 3) { return {uniform(-re, re), uniform(0.05, im)}; }
};

// A hexagon -1, zeta, zeta', 1, ... whose side directions A, B, C satisfy
// 0 < B < pi and B - pi < A, C < B, and a e^{iA} + b e^{iB} + c e^{iC} = 2.
inline std::optional<std::pair<Complex, Complex>> random_hexagon(Rng& r) {
    for (int attempt = 0; attempt < 1000; ++attempt) {
        const double B = r.uniform(0.1, kPi - 0.1);
        const double A = r.uniform(B - kPi + 0.05, B - 0.05);
        const double C = r.uniform(B - kPi + 0.05, B - 0.05);
        const double b = r.uniform(0.1, 2.0);
        const Complex rhs = 2.0 - b * std::polar(1.0, B);
        // a e^{iA} + c e^{iC} = rhs
        const Complex ea = std::polar(1.0, A), ec = std::polar(1.0, C);
        const double det = ea.real() * ec.imag() - ea.imag() * ec.real();
        if (std::abs(det) < 1e-3) continue;
        const double a = (rhs.real() * ec.imag() - rhs.imag() * ec.real()) / det;
        const double c = (ea.real() * rhs.imag() - ea.imag() * rhs.real()) / det;
        if (a < 0.05 || c < 0.05) continue;
        const Complex zeta = -1.0 + a * ea;
        return std::make_pair(zeta, zeta + b * std::polar(1.0, B));
    }
    return std::nullopt;
}

}  // namespace oracle
