#pragma once

// Straight double-loop reference implementations on raw arrays. Nothing
// here calls into the library's operators.

#include "hsl/grid.hpp"
#include "hsl/model.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <vector>

namespace naive {

using Arr = std::vector<double>;

struct Box {
    int n;
    double len;
    double h() const { return len / n; }
    double h2() const { return h() * h(); }
    int idx(int i, int j) const { return ((j % n + n) % n) * n + ((i % n + n) % n); }
};

inline Arr raw(const hsl::ScalarField& f) { return Arr(f.values().begin(), f.values().end()); }

inline hsl::ScalarField field(const hsl::Grid2D& g, const Arr& a) { return hsl::ScalarField(g, a); }

inline Arr lap(const Box& b, const Arr& f) {
    Arr out(f.size());
    for (int j = 0; j < b.n; ++j)
        for (int i = 0; i < b.n; ++i)
            out[b.idx(i, j)] = (f[b.idx(i + 1, j)] + f[b.idx(i - 1, j)] + f[b.idx(i, j + 1)] +
                                f[b.idx(i, j - 1)] - 4.0 * f[b.idx(i, j)]) /
                               b.h2();
    return out;
}

inline Arr dx(const Box& b, const Arr& f) {
    Arr out(f.size());
    for (int j = 0; j < b.n; ++j)
        for (int i = 0; i < b.n; ++i) out[b.idx(i, j)] = (f[b.idx(i + 1, j)] - f[b.idx(i - 1, j)]) / (2.0 * b.h());
    return out;
}

inline Arr dy(const Box& b, const Arr& f) {
    Arr out(f.size());
    for (int j = 0; j < b.n; ++j)
        for (int i = 0; i < b.n; ++i) out[b.idx(i, j)] = (f[b.idx(i, j + 1)] - f[b.idx(i, j - 1)]) / (2.0 * b.h());
    return out;
}

inline double sum(const Arr& f) {
    double s = 0.0;
    for (double v : f) s += v;
    return s;
}

inline double integral(const Box& b, const Arr& f) { return b.h2() * sum(f); }

inline double norm_p(const Box& b, const Arr& f, double p) {
    if (std::isinf(p)) {
        double m = 0.0;
        for (double v : f) m = std::max(m, std::abs(v));
        return m;
    }
    double s = 0.0;
    for (double v : f) s += std::pow(std::abs(v), p);
    return std::pow(b.h2() * s, 1.0 / p);
}

inline Arr pressure(const Arr& n, double m) {
    Arr p(n.size());
    for (std::size_t k = 0; k < n.size(); ++k) p[k] = m / (m - 1.0) * std::pow(n[k], m - 1.0);
    return p;
}

inline double energy(const Box& b, const Arr& n, const Arr& c, const Arr& ux, const Arr& uy, double m) {
    const Arr p = pressure(n, m), cx = dx(b, c), cy = dy(b, c);
    double s = 0.0;
    for (std::size_t k = 0; k < n.size(); ++k)
        s += p[k] / (m - 2.0) + 0.5 * (cx[k] * cx[k] + cy[k] * cy[k]) + 0.5 * (ux[k] * ux[k] + uy[k] * uy[k]);
    return b.h2() * s;
}

inline double grad_sq(const Box& b, const Arr& f) {
    const Arr gx = dx(b, f), gy = dy(b, f);
    double s = 0.0;
    for (std::size_t k = 0; k < f.size(); ++k) s += gx[k] * gx[k] + gy[k] * gy[k];
    return b.h2() * s;
}

inline double dissipation(const Box& b, const Arr& n, const Arr& c, const Arr& ux, const Arr& uy, double m) {
    const Arr lc = lap(b, c);
    double s = 0.0;
    for (double v : lc) s += v * v;
    return grad_sq(b, pressure(n, m)) + 0.5 * b.h2() * s + 0.5 * (grad_sq(b, ux) + grad_sq(b, uy));
}

inline double overshoot(const Box& b, const Arr& n) {
    double s = 0.0;
    for (double v : n) s += v > 1.0 ? (v - 1.0) * (v - 1.0) : 0.0;
    return std::sqrt(b.h2() * s);
}

inline std::pair<double, double> graph(const Box& b, const Arr& n, double m) {
    const Arr p = pressure(n, m), px = dx(b, p), py = dy(b, p);
    double a = 0.0, g = 0.0;
    for (std::size_t k = 0; k < n.size(); ++k) {
        a += std::abs((1.0 - n[k]) * p[k]);
        g += std::abs(1.0 - n[k]) * std::sqrt(px[k] * px[k] + py[k] * py[k]);
    }
    return {b.h2() * a, b.h2() * g};
}

inline double chi_of(const hsl::Coefficients& co, double c) {
    c = std::min(std::max(c, 0.0), co.c_bound);
    return co.chi_kind == hsl::ChiKind::Constant ? co.chi_0 : co.chi_0 / ((1.0 + c) * (1.0 + c));
}

inline double f_of(const hsl::Coefficients& co, double c) {
    c = std::min(std::max(c, 0.0), co.c_bound);
    return co.f_kind == hsl::ConsumptionKind::Saturating ? c / (1.0 + c) : std::min(c, co.c_bound);
}

inline Arr chem_div(const Box& b, const Arr& c, const hsl::Coefficients& co) {
    Arr fx = dx(b, c), fy = dy(b, c);
    for (std::size_t k = 0; k < c.size(); ++k) {
        fx[k] *= chi_of(co, c[k]);
        fy[k] *= chi_of(co, c[k]);
    }
    const Arr a = dx(b, fx), d = dy(b, fy);
    Arr out(c.size());
    for (std::size_t k = 0; k < c.size(); ++k) out[k] = a[k] + d[k];
    return out;
}

inline double complementarity(const Box& b, const Arr& p, const Arr& c, const hsl::Coefficients& co,
                              double threshold) {
    const Arr lp = lap(b, p), dc = chem_div(b, c, co);
    double s = 0.0;
    for (std::size_t k = 0; k < p.size(); ++k)
        if (p[k] > threshold) s += std::abs(p[k] * (lp[k] - dc[k]));
    return b.h2() * s;
}

inline double r2(const Box& b, int i, int j) {
    auto wrap = [&](double d) {
        while (d > 0.5 * b.len) d -= b.len;
        while (d < -0.5 * b.len) d += b.len;
        return d;
    };
    const double x = wrap((i + 0.5) * b.h() - 0.5 * b.len);
    const double y = wrap((j + 0.5) * b.h() - 0.5 * b.len);
    return x * x + y * y;
}

inline std::pair<double, double> moments(const Box& b, const Arr& n, const Arr& c) {
    double sn = 0.0, sc = 0.0;
    for (int j = 0; j < b.n; ++j)
        for (int i = 0; i < b.n; ++i) {
            sn += n[b.idx(i, j)] * r2(b, i, j);
            sc += c[b.idx(i, j)] * c[b.idx(i, j)] * r2(b, i, j);
        }
    return {b.h2() * sn, std::sqrt(b.h2() * sc)};
}

/// Homogeneous H^-1 norm of f against the 5-point Laplacian by a direct
/// O(N^4) discrete Fourier transform.
inline double hminus1(const Box& b, const Arr& f) {
    const int n = b.n;
    double s = 0.0;
    for (int ky = 0; ky < n; ++ky)
        for (int kx = 0; kx < n; ++kx) {
            if (kx == 0 && ky == 0) continue;
            std::complex<double> acc = 0.0;
            for (int j = 0; j < n; ++j)
                for (int i = 0; i < n; ++i) {
                    const double ang = -2.0 * std::numbers::pi * (double(kx) * i + double(ky) * j) / n;
                    acc += f[b.idx(i, j)] * std::complex<double>(std::cos(ang), std::sin(ang));
                }
            const double sx = std::sin(std::numbers::pi * kx / n), sy = std::sin(std::numbers::pi * ky / n);
            const double lambda = 4.0 / b.h2() * (sx * sx + sy * sy);
            s += std::norm(acc) / lambda;
        }
    return std::sqrt(b.h2() * s / (double(n) * n));
}

inline Arr random_arr(std::mt19937_64& rng, std::size_t size, double lo, double hi) {
    std::uniform_real_distribution<double> d(lo, hi);
    Arr a(size);
    for (double& v : a) v = d(rng);
    return a;
}

inline double rel_diff(double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

} // namespace naive
