#pragma once

#include <array>
#include <cmath>

namespace exmse::detail {

// Forward-mode derivative bundle over a fixed stencil: value plus partials
// with respect to up to N seeded unknowns. Gives the exact Jacobian of the
// discrete residual without hand-written derivative code.
template <int N>
struct Dual {
    double v = 0.0;
    std::array<double, N> d{};

    Dual() = default;
    Dual(double value) : v(value) {}

    static Dual seeded(double value, int slot) {
        Dual x(value);
        x.d[static_cast<std::size_t>(slot)] = 1.0;
        return x;
    }

    Dual operator-() const {
        Dual r(-v);
        for (int k = 0; k < N; ++k) r.d[k] = -d[k];
        return r;
    }
    Dual& operator+=(const Dual& o) {
        v += o.v;
        for (int k = 0; k < N; ++k) d[k] += o.d[k];
        return *this;
    }
    Dual& operator-=(const Dual& o) {
        v -= o.v;
        for (int k = 0; k < N; ++k) d[k] -= o.d[k];
        return *this;
    }
};

template <int N>
Dual<N> operator+(Dual<N> a, const Dual<N>& b) { return a += b; }
template <int N>
Dual<N> operator-(Dual<N> a, const Dual<N>& b) { return a -= b; }

template <int N>
Dual<N> operator+(Dual<N> a, double c) { a.v += c; return a; }
template <int N>
Dual<N> operator+(double c, Dual<N> a) { a.v += c; return a; }
template <int N>
Dual<N> operator-(Dual<N> a, double c) { a.v -= c; return a; }
template <int N>
Dual<N> operator-(double c, const Dual<N>& a) { return -a + c; }

template <int N>
Dual<N> operator*(const Dual<N>& a, const Dual<N>& b) {
    Dual<N> r(a.v * b.v);
    for (int k = 0; k < N; ++k) r.d[k] = a.d[k] * b.v + a.v * b.d[k];
    return r;
}

template <int N>
Dual<N> operator*(double c, const Dual<N>& a) {
    Dual<N> r(c * a.v);
    for (int k = 0; k < N; ++k) r.d[k] = c * a.d[k];
    return r;
}
template <int N>
Dual<N> operator*(const Dual<N>& a, double c) { return c * a; }

template <int N>
Dual<N> operator/(const Dual<N>& a, const Dual<N>& b) {
    const double inv = 1.0 / b.v;
    Dual<N> r(a.v * inv);
    for (int k = 0; k < N; ++k) r.d[k] = (a.d[k] - r.v * b.d[k]) * inv;
    return r;
}
template <int N>
Dual<N> operator/(const Dual<N>& a, double c) { return a * (1.0 / c); }

template <int N>
Dual<N> sqrt(const Dual<N>& a) {
    Dual<N> r(std::sqrt(a.v));
    const double half_inv = 0.5 / r.v;
    for (int k = 0; k < N; ++k) r.d[k] = half_inv * a.d[k];
    return r;
}

} // namespace exmse::detail
