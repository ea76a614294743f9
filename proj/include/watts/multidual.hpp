#pragma once

#include <array>
#include <cmath>
#include <cstddef>

namespace wlab {

// Truncated multivariate Taylor number in N nilpotent directions
// (e_i^2 = 0). Coefficient m holds the mixed partial along the directions
// in bitmask m, so repeated derivatives are taken by seeding several
// directions on the same variable.
template <int N>
class MultiDual {
public:
    static constexpr std::size_t kSize = std::size_t{1} << N;

    MultiDual() = default;
    MultiDual(double v) { c_[0] = v; }  // NOLINT: implicit lift of constants

    static MultiDual variable(double v, unsigned directions) {
        MultiDual r(v);
        for (int i = 0; i < N; ++i)
            if (directions & (1u << i)) r.c_[1u << i] = 1.0;
        return r;
    }

    double value() const { return c_[0]; }
    double operator[](std::size_t mask) const { return c_[mask]; }
    double& operator[](std::size_t mask) { return c_[mask]; }
    double full() const { return c_[kSize - 1]; }

    MultiDual& operator+=(const MultiDual& o) {
        for (std::size_t m = 0; m < kSize; ++m) c_[m] += o.c_[m];
        return *this;
    }
    MultiDual& operator-=(const MultiDual& o) {
        for (std::size_t m = 0; m < kSize; ++m) c_[m] -= o.c_[m];
        return *this;
    }
    MultiDual& operator*=(double k) {
        for (auto& v : c_) v *= k;
        return *this;
    }
    MultiDual& operator*=(const MultiDual& o) { return *this = *this * o; }
    MultiDual& operator/=(const MultiDual& o) { return *this = *this / o; }

    friend MultiDual operator+(MultiDual a, const MultiDual& b) { return a += b; }
    friend MultiDual operator-(MultiDual a, const MultiDual& b) { return a -= b; }
    friend MultiDual operator-(MultiDual a) { return a *= -1.0; }

    friend MultiDual operator*(const MultiDual& a, const MultiDual& b) {
        MultiDual r;
        for (std::size_t m = 0; m < kSize; ++m) {
            double acc = 0.0;
            // Enumerate submasks s of m, pairing a[s] with b[m \ s].
            for (std::size_t s = m;; s = (s - 1) & m) {
                acc += a.c_[s] * b.c_[m ^ s];
                if (s == 0) break;
            }
            r.c_[m] = acc;
        }
        return r;
    }

    friend MultiDual operator/(const MultiDual& a, const MultiDual& b) {
        double v = b.value();
        std::array<double, N + 1> d{};
        double p = 1.0 / v;
        for (int k = 0; k <= N; ++k) {
            d[k] = p;
            p *= -(k + 1) / v;
        }
        return a * compose(b, d);
    }

    // f(x) given f and its first N derivatives at x.value().
    friend MultiDual compose(const MultiDual& x, const std::array<double, N + 1>& derivs) {
        MultiDual delta = x;
        delta.c_[0] = 0.0;
        MultiDual r(derivs[0]);
        MultiDual power(1.0);
        double factorial = 1.0;
        for (int k = 1; k <= N; ++k) {
            power = power * delta;
            factorial *= k;
            MultiDual term = power;
            term *= derivs[k] / factorial;
            r += term;
        }
        return r;
    }

private:
    std::array<double, kSize> c_{};
};

// Scalar overloads so formula templates work on both double and MultiDual.
inline double value_of(double x) { return x; }
template <int N>
double value_of(const MultiDual<N>& x) {
    return x.value();
}

template <int N>
MultiDual<N> pow(const MultiDual<N>& x, double p) {
    std::array<double, N + 1> d{};
    double coef = 1.0;
    for (int k = 0; k <= N; ++k) {
        d[k] = coef * std::pow(x.value(), p - k);
        coef *= p - k;
    }
    return compose(x, d);
}

}  // namespace wlab
