#pragma once

#include <array>
#include <cmath>
#include <limits>

#include "watts/multidual.hpp"
#include "watts/specialfn.hpp"

namespace wlab {

// Sentinel for the point at infinity on the real line.
inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

struct BoundaryQuad {
    double x1 = 0.0;
    double x2 = 0.0;
    double x3 = 0.0;
    double x4 = kInfinity;
};

class CrossRatio {
public:
    explicit CrossRatio(double s);
    double value() const { return s_; }

private:
    double s_;
};

struct TripodDensityPoint {
    double v3 = 0.0;
    double v1 = 0.0;
    double v2 = 0.0;
};

CrossRatio cross_ratio(const BoundaryQuad& q);

double cardy(CrossRatio s);
double watts(CrossRatio s);
double tripod(CrossRatio s);
// tripod from its own 2F1/3F2 combination, kept as a redundancy check.
double tripod_direct(CrossRatio s);
double conditional_f(CrossRatio s);

// Density of the tripod set (a, b, c) = (v3, v1, v2) for an interface
// started at W: minus the mixed third derivative of cardy(s(v3,W,v1,v2)).
double density_h(const TripodDensityPoint& p, double W = 0.0);
// a-hit-first part of the density: conditional_f * density_h at W = 0.
double density_pa(const TripodDensityPoint& p);

// Constants of the closed forms.
double cardy_prefactor();   // Gamma(2/3) / (Gamma(4/3) Gamma(1/3))
double f_prefactor();       // Gamma(4/3) / (Gamma(2/3) Gamma(5/3))
double watts_prefactor();   // 1 / (Gamma(1/3) Gamma(2/3))

// Generic forms shared by double and MultiDual evaluation.

inline double hyp2f1_of(double a, double b, double c, double z) { return hyp2f1(a, b, c, z); }

template <int N>
MultiDual<N> hyp2f1_of(double a, double b, double c, const MultiDual<N>& z) {
    std::array<double, N + 1> d{};
    for (int k = 0; k <= N; ++k) d[k] = hyp2f1_derivative(a, b, c, z.value(), k);
    return compose(z, d);
}

// s(x1,x2,x3,x4) for four finite coordinates.
template <class T>
T cross_ratio_of(const T& x1, const T& x2, const T& x3, const T& x4) {
    return (x2 - x1) * (x4 - x3) / ((x3 - x1) * (x4 - x2));
}

template <class T>
T cardy_of(const T& s) {
    using std::pow;
    return cardy_prefactor() * pow(s, 1.0 / 3.0) * hyp2f1_of(1.0 / 3.0, 2.0 / 3.0, 4.0 / 3.0, s);
}

template <class T>
T conditional_f_of(const T& s) {
    using std::pow;
    T one_minus = 1.0 - s;
    // (-1+3s-2s^2) / ((1-s)^(1/3) (1-s+s^2)) with the (1-s) factor cancelled.
    T g = -(1.0 - 2.0 * s) * pow(one_minus, 2.0 / 3.0) / (one_minus + s * s);
    return 1.0 - f_prefactor() * pow(s, 2.0 / 3.0) * (g + hyp2f1_of(2.0 / 3.0, 1.0 / 3.0, 5.0 / 3.0, s));
}

// Derivatives 0..K of cardy at s.
template <int K>
std::array<double, K + 1> cardy_jet(double s) {
    std::array<double, K + 1> out{};
    out[0] = cardy(CrossRatio(s));
    if constexpr (K > 0) {
        auto v = cardy_of(MultiDual<K>::variable(s, (1u << K) - 1));
        for (int k = 1; k <= K; ++k) out[k] = v[(std::size_t{1} << k) - 1];
    }
    return out;
}

// Derivatives 0..K of tripod at s. Uses d/ds[s 3F2(1,1,4/3;2,5/3;s)] =
// 2F1(1,4/3;5/3;s) so only 2F1 derivatives are needed.
template <int K>
std::array<double, K + 1> tripod_jet(double s) {
    auto c = cardy_jet<K>(s);
    std::array<double, K + 1> out{};
    out[0] = tripod(CrossRatio(s));
    const double lam = 0.5 * watts_prefactor();
    for (int k = 1; k <= K; ++k)
        out[k] = c[k] - lam * hyp2f1_derivative(1.0, 4.0 / 3.0, 5.0 / 3.0, s, k - 1);
    return out;
}

void validate_density_point(double v3, double W, double v1, double v2);

}  // namespace wlab
