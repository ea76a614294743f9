#pragma once

#include <vector>

namespace wlab {

// Gamma function. Throws PoleError at non-positive integers.
double gamma(double x);

// 1/Gamma(x), zero at the poles.
double rgamma(double x);

// Pochhammer symbol (a)_n.
double pochhammer(double a, int n);

// Gauss hypergeometric 2F1(a,b;c;z) for z in (-1, 1].
double hyp2f1(double a, double b, double c, double z);

// order-th z-derivative of 2F1, order in [0, 8].
double hyp2f1_derivative(double a, double b, double c, double z, int order);

// 3F2(a1,a2,a3;b1,b2;z) for z in (-1, 1]. The z = 1 endpoint needs
// b1 + b2 - a1 - a2 - a3 > 0 and is summed with a Levin u-transform.
double hyp3f2(double a1, double a2, double a3, double b1, double b2, double z);

struct HypergeomTerm {
    std::vector<double> upper_params;
    std::vector<double> lower_params;
    double argument = 0.0;
};

// Result of a direct partial-sum evaluation: value plus a bound on the
// neglected tail and the number of terms used.
struct SeriesSum {
    double value = 0.0;
    double tail_bound = 0.0;
    long terms = 0;
};

// Direct pFq summation for |z| < 1 with a tail bound derived from the
// term ratio. Stops when tail_bound <= rel_tol * |value|.
SeriesSum pfq_series(const HypergeomTerm& term, double rel_tol = 1e-16,
                     long max_terms = 200'000'000);

}  // namespace wlab
