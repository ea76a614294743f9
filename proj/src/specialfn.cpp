#include "watts/specialfn.hpp"

#include <boost/math/quadrature/tanh_sinh.hpp>

#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

#include "watts/errors.hpp"

namespace wlab {
namespace {

constexpr double kPi = std::numbers::pi;

bool is_nonpositive_integer(double x) {
    return x <= 0.0 && std::abs(x - std::round(x)) < 1e-13 * std::max(1.0, std::abs(x));
}

// Neumaier compensated summation.
struct CompensatedSum {
    double sum = 0.0;
    double comp = 0.0;

    void add(double v) {
        double t = sum + v;
        if (std::abs(sum) >= std::abs(v))
            comp += (sum - t) + v;
        else
            comp += (v - t) + sum;
        sum = t;
    }
    double value() const { return sum + comp; }
};

double sinpi(double x) {
    double r = std::fmod(x, 2.0);
    if (r < 0) r += 2.0;
    if (r == 0.0 || r == 1.0) return 0.0;
    if (r > 1.0) return -sinpi(r - 1.0);
    if (r > 0.5) r = 1.0 - r;
    return std::sin(kPi * r);
}

// Lanczos approximation, g = 7, n = 9.
double gamma_lanczos(double x) {
    static constexpr std::array<double, 9> p = {
        0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
        771.32342877765313,      -176.61502916214059,   12.507343278686905,
        -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7};
    x -= 1.0;
    double a = p[0];
    double t = x + 7.5;
    for (int i = 1; i < 9; ++i) a += p[i] / (x + i);
    double lg = 0.5 * std::log(2.0 * kPi) + (x + 0.5) * std::log(t) - t + std::log(a);
    if (x < 140.0) return std::sqrt(2.0 * kPi) * std::pow(t, x + 0.5) * std::exp(-t) * a;
    return std::exp(lg);
}

double hyp2f1_series(double a, double b, double c, double z) {
    return pfq_series({{a, b}, {c}, z}).value;
}

}  // namespace

double gamma(double x) {
    if (is_nonpositive_integer(x)) throw PoleError("gamma: pole at " + std::to_string(x));
    if (x < 0.5) return kPi / (sinpi(x) * gamma_lanczos(1.0 - x));
    return gamma_lanczos(x);
}

double rgamma(double x) {
    if (is_nonpositive_integer(x)) return 0.0;
    return 1.0 / gamma(x);
}

double pochhammer(double a, int n) {
    double r = 1.0;
    for (int k = 0; k < n; ++k) r *= a + k;
    return r;
}

SeriesSum pfq_series(const HypergeomTerm& term, double rel_tol, long max_terms) {
    const auto& up = term.upper_params;
    const auto& lo = term.lower_params;
    const double z = term.argument;
    for (double b : lo)
        if (is_nonpositive_integer(b)) throw PoleError("pFq: lower parameter is a pole");
    if (!(std::abs(z) < 1.0)) throw std::domain_error("pFq series needs |z| < 1");

    double largest = 1.0;
    for (double a : up) largest = std::max(largest, std::abs(a));
    for (double b : lo) largest = std::max(largest, std::abs(b));

    CompensatedSum acc;
    double t = 1.0;
    SeriesSum out;
    for (long n = 0; n < max_terms; ++n) {
        acc.add(t);
        double num = z, den = static_cast<double>(n + 1);
        for (double a : up) num *= a + n;
        for (double b : lo) den *= b + n;
        double next = t * num / den;
        out.terms = n + 1;
        if (next == 0.0) {
            out.value = acc.value();
            out.tail_bound = 0.0;
            return out;
        }
        if (n + 1 > largest + 1.0) {
            // Beyond every parameter the ratio phi(m) is monotone in m.
            double phi = 1.0;
            for (double a : up) phi *= a + n + 1;
            for (double b : lo) phi /= b + n + 1;
            phi /= static_cast<double>(n + 2);
            double rho = std::abs(z) * std::max(std::abs(phi), 1.0);
            double tail = std::numeric_limits<double>::infinity();
            if (rho < 1.0) tail = std::abs(next) / (1.0 - rho);
            if (z < 0.0 && std::abs(z * phi) < 1.0) tail = std::min(tail, std::abs(next));
            double v = acc.value();
            if (tail <= rel_tol * std::abs(v)) {
                out.value = v;
                out.tail_bound = tail;
                return out;
            }
        }
        t = next;
    }
    throw ConvergenceError("pFq series did not converge within the term budget");
}

double hyp2f1(double a, double b, double c, double z) {
    if (is_nonpositive_integer(c)) throw PoleError("hyp2f1: c is a non-positive integer");
    if (!(z > -1.0 && z <= 1.0)) throw std::domain_error("hyp2f1: z outside (-1, 1]");
    if (z == 0.0) return 1.0;
    if (is_nonpositive_integer(a) || is_nonpositive_integer(b)) {
        if (z == 1.0) {
            // Terminating: Chu-Vandermonde.
            return gamma(c) * gamma(c - a - b) * rgamma(c - a) * rgamma(c - b);
        }
        return pfq_series({{a, b}, {c}, z}).value;
    }
    const double d = c - a - b;
    if (z == 1.0) {
        if (!(d > 0.0)) throw ConvergenceError("hyp2f1: divergent at z = 1 (c - a - b <= 0)");
        return gamma(c) * gamma(d) * rgamma(c - a) * rgamma(c - b);
    }
    if (a == c) return std::pow(1.0 - z, -b);
    if (b == c) return std::pow(1.0 - z, -a);
    if (z < 0.0) {
        // Pfaff: argument z/(z-1) lies in (0, 1/2).
        return std::pow(1.0 - z, -a) * hyp2f1(a, c - b, c, z / (z - 1.0));
    }
    if (z <= 0.5) return hyp2f1_series(a, b, c, z);

    if (std::abs(d - std::round(d)) < 1e-3) {
        // The 1 - z connection coefficients are singular here.
        return hyp2f1_series(a, b, c, z);
    }
    const double w = 1.0 - z;
    double t1 = gamma(c) * gamma(d) * rgamma(c - a) * rgamma(c - b);
    if (t1 != 0.0) t1 *= hyp2f1(a, b, 1.0 - d, w);
    double t2 = gamma(c) * gamma(-d) * rgamma(a) * rgamma(b);
    if (t2 != 0.0) t2 *= std::pow(w, d) * hyp2f1(c - a, c - b, 1.0 + d, w);
    return t1 + t2;
}

double hyp2f1_derivative(double a, double b, double c, double z, int order) {
    if (order < 0 || order > 8) throw std::invalid_argument("hyp2f1_derivative: order outside [0, 8]");
    if (order == 0) return hyp2f1(a, b, c, z);
    double coef = pochhammer(a, order) * pochhammer(b, order) / pochhammer(c, order);
    if (coef == 0.0) return 0.0;
    return coef * hyp2f1(a + order, b + order, c + order, z);
}

namespace {

// Levin u-transform of the partial sums of a logarithmically convergent
// series. Picks the order whose estimate moves least from the previous one.
double levin_u(const std::vector<long double>& terms) {
    const int n_terms = static_cast<int>(terms.size());
    std::vector<long double> partial(n_terms);
    long double s = 0;
    for (int j = 0; j < n_terms; ++j) partial[j] = (s += terms[j]);

    long double best = partial.back();
    long double best_delta = std::numeric_limits<long double>::infinity();
    long double prev = 0;
    bool have_prev = false;
    const long double beta = 1.0L;
    for (int k = 2; k < std::min(n_terms - 1, 17); ++k) {
        long double num = 0, den = 0, binom = 1;
        for (int j = 0; j <= k; ++j) {
            long double omega = (beta + j) * terms[j];
            long double w = std::pow((beta + j) / (beta + k), static_cast<long double>(k - 1));
            long double sign = (j % 2 == 0) ? 1.0L : -1.0L;
            num += sign * binom * w * partial[j] / omega;
            den += sign * binom * w / omega;
            binom = binom * (k - j) / (j + 1);
        }
        long double est = num / den;
        if (have_prev) {
            long double delta = std::abs(est - prev);
            if (delta < best_delta) {
                best_delta = delta;
                best = est;
            }
        }
        prev = est;
        have_prev = true;
    }
    if (!(best_delta <= 1e-9L * std::abs(best)))
        throw ConvergenceError("hyp3f2: Levin transform near z = 1 did not settle");
    return static_cast<double>(best);
}

}  // namespace

// Above this the direct series needs too many terms and the Levin
// u-transform takes over.
constexpr double kLevinFrom = 0.999;

double hyp3f2(double a1, double a2, double a3, double b1, double b2, double z) {
    if (is_nonpositive_integer(b1) || is_nonpositive_integer(b2))
        throw PoleError("hyp3f2: lower parameter is a non-positive integer");
    if (!(z > -1.0 && z <= 1.0)) throw std::domain_error("hyp3f2: z outside (-1, 1]");
    if (z == 0.0) return 1.0;
    const bool terminating =
        is_nonpositive_integer(a1) || is_nonpositive_integer(a2) || is_nonpositive_integer(a3);
    if (z < kLevinFrom || (z < 1.0 && terminating)) {
        const double tol = z > 0.99 ? 1e-13 : 1e-16;
        return pfq_series({{a1, a2, a3}, {b1, b2}, z}, tol).value;
    }
    std::vector<long double> terms;
    long double t = 1;
    if (z < 1.0) {
        // Euler integral over a 2F1 with the (1-t)^(e-1) weight removed by
        // t = 1 - u^(1/e), e = b - a > 0 for an upper a and a lower b.
        // Candidates whose inner 2F1 has an integer c - a - b are skipped,
        // since that 2F1 would fall back to its raw series near 1.
        const double up[] = {a1, a2, a3};
        const double lo[] = {b1, b2};
        for (int i = 0; i < 3; ++i) {
            for (int j = 0; j < 2; ++j) {
                const double a = up[i], bl = lo[j], e = bl - a;
                const double p0 = up[(i + 1) % 3], p1 = up[(i + 2) % 3], bo = lo[1 - j];
                const double d = bo - p0 - p1;
                if (!(a > 0.0 && e > 0.0) || std::abs(d - std::round(d)) < 1e-3) continue;
                boost::math::quadrature::tanh_sinh<double> integrator;
                const double integral = integrator.integrate(
                    [&](double u) {
                        const double t = 1.0 - std::pow(u, 1.0 / e);
                        if (t <= 0.0) return 0.0;
                        return std::pow(t, a - 1.0) * hyp2f1(p0, p1, bo, z * t);
                    },
                    0.0, 1.0, 1e-14);
                return integral / e * std::exp(std::lgamma(bl) - std::lgamma(a) - std::lgamma(e));
            }
        }
        return pfq_series({{a1, a2, a3}, {b1, b2}, z}, 1e-13).value;
    }
    if (terminating) {
        long double s = 0;
        for (int n = 0; t != 0; ++n) {
            s += t;
            t *= (a1 + n) * (a2 + n) * (a3 + n) / ((b1 + n) * (b2 + n) * (n + 1.0L));
        }
        return static_cast<double>(s);
    }
    if (!(b1 + b2 - a1 - a2 - a3 > 0.0))
        throw ConvergenceError("hyp3f2: divergent at z = 1 (parameter excess <= 0)");
    const long double A1 = a1, A2 = a2, A3 = a3, B1 = b1, B2 = b2;
    for (int n = 0; n < 24; ++n) {
        terms.push_back(t);
        t *= (A1 + n) * (A2 + n) * (A3 + n) / ((B1 + n) * (B2 + n) * (n + 1.0L));
    }
    return levin_u(terms);
}

}  // namespace wlab
