#pragma once

#include <functional>

#include "watts/formulas.hpp"
#include "watts/multidual.hpp"

namespace wlab {

struct EvalPoint {
    double v3 = -1.0;
    double W = 0.0;
    double v1 = 1.0;
    double v2 = 2.0;

    bool operator==(const EvalPoint&) const = default;
};

// Throws OrderingError / DegenerateError unless v3 < W < v1 < v2 with all
// neighbouring gaps at least min_gap.
void validate(const EvalPoint& p, double min_gap = 1e-3);
double local_min_gap(const EvalPoint& p);
double cross_ratio_of(const EvalPoint& p);

struct ResidualReport {
    EvalPoint point;
    double s = 0.0;
    double residual = 0.0;
    double scale = 0.0;
    double relative_residual = 0.0;
};

ResidualReport make_report(double residual, double scale);

using ScalarField = std::function<double(const EvalPoint&)>;

struct Partials {
    double dW = 0.0;
    double dWW = 0.0;
    double dv1 = 0.0;
    double dv2 = 0.0;
    double dv3 = 0.0;
};

enum class Derivatives { Analytic, FiniteDifference };

struct FdConfig {
    double first_step_rel = 1e-4;   // times the local minimum gap
    double second_step_rel = 1e-3;
    bool richardson = true;
};

Partials fd_partials(const ScalarField& f, const EvalPoint& p, const FdConfig& cfg = {});

// Partials of a field written generically over MultiDual<5>.
// Directions: W twice (0, 1), v1 (2), v2 (3), v3 (4).
template <class F>
Partials analytic_partials(F&& f, const EvalPoint& p) {
    using D = MultiDual<5>;
    D r = f(D::variable(p.v3, 0b10000), D::variable(p.W, 0b00011), D::variable(p.v1, 0b00100),
            D::variable(p.v2, 0b01000));
    Partials d;
    d.dW = r[0b00001];
    d.dWW = r[0b00011];
    d.dv1 = r[0b00100];
    d.dv2 = r[0b01000];
    d.dv3 = r[0b10000];
    return d;
}

// (kappa/2) f_WW + sum_i 2 f_vi / (vi - W) + extra_drift * f_W, reported
// with the largest term as scale.
ResidualReport generator_report(const Partials& d, const EvalPoint& p, double kappa,
                                double extra_drift = 0.0);

double generator_L(const Partials& d, const EvalPoint& p, double kappa = 6.0);
double generator_L(const ScalarField& f, const EvalPoint& p, double kappa = 6.0,
                   const FdConfig& cfg = {});

ResidualReport martingale_residual_cardy(const EvalPoint& p, double kappa = 6.0,
                                         Derivatives mode = Derivatives::Analytic,
                                         const FdConfig& cfg = {});

// kappa * d_W log|h| with h the tripod density at (v3, v1, v2) seen from W.
double drift(const EvalPoint& p, double kappa = 6.0);

double conditioned_generator_L1(const ScalarField& f, const EvalPoint& p, double kappa = 6.0,
                                const FdConfig& cfg = {});
ResidualReport l1_residual(const Partials& d, const EvalPoint& p, double kappa = 6.0);
ResidualReport l1_residual_f(const EvalPoint& p, double kappa = 6.0,
                             Derivatives mode = Derivatives::Analytic, const FdConfig& cfg = {});

// 2(1-6s^2+4s^3) f' + 3s(-1+2s-2s^2+s^3) f''.
ResidualReport ode_residual(double s, double f1, double f2);
ResidualReport ode_residual_f(double s);

// -(1/3)F(2/3,4/3;5/3;s) + (2/3)(1-s)F(5/3,4/3;5/3;s) - (1/3)F(2/3,1/3;5/3;s).
ResidualReport contiguity_residual(double s);

// -d_v1 d_v2 d_v3 tripod(s(v3,0,v1,v2)) against density_pa.
ResidualReport triple_derivative_match(const TripodDensityPoint& p);

// Generic fields used by the residual suites.
template <class T>
T cardy_field(const T& v3, const T& W, const T& v1, const T& v2) {
    return cardy_of(cross_ratio_of(v3, W, v1, v2));
}

template <class T>
T conditional_f_field(const T& v3, const T& W, const T& v1, const T& v2) {
    return conditional_f_of(cross_ratio_of(v3, W, v1, v2));
}

}  // namespace wlab
