#include "watts/identity_lab.hpp"

#include <algorithm>
#include <cmath>
#include <initializer_list>
#include <string>

#include "watts/errors.hpp"

namespace wlab {

void validate(const EvalPoint& p, double min_gap) {
    validate_density_point(p.v3, p.W, p.v1, p.v2);
    if (local_min_gap(p) < min_gap)
        throw DegenerateError("eval point gaps below minimum " + std::to_string(min_gap));
}

double local_min_gap(const EvalPoint& p) {
    return std::min({p.W - p.v3, p.v1 - p.W, p.v2 - p.v1});
}

double cross_ratio_of(const EvalPoint& p) { return cross_ratio_of(p.v3, p.W, p.v1, p.v2); }

ResidualReport make_report(double residual, double scale) {
    ResidualReport r;
    r.residual = residual;
    r.scale = scale;
    r.relative_residual = std::abs(residual) / std::max(scale, 1e-300);
    return r;
}

namespace {

enum Axis { kV3, kW, kV1, kV2 };

EvalPoint shifted(EvalPoint p, Axis axis, double h) {
    switch (axis) {
        case kV3: p.v3 += h; break;
        case kW: p.W += h; break;
        case kV1: p.v1 += h; break;
        case kV2: p.v2 += h; break;
    }
    return p;
}

double coordinate(const EvalPoint& p, Axis axis) {
    switch (axis) {
        case kV3: return p.v3;
        case kW: return p.W;
        case kV1: return p.v1;
        default: return p.v2;
    }
}

double first_difference(const ScalarField& f, const EvalPoint& p, Axis axis, double h) {
    return (f(shifted(p, axis, h)) - f(shifted(p, axis, -h))) / (2.0 * h);
}

double second_difference(const ScalarField& f, const EvalPoint& p, Axis axis, double h) {
    return (f(shifted(p, axis, h)) - 2.0 * f(p) + f(shifted(p, axis, -h))) / (h * h);
}

template <class Diff>
double with_richardson(Diff diff, double h, bool richardson) {
    double coarse = diff(h);
    if (!richardson) return coarse;
    double fine = diff(0.5 * h);
    return (4.0 * fine - coarse) / 3.0;
}

void check_step(const EvalPoint& p, double gap, double h) {
    if (!(h > 0.0) || gap < 10.0 * h)
        throw StepError("finite-difference step too large for the local gap");
    for (Axis a : {kV3, kW, kV1, kV2}) {
        double x = coordinate(p, a);
        if (x + 0.5 * h == x) throw StepError("finite-difference step underflows");
    }
}

}  // namespace

Partials fd_partials(const ScalarField& f, const EvalPoint& p, const FdConfig& cfg) {
    const double gap = local_min_gap(p);
    const double h1 = cfg.first_step_rel * gap;
    const double h2 = cfg.second_step_rel * gap;
    check_step(p, gap, h1);
    check_step(p, gap, h2);
    auto first = [&](Axis a) {
        return with_richardson([&](double h) { return first_difference(f, p, a, h); }, h1, cfg.richardson);
    };
    Partials d;
    d.dW = first(kW);
    d.dv1 = first(kV1);
    d.dv2 = first(kV2);
    d.dv3 = first(kV3);
    d.dWW = with_richardson([&](double h) { return second_difference(f, p, kW, h); }, h2, cfg.richardson);
    return d;
}

ResidualReport generator_report(const Partials& d, const EvalPoint& p, double kappa, double extra_drift) {
    if (!(kappa > 0.0)) throw std::invalid_argument("kappa must be positive");
    const double terms[] = {0.5 * kappa * d.dWW, 2.0 * d.dv1 / (p.v1 - p.W), 2.0 * d.dv2 / (p.v2 - p.W),
                            2.0 * d.dv3 / (p.v3 - p.W), extra_drift * d.dW};
    double sum = 0.0, scale = 0.0;
    for (double t : terms) {
        sum += t;
        scale = std::max(scale, std::abs(t));
    }
    ResidualReport r = make_report(sum, scale);
    r.point = p;
    r.s = cross_ratio_of(p);
    return r;
}

double generator_L(const Partials& d, const EvalPoint& p, double kappa) {
    return generator_report(d, p, kappa).residual;
}

double generator_L(const ScalarField& f, const EvalPoint& p, double kappa, const FdConfig& cfg) {
    return generator_L(fd_partials(f, p, cfg), p, kappa);
}

namespace {

Partials cardy_partials(const EvalPoint& p, Derivatives mode, const FdConfig& cfg) {
    if (mode == Derivatives::Analytic)
        return analytic_partials([](auto... x) { return cardy_field(x...); }, p);
    return fd_partials([](const EvalPoint& q) { return cardy(CrossRatio(cross_ratio_of(q))); }, p, cfg);
}

Partials f_partials(const EvalPoint& p, Derivatives mode, const FdConfig& cfg) {
    if (mode == Derivatives::Analytic)
        return analytic_partials([](auto... x) { return conditional_f_field(x...); }, p);
    return fd_partials([](const EvalPoint& q) { return conditional_f(CrossRatio(cross_ratio_of(q))); }, p,
                       cfg);
}

}  // namespace

ResidualReport martingale_residual_cardy(const EvalPoint& p, double kappa, Derivatives mode,
                                         const FdConfig& cfg) {
    validate(p);
    return generator_report(cardy_partials(p, mode, cfg), p, kappa);
}

double drift(const EvalPoint& p, double kappa) {
    validate_density_point(p.v3, p.W, p.v1, p.v2);
    using D = MultiDual<4>;
    D v3 = D::variable(p.v3, 0b0001);
    D v1 = D::variable(p.v1, 0b0010);
    D v2 = D::variable(p.v2, 0b0100);
    D W = D::variable(p.W, 0b1000);
    D s = cross_ratio_of(v3, W, v1, v2);
    D c = compose(s, cardy_jet<4>(s.value()));
    const double h = c[0b0111];
    const double h_w = c[0b1111];
    if (!(std::abs(h) > 1e-300) || !std::isfinite(h)) throw DegenerateError("drift: density vanishes");
    return kappa * h_w / h;
}

double conditioned_generator_L1(const ScalarField& f, const EvalPoint& p, double kappa, const FdConfig& cfg) {
    Partials d = fd_partials(f, p, cfg);
    return generator_report(d, p, kappa, drift(p, kappa)).residual;
}

ResidualReport l1_residual(const Partials& d, const EvalPoint& p, double kappa) {
    return generator_report(d, p, kappa, drift(p, kappa));
}

ResidualReport l1_residual_f(const EvalPoint& p, double kappa, Derivatives mode, const FdConfig& cfg) {
    validate(p);
    return l1_residual(f_partials(p, mode, cfg), p, kappa);
}

ResidualReport ode_residual(double s, double f1, double f2) {
    const double t1 = 2.0 * (1.0 - 6.0 * s * s + 4.0 * s * s * s) * f1;
    const double t2 = 3.0 * s * (-1.0 + 2.0 * s - 2.0 * s * s + s * s * s) * f2;
    // Scale by the largest monomial so the root of 1-6s^2+4s^3 at s = 1/2
    // (where f'' also vanishes) does not make the report degenerate.
    const double monomials[] = {2.0 * f1, 12.0 * s * s * f1, 8.0 * s * s * s * f1, 3.0 * s * f2,
                                6.0 * s * s * f2, 6.0 * s * s * s * f2, 3.0 * s * s * s * s * f2};
    double scale = 0.0;
    for (double m : monomials) scale = std::max(scale, std::abs(m));
    ResidualReport r = make_report(t1 + t2, scale);
    r.s = s;
    return r;
}

ResidualReport ode_residual_f(double s) {
    if (!(s >= 0.01 && s <= 0.99)) throw std::domain_error("ode_residual_f: s outside [0.01, 0.99]");
    auto j = conditional_f_of(MultiDual<2>::variable(s, 0b11));
    return ode_residual(s, j[0b01], j[0b11]);
}

ResidualReport contiguity_residual(double s) {
    const double t1 = -hyp2f1(2.0 / 3.0, 4.0 / 3.0, 5.0 / 3.0, s) / 3.0;
    const double t2 = 2.0 / 3.0 * (1.0 - s) * hyp2f1(5.0 / 3.0, 4.0 / 3.0, 5.0 / 3.0, s);
    const double t3 = -hyp2f1(2.0 / 3.0, 1.0 / 3.0, 5.0 / 3.0, s) / 3.0;
    ResidualReport r = make_report(t1 + t2 + t3, std::max({std::abs(t1), std::abs(t2), std::abs(t3)}));
    r.s = s;
    return r;
}

ResidualReport triple_derivative_match(const TripodDensityPoint& p) {
    validate_density_point(p.v3, 0.0, p.v1, p.v2);
    using D = MultiDual<3>;
    D s = cross_ratio_of(D::variable(p.v3, 0b001), D(0.0), D::variable(p.v1, 0b010), D::variable(p.v2, 0b100));
    const double lhs = -compose(s, tripod_jet<3>(s.value())).full();
    const double rhs = density_pa(p);
    ResidualReport r = make_report(lhs - rhs, std::max(std::abs(lhs), std::abs(rhs)));
    r.point = {p.v3, 0.0, p.v1, p.v2};
    r.s = s.value();
    return r;
}

}  // namespace wlab
