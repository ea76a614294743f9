#include "watts/formulas.hpp"

#include <stdexcept>
#include <string>

#include "watts/errors.hpp"

namespace wlab {

CrossRatio::CrossRatio(double s) : s_(s) {
    if (!(s >= 0.0 && s <= 1.0)) throw std::domain_error("cross-ratio outside [0, 1]: " + std::to_string(s));
}

double cardy_prefactor() {
    static const double k = gamma(2.0 / 3.0) / (gamma(4.0 / 3.0) * gamma(1.0 / 3.0));
    return k;
}

double f_prefactor() {
    static const double k = gamma(4.0 / 3.0) / (gamma(2.0 / 3.0) * gamma(5.0 / 3.0));
    return k;
}

double watts_prefactor() {
    static const double k = 1.0 / (gamma(1.0 / 3.0) * gamma(2.0 / 3.0));
    return k;
}

CrossRatio cross_ratio(const BoundaryQuad& q) {
    if (!std::isfinite(q.x1) || !std::isfinite(q.x2) || !std::isfinite(q.x3) || std::isnan(q.x4) ||
        q.x4 == -kInfinity)
        throw std::domain_error("cross_ratio: x1..x3 must be finite and x4 finite or +infinity");
    if (!(q.x1 <= q.x2 && q.x2 <= q.x3 && q.x3 <= q.x4))
        throw OrderingError("cross_ratio: points must be ordered x1 <= x2 <= x3 <= x4");
    if (q.x1 == q.x3 || q.x2 == q.x4) throw DegenerateError("cross_ratio: coincident points");
    if (q.x4 == kInfinity) return CrossRatio((q.x2 - q.x1) / (q.x3 - q.x1));
    double s = (q.x2 - q.x1) * (q.x4 - q.x3) / ((q.x3 - q.x1) * (q.x4 - q.x2));
    return CrossRatio(std::min(1.0, std::max(0.0, s)));
}

double cardy(CrossRatio s) {
    double v = s.value();
    if (v == 0.0) return 0.0;
    return cardy_of(v);
}

double watts(CrossRatio s) {
    double v = s.value();
    if (v == 0.0) return 0.0;
    return cardy(s) - v * hyp3f2(1.0, 1.0, 4.0 / 3.0, 2.0, 5.0 / 3.0, v) * watts_prefactor();
}

double tripod(CrossRatio s) { return 0.5 * (watts(s) + cardy(s)); }

double tripod_direct(CrossRatio s) {
    double v = s.value();
    if (v == 0.0) return 0.0;
    return cardy_prefactor() * std::cbrt(v) * hyp2f1(1.0 / 3.0, 2.0 / 3.0, 4.0 / 3.0, v) -
           0.5 * watts_prefactor() * v * hyp3f2(1.0, 1.0, 4.0 / 3.0, 2.0, 5.0 / 3.0, v);
}

double conditional_f(CrossRatio s) {
    double v = s.value();
    if (v == 0.0) return 1.0;
    if (v == 1.0) return 0.0;
    return conditional_f_of(v);
}

void validate_density_point(double v3, double W, double v1, double v2) {
    if (!std::isfinite(v3) || !std::isfinite(W) || !std::isfinite(v1) || !std::isfinite(v2))
        throw std::domain_error("density point must be finite");
    if (!(v3 < W && W < v1 && v1 < v2)) throw OrderingError("density point must satisfy v3 < W < v1 < v2");
}

double density_h(const TripodDensityPoint& p, double W) {
    validate_density_point(p.v3, W, p.v1, p.v2);
    using D = MultiDual<3>;
    D v3 = D::variable(p.v3, 0b001);
    D v1 = D::variable(p.v1, 0b010);
    D v2 = D::variable(p.v2, 0b100);
    D s = cross_ratio_of(v3, D(W), v1, v2);
    auto jet = cardy_jet<3>(s.value());
    return -compose(s, jet).full();
}

double density_pa(const TripodDensityPoint& p) {
    double s = cross_ratio_of(p.v3, 0.0, p.v1, p.v2);
    return conditional_f(CrossRatio(s)) * density_h(p, 0.0);
}

}  // namespace wlab
