#include "watts/sle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>

#include "watts/errors.hpp"
#include "watts/rng.hpp"

namespace wlab {

SleConfig SleConfig::for_span(double span) {
    if (!(span > 0.0) || !std::isfinite(span)) throw ConfigError("span", "must be positive and finite");
    SleConfig c;
    c.dt_base = 1e-4 * span * span;
    c.collision_eps = 1e-4 * span;
    c.max_time = 1e8 * span * span;
    c.reference_length = 0.25 * span;
    return c;
}

void SleConfig::validate() const {
    auto positive = [](double v, const char* name) {
        if (!(v > 0.0) || !std::isfinite(v)) throw ConfigError(name, "must be positive and finite");
    };
    positive(dt_base, "dt_base");
    positive(dt_min_factor, "dt_min_factor");
    positive(dt_max_factor, "dt_max_factor");
    positive(collision_eps, "collision_eps");
    positive(max_time, "max_time");
    positive(kappa, "kappa");
    if (!(reference_length >= 0.0) || !std::isfinite(reference_length))
        throw ConfigError("reference_length", "must be non-negative and finite");
    if (!(dt_adapt_exponent >= 0.0)) throw ConfigError("dt_adapt_exponent", "must be non-negative");
    if (dt_min_factor > dt_max_factor) throw ConfigError("dt_min_factor", "exceeds dt_max_factor");
    if (monitor_count < 0) throw ConfigError("monitor_count", "must be non-negative");
    if (!(monitor_inner > 0.0 && monitor_inner < 1.0)) throw ConfigError("monitor_inner", "must lie in (0, 1)");
    if (max_steps == 0) throw ConfigError("max_steps", "must be positive");
}

double quad_span(const BoundaryQuad& q) { return (std::isinf(q.x4) ? q.x3 : q.x4) - q.x1; }

BoundaryQuad quad_for_cross_ratio(double s) {
    if (!(s > 0.0 && s < 1.0)) throw DegenerateError("cross-ratio must lie in (0, 1)");
    return {0.0, s, 1.0, kInfinity};
}

std::size_t LoewnerState::add_point(double x, bool is_marked) {
    if (!(x != W) || !std::isfinite(x)) throw DegenerateError("tracked point must differ from the seed");
    images.push_back(x);
    side.push_back(x > W ? 1 : -1);
    swallowed_at.push_back(-1.0);
    marked.push_back(is_marked);
    return images.size() - 1;
}

double LoewnerState::marked_gap() const {
    double g = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < images.size(); ++k)
        if (marked[k] && !swallowed(k)) g = std::min(g, std::abs(images[k] - W));
    return g;
}

LoewnerState make_state(double seed, const std::vector<double>& marked_points,
                        const std::vector<double>& monitors) {
    if (marked_points.empty()) throw DegenerateError("need at least one marked point");
    LoewnerState s;
    s.W = seed;
    for (double x : marked_points) s.add_point(x, true);
    for (double x : monitors) s.add_point(x, false);
    s.initial_gap = s.marked_gap();
    return s;
}

double step_size(const LoewnerState& s, const SleConfig& c) {
    double factor = 1.0;
    if (c.dt_adapt_exponent > 0.0) {
        const double g = s.marked_gap();
        const double ref = std::max(s.initial_gap, c.reference_length);
        factor = std::isfinite(g) ? std::pow(g / ref, c.dt_adapt_exponent) : c.dt_max_factor;
    }
    return c.dt_base * std::clamp(factor, c.dt_min_factor, c.dt_max_factor);
}

double evolve_step(LoewnerState& s, const SleConfig& c, double xi, double drift, double dt) {
    const double w0 = s.W;
    const std::size_t n = s.images.size();
    for (std::size_t k = 0; k < n; ++k) {
        if (s.swallowed(k)) continue;
        const double g = s.images[k] - w0;
        s.images[k] = c.update == ImageUpdate::Euler ? s.images[k] + 2.0 * dt / g
                                                     : w0 + s.side[k] * std::sqrt(g * g + 4.0 * dt);
    }
    s.W = w0 + drift * dt + std::sqrt(c.kappa * dt) * xi;
    s.t += dt;
    ++s.steps;

    // Farthest newly swallowed point per side, measured from the start.
    double reach[2] = {-1.0, -1.0};
    for (std::size_t k = 0; k < n; ++k) {
        if (s.swallowed(k)) continue;
        const double clearance = s.side[k] * (s.images[k] - s.W);
        if (clearance > (s.marked[k] ? c.collision_eps : 0.0)) continue;
        if (s.marked[k] && clearance < -c.collision_eps)
            throw StepError("marked image overshot the driving point; reduce dt_base");
        s.swallowed_at[k] = s.t;
        const int sd = s.side[k] > 0;
        reach[sd] = std::max(reach[sd], s.side[k] * (s.images[k] - w0));
    }
    for (int sd = 0; sd < 2; ++sd) {
        if (reach[sd] < 0.0) continue;
        const int sign = sd ? 1 : -1;
        for (std::size_t k = 0; k < n; ++k)
            if (!s.swallowed(k) && s.side[k] == sign && sign * (s.images[k] - w0) <= reach[sd])
                s.swallowed_at[k] = s.t;
        (sd ? s.right_last : s.left_last) = s.t;
    }
    return dt;
}

void evolve_step(LoewnerState& s, const SleConfig& c, double xi, double drift) {
    evolve_step(s, c, xi, drift, step_size(s, c));
}

std::vector<double> monitor_points(const BoundaryQuad& q, int per_side, double inner) {
    std::vector<double> m;
    m.reserve(2 * static_cast<std::size_t>(std::max(per_side, 0)));
    for (int k = 0; k < per_side; ++k) {
        const double r = std::pow(inner, static_cast<double>(per_side - k) / per_side);
        m.push_back(q.x2 - (q.x2 - q.x1) * r);
        m.push_back(q.x2 + (q.x3 - q.x2) * r);
    }
    return m;
}

namespace {

void validate_quad(const BoundaryQuad& q) {
    if (!(q.x1 < q.x2 && q.x2 < q.x3 && q.x3 < q.x4) || !std::isfinite(q.x1) || !std::isfinite(q.x3))
        throw OrderingError("SLE quad needs finite x1 < x2 < x3 < x4");
}

void check_resolution(const LoewnerState& s, const SleConfig& c) {
    if (c.collision_eps >= 0.1 * s.initial_gap)
        throw ConfigError("collision_eps", "must be well below the initial marked gap");
}

[[noreturn]] void timeout(const LoewnerState& s) {
    throw TimeoutError("trace unresolved at t=" + std::to_string(s.t) + " after " +
                       std::to_string(s.steps) + " steps");
}

}  // namespace

TraceOutcome run_trace(const BoundaryQuad& q, const SleConfig& c, std::uint64_t seed,
                       std::uint64_t stream) {
    c.validate();
    validate_quad(q);
    const bool finite4 = std::isfinite(q.x4);
    std::vector<double> marked{q.x1, q.x3};
    if (finite4) marked.push_back(q.x4);
    LoewnerState s = make_state(q.x2, marked, monitor_points(q, c.monitor_count, c.monitor_inner));
    check_resolution(s, c);
    auto engine = make_engine(seed, stream);
    std::normal_distribution<double> normal;
    while (true) {
        if (s.t >= c.max_time || s.steps >= c.max_steps) timeout(s);
        const double left_before = s.left_last;
        const double right_before = s.right_last;
        evolve_step(s, c, normal(engine));
        const bool hit1 = s.swallowed(0);
        const bool hit3 = s.swallowed(1);
        if (!hit1 && !hit3) continue;
        TraceOutcome out;
        out.hit_right_first = hit3 && !hit1 && !(finite4 && s.swallowed(2));
        out.a_first = out.hit_right_first && right_before > left_before;
        out.tau = s.t;
        out.steps = s.steps;
        return out;
    }
}

namespace {

Counts sle_counts(const BoundaryQuad& q, const SleConfig& c, std::uint64_t n, std::uint64_t seed,
                  int workers) {
    if (n == 0) throw std::invalid_argument("estimate needs n >= 1");
    Counts total = parallel_counts(n, workers, [&](std::uint64_t begin, std::uint64_t end) {
        Counts k;
        for (std::uint64_t i = begin; i < end; ++i) {
            try {
                const TraceOutcome o = run_trace(q, c, seed, i);
                k.hits += o.hit_right_first;
                k.inner_hits += o.a_first;
                ++k.trials;
            } catch (const TimeoutError&) {
                ++k.timeouts;
            }
        }
        return k;
    });
    if (total.timeouts * 100 > n)
        throw TimeoutError(std::to_string(total.timeouts) + " of " + std::to_string(n) +
                           " traces timed out (limit 1%)");
    return total;
}

}  // namespace

SleEstimate estimate_sle(const BoundaryQuad& q, const SleConfig& c, std::uint64_t n,
                         std::uint64_t seed, int workers) {
    const Counts k = sle_counts(q, c, n, seed, workers);
    return {make_estimate(k.hits, k.trials, seed, k.timeouts),
            make_estimate(k.inner_hits, k.trials, seed, k.timeouts)};
}

EstimateResult estimate_cardy_sle(const BoundaryQuad& q, const SleConfig& c, std::uint64_t n,
                                  std::uint64_t seed, int workers) {
    return estimate_sle(q, c, n, seed, workers).cardy;
}

EstimateResult estimate_tripod_sle(const BoundaryQuad& q, const SleConfig& c, std::uint64_t n,
                                   std::uint64_t seed, int workers) {
    return estimate_sle(q, c, n, seed, workers).tripod;
}

double monitor_flip_fraction(const BoundaryQuad& q, const SleConfig& c, std::uint64_t n,
                             std::uint64_t seed, int workers) {
    SleConfig fine = c;
    fine.monitor_count = 2 * c.monitor_count;
    const Counts k = parallel_counts(n, workers, [&](std::uint64_t begin, std::uint64_t end) {
        Counts r;
        for (std::uint64_t i = begin; i < end; ++i) {
            try {
                const TraceOutcome a = run_trace(q, c, seed, i);
                if (!a.hit_right_first) continue;
                const TraceOutcome b = run_trace(q, fine, seed, i);
                ++r.trials;
                r.hits += a.a_first != b.a_first;
            } catch (const TimeoutError&) {
                ++r.timeouts;
            }
        }
        return r;
    });
    return k.trials ? static_cast<double>(k.hits) / static_cast<double>(k.trials) : 0.0;
}

Absorbed run_conditioned_trace(const EvalPoint& p, const SleConfig& c, std::uint64_t seed,
                               std::uint64_t stream) {
    c.validate();
    validate_density_point(p.v3, p.W, p.v1, p.v2);
    LoewnerState s = make_state(p.W, {p.v3, p.v1, p.v2}, {});
    check_resolution(s, c);
    auto engine = make_engine(seed, stream);
    std::normal_distribution<double> normal;
    while (true) {
        if (s.t >= c.max_time || s.steps >= c.max_steps) timeout(s);
        const double w0 = s.W;
        const double mu = drift(EvalPoint{s.images[0], s.W, s.images[1], s.images[2]}, c.kappa);
        evolve_step(s, c, normal(engine), mu);
        const bool hit3 = s.swallowed(0);
        const bool hit1 = s.swallowed(1);
        if (hit3 && hit1) return s.W < w0 ? Absorbed::V3 : Absorbed::V1;
        if (hit3) return Absorbed::V3;
        if (hit1) return Absorbed::V1;
    }
}

EstimateResult estimate_conditioned(const EvalPoint& p, const SleConfig& c, std::uint64_t n,
                                    std::uint64_t seed, int workers) {
    if (n == 0) throw std::invalid_argument("estimate needs n >= 1");
    const Counts k = parallel_counts(n, workers, [&](std::uint64_t begin, std::uint64_t end) {
        Counts r;
        for (std::uint64_t i = begin; i < end; ++i) {
            try {
                r.hits += run_conditioned_trace(p, c, seed, i) == Absorbed::V3;
                ++r.trials;
            } catch (const TimeoutError&) {
                ++r.timeouts;
            }
        }
        return r;
    });
    if (k.timeouts * 100 > n)
        throw TimeoutError(std::to_string(k.timeouts) + " of " + std::to_string(n) +
                           " conditioned traces timed out (limit 1%)");
    return make_estimate(k.hits, k.trials, seed, k.timeouts);
}

}  // namespace wlab
