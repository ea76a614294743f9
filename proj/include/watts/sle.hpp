#pragma once

#include <cstdint>
#include <vector>

#include "watts/estimate.hpp"
#include "watts/formulas.hpp"
#include "watts/identity_lab.hpp"

namespace wlab {

// Euler: x += 2 dt / (x - W). FrozenDriving: exact flow over the step with
// W held at its start value, x = W + sign sqrt((x - W)^2 + 4 dt).
enum class ImageUpdate { Euler, FrozenDriving };

// Lengths are absolute. for_span() gives the defaults scaled to a quad.
struct SleConfig {
    double dt_base = 1e-4;
    // dt = dt_base * (gap / ref)^dt_adapt_exponent, clamped to
    // [dt_min_factor, dt_max_factor] * dt_base, with
    // ref = max(initial_gap, reference_length). Exponent 0 gives a fixed step.
    double dt_adapt_exponent = 2.0;
    double reference_length = 0.0;
    double dt_min_factor = 1e-6;
    double dt_max_factor = 1e8;
    // Marked points are swallowed within collision_eps of W; monitors only
    // once W passes them.
    double collision_eps = 1e-4;
    ImageUpdate update = ImageUpdate::FrozenDriving;
    int monitor_count = 64;
    // Innermost monitor sits this fraction of the side interval away from x2.
    double monitor_inner = 1e-3;
    double max_time = 1e8;
    std::uint64_t max_steps = 50'000'000;
    double kappa = 6.0;

    static SleConfig for_span(double span);
    void validate() const;
};

// Marked span of a quad: x4 - x1, or x3 - x1 when x4 is at infinity.
double quad_span(const BoundaryQuad& q);

// (0, s, 1, infinity), whose cross-ratio is s.
BoundaryQuad quad_for_cross_ratio(double s);

struct LoewnerState {
    double t = 0.0;
    double W = 0.0;
    std::vector<double> images;
    // +1 right of the seed, -1 left.
    std::vector<signed char> side;
    // Negative while unswallowed.
    std::vector<double> swallowed_at;
    // Points that steer the adaptive step; the rest are monitors.
    std::vector<char> marked;
    double initial_gap = 0.0;
    double left_last = 0.0;
    double right_last = 0.0;
    std::uint64_t steps = 0;

    std::size_t add_point(double x, bool is_marked);
    bool swallowed(std::size_t k) const { return swallowed_at[k] >= 0.0; }
    // Smallest distance from W to an unswallowed marked image.
    double marked_gap() const;
};

// Starts the flow at W = seed. initial_gap is fixed from the marked points.
LoewnerState make_state(double seed, const std::vector<double>& marked_points,
                        const std::vector<double>& monitors);

double step_size(const LoewnerState& s, const SleConfig& c);

// One step: images follow the flow, then W moves by drift * dt plus
// sqrt(kappa dt) xi. A swallowed image takes every image between it and W
// on the same side along. Throws StepError when a marked image ends up past
// W by more than collision_eps.
void evolve_step(LoewnerState& s, const SleConfig& c, double xi, double drift = 0.0);
double evolve_step(LoewnerState& s, const SleConfig& c, double xi, double drift, double dt);

struct TraceOutcome {
    bool hit_right_first = false;
    bool a_first = false;
    double tau = 0.0;
    std::uint64_t steps = 0;
};

// Geometric monitor grid in (x1, x2) and (x2, x3), dense toward x2.
std::vector<double> monitor_points(const BoundaryQuad& q, int per_side, double inner);

// Throws TimeoutError when neither x1 nor x3 is swallowed by max_time.
TraceOutcome run_trace(const BoundaryQuad& q, const SleConfig& c, std::uint64_t seed,
                       std::uint64_t stream);

struct SleEstimate {
    EstimateResult cardy;
    EstimateResult tripod;
};

// Both events from one set of traces. Throws TimeoutError if more than
// 1% of the traces time out.
SleEstimate estimate_sle(const BoundaryQuad& q, const SleConfig& c, std::uint64_t n,
                         std::uint64_t seed, int workers = 1);
EstimateResult estimate_cardy_sle(const BoundaryQuad& q, const SleConfig& c, std::uint64_t n,
                                  std::uint64_t seed, int workers = 1);
EstimateResult estimate_tripod_sle(const BoundaryQuad& q, const SleConfig& c, std::uint64_t n,
                                   std::uint64_t seed, int workers = 1);

// Fraction of right-hitting traces whose a_first flips when the monitor
// count is doubled on the same driving noise.
double monitor_flip_fraction(const BoundaryQuad& q, const SleConfig& c, std::uint64_t n,
                             std::uint64_t seed, int workers = 1);
inline constexpr double kMonitorFlipWarning = 0.005;

enum class Absorbed { V3, V1 };

// Driving function with the h-transform drift, until v3 or v1 meets W.
Absorbed run_conditioned_trace(const EvalPoint& p, const SleConfig& c, std::uint64_t seed,
                               std::uint64_t stream);

// Estimate of P(v3 absorbed first).
EstimateResult estimate_conditioned(const EvalPoint& p, const SleConfig& c, std::uint64_t n,
                                    std::uint64_t seed, int workers = 1);

}  // namespace wlab
