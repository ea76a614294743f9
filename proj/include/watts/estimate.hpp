#pragma once

#include <cstdint>
#include <functional>

namespace wlab {

struct EstimateResult {
    double p_hat = 0.0;
    std::uint64_t n = 0;
    std::uint64_t successes = 0;
    double std_error = 0.0;
    double ci_lo = 0.0;
    double ci_hi = 0.0;
    std::uint64_t seed = 0;
    std::uint64_t timeouts = 0;
};

// Bernoulli estimate with a 95% Wilson score interval.
EstimateResult make_estimate(std::uint64_t successes, std::uint64_t n, std::uint64_t seed,
                             std::uint64_t timeouts = 0);

// Worker count from WATTS_WORKERS, else the hardware concurrency.
int default_workers();

// Splits [0, n) into contiguous chunks, one per worker, and sums the
// integer counts returned for each chunk. Order of completion does not
// affect the result.
struct Counts {
    std::uint64_t hits = 0;
    // Hits of a sub-event of the main one, e.g. tripod inside crossing.
    std::uint64_t inner_hits = 0;
    std::uint64_t trials = 0;
    std::uint64_t timeouts = 0;

    Counts& operator+=(const Counts& o) {
        hits += o.hits;
        inner_hits += o.inner_hits;
        trials += o.trials;
        timeouts += o.timeouts;
        return *this;
    }
};

Counts parallel_counts(std::uint64_t n, int workers,
                       const std::function<Counts(std::uint64_t begin, std::uint64_t end)>& chunk);

}  // namespace wlab
