#include "watts/estimate.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <stdexcept>
#include <thread>
#include <vector>

namespace wlab {

EstimateResult make_estimate(std::uint64_t successes, std::uint64_t n, std::uint64_t seed,
                             std::uint64_t timeouts) {
    if (n == 0) throw std::invalid_argument("estimate needs at least one sample");
    if (successes > n) throw std::invalid_argument("more successes than samples");
    EstimateResult r;
    r.n = n;
    r.successes = successes;
    r.seed = seed;
    r.timeouts = timeouts;
    const double nn = static_cast<double>(n);
    r.p_hat = static_cast<double>(successes) / nn;
    r.std_error = std::sqrt(r.p_hat * (1.0 - r.p_hat) / nn);
    const double z = 1.959963984540054;
    const double z2 = z * z;
    const double center = (r.p_hat + z2 / (2.0 * nn)) / (1.0 + z2 / nn);
    const double half = z / (1.0 + z2 / nn) * std::sqrt(r.p_hat * (1.0 - r.p_hat) / nn + z2 / (4.0 * nn * nn));
    r.ci_lo = std::clamp(center - half, 0.0, r.p_hat);
    r.ci_hi = std::clamp(center + half, r.p_hat, 1.0);
    return r;
}

int default_workers() {
    if (const char* env = std::getenv("WATTS_WORKERS")) {
        int v = std::atoi(env);
        if (v >= 1) return v;
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

Counts parallel_counts(std::uint64_t n, int workers,
                       const std::function<Counts(std::uint64_t, std::uint64_t)>& chunk) {
    workers = std::max(1, workers);
    if (workers == 1 || n < 2) return chunk(0, n);
    const auto w = static_cast<std::uint64_t>(std::min<std::uint64_t>(workers, n));
    std::vector<Counts> parts(w);
    std::vector<std::exception_ptr> errors(w);
    std::vector<std::thread> threads;
    for (std::uint64_t k = 0; k < w; ++k) {
        threads.emplace_back([&, k] {
            try {
                parts[k] = chunk(n * k / w, n * (k + 1) / w);
            } catch (...) {
                errors[k] = std::current_exception();
            }
        });
    }
    for (auto& t : threads) t.join();
    Counts total;
    for (std::uint64_t k = 0; k < w; ++k) {
        if (errors[k]) std::rethrow_exception(errors[k]);
        total += parts[k];
    }
    return total;
}

}  // namespace wlab
