// Acceptance run: one PASS/FAIL line per criterion. Pass criterion numbers
// as arguments to run a subset.
#include <fmt/format.h>

#include <cmath>
#include <cstdlib>
#include <functional>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "watts/errors.hpp"
#include "watts/formulas.hpp"
#include "watts/harness.hpp"
#include "watts/hexperc.hpp"
#include "watts/identity_lab.hpp"
#include "watts/sle.hpp"

using namespace wlab;

namespace {

struct Outcome {
    bool pass = true;
    std::vector<std::string> notes;

    void check(bool ok, std::string note) {
        pass = pass && ok;
        if (!ok) notes.push_back(std::move(note));
    }
};

struct EnumCase {
    int w, h;
    std::optional<GapQuad> q;
};

constexpr int kCorner = GapQuad::kRightCorner;

const std::vector<EnumCase>& enum_cases() {
    static const std::vector<EnumCase> c = {
        {3, 3, std::nullopt},
        {4, 3, GapQuad{1, 2, 3, kCorner}},
        {5, 3, GapQuad{1, 2, 3, 4}},
        {6, 3, GapQuad{1, 2, 4, 5}},
        {6, 3, GapQuad{1, 3, 4, kCorner}},
        {5, 4, GapQuad{1, 2, 3, 4}},
        {6, 4, GapQuad{1, 2, 4, 5}},
        {8, 3, GapQuad{1, 3, 5, 7}},
    };
    return c;
}

std::string label(const EnumCase& k) {
    if (!k.q) return fmt::format("{}x{}", k.w, k.h);
    const GapQuad& q = *k.q;
    return fmt::format("{}x{} q=({},{},{},{})", k.w, k.h, q.x1, q.x2, q.x3,
                       q.x4 == kCorner ? std::string("corner") : std::to_string(q.x4));
}

// Enumerations are shared by criteria 1 to 3.
const std::vector<EnumerationTable>& tables() {
    static const std::vector<EnumerationTable> t = [] {
        std::vector<EnumerationTable> out;
        for (const EnumCase& k : enum_cases()) out.push_back(enumerate_exact(HexDomain::parallelogram(k.w, k.h), k.q));
        return out;
    }();
    return t;
}

Outcome c1_identities() {
    Outcome o;
    for (std::size_t i = 0; i < enum_cases().size(); ++i) {
        const EnumerationTable& t = tables()[i];
        const auto s = [](std::uint64_t v) { return static_cast<std::int64_t>(v); };
        const std::string l = label(enum_cases()[i]);
        o.check(t.n + 2 * t.tb == t.total, l + ": N + 2 Tb != total");
        o.check(t.hb + t.hyvy + t.n == t.total, l + ": Hb + HyVy + N != total");
        o.check(s(t.hbvb) == 2 * s(t.tb) - s(t.hb), l + ": HbVb != 2 Tb - Hb");
    }
    o.notes.insert(o.notes.begin(), fmt::format("{} domains", enum_cases().size()));
    return o;
}

Outcome c2_decomposition() {
    Outcome o;
    int n = 0;
    for (std::size_t i = 0; i < enum_cases().size(); ++i) {
        if (!enum_cases()[i].q) continue;
        ++n;
        const EnumerationTable& t = tables()[i];
        const Decomposition d = decompose(t);
        const std::string l = label(enum_cases()[i]);
        o.check(d.crossing_boxes + d.face == static_cast<std::int64_t>(t.crossing),
                fmt::format("{}: boxes {} + face {} != crossing {}", l, d.crossing_boxes, d.face, t.crossing));
        o.check(d.tripod_boxes == static_cast<std::int64_t>(t.tripod),
                fmt::format("{}: tripod boxes {} != tripod {}", l, d.tripod_boxes, t.tripod));
        o.check(d.box_mismatches == 0, fmt::format("{}: {} box mismatches", l, d.box_mismatches));
    }
    o.notes.insert(o.notes.begin(), fmt::format("{} quads", n));
    return o;
}

Outcome c3_interface() {
    Outcome o;
    std::uint64_t colourings = 0;
    for (std::size_t i = 0; i < enum_cases().size(); ++i) {
        if (!enum_cases()[i].q) continue;
        const EnumerationTable& t = tables()[i];
        colourings += t.total;
        const std::string l = label(enum_cases()[i]);
        o.check(t.interface_mismatch == 0, fmt::format("{}: {} (a,b,c) mismatches", l, t.interface_mismatch));
        o.check(t.a_first_mismatch == 0, fmt::format("{}: {} a-first mismatches", l, t.a_first_mismatch));
    }
    o.notes.insert(o.notes.begin(), fmt::format("{} colourings", colourings));
    return o;
}

Outcome c4_identity_suite() {
    Outcome o;
    double worst = 0.0;
    for (const CheckRow& r : identity_suite(50, 0.02, 0.98)) {
        worst = std::max(worst, r.value / r.tolerance);
        o.check(r.pass, fmt::format("{} at s={:.4f}: {:.3g} > {:.0e}", r.name, r.s, r.value, r.tolerance));
    }
    o.notes.insert(o.notes.begin(), fmt::format("worst residual/tolerance {:.3g}", worst));
    return o;
}

Outcome c5_closed_forms() {
    Outcome o;
    for (int k = 1; k <= 99; ++k) {
        const double s = 0.01 * k;
        const CrossRatio r(s);
        const double dual = std::abs(cardy(r) + cardy(CrossRatio(1.0 - s)) - 1.0);
        o.check(dual <= 1e-10, fmt::format("duality at s={}: {:.3g}", s, dual));
        o.check(watts(r) <= tripod(r) && tripod(r) <= cardy(r), fmt::format("ordering at s={}", s));
    }
    o.check(conditional_f(CrossRatio(1e-4)) > 0.99, "f(1e-4) <= 0.99");
    o.check(conditional_f(CrossRatio(1.0 - 1e-4)) < 0.01, "f(0.9999) >= 0.01");
    return o;
}

Outcome c6_percolation() {
    Outcome o;
    const std::uint64_t n = 100000;
    const int workers = default_workers();
    for (double target : {0.25, 0.5, 0.75}) {
        const HalfPlaneSetup a = half_plane_setup(target, 32, 32);
        const HalfPlaneSetup b = half_plane_setup(target, 64, 32);
        const QuadEstimate ea = estimate_quad(a.domain, a.quad, n, 6001, workers);
        const QuadEstimate eb = estimate_quad(b.domain, b.quad, n, 6002, workers);
        const struct {
            const char* name;
            const EstimateResult& e1;
            double exact1;
            const EstimateResult& e2;
            double exact2;
        } rows[] = {
            {"crossing", ea.crossing, cardy(CrossRatio(a.s)), eb.crossing, cardy(CrossRatio(b.s))},
            {"tripod", ea.tripod, tripod(CrossRatio(a.s)), eb.tripod, tripod(CrossRatio(b.s))},
        };
        for (const auto& r : rows) {
            const double d1 = std::abs(r.e1.p_hat - r.exact1);
            const double d2 = std::abs(r.e2.p_hat - r.exact2);
            const double bound = 3.0 * r.e1.std_error + 0.02;
            const double slack = 3.0 * std::hypot(r.e1.std_error, r.e2.std_error);
            o.check(d1 <= bound, fmt::format("{} s={:.4f}: p={:.4f} exact={:.4f} |d|={:.4f} > {:.4f}", r.name, a.s,
                                             r.e1.p_hat, r.exact1, d1, bound));
            o.check(d2 <= d1 + slack, fmt::format("{} s={:.4f}: doubled |d|={:.4f} > {:.4f} + {:.4f}", r.name, a.s, d2,
                                                  d1, slack));
            fmt::print("  [6] {} s={:.4f} span 32: p={:.4f} exact={:.4f} |d|={:.4f} bound={:.4f}; span 64: s={:.4f} "
                       "|d|={:.4f}\n",
                       r.name, a.s, r.e1.p_hat, r.exact1, d1, bound, b.s, d2);
        }
    }
    return o;
}

Outcome c7_sle() {
    Outcome o;
    const std::uint64_t n = 10000;
    for (double s : {0.25, 0.5, 0.75}) {
        const BoundaryQuad q = quad_for_cross_ratio(s);
        try {
            const SleEstimate e = estimate_sle(q, SleConfig::for_span(quad_span(q)), n, 7001, default_workers());
            const double dc = std::abs(e.cardy.p_hat - cardy(CrossRatio(s)));
            const double dt = std::abs(e.tripod.p_hat - tripod(CrossRatio(s)));
            const double to = static_cast<double>(e.cardy.timeouts) / n;
            o.check(dc <= 0.02, fmt::format("cardy s={}: |d|={:.4f} > 0.02", s, dc));
            o.check(dt <= 0.03, fmt::format("tripod s={}: |d|={:.4f} > 0.03", s, dt));
            o.check(to < 0.01, fmt::format("s={}: timeout fraction {:.4f}", s, to));
            fmt::print("  [7] s={}: cardy p={:.4f} |d|={:.4f}; tripod p={:.4f} |d|={:.4f}; timeouts {}\n", s,
                       e.cardy.p_hat, dc, e.tripod.p_hat, dt, e.cardy.timeouts);
        } catch (const TimeoutError& e) {
            o.check(false, fmt::format("s={}: {}", s, e.what()));
        }
    }
    return o;
}

Outcome c8_conditioned() {
    Outcome o;
    for (const EvalPoint& p : identity_grid(3, 0.25, 0.75)) {
        const double s = cross_ratio_of(p);
        const EstimateResult e = estimate_conditioned(p, SleConfig::for_span(p.v2 - p.v3), 10000, 8001, default_workers());
        const double d = std::abs(e.p_hat - conditional_f(CrossRatio(s)));
        o.check(d <= 0.03, fmt::format("s={:.3f}: |d|={:.4f} > 0.03", s, d));
        fmt::print("  [8] s={:.3f}: p={:.4f} f={:.4f} |d|={:.4f}\n", s, e.p_hat, conditional_f(CrossRatio(s)), d);
    }
    return o;
}

// Largest Euler image error against sqrt(x^2 + 4t) at t = 1 under W = 0.
double euler_error(double dt) {
    SleConfig c;
    c.dt_base = dt;
    c.dt_adapt_exponent = 0.0;
    c.update = ImageUpdate::Euler;
    const std::vector<double> x0 = {1.0, -0.5, 2.0};
    LoewnerState s = make_state(0.0, {x0[0], x0[1]}, {x0[2]});
    const long steps = std::lround(1.0 / dt);
    for (long i = 0; i < steps; ++i) evolve_step(s, c, 0.0, 0.0, dt);
    double err = 0.0;
    for (std::size_t k = 0; k < x0.size(); ++k)
        err = std::max(err, std::abs(s.images[k] - std::copysign(std::sqrt(x0[k] * x0[k] + 4.0 * s.t), x0[k])));
    return err;
}

Outcome c9_step_order() {
    Outcome o;
    double dt = 1e-3;
    double prev = euler_error(dt);
    for (int i = 0; i < 3; ++i) {
        dt /= 2;
        const double e = euler_error(dt);
        const double order = std::log2(prev / e);
        o.check(order >= 0.9, fmt::format("dt={:.3g}: order {:.3f}", dt, order));
        fmt::print("  [9] dt={:.3g}: error {:.3e}, order {:.3f}\n", dt, e, order);
        prev = e;
    }
    return o;
}

}  // namespace

int main(int argc, char** argv) {
    const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
        {"exact discrete identities", c1_identities},
        {"discrete decomposition", c2_decomposition},
        {"interface equivalence", c3_interface},
        {"identity suite", c4_identity_suite},
        {"closed-form properties", c5_closed_forms},
        {"percolation Monte Carlo", c6_percolation},
        {"SLE Monte Carlo", c7_sle},
        {"conditioned diffusion", c8_conditioned},
        {"step-accuracy oracle", c9_step_order},
    };
    std::set<int> only;
    for (int i = 1; i < argc; ++i) only.insert(std::atoi(argv[i]));

    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const int id = static_cast<int>(i) + 1;
        if (!only.empty() && !only.count(id)) continue;
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o.check(false, std::string("exception: ") + e.what());
        }
        std::string detail;
        for (const std::string& n : o.notes) detail += (detail.empty() ? "" : "; ") + n;
        fmt::print("criterion {}: {} {}{}\n", id, o.pass ? "PASS" : "FAIL", criteria[i].first,
                   detail.empty() ? "" : " (" + detail + ")");
        std::fflush(stdout);
        failed += o.pass ? 0 : 1;
    }
    return failed == 0 ? 0 : 1;
}
