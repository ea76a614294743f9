#include "watts/harness.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <sstream>

#include "watts/errors.hpp"
#include "watts/formulas.hpp"
#include "watts/hexperc.hpp"
#include "watts/sle.hpp"

namespace wlab {

const char* to_string(Mode m) {
    switch (m) {
        case Mode::Eval: return "eval";
        case Mode::VerifyIdentities: return "verify-identities";
        case Mode::PercEnum: return "perc-enum";
        case Mode::PercMc: return "perc-mc";
        case Mode::SleMc: return "sle-mc";
    }
    return "?";
}

Mode mode_from_string(const std::string& s) {
    for (Mode m : {Mode::Eval, Mode::VerifyIdentities, Mode::PercEnum, Mode::PercMc, Mode::SleMc})
        if (s == to_string(m)) return m;
    throw ConfigError("mode", "unknown mode '" + s + "'");
}

namespace {

std::string real_text(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, end);
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    return s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
}

double parse_real(const std::string& v, const std::string& key, int line) {
    if (v == "inf") return kInfinity;
    if (v == "-inf") return -kInfinity;
    double x = 0.0;
    auto [end, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
    if (ec != std::errc() || end != v.data() + v.size() || !std::isfinite(x))
        throw ConfigError(key, "expected a real number, got '" + v + "'", line);
    return x;
}

template <class T>
T parse_integer(const std::string& v, const std::string& key, int line) {
    T x{};
    auto [end, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
    if (ec != std::errc() || end != v.data() + v.size())
        throw ConfigError(key, "expected an integer, got '" + v + "'", line);
    return x;
}

bool parse_bool(const std::string& v, const std::string& key, int line) {
    if (v == "true" || v == "1") return true;
    if (v == "false" || v == "0") return false;
    throw ConfigError(key, "expected true or false, got '" + v + "'", line);
}

struct Field {
    const char* key;
    std::function<std::string(const ExperimentConfig&)> get;
    std::function<void(ExperimentConfig&, const std::string&, int)> set;
};

Field real_field(const char* key, double ExperimentConfig::*m) {
    return {key, [m](const ExperimentConfig& c) { return real_text(c.*m); },
            [m, key](ExperimentConfig& c, const std::string& v, int line) { c.*m = parse_real(v, key, line); }};
}

Field point_field(const char* key, double EvalPoint::*m) {
    return {key, [m](const ExperimentConfig& c) { return real_text(c.point.*m); },
            [m, key](ExperimentConfig& c, const std::string& v, int line) {
                c.point.*m = parse_real(v, key, line);
            }};
}

Field int_field(const char* key, int ExperimentConfig::*m) {
    return {key, [m](const ExperimentConfig& c) { return std::to_string(c.*m); },
            [m, key](ExperimentConfig& c, const std::string& v, int line) {
                c.*m = parse_integer<int>(v, key, line);
            }};
}

Field u64_field(const char* key, std::uint64_t ExperimentConfig::*m) {
    return {key, [m](const ExperimentConfig& c) { return std::to_string(c.*m); },
            [m, key](ExperimentConfig& c, const std::string& v, int line) {
                c.*m = parse_integer<std::uint64_t>(v, key, line);
            }};
}

Field string_field(const char* key, std::string ExperimentConfig::*m) {
    return {key, [m](const ExperimentConfig& c) { return c.*m; },
            [m](ExperimentConfig& c, const std::string& v, int) { c.*m = v; }};
}

const std::vector<Field>& fields() {
    static const std::vector<Field> f = {
        {"mode", [](const ExperimentConfig& c) { return std::string(to_string(c.mode)); },
         [](ExperimentConfig& c, const std::string& v, int line) {
             try {
                 c.mode = mode_from_string(v);
             } catch (const ConfigError&) {
                 throw ConfigError("mode", "unknown mode '" + v + "'", line);
             }
         }},
        u64_field("seed", &ExperimentConfig::seed),
        u64_field("n_samples", &ExperimentConfig::n_samples),
        int_field("workers", &ExperimentConfig::workers),
        string_field("output", &ExperimentConfig::output),
        real_field("s_min", &ExperimentConfig::s_min),
        real_field("s_max", &ExperimentConfig::s_max),
        int_field("s_count", &ExperimentConfig::s_count),
        int_field("identity_points", &ExperimentConfig::identity_points),
        int_field("width", &ExperimentConfig::width),
        int_field("height", &ExperimentConfig::height),
        {"mirrored", [](const ExperimentConfig& c) { return std::string(c.mirrored ? "true" : "false"); },
         [](ExperimentConfig& c, const std::string& v, int line) { c.mirrored = parse_bool(v, "mirrored", line); }},
        int_field("x1", &ExperimentConfig::x1),
        int_field("x2", &ExperimentConfig::x2),
        int_field("x3", &ExperimentConfig::x3),
        int_field("x4", &ExperimentConfig::x4),
        string_field("event", &ExperimentConfig::event),
        int_field("span", &ExperimentConfig::span),
        int_field("wall_multiple", &ExperimentConfig::wall_multiple),
        real_field("s_target", &ExperimentConfig::s_target),
        string_field("sle_mode", &ExperimentConfig::sle_mode),
        real_field("q1", &ExperimentConfig::q1),
        real_field("q2", &ExperimentConfig::q2),
        real_field("q3", &ExperimentConfig::q3),
        real_field("q4", &ExperimentConfig::q4),
        point_field("v3", &EvalPoint::v3),
        point_field("w", &EvalPoint::W),
        point_field("v1", &EvalPoint::v1),
        point_field("v2", &EvalPoint::v2),
        real_field("dt", &ExperimentConfig::dt),
        real_field("eps", &ExperimentConfig::eps),
        int_field("monitors", &ExperimentConfig::monitors),
        real_field("kappa", &ExperimentConfig::kappa),
        real_field("z_max", &ExperimentConfig::z_max),
        real_field("abs_tol", &ExperimentConfig::abs_tol),
    };
    return f;
}

}  // namespace

ExperimentConfig parse_config(const std::string& text) {
    ExperimentConfig c;
    std::map<std::string, const Field*> by_key;
    for (const Field& f : fields()) by_key[f.key] = &f;
    std::map<std::string, int> seen;
    std::istringstream in(text);
    std::string raw;
    int line = 0;
    while (std::getline(in, raw)) {
        ++line;
        const std::string body = trim(raw.substr(0, raw.find('#')));
        if (body.empty()) continue;
        const auto eq = body.find('=');
        if (eq == std::string::npos) throw ConfigError("", "expected key = value", line);
        const std::string key = trim(body.substr(0, eq));
        const std::string value = trim(body.substr(eq + 1));
        const auto it = by_key.find(key);
        if (it == by_key.end()) throw ConfigError(key, "unknown key", line);
        if (seen.count(key)) throw ConfigError(key, "duplicate key (first on line " + std::to_string(seen[key]) + ")", line);
        seen[key] = line;
        it->second->set(c, value, line);
    }
    return c;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read config " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

std::string serialize_config(const ExperimentConfig& c) {
    std::string out;
    for (const Field& f : fields()) out += std::string(f.key) + " = " + f.get(c) + "\n";
    return out;
}

std::string config_hash(const ExperimentConfig& c) {
    ExperimentConfig k = c;
    k.output.clear();
    k.workers = 0;
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : serialize_config(k)) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    return fmt::format("{:016x}", h);
}

void write_csv(std::ostream& os, const Table& t) {
    auto line = [&](const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (cells[i].find_first_of(",\n\"") != std::string::npos)
                throw SchemaError("csv cell needs quoting: " + cells[i]);
            os << (i ? "," : "") << cells[i];
        }
        os << "\n";
    };
    line(t.header);
    for (const auto& r : t.rows) line(r);
}

Table read_csv(std::istream& is) {
    Table t;
    std::string raw;
    bool first = true;
    int line = 0;
    while (std::getline(is, raw)) {
        ++line;
        if (!raw.empty() && raw.back() == '\r') raw.pop_back();
        if (raw.empty()) continue;
        std::vector<std::string> cells;
        std::size_t start = 0;
        while (true) {
            const auto comma = raw.find(',', start);
            cells.push_back(raw.substr(start, comma - start));
            if (comma == std::string::npos) break;
            start = comma + 1;
        }
        if (first) {
            t.header = std::move(cells);
            first = false;
        } else if (cells.size() != t.header.size()) {
            throw SchemaError("csv line " + std::to_string(line) + " has " + std::to_string(cells.size()) +
                              " cells, header has " + std::to_string(t.header.size()));
        } else {
            t.rows.push_back(std::move(cells));
        }
    }
    return t;
}

Table read_csv_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read " + path);
    return read_csv(in);
}

const std::vector<std::string>& eval_columns() {
    static const std::vector<std::string> c = {"s", "cardy", "watts", "tripod", "f"};
    return c;
}

const std::vector<std::string>& estimate_columns() {
    static const std::vector<std::string> c = {
        "mode", "event", "x1", "x2", "x3", "x4", "s", "n", "successes", "p_hat", "std_error",
        "ci_lo", "ci_hi", "timeouts", "expected", "z", "pass", "dt", "eps", "seed", "config_hash"};
    return c;
}

const std::vector<std::string>& check_columns() {
    static const std::vector<std::string> c = {"check", "s", "value", "tolerance", "pass", "config_hash"};
    return c;
}

std::vector<EvalPoint> identity_grid(int count, double s_min, double s_max) {
    if (count < 2) throw ConfigError("identity_points", "need at least 2 points");
    if (!(0.0 < s_min && s_min < s_max && s_max < 1.0)) throw ConfigError("s_min", "need 0 < s_min < s_max < 1");
    std::vector<EvalPoint> pts;
    for (int k = 0; k < count; ++k) {
        const double s = s_min + (s_max - s_min) * k / (count - 1);
        const double a = 1.0 + 0.5 * std::sin(1.3 * k + 0.2);
        const double u = 0.2 + 0.6 * std::fmod(0.6180339887498949 * k, 1.0);
        const double w = 0.3 * std::cos(0.7 * k);
        const double b = a * (1.0 - s) / s * u;
        const double c = s * b * (a + b) / (a * (1.0 - s) * (1.0 - u));
        pts.push_back({w - a, w, w + b, w + b + c});
    }
    return pts;
}

std::vector<CheckRow> identity_suite(int count, double s_min, double s_max) {
    std::vector<CheckRow> rows;
    auto add = [&](const char* name, double s, double value, double tol) {
        rows.push_back({name, s, value, tol, std::abs(value) <= tol});
    };
    for (const EvalPoint& p : identity_grid(count, s_min, s_max)) {
        const double s = cross_ratio_of(p);
        add("martingale_cardy", s, martingale_residual_cardy(p).relative_residual, 1e-5);
        add("martingale_cardy_fd", s,
            martingale_residual_cardy(p, 6.0, Derivatives::FiniteDifference).relative_residual, 1e-5);
        add("l1_f", s, l1_residual_f(p).relative_residual, 1e-5);
        add("l1_f_fd", s, l1_residual_f(p, 6.0, Derivatives::FiniteDifference).relative_residual, 1e-5);
        add("ode_f", s, ode_residual_f(s).relative_residual, 1e-7);
        add("contiguity", s, contiguity_residual(s).relative_residual, 1e-11);
        add("triple_derivative", s,
            triple_derivative_match({p.v3 - p.W, p.v1 - p.W, p.v2 - p.W}).relative_residual, 1e-6);
    }
    return rows;
}

namespace {

std::string num(double v) { return fmt::format("{}", v); }

struct RowContext {
    const ExperimentConfig& cfg;
    std::string hash;
};

std::vector<std::string> estimate_row(const RowContext& ctx, const std::string& event,
                                      const std::vector<std::string>& coords, std::optional<double> s,
                                      const EstimateResult& e, std::optional<double> expected,
                                      std::optional<double> dt, std::optional<double> eps, bool& passed) {
    std::string z, pass;
    if (expected) {
        const double diff = e.p_hat - *expected;
        const double zv = e.std_error > 0.0 ? diff / e.std_error : (diff == 0.0 ? 0.0 : std::copysign(kInfinity, diff));
        const bool ok = std::abs(diff) <= ctx.cfg.abs_tol + ctx.cfg.z_max * e.std_error;
        passed = passed && ok;
        z = std::isinf(zv) ? real_text(zv) : num(zv);
        pass = ok ? "1" : "0";
    }
    auto opt = [](std::optional<double> v) { return v ? num(*v) : std::string(); };
    return {to_string(ctx.cfg.mode), event, coords[0], coords[1], coords[2], coords[3], opt(s),
            std::to_string(e.n), std::to_string(e.successes), num(e.p_hat), num(e.std_error), num(e.ci_lo),
            num(e.ci_hi), std::to_string(e.timeouts), opt(expected), z, pass, opt(dt), opt(eps),
            std::to_string(ctx.cfg.seed), ctx.hash};
}

int workers_of(const ExperimentConfig& c) { return c.workers > 0 ? c.workers : default_workers(); }

void check_positive_n(const ExperimentConfig& c) {
    if (c.n_samples == 0) throw ConfigError("n_samples", "must be positive");
}

ExperimentOutput run_eval(const ExperimentConfig& c) {
    if (c.s_count < 1) throw ConfigError("s_count", "must be positive");
    if (!(0.0 <= c.s_min && c.s_min <= c.s_max && c.s_max <= 1.0))
        throw ConfigError("s_min", "need 0 <= s_min <= s_max <= 1");
    ExperimentOutput out;
    out.table.header = eval_columns();
    for (int i = 0; i < c.s_count; ++i) {
        const double s = c.s_count == 1 ? c.s_min : c.s_min + (c.s_max - c.s_min) * i / (c.s_count - 1);
        const CrossRatio r(s);
        out.table.rows.push_back({num(s), num(cardy(r)), num(watts(r)), num(tripod(r)), num(conditional_f(r))});
    }
    return out;
}

ExperimentOutput run_identities(const ExperimentConfig& c) {
    ExperimentOutput out;
    out.table.header = check_columns();
    const std::string hash = config_hash(c);
    for (const CheckRow& r : identity_suite(c.identity_points, c.s_min, c.s_max)) {
        out.table.rows.push_back({r.name, num(r.s), num(r.value), num(r.tolerance), r.pass ? "1" : "0", hash});
        out.passed = out.passed && r.pass;
    }
    return out;
}

HexDomain domain_of(const ExperimentConfig& c) {
    if (c.width < 1) throw ConfigError("width", "must be positive");
    if (c.height < 1) throw ConfigError("height", "must be positive");
    return c.mirrored ? HexDomain::mirrored_parallelogram(c.width, c.height)
                      : HexDomain::parallelogram(c.width, c.height);
}

std::optional<GapQuad> quad_of(const ExperimentConfig& c) {
    const int set = (c.x1 != kUnset) + (c.x2 != kUnset) + (c.x3 != kUnset);
    if (set == 0) return std::nullopt;
    if (set != 3) throw ConfigError("x1", "x1, x2 and x3 must be given together");
    return GapQuad{c.x1, c.x2, c.x3, c.x4 == kUnset ? GapQuad::kRightCorner : c.x4};
}

ExperimentOutput run_enum(const ExperimentConfig& c) {
    const HexDomain d = domain_of(c);
    if (d.cell_count() > kMaxEnumerationCells)
        throw ConfigError("width", "domain has " + std::to_string(d.cell_count()) + " cells, limit " +
                                       std::to_string(kMaxEnumerationCells));
    const auto q = quad_of(c);
    const EnumerationTable t = enumerate_exact(d, q);
    ExperimentOutput out;
    out.table.header = check_columns();
    const std::string hash = config_hash(c);
    auto add = [&](const char* name, std::int64_t lhs, std::int64_t rhs) {
        const bool ok = lhs == rhs;
        out.table.rows.push_back({name, "", std::to_string(lhs - rhs), "0", ok ? "1" : "0", hash});
        out.passed = out.passed && ok;
    };
    auto i64 = [](std::uint64_t v) { return static_cast<std::int64_t>(v); };
    add("n_plus_2tb_eq_total", i64(t.n + 2 * t.tb), i64(t.total));
    add("tb_eq_ty", i64(t.tb), i64(t.ty));
    add("hb_plus_hyvy_plus_n_eq_total", i64(t.hb + t.hyvy + t.n), i64(t.total));
    add("hbvb_eq_2tb_minus_hb", i64(t.hbvb), 2 * i64(t.tb) - i64(t.hb));
    if (q) {
        const Decomposition dec = decompose(t);
        add("crossing_boxes_plus_face_eq_crossing", dec.crossing_boxes + dec.face, i64(t.crossing));
        add("face_eq_yellow_fallback", dec.face, i64(t.yellow_fallback));
        add("tripod_boxes_eq_tripod", dec.tripod_boxes, i64(t.tripod));
        add("box_record_mismatches", i64(dec.box_mismatches), 0);
        add("interface_mismatches", i64(t.interface_mismatch), 0);
        add("a_first_mismatches", i64(t.a_first_mismatch), 0);
        add("tripod_record_mismatches", i64(t.tripod_record_mismatch), 0);
        add("a_first_eq_tripod", i64(t.a_first), i64(t.tripod));
    }
    return out;
}

ExperimentOutput run_perc_mc(const ExperimentConfig& c) {
    check_positive_n(c);
    ExperimentOutput out;
    out.table.header = estimate_columns();
    const RowContext ctx{c, config_hash(c)};
    const int workers = workers_of(c);

    std::optional<HexDomain> d;
    std::optional<GapQuad> q;
    if (c.s_target > 0.0) {
        if (c.s_target >= 1.0) throw ConfigError("s_target", "must lie in (0, 1)");
        HalfPlaneSetup setup = half_plane_setup(c.s_target, c.span, c.wall_multiple);
        d = setup.domain;
        q = setup.quad;
    } else {
        d = domain_of(c);
        q = quad_of(c);
    }
    std::vector<std::string> coords(4);
    std::optional<double> s;
    if (q) {
        s = continuum_cross_ratio(*d, *q);
        coords = {std::to_string(q->x1), std::to_string(q->x2), std::to_string(q->x3),
                  std::to_string(q->right_end(*d))};
    }
    // Closed forms are compared only in the half-plane setup.
    const auto closed = [&](double (*fn)(CrossRatio)) -> std::optional<double> {
        if (c.s_target > 0.0) return fn(CrossRatio(*s));
        return std::nullopt;
    };
    if (c.event == "both") {
        if (!q) throw ConfigError("event", "'both' needs a quad (x1..x3 or s_target)");
        const QuadEstimate e = estimate_quad(*d, *q, c.n_samples, c.seed, workers);
        out.table.rows.push_back(estimate_row(ctx, "crossing", coords, s, e.crossing, closed(cardy),
                                              std::nullopt, std::nullopt, out.passed));
        out.table.rows.push_back(estimate_row(ctx, "tripod", coords, s, e.tripod, closed(tripod),
                                              std::nullopt, std::nullopt, out.passed));
        out.estimates = {e.crossing, e.tripod};
        return out;
    }
    PercEvent ev;
    try {
        ev = perc_event_from_string(c.event);
    } catch (const std::invalid_argument&) {
        throw ConfigError("event", "unknown event '" + c.event + "'");
    }
    const bool quad_event = ev == PercEvent::Crossing || ev == PercEvent::Tripod;
    if (quad_event && !q) throw ConfigError("event", "crossing and tripod need a quad");
    const EstimateResult e = estimate(*d, quad_event ? q : std::nullopt, ev, c.n_samples, c.seed, workers);
    std::optional<double> expected;
    if (ev == PercEvent::Crossing) expected = closed(cardy);
    if (ev == PercEvent::Tripod) expected = closed(tripod);
    out.table.rows.push_back(estimate_row(ctx, c.event, quad_event ? coords : std::vector<std::string>(4),
                                          quad_event ? s : std::nullopt, e, expected, std::nullopt,
                                          std::nullopt, out.passed));
    out.estimates = {e};
    return out;
}

ExperimentOutput run_sle_mc(const ExperimentConfig& c) {
    check_positive_n(c);
    if (c.monitors < 0) throw ConfigError("monitors", "must be non-negative");
    if (!(c.dt >= 0.0)) throw ConfigError("dt", "must be non-negative");
    if (!(c.eps >= 0.0)) throw ConfigError("eps", "must be non-negative");
    ExperimentOutput out;
    out.table.header = estimate_columns();
    const RowContext ctx{c, config_hash(c)};
    const int workers = workers_of(c);
    auto configure = [&](double span) {
        SleConfig k = SleConfig::for_span(span);
        if (c.dt > 0.0) k.dt_base = c.dt;
        if (c.eps > 0.0) k.collision_eps = c.eps;
        k.monitor_count = c.monitors;
        k.kappa = c.kappa;
        return k;
    };

    if (c.sle_mode == "conditioned") {
        const EvalPoint& p = c.point;
        try {
            validate(p, 0.0);
        } catch (const std::invalid_argument& e) {
            throw ConfigError("v3", e.what());
        }
        const SleConfig k = configure(p.v2 - p.v3);
        const double s = cross_ratio_of(p);
        const EstimateResult e = estimate_conditioned(p, k, c.n_samples, c.seed, workers);
        out.table.rows.push_back(estimate_row(ctx, "conditioned", {num(p.v3), num(p.W), num(p.v1), num(p.v2)}, s, e,
                                              conditional_f(CrossRatio(s)), k.dt_base, k.collision_eps, out.passed));
        out.estimates = {e};
        return out;
    }
    if (c.sle_mode != "cardy" && c.sle_mode != "tripod" && c.sle_mode != "both")
        throw ConfigError("sle_mode", "unknown mode '" + c.sle_mode + "'");
    BoundaryQuad q;
    if (c.s_target > 0.0) {
        if (c.s_target >= 1.0) throw ConfigError("s_target", "must lie in (0, 1)");
        q = quad_for_cross_ratio(c.s_target);
    } else {
        q = {c.q1, c.q2, c.q3, c.q4};
        if (!(q.x1 < q.x2 && q.x2 < q.x3 && q.x3 < q.x4)) throw ConfigError("q1", "need q1 < q2 < q3 < q4");
    }
    const SleConfig k = configure(quad_span(q));
    const double s = cross_ratio(q).value();
    const SleEstimate e = estimate_sle(q, k, c.n_samples, c.seed, workers);
    const std::vector<std::string> coords = {num(q.x1), num(q.x2), num(q.x3), real_text(q.x4)};
    if (c.sle_mode != "tripod") {
        out.table.rows.push_back(estimate_row(ctx, "cardy", coords, s, e.cardy, cardy(CrossRatio(s)), k.dt_base,
                                              k.collision_eps, out.passed));
        out.estimates.push_back(e.cardy);
    }
    if (c.sle_mode != "cardy") {
        out.table.rows.push_back(estimate_row(ctx, "tripod", coords, s, e.tripod, tripod(CrossRatio(s)), k.dt_base,
                                              k.collision_eps, out.passed));
        out.estimates.push_back(e.tripod);
    }
    return out;
}

}  // namespace

ExperimentOutput run_experiment(const ExperimentConfig& c) {
    switch (c.mode) {
        case Mode::Eval: return run_eval(c);
        case Mode::VerifyIdentities: return run_identities(c);
        case Mode::PercEnum: return run_enum(c);
        case Mode::PercMc: return run_perc_mc(c);
        case Mode::SleMc: return run_sle_mc(c);
    }
    throw ConfigError("mode", "unhandled mode");
}

namespace {

std::string curve_of(const std::string& mode, const std::string& event) {
    if (event == "crossing" || event == "cardy") return "cardy";
    if (event == "tripod") return "tripod";
    if (event == "conditioned") return "f";
    return mode + "_" + event;
}

double cell_real(const std::string& v, const std::string& path) {
    double x = 0.0;
    if (v == "inf") return kInfinity;
    auto [end, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
    if (ec != std::errc() || end != v.data() + v.size()) throw SchemaError(path + ": bad number '" + v + "'");
    return x;
}

}  // namespace

ReportOutput report(const std::vector<std::string>& csv_paths, double z_max) {
    ReportOutput out;
    out.table.header = {"source", "curve", "s", "closed_form", "estimate", "std_error", "z", "ok"};
    std::map<std::string, std::vector<std::pair<double, double>>> closed;
    std::map<std::string, std::vector<std::array<double, 3>>> mc;
    for (const std::string& path : csv_paths) {
        const Table t = read_csv_file(path);
        if (t.header.empty()) continue;
        if (t.header == eval_columns()) {
            std::vector<std::array<double, 5>> rows;
            for (const auto& r : t.rows) {
                std::array<double, 5> v{};
                for (int i = 0; i < 5; ++i) v[i] = cell_real(r[i], path);
                rows.push_back(v);
                for (int i = 1; i < 5; ++i) {
                    closed[eval_columns()[i]].push_back({v[0], v[i]});
                    out.table.rows.push_back({path, eval_columns()[i], r[0], r[i], "", "", "", ""});
                }
                const double slack = 1e-12;
                if (!(v[2] <= v[3] + slack && v[3] <= v[1] + slack)) {
                    out.table.rows.push_back({path, "ordering", r[0], "", "", "", "", "0"});
                    out.passed = false;
                }
            }
            std::sort(rows.begin(), rows.end());
            for (std::size_t i = 1; i < rows.size(); ++i) {
                const auto& a = rows[i - 1];
                const auto& b = rows[i];
                const bool ok = b[1] >= a[1] - 1e-12 && b[3] >= a[3] - 1e-12 && b[4] <= a[4] + 1e-12;
                if (!ok) {
                    out.table.rows.push_back({path, "monotonicity", num(b[0]), "", "", "", "", "0"});
                    out.passed = false;
                }
            }
        } else if (t.header == estimate_columns()) {
            for (const auto& r : t.rows) {
                const std::string curve = curve_of(r[0], r[1]);
                const std::string& expected = r[14];
                const double p = cell_real(r[9], path);
                const double se = cell_real(r[10], path);
                const double s = r[6].empty() ? std::nan("") : cell_real(r[6], path);
                if (!r[6].empty()) mc[r[0] + "_" + curve].push_back({s, p, se});
                if (expected.empty()) {
                    out.table.rows.push_back({path, curve, r[6], "", r[9], r[10], "", ""});
                    continue;
                }
                const double e = cell_real(expected, path);
                const double z = se > 0.0 ? (p - e) / se : (p == e ? 0.0 : kInfinity);
                const bool ok = std::abs(z) <= z_max;
                out.passed = out.passed && ok;
                out.table.rows.push_back({path, curve, r[6], expected, r[9], r[10],
                                          std::isinf(z) ? real_text(z) : num(z), ok ? "1" : "0"});
            }
        } else if (t.header == check_columns()) {
            for (const auto& r : t.rows) {
                out.table.rows.push_back({path, r[0], r[1], "", r[2], "", "", r[4]});
                out.passed = out.passed && r[4] == "1";
            }
        } else {
            throw SchemaError(path + ": unrecognised column layout");
        }
    }
    for (auto& [name, pts] : closed) {
        std::sort(pts.begin(), pts.end());
        Table s{{"s", name}, {}};
        for (auto [x, y] : pts) s.rows.push_back({num(x), num(y)});
        out.series.emplace_back("closed_" + name, std::move(s));
    }
    for (auto& [name, pts] : mc) {
        std::sort(pts.begin(), pts.end());
        Table s{{"s", "p_hat", "std_error"}, {}};
        for (const auto& v : pts) s.rows.push_back({num(v[0]), num(v[1]), num(v[2])});
        out.series.emplace_back("mc_" + name, std::move(s));
    }
    return out;
}

}  // namespace wlab
