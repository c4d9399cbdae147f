#pragma once

// Run configuration: a flat `key = value` file, one pair per line, '#'
// starts a comment.
//
//   problem     5.1 | 5.2 | 5.3 | 5.4 | custom           (required)
//   N           12 | 4:12:2 (start:stop:step) | 4,6,8   (required)
//   mode        solve | sweep | compare                  (required; the CLI subcommand sets it)
//   lambda      (0,1]; default 1/q for mu = p/q
//   alpha, beta collocation grid exponents, default -0.5
//   mu, eps, T  problem overrides (eps defaults to 0.5 where the problem leaves it open)
//   y0          initial value (5.4 and custom only)
//   a1, b1, f1, k1, k2   constant coefficients of a custom problem
//   forcing     corrected | printed                      (default corrected)
//   output      results CSV path                         (default results.csv)
//   plot        plot-data path                           (default <output stem>.dat)
//   nodal       nodal dump path, solve mode              (default <output stem>_nodal.csv)
//   linf_grid   uniform points for the max norm          (default 2001)
//   l2_points   Gauss points for the weighted L2 norm    (default 0 = max(4N,200))
//   quad_points product-quadrature size                  (default 0 = N+1)
//   ref_N       reference resolution                     (required for compare)
//   timing      on | off; off writes runtime_ms = 0      (default on)

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "muntz/problem.hpp"

namespace muntz {

class ConfigError : public std::runtime_error {
public:
    ConfigError(const std::string& what, int line) : std::runtime_error(what), line_(line) {}
    /// 1-based line of the offending text, 0 when not tied to a line.
    [[nodiscard]] int line() const noexcept { return line_; }

private:
    int line_;
};

class ValidationError : public std::invalid_argument {
public:
    ValidationError(const std::string& key, const std::string& what)
        : std::invalid_argument(key.empty() ? what : key + ": " + what), key_(key) {}
    [[nodiscard]] const std::string& key() const noexcept { return key_; }

private:
    std::string key_;
};

enum class Mode { Solve, Sweep, Compare };

inline const char* to_string(Mode m) {
    switch (m) {
        case Mode::Solve: return "solve";
        case Mode::Sweep: return "sweep";
        case Mode::Compare: return "compare";
    }
    return "?";
}

inline const char* to_string(ForcingVariant v) { return v == ForcingVariant::Printed ? "printed" : "corrected"; }

struct RunSpec {
    std::string problem;
    double mu = 0.5;
    double eps = 0.5;
    double T = 1.0;
    std::optional<double> y0;
    double a1 = 0.0, b1 = 0.0, f1 = 0.0, k1 = 0.0, k2 = 0.0;
    double lambda = 1.0;
    double alpha = -0.5;
    double beta = -0.5;
    std::vector<int> n_values;
    Mode mode = Mode::Sweep;
    ForcingVariant forcing = ForcingVariant::Corrected;
    std::string output = "results.csv";
    std::string plot_output;
    std::string nodal_output;
    std::size_t linf_grid = 2001;
    std::size_t l2_points = 0;
    std::size_t quad_points = 0;
    std::optional<int> ref_n;
    bool timing = true;

    bool operator==(const RunSpec&) const = default;
};

using KeyValue = std::pair<std::string, std::string>;

namespace detail {

inline std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

inline double parse_double(const std::string& key, const std::string& v) {
    // std::from_chars for double is available from GCC 11.
    double out = 0.0;
    const char* first = v.data();
    const char* last = v.data() + v.size();
    const auto [ptr, ec] = std::from_chars(first, last, out);
    if (ec != std::errc() || ptr != last || !std::isfinite(out)) throw ValidationError(key, "not a number: '" + v + "'");
    return out;
}

inline long parse_int(const std::string& key, const std::string& v) {
    long out = 0;
    const char* first = v.data();
    const char* last = v.data() + v.size();
    const auto [ptr, ec] = std::from_chars(first, last, out);
    if (ec != std::errc() || ptr != last) throw ValidationError(key, "not an integer: '" + v + "'");
    return out;
}

inline std::size_t parse_count(const std::string& key, const std::string& v) {
    const long n = parse_int(key, v);
    if (n < 0) throw ValidationError(key, "must be non-negative");
    return static_cast<std::size_t>(n);
}

/// "12", "4:12:2" (inclusive) or "4,6,8".
inline std::vector<int> parse_n_values(const std::string& v) {
    std::vector<int> out;
    if (v.find(':') != std::string::npos) {
        std::vector<std::string> parts;
        std::stringstream ss(v);
        std::string item;
        while (std::getline(ss, item, ':')) parts.push_back(trim(item));
        if (parts.size() != 3) throw ValidationError("N", "range must be start:stop:step");
        const long start = parse_int("N", parts[0]);
        const long stop = parse_int("N", parts[1]);
        const long step = parse_int("N", parts[2]);
        if (step <= 0) throw ValidationError("N", "range step must be positive");
        for (long n = start; n <= stop; n += step) out.push_back(static_cast<int>(n));
    } else {
        std::stringstream ss(v);
        std::string item;
        while (std::getline(ss, item, ',')) out.push_back(static_cast<int>(parse_int("N", trim(item))));
    }
    if (out.empty()) throw ValidationError("N", "range is empty");
    return out;
}

inline std::string stem_of(const std::string& path) {
    const auto slash = path.find_last_of('/');
    const auto dot = path.find_last_of('.');
    if (dot != std::string::npos && (slash == std::string::npos || dot > slash)) return path.substr(0, dot);
    return path;
}

inline double default_mu(const std::string& problem) {
    if (problem == "5.2") return 1.0 / 3.0;
    return 0.5;
}

inline double default_eps(const std::string& problem) { return problem == "5.2" ? 0.6 : 0.5; }

inline double default_T(const std::string& problem) {
    if (problem == "5.2" || problem == "5.4") return 0.5;
    return 1.0;
}

inline const std::vector<std::string>& known_keys() {
    static const std::vector<std::string> keys = {
        "problem", "N",      "mode",   "lambda",    "alpha",     "beta",        "mu",    "eps",
        "T",       "y0",     "a1",     "b1",        "f1",        "k1",          "k2",    "forcing",
        "output",  "plot",   "nodal",  "linf_grid", "l2_points", "quad_points", "ref_N", "timing"};
    return keys;
}

inline std::string format_exact(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace detail

/// Splits the text into key/value pairs. Throws ConfigError (with line number)
/// on malformed lines, unknown keys and repeated keys.
inline std::vector<KeyValue> parse_pairs(std::string_view text) {
    std::vector<KeyValue> pairs;
    std::map<std::string, int> seen;
    const auto& keys = detail::known_keys();
    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto nl = text.find('\n', pos);
        std::string_view line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
        pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        const std::string body = detail::trim(line);
        if (body.empty()) continue;
        const auto eq = body.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("line " + std::to_string(line_no) + ": expected 'key = value'", line_no);
        }
        std::string key = detail::trim(std::string_view(body).substr(0, eq));
        std::string value = detail::trim(std::string_view(body).substr(eq + 1));
        if (key.empty()) throw ConfigError("line " + std::to_string(line_no) + ": missing key", line_no);
        if (std::find(keys.begin(), keys.end(), key) == keys.end()) {
            throw ConfigError("line " + std::to_string(line_no) + ": unknown key '" + key + "'", line_no);
        }
        if (auto it = seen.find(key); it != seen.end()) {
            throw ConfigError("line " + std::to_string(line_no) + ": key '" + key + "' already set on line " +
                                  std::to_string(it->second),
                              line_no);
        }
        seen.emplace(key, line_no);
        pairs.emplace_back(std::move(key), std::move(value));
    }
    return pairs;
}

/// "key=value" as given to --set.
inline KeyValue parse_override(const std::string& text) {
    const auto eq = text.find('=');
    if (eq == std::string::npos) throw ConfigError("override '" + text + "' is not key=value", 0);
    KeyValue kv{detail::trim(std::string_view(text).substr(0, eq)), detail::trim(std::string_view(text).substr(eq + 1))};
    const auto& keys = detail::known_keys();
    if (std::find(keys.begin(), keys.end(), kv.first) == keys.end()) {
        throw ConfigError("unknown key '" + kv.first + "' in override", 0);
    }
    return kv;
}

/// Builds and validates a RunSpec; `overrides` replace values from the text.
inline RunSpec parse_config(std::string_view text, const std::vector<KeyValue>& overrides = {}) {
    std::map<std::string, std::string> kv;
    for (auto& [k, v] : parse_pairs(text)) kv[k] = v;
    for (const auto& [k, v] : overrides) kv[k] = v;

    std::vector<std::string> missing;
    for (const char* req : {"problem", "N", "mode"}) {
        if (!kv.count(req)) missing.emplace_back(req);
    }
    if (!missing.empty()) {
        std::string list;
        for (const auto& m : missing) list += (list.empty() ? "" : ", ") + m;
        throw ValidationError("", "missing required keys: " + list);
    }

    auto get = [&](const char* key) -> std::optional<std::string> {
        if (auto it = kv.find(key); it != kv.end()) return it->second;
        return std::nullopt;
    };
    auto num = [&](const char* key, double fallback) {
        const auto v = get(key);
        return v ? detail::parse_double(key, *v) : fallback;
    };

    RunSpec s;
    s.problem = *get("problem");
    const bool custom = s.problem == "custom";
    if (!custom && s.problem != "5.1" && s.problem != "5.2" && s.problem != "5.3" && s.problem != "5.4") {
        throw ValidationError("problem", "unknown problem '" + s.problem + "' (expected 5.1, 5.2, 5.3, 5.4 or custom)");
    }
    s.mu = num("mu", detail::default_mu(s.problem));
    s.eps = num("eps", detail::default_eps(s.problem));
    s.T = num("T", detail::default_T(s.problem));
    if (auto v = get("y0")) {
        if (s.problem != "5.4" && !custom) throw ValidationError("y0", "only problems 5.4 and custom take an initial value");
        s.y0 = detail::parse_double("y0", *v);
    }
    for (const char* c : {"a1", "b1", "f1", "k1", "k2"}) {
        if (get(c) && !custom) throw ValidationError(c, "constant coefficients apply to problem = custom only");
    }
    s.a1 = num("a1", 0.0);
    s.b1 = num("b1", 0.0);
    s.f1 = num("f1", 0.0);
    s.k1 = num("k1", 0.0);
    s.k2 = num("k2", 0.0);
    s.lambda = num("lambda", recommended_lambda(s.mu));
    s.alpha = num("alpha", -0.5);
    s.beta = num("beta", -0.5);
    s.n_values = detail::parse_n_values(*get("N"));

    const std::string mode = *get("mode");
    if (mode == "solve") s.mode = Mode::Solve;
    else if (mode == "sweep") s.mode = Mode::Sweep;
    else if (mode == "compare") s.mode = Mode::Compare;
    else throw ValidationError("mode", "expected solve, sweep or compare, got '" + mode + "'");

    if (auto v = get("forcing")) {
        if (*v == "corrected") s.forcing = ForcingVariant::Corrected;
        else if (*v == "printed") s.forcing = ForcingVariant::Printed;
        else throw ValidationError("forcing", "expected corrected or printed, got '" + *v + "'");
    }
    if (auto v = get("output")) s.output = *v;
    if (s.output.empty()) throw ValidationError("output", "path is empty");
    s.plot_output = get("plot").value_or(detail::stem_of(s.output) + ".dat");
    s.nodal_output = get("nodal").value_or(detail::stem_of(s.output) + "_nodal.csv");
    if (auto v = get("linf_grid")) s.linf_grid = detail::parse_count("linf_grid", *v);
    if (auto v = get("l2_points")) s.l2_points = detail::parse_count("l2_points", *v);
    if (auto v = get("quad_points")) s.quad_points = detail::parse_count("quad_points", *v);
    if (auto v = get("ref_N")) s.ref_n = static_cast<int>(detail::parse_int("ref_N", *v));
    if (auto v = get("timing")) {
        if (*v == "on" || *v == "true") s.timing = true;
        else if (*v == "off" || *v == "false") s.timing = false;
        else throw ValidationError("timing", "expected on or off, got '" + *v + "'");
    }

    if (!(s.lambda > 0.0 && s.lambda <= 1.0)) throw ValidationError("lambda", "must lie in (0,1]");
    if (!(s.alpha > -1.0)) throw ValidationError("alpha", "must exceed -1");
    if (!(s.beta > -1.0)) throw ValidationError("beta", "must exceed -1");
    if (!(s.mu >= 0.0 && s.mu < 1.0)) throw ValidationError("mu", "must lie in [0,1)");
    if (!(s.eps > 0.0 && s.eps < 1.0)) throw ValidationError("eps", "must lie in (0,1)");
    if (!(s.T > 0.0)) throw ValidationError("T", "must be positive");
    for (std::size_t k = 0; k < s.n_values.size(); ++k) {
        if (s.n_values[k] < 2) throw ValidationError("N", "every N must be at least 2");
        if (k > 0 && s.n_values[k] <= s.n_values[k - 1]) throw ValidationError("N", "values must be strictly increasing");
    }
    if (s.linf_grid < 2) throw ValidationError("linf_grid", "must be at least 2");
    if (s.mode == Mode::Solve && s.n_values.size() != 1) throw ValidationError("N", "solve mode takes a single N");
    if (s.mode == Mode::Compare && !s.ref_n) throw ValidationError("ref_N", "required in compare mode");
    if (s.ref_n && *s.ref_n <= s.n_values.back()) throw ValidationError("ref_N", "must exceed every N");
    const bool has_exact = s.problem == "5.1" || s.problem == "5.2" || s.problem == "5.3";
    if (!has_exact && !s.ref_n) {
        throw ValidationError("ref_N", "problem " + s.problem + " has no exact solution; give ref_N (or use compare)");
    }
    return s;
}

/// Inverse of parse_config: parse_config(render_config(s)) == s.
inline std::string render_config(const RunSpec& s) {
    std::ostringstream os;
    using detail::format_exact;
    os << "problem = " << s.problem << '\n';
    os << "mode = " << to_string(s.mode) << '\n';
    os << "N = ";
    for (std::size_t k = 0; k < s.n_values.size(); ++k) os << (k ? "," : "") << s.n_values[k];
    os << '\n';
    os << "mu = " << format_exact(s.mu) << '\n';
    os << "eps = " << format_exact(s.eps) << '\n';
    os << "T = " << format_exact(s.T) << '\n';
    if (s.y0) os << "y0 = " << format_exact(*s.y0) << '\n';
    if (s.problem == "custom") {
        os << "a1 = " << format_exact(s.a1) << '\n';
        os << "b1 = " << format_exact(s.b1) << '\n';
        os << "f1 = " << format_exact(s.f1) << '\n';
        os << "k1 = " << format_exact(s.k1) << '\n';
        os << "k2 = " << format_exact(s.k2) << '\n';
    }
    os << "lambda = " << format_exact(s.lambda) << '\n';
    os << "alpha = " << format_exact(s.alpha) << '\n';
    os << "beta = " << format_exact(s.beta) << '\n';
    os << "forcing = " << to_string(s.forcing) << '\n';
    os << "output = " << s.output << '\n';
    os << "plot = " << s.plot_output << '\n';
    os << "nodal = " << s.nodal_output << '\n';
    os << "linf_grid = " << s.linf_grid << '\n';
    os << "l2_points = " << s.l2_points << '\n';
    os << "quad_points = " << s.quad_points << '\n';
    if (s.ref_n) os << "ref_N = " << *s.ref_n << '\n';
    os << "timing = " << (s.timing ? "on" : "off") << '\n';
    return os.str();
}

}  // namespace muntz
