// scenario.hpp: scenario configuration (flat key = value files), time grids,
// and the trace / sweep-n dataset generators behind the command-line tool

#pragma once

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <istream>
#include <limits>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "pddqsl/correlations.hpp"
#include "pddqsl/dynamics.hpp"
#include "pddqsl/errors.hpp"
#include "pddqsl/pulses.hpp"
#include "pddqsl/qsl.hpp"
#include "pddqsl/spectral.hpp"

namespace pddqsl {

enum class InitialState { singlet, bell_phi_plus, custom };

inline std::string_view to_string(InitialState s) {
    switch (s) {
    case InitialState::singlet: return "singlet";
    case InitialState::bell_phi_plus: return "bell_phi_plus";
    case InitialState::custom: return "custom";
    }
    return "?";
}

inline std::string_view to_string(Window w) { return w == Window::running ? "running" : "fixed"; }

struct ScenarioConfig {
    double s{1.0};
    double eta{0.5};
    double omega_c{1.0};
    double tau_f{10.0};
    double tau_d{30.0};
    std::optional<std::size_t> n_pulses{};
    std::optional<double> pulse_spacing{};
    ProtocolTag protocol{ProtocolTag::Q11};
    InitialState initial_state{InitialState::singlet};
    std::array<double, 4> x_diag{0.0, 0.5, 0.5, 0.0};
    cplx x_a14{0.0, 0.0};
    cplx x_a23{-0.5, 0.0};
    std::size_t steps_per_interval{40};
    std::size_t min_grid_steps{2000};
    Window window{Window::running};
    std::vector<std::size_t> n_values{};
    std::string out{};

    friend bool operator==(const ScenarioConfig&, const ScenarioConfig&) = default;

    SpectralParams spectral() const { return SpectralParams{s, eta, omega_c}; }

    // N, from n_pulses or from the spacing tau_f / (N + 1).
    std::size_t resolved_pulses() const {
        if (n_pulses) return *n_pulses;
        if (pulse_spacing) {
            const double n = std::round(tau_f / *pulse_spacing) - 1.0;
            return n > 0.0 ? static_cast<std::size_t>(n) : 0;
        }
        return 0;
    }

    TwoQubitState initial() const {
        switch (initial_state) {
        case InitialState::singlet: return TwoQubitState::singlet();
        case InitialState::bell_phi_plus: return TwoQubitState::bell_phi_plus();
        case InitialState::custom: return make_x_state(x_diag, x_a14, x_a23);
        }
        return TwoQubitState::singlet();
    }

    void validate() const {
        auto require = [](bool ok, const char* field, const char* msg) {
            if (!ok) throw ConfigError(field, msg);
        };
        require(s > 0.0 && std::isfinite(s), "s", "must be > 0");
        require(eta >= 0.0 && std::isfinite(eta), "eta", "must be >= 0");
        require(omega_c > 0.0 && std::isfinite(omega_c), "omega_c", "must be > 0");
        require(tau_f > 0.0 && std::isfinite(tau_f), "tau_f", "must be > 0");
        require(tau_d >= tau_f && std::isfinite(tau_d), "tau_d", "must be >= tau_f");
        require(!(n_pulses && pulse_spacing), "pulse_spacing", "give either n_pulses or pulse_spacing, not both");
        if (pulse_spacing)
            require(*pulse_spacing > 0.0 && *pulse_spacing <= tau_f, "pulse_spacing", "must lie in (0, tau_f]");
        require(steps_per_interval >= 2, "steps_per_interval", "must be >= 2");
        require(min_grid_steps >= 1, "min_grid_steps", "must be >= 1");
        if (initial_state == InitialState::custom) {
            XStateSummary x{x_diag, x_a14, x_a23, 1.0};
            try {
                x.validate();
                (void)x.initial_state();
            } catch (const std::exception& e) {
                throw ConfigError("x_diag", std::string("invalid custom X-state: ") + e.what());
            }
        }
    }
};

// Numbers in datasets: 9 significant digits, locale independent; NaN is an empty cell.
inline std::string format_number(double v) {
    if (std::isnan(v)) return {};
    std::array<char, 64> buf{};
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v, std::chars_format::general, 9);
    return std::string(buf.data(), res.ptr);
}

namespace config_io {

inline std::string exact(double v) {
    std::array<char, 64> buf{};
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return std::string(buf.data(), res.ptr);
}

inline std::string_view trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

inline std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> parts;
    std::size_t start = 0;
    while (true) {
        const auto pos = s.find(sep, start);
        parts.push_back(trim(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return parts;
}

inline double to_double(std::string_view v, const std::string& key, std::size_t line) {
    double out = 0.0;
    const auto res = std::from_chars(v.data(), v.data() + v.size(), out);
    if (res.ec != std::errc{} || res.ptr != v.data() + v.size() || v.empty())
        throw ConfigError(key, "expected a number, got '" + std::string(v) + "'", line);
    return out;
}

inline std::size_t to_count(std::string_view v, const std::string& key, std::size_t line) {
    std::size_t out = 0;
    const auto res = std::from_chars(v.data(), v.data() + v.size(), out);
    if (res.ec != std::errc{} || res.ptr != v.data() + v.size() || v.empty())
        throw ConfigError(key, "expected a nonnegative integer, got '" + std::string(v) + "'", line);
    return out;
}

inline cplx to_complex(std::string_view v, const std::string& key, std::size_t line) {
    const auto parts = split(v, ',');
    if (parts.size() == 1) return {to_double(parts[0], key, line), 0.0};
    if (parts.size() == 2) return {to_double(parts[0], key, line), to_double(parts[1], key, line)};
    throw ConfigError(key, "expected 're' or 're,im'", line);
}

} // namespace config_io

// Applies one key = value assignment; used by the file parser and by CLI overrides.
inline void apply_setting(ScenarioConfig& cfg, const std::string& key, std::string_view value, std::size_t line = 0) {
    using namespace config_io;
    if (key == "s") cfg.s = to_double(value, key, line);
    else if (key == "eta") cfg.eta = to_double(value, key, line);
    else if (key == "omega_c") cfg.omega_c = to_double(value, key, line);
    else if (key == "tau_f") cfg.tau_f = to_double(value, key, line);
    else if (key == "tau_d") cfg.tau_d = to_double(value, key, line);
    else if (key == "n_pulses") cfg.n_pulses = to_count(value, key, line);
    else if (key == "pulse_spacing") cfg.pulse_spacing = to_double(value, key, line);
    else if (key == "protocol") {
        const auto tag = parse_protocol(value);
        if (!tag) throw ConfigError(key, "expected one of Q00, Q10, Q01, Q11", line);
        cfg.protocol = *tag;
    } else if (key == "initial_state") {
        if (value == "singlet") cfg.initial_state = InitialState::singlet;
        else if (value == "bell_phi_plus") cfg.initial_state = InitialState::bell_phi_plus;
        else if (value == "custom") cfg.initial_state = InitialState::custom;
        else throw ConfigError(key, "expected singlet, bell_phi_plus or custom", line);
    } else if (key == "x_diag") {
        const auto parts = split(value, ',');
        if (parts.size() != 4) throw ConfigError(key, "expected four comma-separated values", line);
        for (std::size_t i = 0; i < 4; ++i) cfg.x_diag[i] = to_double(parts[i], key, line);
    } else if (key == "x_a14") cfg.x_a14 = to_complex(value, key, line);
    else if (key == "x_a23") cfg.x_a23 = to_complex(value, key, line);
    else if (key == "steps_per_interval") cfg.steps_per_interval = to_count(value, key, line);
    else if (key == "min_grid_steps") cfg.min_grid_steps = to_count(value, key, line);
    else if (key == "window") {
        if (value == "running") cfg.window = Window::running;
        else if (value == "fixed") cfg.window = Window::fixed;
        else throw ConfigError(key, "expected running or fixed", line);
    } else if (key == "n_values") {
        cfg.n_values.clear();
        for (auto part : split(value, ',')) cfg.n_values.push_back(to_count(part, key, line));
    } else if (key == "out") cfg.out = std::string(value);
    else throw ConfigError(key, "unknown key", line);
}

// Flat "key = value" lines; '#' starts a comment. Each key may appear once.
inline ScenarioConfig parse_config(std::istream& in) {
    ScenarioConfig cfg;
    std::vector<std::string> seen;
    std::string raw;
    std::size_t line = 0;
    while (std::getline(in, raw)) {
        ++line;
        std::string_view text(raw);
        if (const auto hash = text.find('#'); hash != std::string_view::npos) text = text.substr(0, hash);
        text = config_io::trim(text);
        if (text.empty()) continue;
        const auto eq = text.find('=');
        if (eq == std::string_view::npos) throw ConfigError("", "expected 'key = value'", line);
        const std::string key(config_io::trim(text.substr(0, eq)));
        if (std::find(seen.begin(), seen.end(), key) != seen.end()) throw ConfigError(key, "duplicate key", line);
        seen.push_back(key);
        apply_setting(cfg, key, config_io::trim(text.substr(eq + 1)), line);
    }
    return cfg;
}

inline ScenarioConfig parse_config(std::string_view text) {
    std::istringstream in{std::string(text)};
    return parse_config(in);
}

// Inverse of parse_config (shortest round-trip number formatting).
inline std::string serialize_config(const ScenarioConfig& cfg) {
    using config_io::exact;
    std::ostringstream os;
    auto cplx_str = [](cplx z) { return exact(z.real()) + "," + exact(z.imag()); };
    os << "s = " << exact(cfg.s) << '\n'
       << "eta = " << exact(cfg.eta) << '\n'
       << "omega_c = " << exact(cfg.omega_c) << '\n'
       << "tau_f = " << exact(cfg.tau_f) << '\n'
       << "tau_d = " << exact(cfg.tau_d) << '\n';
    if (cfg.n_pulses) os << "n_pulses = " << *cfg.n_pulses << '\n';
    if (cfg.pulse_spacing) os << "pulse_spacing = " << exact(*cfg.pulse_spacing) << '\n';
    os << "protocol = " << to_string(cfg.protocol) << '\n'
       << "initial_state = " << to_string(cfg.initial_state) << '\n'
       << "x_diag = " << exact(cfg.x_diag[0]) << ',' << exact(cfg.x_diag[1]) << ',' << exact(cfg.x_diag[2]) << ','
       << exact(cfg.x_diag[3]) << '\n'
       << "x_a14 = " << cplx_str(cfg.x_a14) << '\n'
       << "x_a23 = " << cplx_str(cfg.x_a23) << '\n'
       << "steps_per_interval = " << cfg.steps_per_interval << '\n'
       << "min_grid_steps = " << cfg.min_grid_steps << '\n'
       << "window = " << to_string(cfg.window) << '\n';
    if (!cfg.n_values.empty()) {
        os << "n_values = ";
        for (std::size_t i = 0; i < cfg.n_values.size(); ++i) os << (i ? "," : "") << cfg.n_values[i];
        os << '\n';
    }
    if (!cfg.out.empty()) os << "out = " << cfg.out << '\n';
    return os.str();
}

// Grid over [0, tau_d] with 0, every pulse instant, tau_f and tau_d as nodes. Each
// segment gets at least steps_per_interval steps and no step exceeds tau_d / min_grid_steps.
inline std::vector<double> build_grid(const ScenarioConfig& cfg, const PulseSchedule& schedule) {
    std::vector<double> nodes{0.0};
    for (double t : schedule.instants()) nodes.push_back(t);
    nodes.push_back(cfg.tau_f);
    nodes.push_back(cfg.tau_d);
    std::sort(nodes.begin(), nodes.end());
    nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());

    std::vector<double> grid{0.0};
    const double density = static_cast<double>(cfg.min_grid_steps) / cfg.tau_d;
    for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
        const double a = nodes[i];
        const double b = nodes[i + 1];
        const auto by_density = static_cast<std::size_t>(std::ceil((b - a) * density - 1e-9));
        const std::size_t m = std::max(cfg.steps_per_interval, by_density);
        for (std::size_t k = 1; k < m; ++k)
            grid.push_back(a + (b - a) * static_cast<double>(k) / static_cast<double>(m));
        grid.push_back(b);
    }
    return grid;
}

namespace detail {

inline void write_metadata(std::ostream& os, std::string_view verb, const ScenarioConfig& cfg) {
    os << "# pddqsl " << verb << '\n';
    std::istringstream lines(serialize_config(cfg));
    std::string line;
    while (std::getline(lines, line))
        if (!line.starts_with("out = ")) os << "# " << line << '\n';
    os << "# n_resolved = " << cfg.resolved_pulses()
       << ", pulse_spacing_derived = " << format_number(pdd_spacing(cfg.resolved_pulses(), cfg.tau_f)) << '\n';
}

inline DephasingModel model_for(ProtocolTag tag, const PulseSchedule& schedule, const SpectralParams& p) {
    return DephasingModel(ControlProtocol{tag, schedule}, p);
}

} // namespace detail

// Columns: t, Q00, Q10, Q11, C_t, QC_t, QD_t, qslt_ratio, qslt_upper_bound.
// Correlations and QSL columns follow cfg.protocol. C_t is the concurrence of the
// evolved state (equal to C_0 |Q| for the singlet and Bell states).
inline void run_trace(const ScenarioConfig& cfg, std::ostream& os) {
    cfg.validate();
    const SpectralParams p = cfg.spectral();
    const PulseSchedule schedule = pdd_schedule(cfg.resolved_pulses(), cfg.tau_f);
    const auto grid = build_grid(cfg, schedule);
    const TwoQubitState rho0 = cfg.initial();
    const XStateSummary x0 = x_summary(rho0);

    const auto m00 = detail::model_for(ProtocolTag::Q00, schedule, p);
    const auto m10 = detail::model_for(ProtocolTag::Q10, schedule, p);
    const auto m11 = detail::model_for(ProtocolTag::Q11, schedule, p);
    const auto model = detail::model_for(cfg.protocol, schedule, p);

    const double nan = std::numeric_limits<double>::quiet_NaN();
    std::vector<double> ratio(grid.size(), nan);
    std::vector<double> bound(grid.size(), nan);
    std::vector<std::string> notes;
    try {
        const QslSeries series = qsl_series(rho0, model, grid, cfg.window);
        ratio = series.ratio;
        bound = series.upper_bound;
        if (std::all_of(ratio.begin(), ratio.end(), [](double v) { return std::isnan(v); }))
            notes.emplace_back("qslt columns empty: Q(t) is constant (frozen dynamics)");
    } catch (const NoCoherenceError&) {
        notes.emplace_back("qslt columns empty: initial state has no rho14/rho23 coherence");
    }
    if (cfg.initial_state != InitialState::singlet) notes.emplace_back("QD_t column empty: discord is singlet-only");

    detail::write_metadata(os, "trace", cfg);
    os << "t,Q00,Q10,Q11,C_t,QC_t,QD_t,qslt_ratio,qslt_upper_bound\n";
    const bool singlet = cfg.initial_state == InitialState::singlet;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double t = grid[i];
        XStateSummary x = x0;
        x.q = model.q(t);
        os << format_number(t) << ',' << format_number(m00.q(t)) << ',' << format_number(m10.q(t)) << ','
           << format_number(m11.q(t)) << ',' << format_number(concurrence_x_exact(x)) << ','
           << format_number(consonance(x)) << ',' << (singlet ? format_number(discord_singlet(x.q)) : std::string{})
           << ',' << format_number(ratio[i]) << ',' << format_number(bound[i]) << '\n';
    }
    for (const auto& note : notes) os << "# footnote: " << note << '\n';
}

// One row per (n, regime): short (window [0, tau_f]) and, when tau_d > tau_f, long ([0, tau_d]).
inline void run_sweep_n(const ScenarioConfig& cfg, std::ostream& os) {
    cfg.validate();
    if (cfg.n_values.empty()) throw ConfigError("n_values", "sweep-n needs at least one pulse count");
    const SpectralParams p = cfg.spectral();
    const TwoQubitState rho0 = cfg.initial();

    std::vector<std::string> notes;
    detail::write_metadata(os, "sweep-n", cfg);
    os << "n,spacing,regime,t_end,Q00,Q10,Q11,qslt_ratio,qslt_upper_bound\n";
    for (std::size_t n : cfg.n_values) {
        const PulseSchedule schedule = pdd_schedule(n, cfg.tau_f);
        const auto m00 = detail::model_for(ProtocolTag::Q00, schedule, p);
        const auto m10 = detail::model_for(ProtocolTag::Q10, schedule, p);
        const auto m11 = detail::model_for(ProtocolTag::Q11, schedule, p);
        const auto model = detail::model_for(cfg.protocol, schedule, p);

        std::vector<std::pair<const char*, double>> regimes{{"short", cfg.tau_f}};
        if (cfg.tau_d > cfg.tau_f) regimes.emplace_back("long", cfg.tau_d);
        for (const auto& [regime, t_end] : regimes) {
            double ratio = std::numeric_limits<double>::quiet_NaN();
            double bound = ratio;
            try {
                const QslInputs in = make_qsl_inputs(rho0, model, t_end, Window::running);
                ratio = qslt_ratio(in, t_end);
                bound = qslt_upper_bound(in, t_end);
            } catch (const FrozenDynamicsError&) {
                notes.push_back("n=" + std::to_string(n) + " " + regime + ": frozen dynamics, qslt cells empty");
            } catch (const NoCoherenceError&) {
                notes.push_back("n=" + std::to_string(n) + " " + regime + ": no coherence, qslt cells empty");
            }
            os << n << ',' << format_number(pdd_spacing(n, cfg.tau_f)) << ',' << regime << ','
               << format_number(t_end) << ',' << format_number(m00.q(t_end)) << ',' << format_number(m10.q(t_end))
               << ',' << format_number(m11.q(t_end)) << ',' << format_number(ratio) << ',' << format_number(bound)
               << '\n';
        }
    }
    for (const auto& note : notes) os << "# footnote: " << note << '\n';
}

} // namespace pddqsl
