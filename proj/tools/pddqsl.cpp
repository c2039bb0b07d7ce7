// pddqsl command-line front end (trace, sweep-n, verify)
//
// Exit codes: 0 success, 1 verify found failures, 2 config error, 3 numerical failure.

#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "pddqsl/pddqsl.hpp"

namespace {

constexpr int kExitVerifyFailed = 1;
constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

// Config keys exposed as --key (and --key-with-dashes).
const std::vector<std::string> kKeys = {"s",        "eta",           "omega_c",    "tau_f",  "tau_d",
                                        "n_pulses", "pulse_spacing", "protocol",   "initial_state",
                                        "x_diag",   "x_a14",         "x_a23",      "steps_per_interval",
                                        "min_grid_steps", "window",  "n_values"};

struct ScenarioFlags {
    std::string config_path;
    std::string out_path;
    std::map<std::string, std::string> values;
    std::map<std::string, CLI::Option*> options;

    void attach(CLI::App& app) {
        app.add_option("--config", config_path, "load a key = value scenario file (flags override it)");
        app.add_option("--out", out_path, "write the CSV here instead of standard output");
        for (const auto& key : kKeys) {
            std::string names = "--" + key;
            std::string dashed = key;
            for (auto& c : dashed)
                if (c == '_') c = '-';
            if (dashed != key) names += ",--" + dashed;
            options[key] = app.add_option(names, values[key], "scenario field " + key);
        }
    }

    pddqsl::ScenarioConfig resolve() const {
        pddqsl::ScenarioConfig cfg;
        if (!config_path.empty()) {
            std::ifstream in(config_path);
            if (!in) throw pddqsl::ConfigError("config", "cannot open '" + config_path + "'");
            cfg = pddqsl::parse_config(in);
        }
        for (const auto& key : kKeys)
            if (options.at(key)->count() > 0) {
                // n_pulses and pulse_spacing are alternatives; a flag for one replaces the other.
                if (key == "n_pulses") cfg.pulse_spacing.reset();
                if (key == "pulse_spacing") cfg.n_pulses.reset();
                pddqsl::apply_setting(cfg, key, values.at(key));
            }
        if (!out_path.empty()) cfg.out = out_path;
        return cfg;
    }
};

template <class Run>
int emit(const pddqsl::ScenarioConfig& cfg, Run&& run) {
    if (cfg.out.empty()) {
        run(cfg, std::cout);
        return 0;
    }
    // Build in memory so a numerical failure never leaves a truncated file behind.
    std::ostringstream buffer;
    run(cfg, buffer);
    std::ofstream out(cfg.out, std::ios::binary);
    if (!out) throw pddqsl::ConfigError("out", "cannot write '" + cfg.out + "'");
    out << buffer.str();
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Two-qubit pure dephasing under periodic dynamical decoupling: correlations and QSL time"};
    app.require_subcommand(1);

    ScenarioFlags trace_flags;
    auto* trace = app.add_subcommand("trace", "time trace of Q, correlations and QSL ratio over [0, tau_d]");
    trace_flags.attach(*trace);

    ScenarioFlags sweep_flags;
    auto* sweep = app.add_subcommand("sweep-n", "Q and QSL ratio at tau_f and tau_d for each pulse count");
    sweep_flags.attach(*sweep);

    double tolerance_scale = 1.0;
    auto* verify = app.add_subcommand("verify", "run the invariant suite and report pass/fail");
    verify->add_option("--tolerance-scale", tolerance_scale, "multiply every tolerance (0 forces failures)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitConfig;
    }

    try {
        if (*trace) return emit(trace_flags.resolve(), [](const auto& c, std::ostream& os) { pddqsl::run_trace(c, os); });
        if (*sweep)
            return emit(sweep_flags.resolve(), [](const auto& c, std::ostream& os) { pddqsl::run_sweep_n(c, os); });
        if (*verify) {
            pddqsl::VerifyOptions opt;
            opt.tolerance_scale = tolerance_scale;
            const auto report = pddqsl::run_verify(opt);
            report.print(std::cout);
            return report.all_passed() ? 0 : kExitVerifyFailed;
        }
    } catch (const pddqsl::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const pddqsl::NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return kExitNumerical;
    } catch (const pddqsl::DomainError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const pddqsl::InvalidStateError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    }
    return 0;
}
