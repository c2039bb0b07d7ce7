#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <sys/wait.h>

#include <gtest/gtest.h>

#include "pddqsl/scenario.hpp"

using namespace pddqsl;

namespace {

struct Csv {
    std::vector<std::string> comments;
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    std::size_t column(const std::string& name) const {
        for (std::size_t i = 0; i < header.size(); ++i)
            if (header[i] == name) return i;
        throw std::runtime_error("no column " + name);
    }
    double at(std::size_t row, const std::string& name) const { return std::stod(rows.at(row).at(column(name))); }
    std::string cell(std::size_t row, const std::string& name) const { return rows.at(row).at(column(name)); }
};

std::vector<std::string> split_row(const std::string& line) {
    std::vector<std::string> out;
    std::string cell;
    std::istringstream in(line);
    while (std::getline(in, cell, ',')) out.push_back(cell);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

Csv parse_csv(const std::string& text) {
    Csv csv;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (line.starts_with("#")) csv.comments.push_back(line);
        else if (csv.header.empty()) csv.header = split_row(line);
        else csv.rows.push_back(split_row(line));
    }
    return csv;
}

Csv trace(const ScenarioConfig& cfg) {
    std::ostringstream os;
    run_trace(cfg, os);
    return parse_csv(os.str());
}

Csv sweep(const ScenarioConfig& cfg) {
    std::ostringstream os;
    run_sweep_n(cfg, os);
    return parse_csv(os.str());
}

std::size_t row_at(const Csv& csv, double t) {
    for (std::size_t i = 0; i < csv.rows.size(); ++i)
        if (std::abs(csv.at(i, "t") - t) < 1e-12) return i;
    throw std::runtime_error("no row at t");
}

int run_cli(const std::string& args) {
    const std::string cmd = std::string(PDDQSL_CLI) + " " + args + " > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

} // namespace

TEST(Config, RoundTrip) {
    ScenarioConfig cfg;
    cfg.s = 0.1 + 0.2;
    cfg.eta = 1.0 / 3.0;
    cfg.tau_d = 45.5;
    cfg.n_pulses = 17;
    cfg.protocol = ProtocolTag::Q01;
    cfg.initial_state = InitialState::custom;
    cfg.x_diag = {0.1, 0.4, 0.3, 0.2};
    cfg.x_a14 = cplx(0.1, -0.05);
    cfg.x_a23 = cplx(-0.2, 1.0 / 7.0);
    cfg.window = Window::fixed;
    cfg.n_values = {0, 5, 100};
    cfg.out = "out.csv";
    const auto text = serialize_config(cfg);
    const auto back = parse_config(text);
    EXPECT_EQ(back, cfg);
    EXPECT_EQ(serialize_config(back), text);

    ScenarioConfig spacing;
    spacing.pulse_spacing = 0.5;
    EXPECT_EQ(parse_config(serialize_config(spacing)), spacing);
    EXPECT_EQ(parse_config(serialize_config(ScenarioConfig{})), ScenarioConfig{});
}

TEST(Config, CommentsAndWhitespace) {
    const auto cfg = parse_config("# header\n\n  s = 3   # super-Ohmic\ntau_f=10\nprotocol = Q10\n");
    EXPECT_EQ(cfg.s, 3.0);
    EXPECT_EQ(cfg.protocol, ProtocolTag::Q10);
}

TEST(Config, ErrorsCarryLineAndField) {
    auto expect_error = [](const std::string& text, const std::string& field, std::size_t line) {
        try {
            parse_config(text);
            FAIL() << "expected ConfigError for: " << text;
        } catch (const ConfigError& e) {
            EXPECT_EQ(e.field(), field) << text;
            EXPECT_EQ(e.line(), line) << text;
        }
    };
    expect_error("s = 1\neta = abc\n", "eta", 2);
    expect_error("s = 1\n\ncolour = red\n", "colour", 3);
    expect_error("s = 1\ns = 2\n", "s", 2);
    expect_error("protocol = Q22\n", "protocol", 1);
    expect_error("n_pulses = -3\n", "n_pulses", 1);
    expect_error("just text\n", "", 1);
    expect_error("x_diag = 1,2,3\n", "x_diag", 1);
}

TEST(Config, Validation) {
    auto invalid = [](auto mutate, const std::string& field) {
        ScenarioConfig cfg;
        mutate(cfg);
        try {
            cfg.validate();
            FAIL() << "expected ConfigError on " << field;
        } catch (const ConfigError& e) {
            EXPECT_EQ(e.field(), field);
        }
    };
    invalid([](ScenarioConfig& c) { c.s = -1.0; }, "s");
    invalid([](ScenarioConfig& c) { c.omega_c = 0.0; }, "omega_c");
    invalid([](ScenarioConfig& c) { c.tau_d = 5.0; }, "tau_d");
    invalid([](ScenarioConfig& c) { c.steps_per_interval = 1; }, "steps_per_interval");
    invalid([](ScenarioConfig& c) { c.n_pulses = 3; c.pulse_spacing = 1.0; }, "pulse_spacing");
    invalid(
        [](ScenarioConfig& c) {
            c.initial_state = InitialState::custom;
            c.x_a23 = 0.9;
        },
        "x_diag");
    EXPECT_NO_THROW(ScenarioConfig{}.validate());
}

TEST(Config, PulseSpacingResolvesToCount) {
    ScenarioConfig cfg;
    EXPECT_EQ(cfg.resolved_pulses(), 0u);
    cfg.pulse_spacing = 10.0 / 11.0;
    EXPECT_EQ(cfg.resolved_pulses(), 10u);
    cfg.pulse_spacing = 0.1;
    EXPECT_EQ(cfg.resolved_pulses(), 99u);
    cfg.pulse_spacing = 10.0;
    EXPECT_EQ(cfg.resolved_pulses(), 0u);
}

TEST(Grid, ContainsNodesAndRespectsDensity) {
    ScenarioConfig cfg;
    cfg.n_pulses = 10;
    const auto sched = pdd_schedule(10, cfg.tau_f);
    const auto grid = build_grid(cfg, sched);
    EXPECT_EQ(grid.front(), 0.0);
    EXPECT_EQ(grid.back(), cfg.tau_d);
    EXPECT_TRUE(std::binary_search(grid.begin(), grid.end(), cfg.tau_f));
    for (double t : sched.instants()) EXPECT_TRUE(std::binary_search(grid.begin(), grid.end(), t));
    EXPECT_GE(grid.size(), cfg.min_grid_steps + 1);
    for (std::size_t i = 1; i < grid.size(); ++i) {
        EXPECT_GT(grid[i], grid[i - 1]);
        EXPECT_LE(grid[i] - grid[i - 1], cfg.tau_d / static_cast<double>(cfg.min_grid_steps) + 1e-12);
    }
    // 100 pulses: every inter-pulse interval still gets steps_per_interval steps.
    cfg.n_pulses = 100;
    const auto dense_sched = pdd_schedule(100, cfg.tau_f);
    const auto dense = build_grid(cfg, dense_sched);
    const auto tau = dense_sched.instants();
    for (std::size_t k = 0; k + 1 < tau.size(); ++k) {
        const auto a = std::lower_bound(dense.begin(), dense.end(), tau[k]);
        const auto b = std::lower_bound(dense.begin(), dense.end(), tau[k + 1]);
        EXPECT_GE(static_cast<std::size_t>(b - a), cfg.steps_per_interval);
    }
}

TEST(FormatNumber, NineSignificantDigits) {
    EXPECT_EQ(format_number(0.70710678118654752), "0.707106781");
    EXPECT_EQ(format_number(1.0), "1");
    EXPECT_EQ(format_number(30.0), "30");
    EXPECT_EQ(format_number(1.5e-12), "1.5e-12");
    EXPECT_EQ(format_number(std::nan("")), "");
}

TEST(Trace, FirstRowAndOhmicAnchor) {
    ScenarioConfig cfg;
    cfg.protocol = ProtocolTag::Q00;
    cfg.min_grid_steps = 3000;  // puts t = 1 on the grid
    const auto csv = trace(cfg);
    ASSERT_EQ(csv.header.size(), 9u);
    EXPECT_EQ(csv.header.front(), "t");
    EXPECT_EQ(csv.at(0, "t"), 0.0);
    for (const char* col : {"Q00", "Q10", "Q11", "C_t", "QD_t"}) EXPECT_EQ(csv.at(0, col), 1.0) << col;
    EXPECT_EQ(csv.at(0, "QC_t"), -1.0);
    EXPECT_EQ(csv.cell(0, "qslt_ratio"), "");
    EXPECT_FALSE(csv.cell(1, "qslt_ratio").empty());

    const auto r = row_at(csv, 1.0);
    EXPECT_NEAR(csv.at(r, "Q00"), 0.70711, 5e-6);
    EXPECT_NEAR(csv.at(r, "C_t"), 0.70711, 5e-6);
    EXPECT_NEAR(csv.at(r, "qslt_ratio"), 1.0, 1e-6);
    EXPECT_EQ(csv.rows.size(), 3001u);
}

TEST(Trace, MorePulsesKeepQ11CloserToOne) {
    ScenarioConfig cfg;
    cfg.s = 3.0;
    cfg.n_pulses = 20;
    const auto n20 = trace(cfg);
    cfg.n_pulses = 100;
    const auto n100 = trace(cfg);
    const double q20 = n20.at(row_at(n20, 10.0), "Q11");
    const double q100 = n100.at(row_at(n100, 10.0), "Q11");
    EXPECT_GT(q100, q20);
}

TEST(Trace, FrozenDynamicsLeavesEmptyCellsAndFootnote) {
    ScenarioConfig cfg;
    cfg.eta = 0.0;
    cfg.min_grid_steps = 100;
    const auto csv = trace(cfg);
    for (std::size_t i = 0; i < csv.rows.size(); ++i) EXPECT_EQ(csv.cell(i, "qslt_ratio"), "");
    ASSERT_FALSE(csv.comments.empty());
    EXPECT_NE(csv.comments.back().find("footnote"), std::string::npos);
}

TEST(Trace, NonSingletLeavesDiscordEmpty) {
    ScenarioConfig cfg;
    cfg.initial_state = InitialState::bell_phi_plus;
    cfg.min_grid_steps = 100;
    const auto csv = trace(cfg);
    EXPECT_EQ(csv.cell(5, "QD_t"), "");
    EXPECT_NEAR(csv.at(0, "QC_t"), 1.0, 1e-15);
}

TEST(SweepN, ZeroPulsesMatchesTrace) {
    ScenarioConfig cfg;
    cfg.n_values = {0};
    const auto sw = sweep(cfg);
    ASSERT_EQ(sw.rows.size(), 2u);
    ScenarioConfig tc;
    const auto tr = trace(tc);
    for (std::size_t r = 0; r < 2; ++r) {
        const double t_end = sw.at(r, "t_end");
        const auto i = row_at(tr, t_end);
        for (const char* col : {"Q00", "Q10", "Q11"}) EXPECT_EQ(sw.cell(r, col), tr.cell(i, col)) << col;
        EXPECT_NEAR(sw.at(r, "qslt_ratio"), tr.at(i, "qslt_ratio"), 1e-8);
    }
    EXPECT_EQ(sw.cell(0, "regime"), "short");
    EXPECT_EQ(sw.cell(1, "regime"), "long");
}

TEST(SweepN, RecoveryTrends) {
    for (double s : {1.0, 3.0}) {
        ScenarioConfig cfg;
        cfg.s = s;
        cfg.n_values = {10, 20, 100};
        const auto sw = sweep(cfg);
        std::vector<double> q_short;
        for (std::size_t r = 0; r < sw.rows.size(); ++r)
            if (sw.cell(r, "regime") == "short") q_short.push_back(sw.at(r, "Q11"));
        ASSERT_EQ(q_short.size(), 3u);
        EXPECT_LT(q_short[0], q_short[1]) << "s=" << s;
        EXPECT_LT(q_short[1], q_short[2]) << "s=" << s;
    }
}

TEST(SweepN, RequiresPulseCounts) {
    std::ostringstream os;
    EXPECT_THROW(run_sweep_n(ScenarioConfig{}, os), ConfigError);
}

TEST(Output, ByteStable) {
    ScenarioConfig cfg;
    cfg.s = 3.0;
    cfg.n_pulses = 10;
    cfg.min_grid_steps = 500;
    std::ostringstream a, b;
    run_trace(cfg, a);
    run_trace(cfg, b);
    EXPECT_EQ(a.str(), b.str());
    EXPECT_EQ(a.str().find("e+"), std::string::npos);
}

TEST(Cli, ExitCodes) {
    EXPECT_EQ(run_cli("trace --s -1"), 2);
    EXPECT_EQ(run_cli("trace --protocol Q99"), 2);
    EXPECT_EQ(run_cli("trace --config /nonexistent/file.cfg"), 2);
    EXPECT_EQ(run_cli("sweep-n --tau-d 3"), 2);
    EXPECT_EQ(run_cli("frobnicate"), 2);
    EXPECT_EQ(run_cli("trace --min-grid-steps 50 --n-pulses 3"), 0);
    EXPECT_EQ(run_cli("verify --tolerance-scale 0"), 1);
}

TEST(Cli, FlagsOverrideConfigFile) {
    const std::string dir = ::testing::TempDir();
    const std::string cfg_path = dir + "/pddqsl_override.cfg";
    const std::string out_a = dir + "/pddqsl_a.csv";
    const std::string out_b = dir + "/pddqsl_b.csv";
    {
        std::ofstream f(cfg_path);
        f << "s = 3\nn_pulses = 4\nmin_grid_steps = 60\n";
    }
    ASSERT_EQ(run_cli("trace --config " + cfg_path + " --n-pulses 7 --out " + out_a), 0);
    ASSERT_EQ(run_cli("trace --s 3 --n_pulses 7 --min-grid-steps 60 --out " + out_b), 0);
    auto slurp = [](const std::string& p) {
        std::ifstream f(p);
        std::stringstream ss;
        ss << f.rdbuf();
        return ss.str();
    };
    EXPECT_EQ(slurp(out_a), slurp(out_b));
    EXPECT_NE(slurp(out_a).find("n_pulses = 7"), std::string::npos);
}
