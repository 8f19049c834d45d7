// Copyright 2026 The qratchet Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <catch_amalgamated.hpp>

#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <sstream>

#include "commands.hpp"
#include "support.hpp"

using namespace qratchet;
using namespace qratchet::cli;

namespace {

namespace fs = std::filesystem;

std::string slurp(const fs::path &path) {
    std::ifstream f(path, std::ios::binary);
    REQUIRE(f);
    return {std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>()};
}

std::string golden(const std::string &name) {
    return slurp(fs::path(QRATCHET_GOLDEN_DIR) / name);
}

std::vector<std::vector<std::string>> parse_csv(const std::string &text) {
    std::vector<std::vector<std::string>> rows;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        std::vector<std::string> row;
        std::istringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) {
            row.push_back(cell);
        }
        rows.push_back(row);
    }
    return rows;
}

struct Scratch {
    fs::path dir;
    Scratch() {
        dir = fs::temp_directory_path() /
              ("qratchet_cli_" + std::to_string(::getpid()));
        fs::create_directories(dir);
    }
    ~Scratch() { fs::remove_all(dir); }
};

int run_cli(const std::string &args) {
    const std::string cmd =
        std::string(QRATCHET_CLI_PATH) + " " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    REQUIRE(WIFEXITED(status));
    return WEXITSTATUS(status);
}

// 12 significant digits round-trip to within half an ulp of the 12th digit.
void check_close(const std::string &cell, double expected) {
    const double v = std::stod(cell);
    CHECK(std::abs(v - expected) <= 1e-11 * std::max(1.0, std::abs(expected)));
}

} // namespace

TEST_CASE("number formatting") {
    CHECK(fmt(0.0) == "0");
    CHECK(fmt(-0.0) == "0");
    CHECK(fmt(0.5) == "0.5");
    CHECK(fmt(1.0 / 3.0) == "0.333333333333");
    CHECK(fmt(-0.0239164235792) == "-0.0239164235792");
    CHECK(fmt(1e-20) == "1e-20");
}

TEST_CASE("sweep validation") {
    SweepSpec s = default_po_spec();
    s.steps = 1;
    CHECK_THROWS_AS(s.validate(), UsageError);
    s = default_po_spec();
    s.start = 0.5;
    s.stop = 0.4;
    CHECK_THROWS_AS(s.validate(), UsageError);
    s = default_teff_spec();
    s.start = 0.0;
    CHECK_THROWS_AS(s.validate(), UsageError);
    s = default_po_spec();
    s.curves = {};
    CHECK_THROWS_AS(s.validate(), UsageError);
    const auto g = default_teff_spec().grid();
    CHECK(g.size() == 100);
    CHECK(g.front() == 0.1);
    CHECK(g.back() == 10.0);
}

TEST_CASE("fig2-po golden output") {
    const std::string out = cmd_fig2_po(default_po_spec());
    CHECK(out == golden("fig2_po.csv"));
    const auto rows = parse_csv(out);
    REQUIRE(rows.size() == 1 + 3 * 101);
    CHECK(rows[0] == std::vector<std::string>{"lambda", "beta", "p_o",
                                              "p_o_minus", "p_o_plus"});
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const double lambda = std::stod(rows[i][0]);
        const double beta = std::stod(rows[i][1]);
        check_close(rows[i][2], oracle::p_o(beta, 1.0, lambda));
        check_close(rows[i][3], oracle::p_o_minus(beta, lambda));
        check_close(rows[i][4], oracle::p_o_plus(beta, lambda));
    }
}

TEST_CASE("fig2-teff golden output") {
    const std::string out = cmd_fig2_teff(default_teff_spec());
    CHECK(out == golden("fig2_teff.csv"));
    const auto rows = parse_csv(out);
    REQUIRE(rows.size() == 1 + 3 * 100);
    CHECK(rows[0] == std::vector<std::string>{"beta", "lambda", "teff_ratio"});
    for (std::size_t i = 1; i < rows.size(); ++i) {
        check_close(rows[i][2], oracle::t_eff_ratio(std::stod(rows[i][0]), 1.0,
                                                    std::stod(rows[i][1])));
    }
}

TEST_CASE("fig2-work golden output") {
    const std::string out = cmd_fig2_work(default_work_spec());
    CHECK(out == golden("fig2_work.csv"));
    const auto rows = parse_csv(out);
    REQUIRE(rows.size() == 1 + 2 * 3 * 100);
    CHECK(rows[0] == std::vector<std::string>{"beta", "lambda", "mode",
                                              "ratchet_gain", "delta", "w_net"});
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const double beta = std::stod(rows[i][0]);
        const double lambda = std::stod(rows[i][1]);
        const bool random = rows[i][2] == "random";
        CHECK(rows[i][2] == (i <= 300 ? "random" : "deterministic"));
        const double gain = oracle::gain_tanh(beta, 1.0, lambda);
        const double delta = random ? oracle::delta_z(beta, 1.0, lambda) : 0.0;
        check_close(rows[i][3], gain);
        check_close(rows[i][4], delta);
        check_close(rows[i][5], gain - delta / beta);
        CHECK((random ? std::stod(rows[i][5]) <= 0.0 : std::stod(rows[i][5]) >= 0.0));
    }
}

TEST_CASE("zero-coupling sweep rows are all zero") {
    SweepSpec s = default_work_spec();
    s.curves = {0.0};
    s.steps = 7;
    const auto rows = parse_csv(cmd_fig2_work(s));
    REQUIRE(rows.size() == 1 + 2 * 7);
    for (std::size_t i = 1; i < rows.size(); ++i) {
        CHECK(rows[i][3] == "0");
        CHECK(rows[i][4] == "0");
        CHECK(rows[i][5] == "0");
    }
    EngineParams p;
    const auto d = nlohmann::json::parse(cmd_discord(p));
    CHECK(d["delta_z"].get<double>() == 0.0);
    CHECK(d["discord"].get<double>() == 0.0);
}

TEST_CASE("sweeps do not depend on thread count") {
    SweepSpec s = default_work_spec();
    s.threads = 8;
    CHECK(cmd_fig2_work(s) == golden("fig2_work.csv"));
}

TEST_CASE("cycle and discord JSON") {
    EngineParams p;
    p.lambda = 0.5;
    const auto cycle = nlohmann::json::parse(cmd_cycle(p, DeltaSource::z_basis).json);
    CHECK(std::abs(cycle["random"]["w_net"].get<double>() - oracle::ref::w_net_random) <
          1e-12);
    CHECK(cycle["deterministic"]["violation_expected"].get<bool>());
    CHECK_FALSE(cmd_cycle(p, DeltaSource::discord_minimum).random_mode_violation);
    const auto d = nlohmann::json::parse(cmd_discord(p));
    CHECK(std::abs(d["delta_z"].get<double>() - oracle::ref::delta_z) < 1e-12);
    CHECK(d["discord"].get<double>() <= d["delta_z"].get<double>());
}

TEST_CASE("command-line exit codes") {
    Scratch tmp;
    CHECK(run_cli("fig2-po --steps 5") == kExitOk);
    CHECK(run_cli("--bogus") == kExitUsage);
    CHECK(run_cli("") == kExitUsage);
    CHECK(run_cli("fig2-po --start 1 --stop 0") == kExitUsage);
    CHECK(run_cli("fig2-teff --start -1") == kExitUsage);
    CHECK(run_cli("cycle --beta -1") == kExitUsage);
    CHECK(run_cli("mc --boxes 0") == kExitUsage);
    CHECK(run_cli("mc --mode sideways") == kExitUsage);
    CHECK(run_cli("mc --config " + (tmp.dir / "missing.json").string()) == kExitUsage);
    CHECK(run_cli("cycle --delta-basis discord") == kExitOk);
    CHECK(run_cli("mc --boxes 1000") == kExitOk);
    // A deterministic demon violates the second law, which is the expected
    // counterfactual and not an error.
    CHECK(run_cli("mc --boxes 100000 --mode deterministic") == kExitOk);
}

TEST_CASE("command-line output files and determinism") {
    Scratch tmp;
    const auto a = tmp.dir / "a.json";
    const auto b = tmp.dir / "b.json";
    const auto dump = tmp.dir / "rec.bin";
    REQUIRE(run_cli("--out " + a.string() + " --threads 1 mc --boxes 20000") == 0);
    REQUIRE(run_cli("--out " + b.string() + " --threads 8 mc --boxes 20000 --chunk 999") == 0);
    CHECK(slurp(a) == slurp(b));

    REQUIRE(run_cli("mc --boxes 64 --seed 42 --dump " + dump.string()) == 0);
    CHECK(slurp(dump) == golden("record_n64_seed42.bin"));

    REQUIRE(run_cli("--out " + a.string() + " fig2-po") == 0);
    CHECK(slurp(a) == golden("fig2_po.csv"));
}

TEST_CASE("config file precedence") {
    Scratch tmp;
    const auto cfg = tmp.dir / "cfg.json";
    {
        std::ofstream f(cfg);
        f << R"({"seed": 7, "n_boxes": 500, "lambda": 0.3, "demon_mode": "deterministic"})";
    }
    const auto out = tmp.dir / "out.json";
    REQUIRE(run_cli("--out " + out.string() + " mc --config " + cfg.string() +
                " --seed 9") == 0);
    const auto j = nlohmann::json::parse(slurp(out));
    CHECK(j["seed"].get<int>() == 9);        // flag wins
    CHECK(j["n_boxes"].get<int>() == 500);   // config beats default
    CHECK(j["params"]["lambda"].get<double>() == 0.3);
    CHECK(j["mode"].get<std::string>() == "deterministic");
    CHECK(j["params"]["beta"].get<double>() == 1.0); // default

    {
        std::ofstream f(cfg);
        f << R"({"sed": 7})";
    }
    CHECK(run_cli("mc --config " + cfg.string()) == kExitUsage);
}
