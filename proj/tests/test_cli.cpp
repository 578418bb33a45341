// Copyright 2026 The qiv Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Drives the installed binary through std::system. ctest exports QIV_CLI with
// the binary location; run these from a writable directory.

#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#ifndef _WIN32
#include <sys/wait.h>
#endif

#include "json.hpp"

#include "qiv/bounds.hpp"
#include "qiv/quantum.hpp"

using namespace qiv;

namespace {

struct CliResult {
    int code = -1;
    std::string out;
    std::string err;
};

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void spill(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    out << content;
}

CliResult run_cli(const std::string& args, const std::string& stdinPath = "") {
    const char* bin = std::getenv("QIV_CLI");
    REQUIRE_MESSAGE(bin != nullptr, "QIV_CLI must point at the qiv binary");
    std::string cmd = std::string("\"") + bin + "\" " + args;
    cmd += " >cli_stdout.txt 2>cli_stderr.txt";
#ifndef _WIN32
    cmd += stdinPath.empty() ? std::string(" </dev/null") : " <" + stdinPath;
#else
    if (!stdinPath.empty()) {
        cmd += " <" + stdinPath;
    }
#endif
    const int raw = std::system(cmd.c_str());
    CliResult r;
#ifdef _WIN32
    r.code = raw;
#else
    r.code = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
#endif
    r.out = slurp("cli_stdout.txt");
    r.err = slurp("cli_stderr.txt");
    return r;
}

void write_bell_file() {
    REQUIRE(run_cli("preset --name bell --out cli_bell.json").code == 0);
}

void write_obs_file() {
    write_bell_file();
    REQUIRE(run_cli("simulate --scenario cli_bell.json --out cli_obs.json").code == 0);
}

}  // namespace

TEST_CASE("preset writes the bell scenario") {
    const CliResult toFile = run_cli("preset --name bell --out cli_bell.json");
    REQUIRE(toFile.code == 0);
    const nlohmann::json j = nlohmann::json::parse(slurp("cli_bell.json"));
    CHECK(j == nlohmann::json(bell_preset()));

    const CliResult toStdout = run_cli("preset");
    REQUIRE(toStdout.code == 0);
    CHECK(nlohmann::json::parse(toStdout.out) == nlohmann::json(bell_preset()));
}

TEST_CASE("simulate matches the library born rule") {
    write_bell_file();
    const CliResult r = run_cli("simulate --scenario cli_bell.json --out cli_obs.json");
    REQUIRE(r.code == 0);
    const nlohmann::json obs = nlohmann::json::parse(slurp("cli_obs.json"));
    CHECK(obs == nlohmann::json(born_distribution(bell_preset())));

    const CliResult viaStdin = run_cli("simulate --scenario -", "cli_bell.json");
    REQUIRE(viaStdin.code == 0);
    CHECK(nlohmann::json::parse(viaStdin.out) == obs);
}

TEST_CASE("bounds reports the stratified interval") {
    write_obs_file();
    const CliResult r = run_cli("bounds --dist cli_obs.json --assumptions strat");
    REQUIRE(r.code == 0);
    const nlohmann::json j = nlohmann::json::parse(r.out);
    CHECK(j.at("assumptions") == "JE_STRATIFIED_ER");
    CHECK(j.at("rows") == 34);
    CHECK(j.at("lowerStatus") == "OPTIMAL");
    CHECK(j.at("upperStatus") == "OPTIMAL");
    const double stratLower = (5.0 * std::sqrt(2.0) - 6.0) / 8.0;
    CHECK(j.at("lower").get<double>() == doctest::Approx(stratLower).epsilon(1e-9));
    CHECK(j.at("upper").get<double>() == doctest::Approx(0.5).epsilon(1e-9));
    REQUIRE(j.at("witnessLower").is_array());
    CHECK(j.at("witnessLower").size() == 64);
    REQUIRE(j.at("witnessUpper").is_array());
    CHECK(j.at("witnessUpper").size() == 64);

    CHECK(nlohmann::json::parse(run_cli("bounds --dist cli_obs.json").out).at("rows") == 34);
    CHECK(nlohmann::json::parse(run_cli("bounds --dist cli_obs.json --assumptions je").out)
              .at("rows") == 26);
    CHECK(nlohmann::json::parse(run_cli("bounds --dist cli_obs.json --assumptions indiv").out)
              .at("rows") == 82);

    const CliResult viaStdin = run_cli("bounds --dist -", "cli_obs.json");
    REQUIRE(viaStdin.code == 0);
    CHECK(nlohmann::json::parse(viaStdin.out).at("rows") == 34);
}

TEST_CASE("bounds dumps the tableau on request") {
    write_obs_file();
    const CliResult r = run_cli("bounds --dist cli_obs.json --assumptions strat --dump-lp");
    REQUIRE(r.code == 0);
    CHECK(r.err.rfind("min\t", 0) == 0);
    CHECK(std::count(r.err.begin(), r.err.end(), '\n') == 35);
    CHECK(nlohmann::json::parse(r.out).at("rows") == 34);
}

TEST_CASE("falsify prints a verdict and honors fail-on-violation") {
    write_bell_file();
    const CliResult ok = run_cli("falsify --scenario cli_bell.json");
    REQUIRE(ok.code == 0);
    CHECK(ok.out.find("verdict: JOINT_EXOGENEITY_FALSIFIED") != std::string::npos);
    CHECK(ok.out.find("\x1b[") == std::string::npos);

    const CliResult strict = run_cli("falsify --scenario cli_bell.json --fail-on-violation");
    CHECK(strict.code == 4);
}

TEST_CASE("falsify emits machine-readable json") {
    write_bell_file();
    const CliResult r = run_cli("falsify --scenario cli_bell.json --format json");
    REQUIRE(r.code == 0);
    const nlohmann::json j = nlohmann::json::parse(r.out);
    CHECK(j.at("verdict") == "JOINT_EXOGENEITY_FALSIFIED");
    CHECK(j.at("margin").get<double>() == doctest::Approx(0.1339).epsilon(5e-4));
    CHECK(j.at("marginalExogeneity").at("holds") == true);
}

TEST_CASE("falsify accepts the maximally mixed state") {
    write_bell_file();
    nlohmann::json j = nlohmann::json::parse(slurp("cli_bell.json"));
    Matrix mixed = Matrix::identity(4);
    mixed *= Complex(0.25, 0.0);
    j["rho"] = mixed;
    spill("cli_mixed.json", j.dump(2) + "\n");

    const CliResult r = run_cli("falsify --scenario cli_mixed.json --fail-on-violation");
    REQUIRE(r.code == 0);
    CHECK(r.out.find("verdict: CONSISTENT") != std::string::npos);
}

TEST_CASE("classical evaluates and checks the uniform model") {
    nlohmann::json model{{"weights", std::vector<double>(16, 1.0 / 16.0)}};
    spill("cli_model.json", model.dump() + "\n");

    const CliResult plain = run_cli("classical --model cli_model.json");
    REQUIRE(plain.code == 0);
    const nlohmann::json pj = nlohmann::json::parse(plain.out);
    CHECK(pj.at("trueAce").get<double>() == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(pj.contains("observed"));
    CHECK(!pj.contains("bounds"));

    const CliResult checked = run_cli("classical --model cli_model.json --check");
    REQUIRE(checked.code == 0);
    const nlohmann::json cj = nlohmann::json::parse(checked.out);
    CHECK(cj.at("allContained") == true);
    CHECK(cj.at("bounds").size() == 3);
    CHECK(cj.at("contained").at("JE_STRATIFIED_ER") == true);
    CHECK(cj.at("observed").at("p")[0][0][0].get<double>() ==
          doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("usage errors exit with code 1") {
    CHECK(run_cli("").code == 1);
    CHECK(run_cli("frobnicate").code == 1);
    CHECK(run_cli("bounds --dist cli_obs.json --assumptions bogus").code == 1);
    CHECK(run_cli("falsify --scenario cli_bell.json --format yaml").code == 1);
    CHECK(run_cli("preset --name qqq").code == 1);

    const CliResult help = run_cli("--help");
    CHECK(help.code == 0);
    CHECK(help.out.find("Usage") != std::string::npos);
}

TEST_CASE("validation errors exit with code 2") {
    CHECK(run_cli("simulate --scenario cli_no_such_file.json").code == 2);

    spill("cli_bad.json", "{ not json");
    CHECK(run_cli("simulate --scenario cli_bad.json").code == 2);

    write_bell_file();
    nlohmann::json j = nlohmann::json::parse(slurp("cli_bell.json"));
    Matrix doubled = bell_preset().rho.mat;
    doubled *= Complex(2.0, 0.0);
    j["rho"] = doubled;
    spill("cli_bad_scenario.json", j.dump(2) + "\n");
    const CliResult r = run_cli("simulate --scenario cli_bad_scenario.json");
    CHECK(r.code == 2);
    CHECK(r.err.find("unit trace") != std::string::npos);

    ObservedDistribution uniform;
    for (int z = 0; z < 2; ++z) {
        for (int x = 0; x < 2; ++x) {
            for (int y = 0; y < 2; ++y) {
                uniform.p[z][x][y] = 0.25;
            }
        }
    }
    nlohmann::json dist = uniform;
    dist["p"][0][0][0] = 0.26;
    spill("cli_bad_dist.json", dist.dump() + "\n");
    CHECK(run_cli("bounds --dist cli_bad_dist.json").code == 2);
}
