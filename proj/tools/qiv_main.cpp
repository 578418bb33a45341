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

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#ifdef _WIN32
#include <io.h>
#define QIV_ISATTY _isatty
#define QIV_FILENO _fileno
#else
#include <unistd.h>
#define QIV_ISATTY isatty
#define QIV_FILENO fileno
#endif

#include "CLI11.hpp"

#include "qiv/bounds.hpp"
#include "qiv/classical.hpp"
#include "qiv/quantum.hpp"
#include "qiv/report.hpp"
#include "qiv/simplex.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitValidation = 2;
constexpr int kExitSolver = 3;
constexpr int kExitViolation = 4;

std::string read_text(const std::string& path) {
    if (path == "-") {
        std::ostringstream os;
        os << std::cin.rdbuf();
        return os.str();
    }
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw qiv::ValidationError("cannot open " + path + " for reading");
    }
    std::ostringstream os;
    os << in.rdbuf();
    if (in.bad()) {
        throw qiv::ValidationError("error while reading " + path);
    }
    return os.str();
}

void write_text(const std::string& path, const std::string& content) {
    if (path == "-") {
        std::cout << content;
        std::cout.flush();
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw qiv::ValidationError("cannot open " + path + " for writing");
    }
    out << content;
    out.flush();
    if (!out) {
        throw qiv::ValidationError("error while writing " + path);
    }
}

nlohmann::json parse_json(const std::string& text, const std::string& what) {
    try {
        return nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw qiv::ValidationError(what + ": " + e.what());
    }
}

qiv::QuantumInstrumentalScenario load_scenario(const std::string& path) {
    const nlohmann::json j = parse_json(read_text(path), "scenario " + path);
    qiv::QuantumInstrumentalScenario s = j.get<qiv::QuantumInstrumentalScenario>();
    const std::vector<qiv::Violation> violations = qiv::validate_scenario(s);
    if (!violations.empty()) {
        std::ostringstream os;
        os << "scenario " << path << " is invalid:";
        for (const qiv::Violation& v : violations) {
            os << "\n  " << v.object << " fails " << v.check << " (residual " << v.residual
               << ")";
        }
        throw qiv::ValidationError(os.str());
    }
    return s;
}

std::string dump_json(const nlohmann::json& j) { return j.dump(2) + "\n"; }

bool color_enabled() {
    return std::getenv("NO_COLOR") == nullptr && QIV_ISATTY(QIV_FILENO(stdout)) != 0;
}

// Wraps the verdict token of a text report in red or green.
std::string colorize_verdict(std::string text, qiv::Verdict verdict) {
    const std::string token = qiv::to_string(verdict);
    const std::size_t pos = text.rfind(token);
    if (pos == std::string::npos) {
        return text;
    }
    const char* code = verdict == qiv::Verdict::CONSISTENT ? "\033[32m" : "\033[31m";
    return text.substr(0, pos) + code + token + "\033[0m" + text.substr(pos + token.size());
}

struct SimulateArgs {
    std::string scenarioPath;
    std::string outPath = "-";
};

struct BoundsArgs {
    std::string distPath;
    std::string assumptions = "strat";
    bool dumpLp = false;
};

struct FalsifyArgs {
    std::string scenarioPath;
    bool failOnViolation = false;
    std::string format = "text";
};

struct ClassicalArgs {
    std::string modelPath;
    bool check = false;
};

struct PresetArgs {
    std::string name = "bell";
    std::string outPath = "-";
};

qiv::AssumptionSet parse_assumptions(const std::string& flag) {
    if (flag == "je") {
        return qiv::AssumptionSet::JE_ONLY;
    }
    if (flag == "strat") {
        return qiv::AssumptionSet::JE_STRATIFIED_ER;
    }
    if (flag == "indiv") {
        return qiv::AssumptionSet::JE_INDIVIDUAL_ER;
    }
    throw qiv::ValidationError("unknown assumption set \"" + flag + "\"");
}

int run_simulate(const SimulateArgs& args) {
    const qiv::QuantumInstrumentalScenario s = load_scenario(args.scenarioPath);
    const qiv::ObservedDistribution d = qiv::born_distribution(s);
    write_text(args.outPath, dump_json(d));
    return kExitOk;
}

int run_bounds(const BoundsArgs& args) {
    const nlohmann::json j = parse_json(read_text(args.distPath), "distribution " + args.distPath);
    const qiv::ObservedDistribution d = j.get<qiv::ObservedDistribution>();
    const qiv::AssumptionSet assumptions = parse_assumptions(args.assumptions);
    if (args.dumpLp) {
        std::cerr << qiv::debug_dump(qiv::build_lp(d, assumptions, qiv::Sense::MIN));
    }
    const qiv::BoundsResult result = qiv::ace_bounds(d, assumptions);
    write_text("-", dump_json(result));
    return kExitOk;
}

int run_falsify(const FalsifyArgs& args) {
    const qiv::QuantumInstrumentalScenario s = load_scenario(args.scenarioPath);
    const qiv::FalsificationReport report = qiv::falsify_pipeline(s);
    if (args.format == "json") {
        write_text("-", qiv::render_report(report, qiv::RenderFormat::JSON));
    } else {
        std::string text = qiv::render_report(report, qiv::RenderFormat::TEXT);
        if (color_enabled()) {
            text = colorize_verdict(std::move(text), report.verdict);
        }
        write_text("-", text);
    }
    if (args.failOnViolation && report.verdict == qiv::Verdict::JOINT_EXOGENEITY_FALSIFIED) {
        return kExitViolation;
    }
    return kExitOk;
}

int run_classical(const ClassicalArgs& args) {
    const nlohmann::json j = parse_json(read_text(args.modelPath), "model " + args.modelPath);
    const qiv::ResponseFunctionModel model = j.get<qiv::ResponseFunctionModel>();
    const qiv::ObservedDistribution observed = qiv::classical_observed(model);
    const double ace = qiv::classical_true_ace(model);

    nlohmann::json out{{"observed", observed}, {"trueAce", ace}};
    bool allContained = true;
    if (args.check) {
        nlohmann::json bounds = nlohmann::json::object();
        nlohmann::json contained = nlohmann::json::object();
        for (qiv::AssumptionSet a :
             {qiv::AssumptionSet::JE_ONLY, qiv::AssumptionSet::JE_STRATIFIED_ER,
              qiv::AssumptionSet::JE_INDIVIDUAL_ER}) {
            const qiv::BoundsResult r = qiv::ace_bounds(observed, a);
            const bool inside = r.lowerStatus == qiv::BoundStatus::OPTIMAL &&
                                r.upperStatus == qiv::BoundStatus::OPTIMAL &&
                                ace >= r.lower - 1e-7 && ace <= r.upper + 1e-7;
            bounds[qiv::to_string(a)] = r;
            contained[qiv::to_string(a)] = inside;
            allContained = allContained && inside;
        }
        out["bounds"] = bounds;
        out["contained"] = contained;
        out["allContained"] = allContained;
    }
    write_text("-", dump_json(out));
    return args.check && !allContained ? kExitViolation : kExitOk;
}

int run_preset(const PresetArgs& args) {
    if (args.name != "bell") {
        throw qiv::ValidationError("unknown preset \"" + args.name + "\"");
    }
    const nlohmann::json j = qiv::bell_preset();
    write_text(args.outPath, dump_json(j));
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Instrumental-network simulator and causal-effect bound calculator"};
    app.require_subcommand(1);

    SimulateArgs simulateArgs;
    CLI::App* simulate =
        app.add_subcommand("simulate", "Compute the observed distribution of a scenario");
    simulate->add_option("--scenario", simulateArgs.scenarioPath,
                         "Scenario JSON file ('-' for stdin)")
        ->required();
    simulate->add_option("--out", simulateArgs.outPath, "Output file ('-' for stdout)");

    BoundsArgs boundsArgs;
    CLI::App* bounds =
        app.add_subcommand("bounds", "Bound the average causal effect of a distribution");
    bounds->add_option("--dist", boundsArgs.distPath, "Distribution JSON file ('-' for stdin)")
        ->required();
    bounds
        ->add_option("--assumptions", boundsArgs.assumptions,
                     "Assumption set: je, strat, or indiv")
        ->check(CLI::IsMember({"je", "strat", "indiv"}));
    bounds->add_flag("--dump-lp", boundsArgs.dumpLp,
                     "Dump the constraint tableau to stderr before solving");

    FalsifyArgs falsifyArgs;
    CLI::App* falsify = app.add_subcommand(
        "falsify", "Run the simulate/bounds/true-effect pipeline and report a verdict");
    falsify
        ->add_option("--scenario", falsifyArgs.scenarioPath,
                     "Scenario JSON file ('-' for stdin)")
        ->required();
    falsify->add_flag("--fail-on-violation", falsifyArgs.failOnViolation,
                      "Exit with code 4 when the verdict is a falsification");
    falsify->add_option("--format", falsifyArgs.format, "Report format: text or json")
        ->check(CLI::IsMember({"text", "json"}));

    ClassicalArgs classicalArgs;
    CLI::App* classical =
        app.add_subcommand("classical", "Evaluate a classical response-function model");
    classical->add_option("--model", classicalArgs.modelPath, "Model JSON file ('-' for stdin)")
        ->required();
    classical->add_flag("--check", classicalArgs.check,
                        "Also verify the true effect lies inside all bound sets");

    PresetArgs presetArgs;
    CLI::App* preset = app.add_subcommand("preset", "Write a built-in scenario");
    preset->add_option("--name", presetArgs.name, "Preset name")
        ->check(CLI::IsMember({"bell"}));
    preset->add_option("--out", presetArgs.outPath, "Output file ('-' for stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (simulate->parsed()) {
            return run_simulate(simulateArgs);
        }
        if (bounds->parsed()) {
            return run_bounds(boundsArgs);
        }
        if (falsify->parsed()) {
            return run_falsify(falsifyArgs);
        }
        if (classical->parsed()) {
            return run_classical(classicalArgs);
        }
        if (preset->parsed()) {
            return run_preset(presetArgs);
        }
        std::cerr << "no subcommand selected\n";
        return kExitUsage;
    } catch (const qiv::ValidationError& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const qiv::ShapeError& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const qiv::Error& e) {
        std::cerr << "solver error: " << e.what() << "\n";
        return kExitSolver;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitSolver;
    }
}
