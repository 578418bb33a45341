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

#include "qiv/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

namespace qiv {

namespace {

constexpr double kVerdictTol = 1e-9;

std::string fixed4(double v) {
    if (std::isnan(v)) {
        return "    n/a";
    }
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%7.4f", v);
    return buf;
}

}  // namespace

const char* to_string(Verdict v) {
    return v == Verdict::CONSISTENT ? "CONSISTENT" : "JOINT_EXOGENEITY_FALSIFIED";
}

Verdict verdict_for(double trueAce, const BoundsResult& stratified) {
    if (stratified.lowerStatus != BoundStatus::OPTIMAL ||
        stratified.upperStatus != BoundStatus::OPTIMAL) {
        return Verdict::JOINT_EXOGENEITY_FALSIFIED;
    }
    if (trueAce < stratified.lower - kVerdictTol || trueAce > stratified.upper + kVerdictTol) {
        return Verdict::JOINT_EXOGENEITY_FALSIFIED;
    }
    return Verdict::CONSISTENT;
}

double margin_for(double trueAce, const BoundsResult& stratified) {
    if (stratified.lowerStatus != BoundStatus::OPTIMAL ||
        stratified.upperStatus != BoundStatus::OPTIMAL) {
        return std::numeric_limits<double>::quiet_NaN();
    }
    return std::max(stratified.lower - trueAce, trueAce - stratified.upper);
}

FalsificationReport falsify_pipeline(const QuantumInstrumentalScenario& s) {
    FalsificationReport report;
    report.observed = born_distribution(s);
    for (AssumptionSet a : {AssumptionSet::JE_ONLY, AssumptionSet::JE_STRATIFIED_ER,
                            AssumptionSet::JE_INDIVIDUAL_ER}) {
        report.boundsByAssumption.emplace(a, ace_bounds(report.observed, a));
    }
    report.trueAce = true_ace(s);
    report.marginalExogeneity = check_marginal_exogeneity(s);
    const BoundsResult& stratified =
        report.boundsByAssumption.at(AssumptionSet::JE_STRATIFIED_ER);
    report.verdict = verdict_for(report.trueAce, stratified);
    report.margin = margin_for(report.trueAce, stratified);
    return report;
}

std::string render_report(const FalsificationReport& r, RenderFormat format) {
    if (format == RenderFormat::JSON) {
        nlohmann::json j = r;
        return j.dump(2) + "\n";
    }

    std::ostringstream os;
    os << "observed p(x,y|z)\n";
    for (int z = 0; z < 2; ++z) {
        os << "  z=" << z << ":";
        for (int x = 0; x < 2; ++x) {
            for (int y = 0; y < 2; ++y) {
                os << "  p(" << x << "," << y << "|" << z
                   << ")=" << fixed4(r.observed.p[z][x][y]);
            }
        }
        os << "\n";
    }
    os << "average causal effect bounds\n";
    for (const auto& [assumptions, bounds] : r.boundsByAssumption) {
        char line[128];
        std::snprintf(line, sizeof(line), "  %-18s lower=%s  upper=%s  rows=%d\n",
                      to_string(assumptions), fixed4(bounds.lower).c_str(),
                      fixed4(bounds.upper).c_str(), bounds.rows);
        os << line;
    }
    os << "true ACE =" << fixed4(r.trueAce) << "\n";
    os << "margin   =" << fixed4(r.margin) << "  (negative means inside the bounds)\n";
    os << "marginal exogeneity: " << (r.marginalExogeneity.holds ? "holds" : "violated")
       << ", max deviation " << fixed4(r.marginalExogeneity.maxDeviation) << "\n";
    os << "verdict: " << to_string(r.verdict) << "\n";
    return os.str();
}

void to_json(nlohmann::json& j, const MarginalExogeneityReport& r) {
    j = nlohmann::json{{"holds", r.holds}, {"maxDeviation", r.maxDeviation}};
}

void from_json(const nlohmann::json& j, MarginalExogeneityReport& r) {
    r.holds = j.at("holds").get<bool>();
    r.maxDeviation = j.at("maxDeviation").get<double>();
}

void to_json(nlohmann::json& j, const FalsificationReport& r) {
    nlohmann::json bounds = nlohmann::json::object();
    for (const auto& [assumptions, result] : r.boundsByAssumption) {
        bounds[to_string(assumptions)] = result;
    }
    j = nlohmann::json{{"observed", r.observed},
                       {"boundsByAssumption", bounds},
                       {"trueAce", r.trueAce},
                       {"marginalExogeneity", r.marginalExogeneity},
                       {"verdict", to_string(r.verdict)},
                       {"margin", nullptr}};
    if (!std::isnan(r.margin)) {
        j["margin"] = r.margin;
    }
}

void from_json(const nlohmann::json& j, FalsificationReport& r) {
    if (!j.is_object()) {
        throw ValidationError("report must be a JSON object");
    }
    j.at("observed").get_to(r.observed);
    r.boundsByAssumption.clear();
    for (const auto& [key, value] : j.at("boundsByAssumption").items()) {
        r.boundsByAssumption.emplace(assumption_set_from_string(key),
                                     value.get<BoundsResult>());
    }
    r.trueAce = j.at("trueAce").get<double>();
    j.at("marginalExogeneity").get_to(r.marginalExogeneity);
    const std::string verdict = j.at("verdict").get<std::string>();
    if (verdict == "CONSISTENT") {
        r.verdict = Verdict::CONSISTENT;
    } else if (verdict == "JOINT_EXOGENEITY_FALSIFIED") {
        r.verdict = Verdict::JOINT_EXOGENEITY_FALSIFIED;
    } else {
        throw ValidationError("unknown verdict \"" + verdict + "\"");
    }
    r.margin = j.at("margin").is_null() ? std::numeric_limits<double>::quiet_NaN()
                                        : j.at("margin").get<double>();
}

}  // namespace qiv
