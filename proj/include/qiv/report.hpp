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

#pragma once

#include <map>
#include <string>

#include "json.hpp"

#include "qiv/bounds.hpp"
#include "qiv/quantum.hpp"

namespace qiv {

enum class Verdict { CONSISTENT, JOINT_EXOGENEITY_FALSIFIED };

const char* to_string(Verdict v);

struct FalsificationReport {
    ObservedDistribution observed;
    std::map<AssumptionSet, BoundsResult> boundsByAssumption;
    double trueAce = 0.0;
    MarginalExogeneityReport marginalExogeneity;
    Verdict verdict = Verdict::CONSISTENT;
    double margin = 0.0;
};

// Falsified iff the true effect escapes the stratified-exclusion bounds by
// more than 1e-9 on either side, or those bounds are infeasible.
Verdict verdict_for(double trueAce, const BoundsResult& stratified);

// Signed distance from trueAce to the nearest stratified bound edge,
// negative inside the interval; NaN when a bound is missing.
double margin_for(double trueAce, const BoundsResult& stratified);

// born_distribution, bounds under all three assumption sets, the true
// effect, the marginal-exogeneity check, and the verdict.
FalsificationReport falsify_pipeline(const QuantumInstrumentalScenario& s);

enum class RenderFormat { TEXT, JSON };

// TEXT: aligned tables with 4-decimal probabilities. JSON: stable-key
// serialization. Both deterministic.
std::string render_report(const FalsificationReport& r, RenderFormat format);

void to_json(nlohmann::json& j, const MarginalExogeneityReport& r);
void from_json(const nlohmann::json& j, MarginalExogeneityReport& r);
void to_json(nlohmann::json& j, const FalsificationReport& r);
void from_json(const nlohmann::json& j, FalsificationReport& r);

}  // namespace qiv
