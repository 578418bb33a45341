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

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "qiv/quantum.hpp"
#include "qiv/simplex.hpp"

namespace qiv {

enum class AssumptionSet { JE_ONLY, JE_STRATIFIED_ER, JE_INDIVIDUAL_ER };

const char* to_string(AssumptionSet a);
AssumptionSet assumption_set_from_string(const std::string& s);

// One of the 64 counterfactual cells q_{x, y00, y01, y10, y11 | z}: the
// probability, conditional on the instrument reading z, that the treatment
// comes out x while the four potential outcomes take the given values.
struct CounterfactualIndex {
    int x = 0;
    int y00 = 0;
    int y01 = 0;
    int y10 = 0;
    int y11 = 0;
    int z = 0;

    bool operator==(const CounterfactualIndex&) const = default;
};

// column = x*32 + y00*16 + y01*8 + y10*4 + y11*2 + z.
int encode_index(const CounterfactualIndex& idx);
CounterfactualIndex decode_index(int column);

// Equality-form program over the 64 cells whose optimum bounds the average
// causal effect. Row order: joint exogeneity (16), stratified exclusion
// restriction (8, stratified and individual sets only), normalization (2),
// observation matching (8), then one zero-forcing row per cell breaking the
// individual exclusion restriction (48, individual set only).
LinearProgram build_lp(const ObservedDistribution& obs, AssumptionSet assumptions, Sense sense);

enum class BoundStatus { OPTIMAL, INFEASIBLE };

const char* to_string(BoundStatus s);

struct BoundsResult {
    AssumptionSet assumptions = AssumptionSet::JE_ONLY;
    double lower = 0.0;
    double upper = 0.0;
    BoundStatus lowerStatus = BoundStatus::OPTIMAL;
    BoundStatus upperStatus = BoundStatus::OPTIMAL;
    std::optional<std::vector<double>> lowerWitness;
    std::optional<std::vector<double>> upperWitness;
    int rows = 0;
};

// MIN and MAX solves of build_lp. Bounds are NaN when the matching solve is
// infeasible; an unbounded solve is reported as a solver defect.
BoundsResult ace_bounds(const ObservedDistribution& obs, AssumptionSet assumptions);

void to_json(nlohmann::json& j, const BoundsResult& r);
void from_json(const nlohmann::json& j, BoundsResult& r);

}  // namespace qiv
