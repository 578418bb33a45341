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

#include <array>
#include <cstdint>

#include "json.hpp"

#include "qiv/quantum.hpp"

namespace qiv {

// Deterministic response types. fType fixes X as a function of Z, gType
// fixes Y as a function of X:
//   fType: 0 -> X=0, 1 -> X=1, 2 -> X=Z, 3 -> X=1-Z
//   gType: 0 -> Y=0, 1 -> Y=1, 2 -> Y=X, 3 -> Y=1-X
int response_x(int fType, int z);
int response_y(int gType, int x);

// Mixture over the 16 type pairs, weights indexed fType*4 + gType.
struct ResponseFunctionModel {
    std::array<double, 16> weights{};
};

// Throws ValidationError unless weights are nonnegative and sum to 1
// within 1e-12.
void validate_model(const ResponseFunctionModel& m);

// p(x,y|z) accumulated over types with f(z)=x and g(x)=y.
ObservedDistribution classical_observed(const ResponseFunctionModel& m);

// P(g(1)=1) - P(g(0)=1); reduces to weight(Y=X) - weight(Y=1-X).
double classical_true_ace(const ResponseFunctionModel& m);

// Uniform draw from the weight simplex: 16 standard-exponential draws,
// normalized. Deterministic per seed.
ResponseFunctionModel random_model(std::uint64_t seed);

struct SampledDataset {
    std::array<std::array<std::array<std::uint64_t, 2>, 2>, 2> counts{};
    std::uint64_t n = 0;
    std::uint64_t seed = 0;
};

// n i.i.d. draws: z by fair coin, type by the model weights, (x, y)
// deterministic from (z, type).
SampledDataset sample_dataset(const ResponseFunctionModel& m, std::uint64_t n,
                              std::uint64_t seed);

// Counts normalized per instrument arm; an empty arm is rejected.
ObservedDistribution empirical_distribution(const SampledDataset& d);

void to_json(nlohmann::json& j, const ResponseFunctionModel& m);
void from_json(const nlohmann::json& j, ResponseFunctionModel& m);
void to_json(nlohmann::json& j, const SampledDataset& d);
void from_json(const nlohmann::json& j, SampledDataset& d);

}  // namespace qiv
