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
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "qiv/linalg.hpp"

namespace qiv {

// State of the source shared between the X and Y nodes.
struct DensityOperator {
    Matrix mat;
};

// One measurement: a list of PSD effects summing to the identity.
struct Povm {
    std::vector<Matrix> effects;
};

// Instrumental network over binary Z, X, Y. measurementsA[z] is the POVM
// applied at the X node when the instrument reads z, with effects indexed by
// the outcome x. measurementsB[x] is the POVM applied at the Y node when the
// X node produced x, with effects indexed by y.
struct QuantumInstrumentalScenario {
    int dimA = 2;
    int dimB = 2;
    DensityOperator rho;
    std::array<Povm, 2> measurementsA;
    std::array<Povm, 2> measurementsB;
};

struct Violation {
    std::string object;
    std::string check;
    double residual = 0.0;
};

// p[z][x][y] = P(X=x, Y=y | Z=z).
struct ObservedDistribution {
    std::array<std::array<std::array<double, 2>, 2>, 2> p{};
};

// q[zPrime][xPrime][y] under the intervention that feeds outcome
// interventionX into the Y node regardless of the actual X outcome.
// interventionZ is recorded but the table never depends on it.
struct InterventionalDistribution {
    std::array<std::array<std::array<double, 2>, 2>, 2> q{};
    int interventionX = 0;
    int interventionZ = 0;
};

struct MarginalExogeneityReport {
    bool holds = false;
    double maxDeviation = 0.0;
};

// Empty result means every invariant holds. Violations are data, not errors.
std::vector<Violation> validate_scenario(const QuantumInstrumentalScenario& s);

// The two-qubit singlet-correlated scenario whose observed distribution
// defeats the stratified bounds while its true effect is zero.
QuantumInstrumentalScenario bell_preset();

// P(X=x, Y=y | Z=z) = tr[(M_x^z tensor N_y^x) rho].
ObservedDistribution born_distribution(const QuantumInstrumentalScenario& s);

// Q_xz(X=x', Y=y | Z=z') = tr[(M_{x'}^{z'} tensor N_y^x) rho].
InterventionalDistribution interventional_distribution(const QuantumInstrumentalScenario& s,
                                                       int x, int z);

// (P(Y(x,z)=0), P(Y(x,z)=1)) = tr[(I tensor N_y^x) rho]; z-independent.
std::pair<double, double> potential_outcome_marginal(const QuantumInstrumentalScenario& s, int x);

// P(Y(1,0)=1) - P(Y(0,0)=1).
double true_ace(const QuantumInstrumentalScenario& s);

// Max over (x, z, y) of |Q_xz(Y=y|Z=1) - Q_xz(Y=y|Z=0)|.
MarginalExogeneityReport check_marginal_exogeneity(const QuantumInstrumentalScenario& s,
                                                   double tol = 1e-10);

// Deterministic valid scenario: pure state from a normalized complex Gaussian
// vector, binary POVMs from rescaled random PSD effects.
QuantumInstrumentalScenario random_scenario(std::uint64_t seed);

// Entries below -1e-12 or per-z sums off by more than 1e-9 are rejected;
// surviving small negatives are clamped to zero.
ObservedDistribution clamped_distribution(
    const std::array<std::array<std::array<double, 2>, 2>, 2>& raw);

void to_json(nlohmann::json& j, const DensityOperator& d);
void from_json(const nlohmann::json& j, DensityOperator& d);
void to_json(nlohmann::json& j, const Povm& p);
void from_json(const nlohmann::json& j, Povm& p);
void to_json(nlohmann::json& j, const QuantumInstrumentalScenario& s);
void from_json(const nlohmann::json& j, QuantumInstrumentalScenario& s);
void to_json(nlohmann::json& j, const ObservedDistribution& d);
void from_json(const nlohmann::json& j, ObservedDistribution& d);

}  // namespace qiv
