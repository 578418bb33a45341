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

#include "qiv/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace qiv {

namespace {

constexpr int kNumCells = 64;

// Clamped and renormalized per-z table used for the observation rows.
std::array<std::array<std::array<double, 2>, 2>, 2> normalized_obs(
    const ObservedDistribution& obs) {
    const ObservedDistribution checked = clamped_distribution(obs.p);
    std::array<std::array<std::array<double, 2>, 2>, 2> out{};
    for (int z = 0; z < 2; ++z) {
        double sum = 0.0;
        for (int x = 0; x < 2; ++x) {
            sum += checked.p[z][x][0] + checked.p[z][x][1];
        }
        for (int x = 0; x < 2; ++x) {
            for (int y = 0; y < 2; ++y) {
                out[z][x][y] = checked.p[z][x][y] / sum;
            }
        }
    }
    return out;
}

int y_pattern(const CounterfactualIndex& idx) {
    return idx.y00 * 8 + idx.y01 * 4 + idx.y10 * 2 + idx.y11;
}

}  // namespace

const char* to_string(AssumptionSet a) {
    switch (a) {
        case AssumptionSet::JE_ONLY:
            return "JE_ONLY";
        case AssumptionSet::JE_STRATIFIED_ER:
            return "JE_STRATIFIED_ER";
        case AssumptionSet::JE_INDIVIDUAL_ER:
            return "JE_INDIVIDUAL_ER";
    }
    return "?";
}

AssumptionSet assumption_set_from_string(const std::string& s) {
    if (s == "JE_ONLY") {
        return AssumptionSet::JE_ONLY;
    }
    if (s == "JE_STRATIFIED_ER") {
        return AssumptionSet::JE_STRATIFIED_ER;
    }
    if (s == "JE_INDIVIDUAL_ER") {
        return AssumptionSet::JE_INDIVIDUAL_ER;
    }
    throw ValidationError("unknown assumption set \"" + s + "\"");
}

const char* to_string(BoundStatus s) {
    return s == BoundStatus::OPTIMAL ? "OPTIMAL" : "INFEASIBLE";
}

int encode_index(const CounterfactualIndex& idx) {
    for (int bit : {idx.x, idx.y00, idx.y01, idx.y10, idx.y11, idx.z}) {
        if (bit != 0 && bit != 1) {
            throw std::out_of_range("counterfactual index components must be bits");
        }
    }
    return idx.x * 32 + idx.y00 * 16 + idx.y01 * 8 + idx.y10 * 4 + idx.y11 * 2 + idx.z;
}

CounterfactualIndex decode_index(int column) {
    if (column < 0 || column >= kNumCells) {
        throw std::out_of_range("column " + std::to_string(column) + " outside 0..63");
    }
    CounterfactualIndex idx;
    idx.x = (column >> 5) & 1;
    idx.y00 = (column >> 4) & 1;
    idx.y01 = (column >> 3) & 1;
    idx.y10 = (column >> 2) & 1;
    idx.y11 = (column >> 1) & 1;
    idx.z = column & 1;
    return idx;
}

LinearProgram build_lp(const ObservedDistribution& obs, AssumptionSet assumptions, Sense sense) {
    const auto p = normalized_obs(obs);

    std::array<CounterfactualIndex, kNumCells> cells;
    for (int c = 0; c < kNumCells; ++c) {
        cells[static_cast<std::size_t>(c)] = decode_index(c);
    }

    LinearProgram lp;
    lp.numVars = kNumCells;
    lp.sense = sense;
    lp.objective.assign(kNumCells, 0.0);
    for (int c = 0; c < kNumCells; ++c) {
        const CounterfactualIndex& idx = cells[static_cast<std::size_t>(c)];
        if (idx.z != 0) {
            continue;
        }
        double coeff = 0.0;
        if (idx.y10 == 1) {
            coeff += 1.0;
        }
        if (idx.y00 == 1) {
            coeff -= 1.0;
        }
        lp.objective[static_cast<std::size_t>(c)] = coeff;
    }

    std::vector<double> row(kNumCells);
    const auto emit = [&](double rhs) { lp.add_row(row, rhs); };
    const auto clear = [&] { std::fill(row.begin(), row.end(), 0.0); };

    // Joint exogeneity: the y-pattern distribution does not depend on z.
    for (int t = 0; t < 16; ++t) {
        clear();
        for (int c = 0; c < kNumCells; ++c) {
            const CounterfactualIndex& idx = cells[static_cast<std::size_t>(c)];
            if (y_pattern(idx) == t) {
                row[static_cast<std::size_t>(c)] = idx.z == 0 ? 1.0 : -1.0;
            }
        }
        emit(0.0);
    }

    // Stratified exclusion restriction within each (x, z) stratum.
    if (assumptions != AssumptionSet::JE_ONLY) {
        for (int x = 0; x < 2; ++x) {
            for (int z = 0; z < 2; ++z) {
                clear();
                for (int c = 0; c < kNumCells; ++c) {
                    const CounterfactualIndex& idx = cells[static_cast<std::size_t>(c)];
                    if (idx.x != x || idx.z != z) {
                        continue;
                    }
                    row[static_cast<std::size_t>(c)] =
                        (idx.y00 == 0 ? 1.0 : 0.0) - (idx.y01 == 0 ? 1.0 : 0.0);
                }
                emit(0.0);
                clear();
                for (int c = 0; c < kNumCells; ++c) {
                    const CounterfactualIndex& idx = cells[static_cast<std::size_t>(c)];
                    if (idx.x != x || idx.z != z) {
                        continue;
                    }
                    row[static_cast<std::size_t>(c)] =
                        (idx.y10 == 1 ? 1.0 : 0.0) - (idx.y11 == 1 ? 1.0 : 0.0);
                }
                emit(0.0);
            }
        }
    }

    // Normalization per instrument arm.
    for (int z = 0; z < 2; ++z) {
        clear();
        for (int c = 0; c < kNumCells; ++c) {
            if (cells[static_cast<std::size_t>(c)].z == z) {
                row[static_cast<std::size_t>(c)] = 1.0;
            }
        }
        emit(1.0);
    }

    // Observation matching: under (x, z) the revealed potential outcome is
    // y00, y10, y01, y11 respectively.
    const auto observationRow = [&](int x, int z, int CounterfactualIndex::*slot) {
        for (int b = 0; b < 2; ++b) {
            clear();
            for (int c = 0; c < kNumCells; ++c) {
                const CounterfactualIndex& idx = cells[static_cast<std::size_t>(c)];
                if (idx.x == x && idx.z == z && idx.*slot == b) {
                    row[static_cast<std::size_t>(c)] = 1.0;
                }
            }
            emit(p[z][x][b]);
        }
    };
    observationRow(0, 0, &CounterfactualIndex::y00);
    observationRow(1, 0, &CounterfactualIndex::y10);
    observationRow(0, 1, &CounterfactualIndex::y01);
    observationRow(1, 1, &CounterfactualIndex::y11);

    // Individual exclusion restriction: cells with y00 != y01 or y10 != y11
    // carry no mass.
    if (assumptions == AssumptionSet::JE_INDIVIDUAL_ER) {
        for (int c = 0; c < kNumCells; ++c) {
            const CounterfactualIndex& idx = cells[static_cast<std::size_t>(c)];
            if (idx.y00 != idx.y01 || idx.y10 != idx.y11) {
                clear();
                row[static_cast<std::size_t>(c)] = 1.0;
                emit(0.0);
            }
        }
    }

    lp.check_consistent();
    return lp;
}

BoundsResult ace_bounds(const ObservedDistribution& obs, AssumptionSet assumptions) {
    BoundsResult result;
    result.assumptions = assumptions;

    const auto runSolve = [&](Sense sense, double& value, BoundStatus& status,
                              std::optional<std::vector<double>>& witness) {
        const LinearProgram lp = build_lp(obs, assumptions, sense);
        result.rows = lp.numRows();
        const Solution sol = solve(lp);
        switch (sol.status) {
            case SolveStatus::OPTIMAL:
                status = BoundStatus::OPTIMAL;
                value = sol.objectiveValue;
                witness = sol.x;
                break;
            case SolveStatus::INFEASIBLE:
                status = BoundStatus::INFEASIBLE;
                value = std::numeric_limits<double>::quiet_NaN();
                witness.reset();
                break;
            case SolveStatus::UNBOUNDED:
                throw SolverError(
                    "ace_bounds: unbounded program over the probability simplex");
        }
    };

    runSolve(Sense::MIN, result.lower, result.lowerStatus, result.lowerWitness);
    runSolve(Sense::MAX, result.upper, result.upperStatus, result.upperWitness);
    return result;
}

void to_json(nlohmann::json& j, const BoundsResult& r) {
    j = nlohmann::json{{"assumptions", to_string(r.assumptions)},
                       {"lower", nullptr},
                       {"upper", nullptr},
                       {"lowerStatus", to_string(r.lowerStatus)},
                       {"upperStatus", to_string(r.upperStatus)},
                       {"rows", r.rows},
                       {"witnessLower", nullptr},
                       {"witnessUpper", nullptr}};
    if (r.lowerStatus == BoundStatus::OPTIMAL) {
        j["lower"] = r.lower;
    }
    if (r.upperStatus == BoundStatus::OPTIMAL) {
        j["upper"] = r.upper;
    }
    if (r.lowerWitness) {
        j["witnessLower"] = *r.lowerWitness;
    }
    if (r.upperWitness) {
        j["witnessUpper"] = *r.upperWitness;
    }
}

void from_json(const nlohmann::json& j, BoundsResult& r) {
    if (!j.is_object()) {
        throw ValidationError("bounds result must be a JSON object");
    }
    r.assumptions = assumption_set_from_string(j.at("assumptions").get<std::string>());
    r.lowerStatus = j.at("lowerStatus").get<std::string>() == "OPTIMAL"
                        ? BoundStatus::OPTIMAL
                        : BoundStatus::INFEASIBLE;
    r.upperStatus = j.at("upperStatus").get<std::string>() == "OPTIMAL"
                        ? BoundStatus::OPTIMAL
                        : BoundStatus::INFEASIBLE;
    r.lower = j.at("lower").is_null() ? std::numeric_limits<double>::quiet_NaN()
                                      : j.at("lower").get<double>();
    r.upper = j.at("upper").is_null() ? std::numeric_limits<double>::quiet_NaN()
                                      : j.at("upper").get<double>();
    r.rows = j.at("rows").get<int>();
    r.lowerWitness.reset();
    r.upperWitness.reset();
    if (j.contains("witnessLower") && !j.at("witnessLower").is_null()) {
        r.lowerWitness = j.at("witnessLower").get<std::vector<double>>();
    }
    if (j.contains("witnessUpper") && !j.at("witnessUpper").is_null()) {
        r.upperWitness = j.at("witnessUpper").get<std::vector<double>>();
    }
}

}  // namespace qiv
