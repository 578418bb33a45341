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

#include "qiv/classical.hpp"

#include <cmath>
#include <string>

#include "qiv/rng.hpp"

namespace qiv {

int response_x(int fType, int z) {
    switch (fType) {
        case 0:
            return 0;
        case 1:
            return 1;
        case 2:
            return z;
        case 3:
            return 1 - z;
        default:
            throw ValidationError("fType must be in 0..3");
    }
}

int response_y(int gType, int x) {
    switch (gType) {
        case 0:
            return 0;
        case 1:
            return 1;
        case 2:
            return x;
        case 3:
            return 1 - x;
        default:
            throw ValidationError("gType must be in 0..3");
    }
}

void validate_model(const ResponseFunctionModel& m) {
    double sum = 0.0;
    for (double w : m.weights) {
        if (!std::isfinite(w)) {
            throw ValidationError("model weight is not finite");
        }
        if (w < 0.0) {
            throw ValidationError("model weight " + std::to_string(w) + " is negative");
        }
        sum += w;
    }
    if (std::fabs(sum - 1.0) > 1e-12) {
        throw ValidationError("model weights sum to " + std::to_string(sum));
    }
}

ObservedDistribution classical_observed(const ResponseFunctionModel& m) {
    validate_model(m);
    ObservedDistribution d;
    for (int ft = 0; ft < 4; ++ft) {
        for (int gt = 0; gt < 4; ++gt) {
            const double w = m.weights[static_cast<std::size_t>(ft * 4 + gt)];
            for (int z = 0; z < 2; ++z) {
                const int x = response_x(ft, z);
                const int y = response_y(gt, x);
                d.p[z][x][y] += w;
            }
        }
    }
    return d;
}

double classical_true_ace(const ResponseFunctionModel& m) {
    validate_model(m);
    double ace = 0.0;
    for (int ft = 0; ft < 4; ++ft) {
        ace += m.weights[static_cast<std::size_t>(ft * 4 + 2)];
        ace -= m.weights[static_cast<std::size_t>(ft * 4 + 3)];
    }
    return ace;
}

ResponseFunctionModel random_model(std::uint64_t seed) {
    Rng rng(seed);
    ResponseFunctionModel m;
    double sum = 0.0;
    for (double& w : m.weights) {
        w = rng.exponential();
        sum += w;
    }
    for (double& w : m.weights) {
        w /= sum;
    }
    return m;
}

SampledDataset sample_dataset(const ResponseFunctionModel& m, std::uint64_t n,
                              std::uint64_t seed) {
    validate_model(m);
    if (n < 1) {
        throw ValidationError("sample_dataset: n must be at least 1");
    }
    Rng rng(seed);
    SampledDataset d;
    d.n = n;
    d.seed = seed;
    for (std::uint64_t i = 0; i < n; ++i) {
        const int z = static_cast<int>(rng.uniform_index(2));
        const double u = rng.uniform();
        double acc = 0.0;
        int type = 15;
        for (int t = 0; t < 16; ++t) {
            acc += m.weights[static_cast<std::size_t>(t)];
            if (u < acc) {
                type = t;
                break;
            }
        }
        const int x = response_x(type / 4, z);
        const int y = response_y(type % 4, x);
        ++d.counts[z][x][y];
    }
    return d;
}

ObservedDistribution empirical_distribution(const SampledDataset& d) {
    std::uint64_t total = 0;
    ObservedDistribution out;
    for (int z = 0; z < 2; ++z) {
        std::uint64_t arm = 0;
        for (int x = 0; x < 2; ++x) {
            arm += d.counts[z][x][0] + d.counts[z][x][1];
        }
        if (arm == 0) {
            throw ValidationError("empirical_distribution: no samples with z=" +
                                  std::to_string(z));
        }
        for (int x = 0; x < 2; ++x) {
            for (int y = 0; y < 2; ++y) {
                out.p[z][x][y] =
                    static_cast<double>(d.counts[z][x][y]) / static_cast<double>(arm);
            }
        }
        total += arm;
    }
    if (total != d.n) {
        throw ValidationError("empirical_distribution: counts sum to " + std::to_string(total) +
                              ", expected " + std::to_string(d.n));
    }
    return out;
}

void to_json(nlohmann::json& j, const ResponseFunctionModel& m) {
    j = nlohmann::json{{"weights", m.weights}};
}

void from_json(const nlohmann::json& j, ResponseFunctionModel& m) {
    if (!j.is_object() || !j.contains("weights")) {
        throw ValidationError("model must be an object with key \"weights\"");
    }
    const nlohmann::json& w = j.at("weights");
    if (!w.is_array() || w.size() != 16) {
        throw ValidationError("model weights must be an array of 16 numbers");
    }
    for (std::size_t i = 0; i < 16; ++i) {
        if (!w.at(i).is_number()) {
            throw ValidationError("model weights must be numbers");
        }
        m.weights[i] = w.at(i).get<double>();
    }
    validate_model(m);
}

void to_json(nlohmann::json& j, const SampledDataset& d) {
    nlohmann::json table = nlohmann::json::array();
    for (int z = 0; z < 2; ++z) {
        nlohmann::json zSlice = nlohmann::json::array();
        for (int x = 0; x < 2; ++x) {
            zSlice.push_back({d.counts[z][x][0], d.counts[z][x][1]});
        }
        table.push_back(zSlice);
    }
    j = nlohmann::json{{"n", d.n}, {"seed", d.seed}, {"counts", table}};
}

void from_json(const nlohmann::json& j, SampledDataset& d) {
    if (!j.is_object()) {
        throw ValidationError("dataset must be a JSON object");
    }
    d.n = j.at("n").get<std::uint64_t>();
    d.seed = j.at("seed").get<std::uint64_t>();
    const nlohmann::json& table = j.at("counts");
    if (!table.is_array() || table.size() != 2) {
        throw ValidationError("dataset counts must have two z slices");
    }
    for (int z = 0; z < 2; ++z) {
        const nlohmann::json& zSlice = table.at(z);
        if (!zSlice.is_array() || zSlice.size() != 2) {
            throw ValidationError("dataset z slice must have two x rows");
        }
        for (int x = 0; x < 2; ++x) {
            const nlohmann::json& cell = zSlice.at(x);
            if (!cell.is_array() || cell.size() != 2) {
                throw ValidationError("dataset x row must have two y entries");
            }
            for (int y = 0; y < 2; ++y) {
                d.counts[z][x][y] = cell.at(y).get<std::uint64_t>();
            }
        }
    }
}

}  // namespace qiv
