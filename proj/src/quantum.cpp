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

#include "qiv/quantum.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "qiv/rng.hpp"

namespace qiv {

namespace {

constexpr double kMatrixTol = 1e-10;  // Hermiticity, PSD, completeness, unit trace
constexpr double kNormTol = 1e-9;     // distribution normalization
constexpr double kImagTol = 1e-10;    // allowed imaginary residue of a Born trace

void check_matrix(std::vector<Violation>& out, const std::string& name, const Matrix& m,
                  int dim, bool wantUnitTrace) {
    if (m.rows() != dim || m.cols() != dim) {
        out.push_back({name, "dimension",
                       std::fabs(static_cast<double>(m.rows() - dim)) +
                           std::fabs(static_cast<double>(m.cols() - dim))});
        return;
    }
    if (!m.all_finite()) {
        out.push_back({name, "finite entries", std::numeric_limits<double>::infinity()});
        return;
    }
    const double herm = hermiticity_residual(m);
    if (herm > kMatrixTol) {
        out.push_back({name, "hermitian", herm});
    } else {
        Matrix h = m + dagger(m);
        h *= Complex(0.5, 0.0);
        const std::vector<double> eig = eig_hermitian(h);
        if (eig.front() < -kMatrixTol) {
            out.push_back({name, "positive semidefinite", -eig.front()});
        }
    }
    if (wantUnitTrace) {
        const double traceResidual = std::abs(trace(m) - Complex(1.0, 0.0));
        if (traceResidual > kMatrixTol) {
            out.push_back({name, "unit trace", traceResidual});
        }
    }
}

void check_povm(std::vector<Violation>& out, const std::string& name, const Povm& povm,
                int dim) {
    if (povm.effects.size() != 2) {
        out.push_back({name, "outcome count",
                       std::fabs(static_cast<double>(povm.effects.size()) - 2.0)});
        return;
    }
    bool shapesOk = true;
    for (std::size_t k = 0; k < povm.effects.size(); ++k) {
        const Matrix& e = povm.effects[k];
        check_matrix(out, name + ".effects[" + std::to_string(k) + "]", e, dim, false);
        shapesOk = shapesOk && e.rows() == dim && e.cols() == dim;
    }
    if (shapesOk) {
        Matrix sum = povm.effects[0];
        sum += povm.effects[1];
        const double residual = max_abs_diff(sum, Matrix::identity(dim));
        if (residual > kMatrixTol) {
            out.push_back({name, "completeness", residual});
        }
    }
}

void require_valid(const QuantumInstrumentalScenario& s) {
    const std::vector<Violation> v = validate_scenario(s);
    if (v.empty()) {
        return;
    }
    std::ostringstream os;
    os << "invalid scenario:";
    for (const Violation& viol : v) {
        os << ' ' << viol.object << " fails " << viol.check << " (residual " << viol.residual
           << ");";
    }
    throw ValidationError(os.str());
}

void require_bit(int value, const char* name) {
    if (value != 0 && value != 1) {
        throw ValidationError(std::string(name) + " must be 0 or 1");
    }
}

// tr[(A tensor B) rho] with the imaginary residue checked and dropped.
double born_trace(const Matrix& a, const Matrix& b, const Matrix& rho) {
    const Complex t = trace(kron(a, b) * rho);
    if (!std::isfinite(t.real()) || !std::isfinite(t.imag())) {
        throw NumericalError("born trace is not finite");
    }
    if (std::fabs(t.imag()) > kImagTol) {
        throw NumericalError("born trace has imaginary residue " + std::to_string(t.imag()));
    }
    return t.real();
}

double clamp_probability(double p) {
    if (p < -kNormTol) {
        throw NumericalError("born probability " + std::to_string(p) + " is negative");
    }
    return p < 0.0 ? 0.0 : p;
}

void check_normalized(const std::array<std::array<double, 2>, 2>& slice, const char* what) {
    const double sum = slice[0][0] + slice[0][1] + slice[1][0] + slice[1][1];
    if (std::fabs(sum - 1.0) > kNormTol) {
        throw NumericalError(std::string(what) + " slice sums to " + std::to_string(sum));
    }
}

}  // namespace

std::vector<Violation> validate_scenario(const QuantumInstrumentalScenario& s) {
    std::vector<Violation> out;
    if (s.dimA < 1) {
        out.push_back({"dimA", "positive dimension", static_cast<double>(s.dimA)});
    }
    if (s.dimB < 1) {
        out.push_back({"dimB", "positive dimension", static_cast<double>(s.dimB)});
    }
    if (!out.empty()) {
        return out;
    }
    check_matrix(out, "rho", s.rho.mat, s.dimA * s.dimB, true);
    for (int z = 0; z < 2; ++z) {
        check_povm(out, "measurementsA[" + std::to_string(z) + "]", s.measurementsA[z], s.dimA);
    }
    for (int x = 0; x < 2; ++x) {
        check_povm(out, "measurementsB[" + std::to_string(x) + "]", s.measurementsB[x], s.dimB);
    }
    return out;
}

QuantumInstrumentalScenario bell_preset() {
    const double s2 = std::sqrt(2.0);
    const double cm = 1.0 / (4.0 - 2.0 * s2);
    const double cp = 1.0 / (4.0 + 2.0 * s2);

    QuantumInstrumentalScenario s;
    s.dimA = 2;
    s.dimB = 2;

    s.rho.mat = Matrix(4, 4);
    s.rho.mat(0, 0) = 0.5;
    s.rho.mat(0, 3) = -0.5;
    s.rho.mat(3, 0) = -0.5;
    s.rho.mat(3, 3) = 0.5;

    s.measurementsA[0].effects = {Matrix{{1.0, 0.0}, {0.0, 0.0}},
                                  Matrix{{0.0, 0.0}, {0.0, 1.0}}};
    s.measurementsA[1].effects = {Matrix{{0.5, 0.5}, {0.5, 0.5}},
                                  Matrix{{0.5, -0.5}, {-0.5, 0.5}}};

    s.measurementsB[0].effects = {
        cm * Matrix{{1.0, s2 - 1.0}, {s2 - 1.0, 3.0 - 2.0 * s2}},
        cp * Matrix{{1.0, -s2 - 1.0}, {-s2 - 1.0, 3.0 + 2.0 * s2}}};
    s.measurementsB[1].effects = {
        cm * Matrix{{1.0, 1.0 - s2}, {1.0 - s2, 3.0 - 2.0 * s2}},
        cp * Matrix{{1.0, s2 + 1.0}, {s2 + 1.0, 3.0 + 2.0 * s2}}};
    return s;
}

ObservedDistribution born_distribution(const QuantumInstrumentalScenario& s) {
    require_valid(s);
    ObservedDistribution d;
    for (int z = 0; z < 2; ++z) {
        for (int x = 0; x < 2; ++x) {
            for (int y = 0; y < 2; ++y) {
                d.p[z][x][y] = clamp_probability(born_trace(
                    s.measurementsA[z].effects[static_cast<std::size_t>(x)],
                    s.measurementsB[x].effects[static_cast<std::size_t>(y)], s.rho.mat));
            }
        }
    }
    for (int z = 0; z < 2; ++z) {
        check_normalized(d.p[z], "observed");
    }
    return d;
}

InterventionalDistribution interventional_distribution(const QuantumInstrumentalScenario& s,
                                                       int x, int z) {
    require_valid(s);
    require_bit(x, "intervention x");
    require_bit(z, "intervention z");
    InterventionalDistribution d;
    d.interventionX = x;
    d.interventionZ = z;
    for (int zp = 0; zp < 2; ++zp) {
        for (int xp = 0; xp < 2; ++xp) {
            for (int y = 0; y < 2; ++y) {
                d.q[zp][xp][y] = clamp_probability(born_trace(
                    s.measurementsA[zp].effects[static_cast<std::size_t>(xp)],
                    s.measurementsB[x].effects[static_cast<std::size_t>(y)], s.rho.mat));
            }
        }
    }
    for (int zp = 0; zp < 2; ++zp) {
        check_normalized(d.q[zp], "interventional");
    }
    return d;
}

std::pair<double, double> potential_outcome_marginal(const QuantumInstrumentalScenario& s,
                                                     int x) {
    require_valid(s);
    require_bit(x, "intervention x");
    const Matrix eye = Matrix::identity(s.dimA);
    const double p0 =
        born_trace(eye, s.measurementsB[static_cast<std::size_t>(x)].effects[0], s.rho.mat);
    const double p1 =
        born_trace(eye, s.measurementsB[static_cast<std::size_t>(x)].effects[1], s.rho.mat);
    if (std::fabs(p0 + p1 - 1.0) > kMatrixTol) {
        throw NumericalError("potential outcome marginal sums to " + std::to_string(p0 + p1));
    }
    return {clamp_probability(p0), clamp_probability(p1)};
}

double true_ace(const QuantumInstrumentalScenario& s) {
    const double ace =
        potential_outcome_marginal(s, 1).second - potential_outcome_marginal(s, 0).second;
    return std::clamp(ace, -1.0, 1.0);
}

MarginalExogeneityReport check_marginal_exogeneity(const QuantumInstrumentalScenario& s,
                                                   double tol) {
    require_valid(s);
    MarginalExogeneityReport report;
    for (int x = 0; x < 2; ++x) {
        for (int z = 0; z < 2; ++z) {
            const InterventionalDistribution d = interventional_distribution(s, x, z);
            for (int y = 0; y < 2; ++y) {
                const double atZ1 = d.q[1][0][y] + d.q[1][1][y];
                const double atZ0 = d.q[0][0][y] + d.q[0][1][y];
                report.maxDeviation = std::max(report.maxDeviation, std::fabs(atZ1 - atZ0));
            }
        }
    }
    report.holds = report.maxDeviation <= tol;
    return report;
}

namespace {

Matrix random_gaussian_matrix(Rng& rng, int dim) {
    Matrix g(dim, dim);
    for (int i = 0; i < dim; ++i) {
        for (int j = 0; j < dim; ++j) {
            g(i, j) = Complex(rng.gaussian(), rng.gaussian());
        }
    }
    return g;
}

Povm random_binary_povm(Rng& rng, int dim) {
    for (;;) {
        const Matrix g = random_gaussian_matrix(rng, dim);
        Matrix e0 = g * dagger(g);
        const std::vector<double> eig = eig_hermitian(e0);
        const double top = eig.back();
        if (top < 1e-12) {
            continue;
        }
        e0 = Complex(1.0 / (top * (1.0 + rng.uniform())), 0.0) * e0;
        Matrix e1 = Matrix::identity(dim);
        e1 -= e0;
        return Povm{{e0, e1}};
    }
}

}  // namespace

QuantumInstrumentalScenario random_scenario(std::uint64_t seed) {
    Rng rng(seed);
    QuantumInstrumentalScenario s;
    s.dimA = 2;
    s.dimB = 2;

    const int dim = s.dimA * s.dimB;
    std::vector<Complex> v(static_cast<std::size_t>(dim));
    double norm2 = 0.0;
    for (Complex& c : v) {
        c = Complex(rng.gaussian(), rng.gaussian());
        norm2 += std::norm(c);
    }
    const double inv = 1.0 / std::sqrt(norm2);
    s.rho.mat = Matrix(dim, dim);
    for (int i = 0; i < dim; ++i) {
        for (int j = 0; j < dim; ++j) {
            s.rho.mat(i, j) = v[static_cast<std::size_t>(i)] * inv *
                              std::conj(v[static_cast<std::size_t>(j)]) * inv;
        }
    }

    for (int z = 0; z < 2; ++z) {
        s.measurementsA[z] = random_binary_povm(rng, s.dimA);
    }
    for (int x = 0; x < 2; ++x) {
        s.measurementsB[x] = random_binary_povm(rng, s.dimB);
    }
    return s;
}

ObservedDistribution clamped_distribution(
    const std::array<std::array<std::array<double, 2>, 2>, 2>& raw) {
    ObservedDistribution d;
    for (int z = 0; z < 2; ++z) {
        double sum = 0.0;
        for (int x = 0; x < 2; ++x) {
            for (int y = 0; y < 2; ++y) {
                const double v = raw[z][x][y];
                if (!std::isfinite(v)) {
                    throw ValidationError("distribution entry is not finite");
                }
                if (v < -1e-12) {
                    throw ValidationError("distribution entry " + std::to_string(v) +
                                          " is negative");
                }
                d.p[z][x][y] = v < 0.0 ? 0.0 : v;
                sum += v;
            }
        }
        if (std::fabs(sum - 1.0) > kNormTol) {
            throw ValidationError("distribution for z=" + std::to_string(z) + " sums to " +
                                  std::to_string(sum));
        }
    }
    return d;
}

void to_json(nlohmann::json& j, const DensityOperator& d) { to_json(j, d.mat); }

void from_json(const nlohmann::json& j, DensityOperator& d) { from_json(j, d.mat); }

void to_json(nlohmann::json& j, const Povm& p) { j = p.effects; }

void from_json(const nlohmann::json& j, Povm& p) {
    if (!j.is_array()) {
        throw ValidationError("povm must be an array of matrices");
    }
    p.effects = j.get<std::vector<Matrix>>();
}

void to_json(nlohmann::json& j, const QuantumInstrumentalScenario& s) {
    j = nlohmann::json{{"dimA", s.dimA},
                       {"dimB", s.dimB},
                       {"rho", s.rho},
                       {"measurementsA", s.measurementsA},
                       {"measurementsB", s.measurementsB}};
}

void from_json(const nlohmann::json& j, QuantumInstrumentalScenario& s) {
    if (!j.is_object()) {
        throw ValidationError("scenario must be a JSON object");
    }
    s.dimA = j.at("dimA").get<int>();
    s.dimB = j.at("dimB").get<int>();
    j.at("rho").get_to(s.rho);
    const nlohmann::json& ma = j.at("measurementsA");
    const nlohmann::json& mb = j.at("measurementsB");
    if (!ma.is_array() || ma.size() != 2 || !mb.is_array() || mb.size() != 2) {
        throw ValidationError("measurementsA and measurementsB must be arrays of two povms");
    }
    for (int i = 0; i < 2; ++i) {
        ma.at(i).get_to(s.measurementsA[static_cast<std::size_t>(i)]);
        mb.at(i).get_to(s.measurementsB[static_cast<std::size_t>(i)]);
    }
}

void to_json(nlohmann::json& j, const ObservedDistribution& d) {
    nlohmann::json table = nlohmann::json::array();
    for (int z = 0; z < 2; ++z) {
        nlohmann::json zSlice = nlohmann::json::array();
        for (int x = 0; x < 2; ++x) {
            zSlice.push_back({std::max(d.p[z][x][0], 0.0), std::max(d.p[z][x][1], 0.0)});
        }
        table.push_back(zSlice);
    }
    j = nlohmann::json{{"p", table}};
}

void from_json(const nlohmann::json& j, ObservedDistribution& d) {
    if (!j.is_object() || !j.contains("p")) {
        throw ValidationError("distribution must be an object with key \"p\"");
    }
    const nlohmann::json& table = j.at("p");
    std::array<std::array<std::array<double, 2>, 2>, 2> raw{};
    if (!table.is_array() || table.size() != 2) {
        throw ValidationError("distribution table must have two z slices");
    }
    for (int z = 0; z < 2; ++z) {
        const nlohmann::json& zSlice = table.at(z);
        if (!zSlice.is_array() || zSlice.size() != 2) {
            throw ValidationError("distribution z slice must have two x rows");
        }
        for (int x = 0; x < 2; ++x) {
            const nlohmann::json& row = zSlice.at(x);
            if (!row.is_array() || row.size() != 2) {
                throw ValidationError("distribution x row must have two y entries");
            }
            for (int y = 0; y < 2; ++y) {
                if (!row.at(y).is_number()) {
                    throw ValidationError("distribution entries must be numbers");
                }
                raw[z][x][y] = row.at(y).get<double>();
            }
        }
    }
    d = clamped_distribution(raw);
}

}  // namespace qiv
