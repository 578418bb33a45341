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

#include <cmath>

#include "doctest.h"
#include "qiv/quantum.hpp"

using qiv::Complex;
using qiv::Matrix;
using qiv::ObservedDistribution;
using qiv::QuantumInstrumentalScenario;

namespace {

// (2 + sqrt 2)/8 and (2 - sqrt 2)/8, the two probabilities the singlet
// scenario produces.
const double kHigh = (2.0 + std::sqrt(2.0)) / 8.0;
const double kLow = (2.0 - std::sqrt(2.0)) / 8.0;

QuantumInstrumentalScenario with_rho(QuantumInstrumentalScenario s, Matrix rho) {
    s.rho.mat = std::move(rho);
    return s;
}

Matrix maximally_mixed4() {
    Matrix m = Matrix::identity(4);
    m *= Complex(0.25, 0.0);
    return m;
}

}  // namespace

TEST_CASE("bell preset passes validation and matches the printed matrices") {
    const QuantumInstrumentalScenario s = qiv::bell_preset();
    CHECK(qiv::validate_scenario(s).empty());

    CHECK(s.rho.mat(0, 0) == Complex(0.5, 0.0));
    CHECK(s.rho.mat(0, 3) == Complex(-0.5, 0.0));
    CHECK(s.rho.mat(3, 0) == Complex(-0.5, 0.0));
    CHECK(s.rho.mat(3, 3) == Complex(0.5, 0.0));
    CHECK(s.rho.mat(1, 1) == Complex(0.0, 0.0));

    CHECK(qiv::approx_equal(s.measurementsA[1].effects[0], Matrix{{0.5, 0.5}, {0.5, 0.5}}));
    CHECK(s.measurementsB[0].effects[0](0, 0).real() ==
          doctest::Approx(1.0 / (4.0 - 2.0 * std::sqrt(2.0))).epsilon(1e-12));
    CHECK(s.measurementsB[0].effects[0](0, 0).real() == doctest::Approx(0.853553).epsilon(1e-6));
}

TEST_CASE("validation reports scaled state and broken completeness") {
    QuantumInstrumentalScenario doubled = qiv::bell_preset();
    doubled.rho.mat *= Complex(2.0, 0.0);
    const std::vector<qiv::Violation> v1 = qiv::validate_scenario(doubled);
    REQUIRE(v1.size() == 1);
    CHECK(v1[0].object == "rho");
    CHECK(v1[0].check == "unit trace");
    CHECK(v1[0].residual == doctest::Approx(1.0).epsilon(1e-9));

    QuantumInstrumentalScenario overfull = qiv::bell_preset();
    overfull.measurementsA[0].effects = {Matrix::identity(2), Matrix::identity(2)};
    const std::vector<qiv::Violation> v2 = qiv::validate_scenario(overfull);
    REQUIRE(v2.size() == 1);
    CHECK(v2[0].object == "measurementsA[0]");
    CHECK(v2[0].check == "completeness");
    CHECK(v2[0].residual == doctest::Approx(1.0).epsilon(1e-9));

    QuantumInstrumentalScenario wrongDim = qiv::bell_preset();
    wrongDim.rho.mat = Matrix::identity(3);
    CHECK(!qiv::validate_scenario(wrongDim).empty());

    QuantumInstrumentalScenario negative = qiv::bell_preset();
    negative.measurementsB[1].effects = {Matrix{{-0.5, 0.0}, {0.0, 0.5}},
                                         Matrix{{1.5, 0.0}, {0.0, 0.5}}};
    bool sawPsd = false;
    for (const qiv::Violation& v : qiv::validate_scenario(negative)) {
        sawPsd = sawPsd || v.check == "positive semidefinite";
    }
    CHECK(sawPsd);
}

TEST_CASE("born distribution of the bell preset") {
    const ObservedDistribution d = qiv::born_distribution(qiv::bell_preset());

    CHECK(d.p[0][0][0] == doctest::Approx(kHigh).epsilon(1e-12));
    CHECK(d.p[0][0][1] == doctest::Approx(kLow).epsilon(1e-12));
    CHECK(d.p[0][1][0] == doctest::Approx(kLow).epsilon(1e-12));
    CHECK(d.p[0][1][1] == doctest::Approx(kHigh).epsilon(1e-12));
    CHECK(d.p[1][0][0] == doctest::Approx(kLow).epsilon(1e-12));
    CHECK(d.p[1][0][1] == doctest::Approx(kHigh).epsilon(1e-12));
    CHECK(d.p[1][1][0] == doctest::Approx(kLow).epsilon(1e-12));
    CHECK(d.p[1][1][1] == doctest::Approx(kHigh).epsilon(1e-12));

    CHECK(std::fabs(d.p[0][0][0] - 0.4268) <= 5e-5);
    CHECK(std::fabs(d.p[0][0][1] - 0.0732) <= 5e-5);
}

TEST_CASE("born distribution of product and mixed states") {
    const ObservedDistribution uniform =
        qiv::born_distribution(with_rho(qiv::bell_preset(), maximally_mixed4()));
    for (int z = 0; z < 2; ++z) {
        for (int x = 0; x < 2; ++x) {
            for (int y = 0; y < 2; ++y) {
                CHECK(uniform.p[z][x][y] == doctest::Approx(0.25).epsilon(1e-12));
            }
        }
    }

    Matrix zeroZero(4, 4);
    zeroZero(0, 0) = 1.0;
    const ObservedDistribution product =
        qiv::born_distribution(with_rho(qiv::bell_preset(), zeroZero));
    CHECK(product.p[0][0][0] == doctest::Approx(0.853553).epsilon(1e-6));
    CHECK(product.p[0][0][1] == doctest::Approx(0.146447).epsilon(1e-6));
    CHECK(product.p[0][1][0] == doctest::Approx(0.0));
    CHECK(product.p[0][1][1] == doctest::Approx(0.0));
}

TEST_CASE("born distribution rejects invalid scenarios") {
    QuantumInstrumentalScenario doubled = qiv::bell_preset();
    doubled.rho.mat *= Complex(2.0, 0.0);
    CHECK_THROWS_AS(qiv::born_distribution(doubled), qiv::ValidationError);
}

TEST_CASE("interventional distribution is independent of the z argument") {
    const QuantumInstrumentalScenario s = qiv::bell_preset();
    for (int x = 0; x < 2; ++x) {
        const qiv::InterventionalDistribution q0 = qiv::interventional_distribution(s, x, 0);
        const qiv::InterventionalDistribution q1 = qiv::interventional_distribution(s, x, 1);
        CHECK(q0.interventionX == x);
        CHECK(q0.interventionZ == 0);
        CHECK(q1.interventionZ == 1);
        for (int zp = 0; zp < 2; ++zp) {
            for (int xp = 0; xp < 2; ++xp) {
                for (int y = 0; y < 2; ++y) {
                    CHECK(std::fabs(q0.q[zp][xp][y] - q1.q[zp][xp][y]) <= 1e-12);
                }
            }
        }
        // Completeness at the treatment node collapses the y marginal.
        for (int zp = 0; zp < 2; ++zp) {
            CHECK(q0.q[zp][0][0] + q0.q[zp][1][0] == doctest::Approx(0.5).epsilon(1e-12));
        }
    }
    CHECK_THROWS_AS(qiv::interventional_distribution(s, 2, 0), qiv::ValidationError);
}

TEST_CASE("observed distribution is consistent with the interventional one") {
    for (std::uint64_t seed : {1ULL, 2ULL, 3ULL}) {
        const QuantumInstrumentalScenario s = qiv::random_scenario(seed);
        const ObservedDistribution obs = qiv::born_distribution(s);
        for (int x = 0; x < 2; ++x) {
            const qiv::InterventionalDistribution q = qiv::interventional_distribution(s, x, 0);
            for (int z = 0; z < 2; ++z) {
                for (int y = 0; y < 2; ++y) {
                    CHECK(std::fabs(obs.p[z][x][y] - q.q[z][x][y]) <= 1e-12);
                }
            }
        }
    }
}

TEST_CASE("potential outcome marginals and the true effect") {
    const QuantumInstrumentalScenario s = qiv::bell_preset();
    for (int x = 0; x < 2; ++x) {
        const auto [p0, p1] = qiv::potential_outcome_marginal(s, x);
        CHECK(p0 == doctest::Approx(0.5).epsilon(1e-12));
        CHECK(p1 == doctest::Approx(0.5).epsilon(1e-12));
    }
    CHECK(std::fabs(qiv::true_ace(s)) <= 1e-12);

    QuantumInstrumentalScenario sure = s;
    sure.measurementsB[0].effects = {Matrix(2, 2), Matrix::identity(2)};
    sure.measurementsB[1].effects = {Matrix(2, 2), Matrix::identity(2)};
    const auto [q0, q1] = qiv::potential_outcome_marginal(sure, 0);
    CHECK(q0 == doctest::Approx(0.0));
    CHECK(q1 == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::fabs(qiv::true_ace(sure)) <= 1e-12);

    QuantumInstrumentalScenario flip = s;
    flip.measurementsB[0].effects = {Matrix::identity(2), Matrix(2, 2)};
    flip.measurementsB[1].effects = {Matrix(2, 2), Matrix::identity(2)};
    CHECK(qiv::true_ace(flip) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("marginal exogeneity holds for the preset and random scenarios") {
    const qiv::MarginalExogeneityReport bell =
        qiv::check_marginal_exogeneity(qiv::bell_preset());
    CHECK(bell.holds);
    CHECK(bell.maxDeviation <= 1e-12);

    const qiv::MarginalExogeneityReport mixed = qiv::check_marginal_exogeneity(
        with_rho(qiv::bell_preset(), maximally_mixed4()));
    CHECK(mixed.holds);
    CHECK(mixed.maxDeviation <= 1e-15);

    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const QuantumInstrumentalScenario s = qiv::random_scenario(seed);
        const qiv::MarginalExogeneityReport r = qiv::check_marginal_exogeneity(s);
        INFO("seed " << seed);
        CHECK(r.holds);
        CHECK(r.maxDeviation <= 1e-10);
    }
}

TEST_CASE("random scenarios are valid, normalized, and deterministic") {
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        const QuantumInstrumentalScenario s = qiv::random_scenario(seed);
        INFO("seed " << seed);
        CHECK(qiv::validate_scenario(s).empty());
        const ObservedDistribution d = qiv::born_distribution(s);
        for (int z = 0; z < 2; ++z) {
            double sum = 0.0;
            for (int x = 0; x < 2; ++x) {
                sum += d.p[z][x][0] + d.p[z][x][1];
            }
            CHECK(std::fabs(sum - 1.0) <= 1e-9);
        }
    }

    const QuantumInstrumentalScenario a = qiv::random_scenario(7);
    const QuantumInstrumentalScenario b = qiv::random_scenario(7);
    CHECK(qiv::max_abs_diff(a.rho.mat, b.rho.mat) == 0.0);
    CHECK(qiv::max_abs_diff(a.measurementsA[0].effects[0], b.measurementsA[0].effects[0]) == 0.0);
    CHECK(qiv::max_abs_diff(a.measurementsB[1].effects[1], b.measurementsB[1].effects[1]) == 0.0);
}

TEST_CASE("scenario json round trip") {
    const QuantumInstrumentalScenario s = qiv::bell_preset();
    nlohmann::json j = s;
    CHECK(j.at("dimA") == 2);
    CHECK(j.at("dimB") == 2);
    REQUIRE(j.at("measurementsA").size() == 2);
    REQUIRE(j.at("measurementsB").size() == 2);

    const auto back = nlohmann::json::parse(j.dump()).get<QuantumInstrumentalScenario>();
    CHECK(qiv::validate_scenario(back).empty());
    CHECK(qiv::max_abs_diff(back.rho.mat, s.rho.mat) == 0.0);
    for (int z = 0; z < 2; ++z) {
        for (int x = 0; x < 2; ++x) {
            CHECK(qiv::max_abs_diff(back.measurementsA[z].effects[static_cast<std::size_t>(x)],
                                    s.measurementsA[z].effects[static_cast<std::size_t>(x)]) ==
                  0.0);
            CHECK(qiv::max_abs_diff(back.measurementsB[x].effects[static_cast<std::size_t>(z)],
                                    s.measurementsB[x].effects[static_cast<std::size_t>(z)]) ==
                  0.0);
        }
    }

    CHECK_THROWS_AS(nlohmann::json::parse("{\"dimA\":2}").get<QuantumInstrumentalScenario>(),
                    nlohmann::json::exception);
    CHECK_THROWS_AS(nlohmann::json::parse("[1,2]").get<QuantumInstrumentalScenario>(),
                    qiv::ValidationError);
}

TEST_CASE("distribution json round trip and clamping") {
    const ObservedDistribution d = qiv::born_distribution(qiv::bell_preset());
    nlohmann::json j = d;
    const ObservedDistribution back = nlohmann::json::parse(j.dump()).get<ObservedDistribution>();
    for (int z = 0; z < 2; ++z) {
        for (int x = 0; x < 2; ++x) {
            for (int y = 0; y < 2; ++y) {
                CHECK(back.p[z][x][y] == d.p[z][x][y]);
            }
        }
    }

    std::array<std::array<std::array<double, 2>, 2>, 2> raw{};
    raw[0][0][0] = 1.0 + 5e-13;
    raw[0][0][1] = -5e-13;
    raw[1][1][1] = 1.0;
    const ObservedDistribution clamped = qiv::clamped_distribution(raw);
    CHECK(clamped.p[0][0][1] == 0.0);

    raw[0][0][1] = -1e-11;
    raw[0][0][0] = 1.0 + 1e-11;
    CHECK_THROWS_AS(qiv::clamped_distribution(raw), qiv::ValidationError);

    raw[0][0][1] = 0.0;
    raw[0][0][0] = 1.01;
    CHECK_THROWS_AS(qiv::clamped_distribution(raw), qiv::ValidationError);
}
