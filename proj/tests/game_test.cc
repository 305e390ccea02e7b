// Copyright 2026 The Gantangan Authors
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

#include "gantangan/game.h"

#include <algorithm>
#include <cmath>
#include <random>

#include "doctest.h"
#include "gantangan/errors.h"
#include "oracles.h"

namespace gantangan {
namespace {

void CheckVecNear(const Vec3& got, const Vec3& want, double tol) {
  for (int i = 0; i < 3; ++i) CHECK(std::abs(got[i] - want[i]) <= tol);
}

TEST_CASE("strategies have a fixed index order") {
  CHECK(Index(Strategy::kAlpha) == 0);
  CHECK(Index(Strategy::kBeta) == 1);
  CHECK(Index(Strategy::kGamma) == 2);
  CHECK(kAllStrategies.size() == 3);
  CHECK(StrategyName(Strategy::kGamma) == "gamma");
}

TEST_CASE("BuildPayoff substitutes into the gantangan table") {
  const Mat3 a = BuildPayoff(GantanganParams(2, 1, 1)).entries();
  CHECK(a == Mat3{{{3, 1.5, 1}, {1.5, 1, 1}, {2, 1, 0}}});

  const Mat3 b = BuildPayoff(GantanganParams(1, 1, 2)).entries();
  CHECK(b == Mat3{{{4, 2, 2}, {2, 2, 2}, {2, 2, 0}}});

  CHECK(GantanganParams(3, 4).n() == 1.0);
}

TEST_CASE("GantanganParams rejects non-positive inputs") {
  CHECK_THROWS_AS(GantanganParams(0, 1, 1), DomainError);
  CHECK_THROWS_AS(GantanganParams(1, 0, 1), DomainError);
  CHECK_THROWS_AS(GantanganParams(1, -2, 1), DomainError);
  CHECK_THROWS_AS(GantanganParams(1, 1, 0), DomainError);
  CHECK_THROWS_AS(GantanganParams(std::nan(""), 1, 1), DomainError);
  CHECK_THROWS_AS(GantanganParams(1, INFINITY, 1), DomainError);
}

TEST_CASE("PayoffMatrix rejects non-finite entries") {
  CHECK_THROWS_AS(PayoffMatrix({{{1, 2, 3}, {4, NAN, 6}, {7, 8, 9}}}),
                  DomainError);
}

TEST_CASE("payoff structure holds across random parameters") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.01, 10.0);
  for (int trial = 0; trial < 200; ++trial) {
    const double p = u(rng), m = u(rng), n = u(rng), c = u(rng);
    const PayoffMatrix a = BuildPayoff(GantanganParams(p, m, n));
    CHECK(a(0, 0) > a(2, 0));
    CHECK(a(0, 2) == a(1, 1));
    CHECK(a(1, 1) == a(1, 2));
    CHECK(a(1, 2) == a(2, 1));
    CHECK(a(2, 2) == 0.0);
    const oracle::Mat want = oracle::Payoff(p, m, n);
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) {
        CHECK(a(i, j) >= 0.0);
        CHECK(a(i, j) == doctest::Approx(want[i][j]).epsilon(1e-15));
      }
    }
    // Scaling N scales every entry.
    const PayoffMatrix scaled = BuildPayoff(GantanganParams(p, m, c * n));
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) {
        CHECK(std::abs(scaled(i, j) - c * a(i, j)) <=
              1e-12 * std::max(1.0, scaled(i, j)));
      }
    }
  }
}

TEST_CASE("PopulationState normalization") {
  const PopulationState drift({0.5 + 4e-7, 0.25, 0.25});
  CHECK(std::abs(drift[0] + drift[1] + drift[2] - 1.0) <= 1e-15);

  CHECK_THROWS_AS(PopulationState({0.5, 0.5, 0.1}), DomainError);
  CHECK_THROWS_AS(PopulationState({1.1, -0.1, 0.0}), DomainError);
  CHECK_THROWS_AS(PopulationState({NAN, 0.5, 0.5}), DomainError);

  CHECK(PopulationState::Vertex(Strategy::kBeta).frequencies() ==
        Vec3{0, 1, 0});
  CHECK(PopulationState::Uniform()[2] == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("Fitness is the matrix-vector product") {
  const PayoffMatrix a = BuildPayoff(GantanganParams(2, 1, 1));
  CheckVecNear(Fitness(PopulationState::Uniform(), a),
               {11.0 / 6.0, 7.0 / 6.0, 1.0}, 1e-15);
  CheckVecNear(Fitness(PopulationState::Vertex(Strategy::kGamma), a),
               {1, 1, 0}, 0.0);

  const PayoffMatrix b = BuildPayoff(GantanganParams(0.7, 2.9, 1.3));
  CheckVecNear(Fitness(PopulationState::Vertex(Strategy::kAlpha), b),
               {b(0, 0), b(1, 0), b(2, 0)}, 0.0);
}

TEST_CASE("Fitness is linear along segments of the simplex") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.1, 5.0), lam(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    const PayoffMatrix a = BuildPayoff(GantanganParams(u(rng), u(rng), u(rng)));
    const Vec3 x = oracle::RandomSimplexPoint(rng);
    const Vec3 y = oracle::RandomSimplexPoint(rng);
    const double l = lam(rng);
    const Vec3 mix{l * x[0] + (1 - l) * y[0], l * x[1] + (1 - l) * y[1],
                   l * x[2] + (1 - l) * y[2]};
    const Vec3 fx = Fitness(PopulationState(x), a);
    const Vec3 fy = Fitness(PopulationState(y), a);
    const Vec3 fm = Fitness(PopulationState(mix), a);
    for (int i = 0; i < 3; ++i) {
      CHECK(std::abs(fm[i] - (l * fx[i] + (1 - l) * fy[i])) <= 1e-12);
    }
  }
}

TEST_CASE("AverageFitness") {
  const PayoffMatrix a = BuildPayoff(GantanganParams(2, 1, 1));
  const PopulationState alpha = PopulationState::Vertex(Strategy::kAlpha);
  CHECK(AverageFitness(alpha, Fitness(alpha, a)) == 3.0);

  const PopulationState mid = PopulationState::Uniform();
  CHECK(AverageFitness(mid, Fitness(mid, a)) ==
        doctest::Approx(4.0 / 3.0).epsilon(1e-15));

  const PayoffMatrix b = BuildPayoff(GantanganParams(5, 0.2, 3));
  const PopulationState gamma = PopulationState::Vertex(Strategy::kGamma);
  CHECK(AverageFitness(gamma, Fitness(gamma, b)) == 0.0);
}

TEST_CASE("Dominance examples") {
  const PayoffMatrix a = BuildPayoff(GantanganParams(2, 1, 1));
  CHECK(Dominance(a, Strategy::kAlpha, Strategy::kGamma).kind ==
        DominanceKind::kStrict);
  CHECK(Dominance(a, Strategy::kAlpha, Strategy::kBeta).kind ==
        DominanceKind::kWeak);
  CHECK(Dominance(a, Strategy::kGamma, Strategy::kAlpha).kind ==
        DominanceKind::kNone);

  const PayoffMatrix tie = BuildPayoff(GantanganParams(1, 1, 1));
  CHECK(Dominance(tie, Strategy::kAlpha, Strategy::kBeta).kind ==
        DominanceKind::kWeak);

  CHECK_THROWS_AS(Dominance(a, Strategy::kBeta, Strategy::kBeta), DomainError);
  CHECK_THROWS_AS(Dominance(a, Strategy::kAlpha, Strategy::kBeta, -1.0),
                  DomainError);
}

TEST_CASE("tolerance decides between strict and weak near ties") {
  // Rows differ by 1e-13 in the last column: a tie at the default tolerance.
  const PayoffMatrix a({{{2, 2, 1 + 1e-13}, {1, 1, 1}, {0, 0, 0}}});
  CHECK(Dominance(a, Strategy::kAlpha, Strategy::kBeta).kind ==
        DominanceKind::kWeak);
  CHECK(Dominance(a, Strategy::kAlpha, Strategy::kBeta, 0.0).kind ==
        DominanceKind::kStrict);
}

TEST_CASE("DominanceReport covers the six ordered pairs") {
  const auto report = DominanceReport(BuildPayoff(GantanganParams(2, 1, 1)));
  REQUIRE(report.size() == 6);
  auto contains = [&](const DominanceRelation& r) {
    return std::find(report.begin(), report.end(), r) != report.end();
  };
  CHECK(contains({Strategy::kAlpha, Strategy::kGamma, DominanceKind::kStrict}));
  CHECK(contains({Strategy::kAlpha, Strategy::kBeta, DominanceKind::kWeak}));

  const auto social = DominanceReport(BuildPayoff(GantanganParams(1, 3, 1)));
  CHECK(std::find(social.begin(), social.end(),
                  DominanceRelation{Strategy::kBeta, Strategy::kGamma,
                                    DominanceKind::kWeak}) != social.end());
}

TEST_CASE("dominance verdicts over random parameters") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.05, 8.0), scale(0.01, 100.0);
  for (int trial = 0; trial < 500; ++trial) {
    const double p = u(rng), m = u(rng);
    const PayoffMatrix a = BuildPayoff(GantanganParams(p, m, u(rng)));
    CHECK(Dominance(a, Strategy::kGamma, Strategy::kAlpha).kind !=
          DominanceKind::kStrict);
    if (p > m) {
      CHECK(Dominance(a, Strategy::kAlpha, Strategy::kGamma).kind ==
            DominanceKind::kStrict);
      CHECK(Dominance(a, Strategy::kAlpha, Strategy::kBeta).kind ==
            DominanceKind::kWeak);
    } else if (m > p) {
      CHECK(Dominance(a, Strategy::kBeta, Strategy::kGamma).kind ==
            DominanceKind::kWeak);
    }
    const double c = scale(rng);
    const auto before = DominanceReport(a, 1e-12);
    const auto after = DominanceReport(a.Scaled(c), 1e-12 * c);
    CHECK(before == after);
  }
}

}  // namespace
}  // namespace gantangan
