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

#ifndef GANTANGAN_GAME_H_
#define GANTANGAN_GAME_H_

#include <array>
#include <string_view>
#include <vector>

namespace gantangan {

using Vec3 = std::array<double, 3>;
using Mat3 = std::array<Vec3, 3>;

// The three ways of taking part in a gantangan feast. The integer values are
// the row/column order of every matrix and vector in this library.
enum class Strategy : int {
  kAlpha = 0,  // deposits more than average, expecting a larger return
  kBeta = 1,   // deposits the customary amount to keep social ties
  kGamma = 2,  // abstains
};

inline constexpr std::array<Strategy, 3> kAllStrategies = {
    Strategy::kAlpha, Strategy::kBeta, Strategy::kGamma};

constexpr int Index(Strategy s) { return static_cast<int>(s); }
std::string_view StrategyName(Strategy s);

inline constexpr double kDefaultScale = 1.0;

// Economic expectation p_ES, social gain m_SS and the uniform payoff scale N.
// All three must be strictly positive and finite.
class GantanganParams {
 public:
  GantanganParams(double p_es, double m_ss, double n = kDefaultScale);

  double p_es() const { return p_es_; }
  double m_ss() const { return m_ss_; }
  double n() const { return n_; }

  bool operator==(const GantanganParams&) const = default;

 private:
  double p_es_;
  double m_ss_;
  double n_;
};

// Row-player payoffs: (*this)(i, j) is what strategy i earns against j.
class PayoffMatrix {
 public:
  explicit PayoffMatrix(const Mat3& entries);

  double operator()(int row, int col) const { return entries_[row][col]; }
  double at(Strategy row, Strategy col) const {
    return entries_[Index(row)][Index(col)];
  }
  const Mat3& entries() const { return entries_; }

  // Entrywise product with c > 0.
  PayoffMatrix Scaled(double c) const;

  bool operator==(const PayoffMatrix&) const = default;

 private:
  Mat3 entries_;
};

// States whose sum is off by at most this much are renormalized on
// construction; anything further off is rejected.
inline constexpr double kRenormalizeTolerance = 1e-6;

// A point of the 3-simplex: nonnegative strategy frequencies summing to one.
class PopulationState {
 public:
  explicit PopulationState(const Vec3& x);

  static PopulationState Uniform();
  static PopulationState Vertex(Strategy s);

  double operator[](int i) const { return x_[i]; }
  double at(Strategy s) const { return x_[Index(s)]; }
  const Vec3& frequencies() const { return x_; }

  bool operator==(const PopulationState&) const = default;

 private:
  Vec3 x_;
};

PayoffMatrix BuildPayoff(const GantanganParams& params);

// f_i = sum_j a_ij x_j. The Vec3 overload accepts points off the simplex and
// is what the integrator and finite-difference code use.
Vec3 Fitness(const PopulationState& state, const PayoffMatrix& payoff);
Vec3 Fitness(const Vec3& x, const PayoffMatrix& payoff);

// phi = sum_i x_i f_i.
double AverageFitness(const PopulationState& state, const Vec3& fitness);
double AverageFitness(const Vec3& x, const Vec3& fitness);

enum class DominanceKind { kStrict, kWeak, kNone };
std::string_view DominanceKindName(DominanceKind kind);

struct DominanceRelation {
  Strategy dominator;
  Strategy dominated;
  DominanceKind kind;

  bool operator==(const DominanceRelation&) const = default;
};

inline constexpr double kDefaultDominanceTolerance = 1e-12;

// Row comparison of `dominator` against `dominated`:
//   kStrict  a[i][k] > a[j][k] + tol for every column k;
//   kWeak    a[i][k] >= a[j][k] - tol everywhere, > a[j][k] + tol somewhere;
//   kNone    otherwise.
// Throws DomainError when the two strategies coincide or tol < 0.
DominanceRelation Dominance(const PayoffMatrix& payoff, Strategy dominator,
                            Strategy dominated,
                            double tol = kDefaultDominanceTolerance);

// All six ordered pairs, in (dominator, dominated) lexicographic order.
std::vector<DominanceRelation> DominanceReport(
    const PayoffMatrix& payoff, double tol = kDefaultDominanceTolerance);

}  // namespace gantangan

#endif  // GANTANGAN_GAME_H_
