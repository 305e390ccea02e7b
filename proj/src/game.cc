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

#include <cmath>
#include <sstream>

#include "gantangan/errors.h"

namespace gantangan {
namespace {

void RequirePositive(double value, const char* name) {
  if (!(std::isfinite(value) && value > 0.0)) {
    std::ostringstream msg;
    msg << name << " must be a finite value > 0 (got " << value << ")";
    throw DomainError(msg.str());
  }
}

}  // namespace

std::string_view StrategyName(Strategy s) {
  switch (s) {
    case Strategy::kAlpha:
      return "alpha";
    case Strategy::kBeta:
      return "beta";
    case Strategy::kGamma:
      return "gamma";
  }
  return "unknown";
}

GantanganParams::GantanganParams(double p_es, double m_ss, double n)
    : p_es_(p_es), m_ss_(m_ss), n_(n) {
  RequirePositive(p_es, "p_ES");
  RequirePositive(m_ss, "m_SS");
  RequirePositive(n, "N");
}

PayoffMatrix::PayoffMatrix(const Mat3& entries) : entries_(entries) {
  for (const Vec3& row : entries_) {
    for (double a : row) {
      if (!std::isfinite(a)) throw DomainError("payoff entries must be finite");
    }
  }
}

PayoffMatrix PayoffMatrix::Scaled(double c) const {
  RequirePositive(c, "payoff scale");
  Mat3 scaled = entries_;
  for (Vec3& row : scaled) {
    for (double& a : row) a *= c;
  }
  return PayoffMatrix(scaled);
}

PopulationState::PopulationState(const Vec3& x) : x_(x) {
  double sum = 0.0;
  for (double xi : x_) {
    if (!std::isfinite(xi) || xi < 0.0) {
      std::ostringstream msg;
      msg << "population frequencies must be finite and >= 0 (got " << xi
          << ")";
      throw DomainError(msg.str());
    }
    sum += xi;
  }
  if (std::abs(sum - 1.0) > kRenormalizeTolerance) {
    std::ostringstream msg;
    msg << "population frequencies must sum to 1 (got " << sum << ")";
    throw DomainError(msg.str());
  }
  for (double& xi : x_) xi /= sum;
}

PopulationState PopulationState::Uniform() {
  return PopulationState({1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0});
}

PopulationState PopulationState::Vertex(Strategy s) {
  Vec3 x{0.0, 0.0, 0.0};
  x[Index(s)] = 1.0;
  return PopulationState(x);
}

PayoffMatrix BuildPayoff(const GantanganParams& params) {
  const double p = params.p_es();
  const double m = params.m_ss();
  const double n = params.n();
  return PayoffMatrix({{
      {n * (p + m), n * ((p + m) / 2.0), n * m},
      {n * ((p + m) / 2.0), n * m, n * m},
      {n * p, n * m, 0.0},
  }});
}

Vec3 Fitness(const Vec3& x, const PayoffMatrix& payoff) {
  Vec3 f{};
  for (int i = 0; i < 3; ++i) {
    f[i] = payoff(i, 0) * x[0] + payoff(i, 1) * x[1] + payoff(i, 2) * x[2];
  }
  return f;
}

Vec3 Fitness(const PopulationState& state, const PayoffMatrix& payoff) {
  return Fitness(state.frequencies(), payoff);
}

double AverageFitness(const Vec3& x, const Vec3& fitness) {
  return x[0] * fitness[0] + x[1] * fitness[1] + x[2] * fitness[2];
}

double AverageFitness(const PopulationState& state, const Vec3& fitness) {
  return AverageFitness(state.frequencies(), fitness);
}

std::string_view DominanceKindName(DominanceKind kind) {
  switch (kind) {
    case DominanceKind::kStrict:
      return "STRICT";
    case DominanceKind::kWeak:
      return "WEAK";
    case DominanceKind::kNone:
      return "NONE";
  }
  return "NONE";
}

DominanceRelation Dominance(const PayoffMatrix& payoff, Strategy dominator,
                            Strategy dominated, double tol) {
  if (dominator == dominated) {
    throw DomainError("dominance needs two distinct strategies");
  }
  if (!(tol >= 0.0)) throw DomainError("dominance tolerance must be >= 0");

  bool all_strict = true;
  bool all_weak = true;
  bool any_strict = false;
  for (Strategy col : kAllStrategies) {
    const double mine = payoff.at(dominator, col);
    const double theirs = payoff.at(dominated, col);
    const bool strict = mine > theirs + tol;
    all_strict = all_strict && strict;
    any_strict = any_strict || strict;
    all_weak = all_weak && mine >= theirs - tol;
  }

  DominanceKind kind = DominanceKind::kNone;
  if (all_strict) {
    kind = DominanceKind::kStrict;
  } else if (all_weak && any_strict) {
    kind = DominanceKind::kWeak;
  }
  return {dominator, dominated, kind};
}

std::vector<DominanceRelation> DominanceReport(const PayoffMatrix& payoff,
                                               double tol) {
  std::vector<DominanceRelation> report;
  report.reserve(6);
  for (Strategy i : kAllStrategies) {
    for (Strategy j : kAllStrategies) {
      if (i != j) report.push_back(Dominance(payoff, i, j, tol));
    }
  }
  return report;
}

}  // namespace gantangan
