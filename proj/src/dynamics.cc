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

#include "gantangan/dynamics.h"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <utility>

#include "gantangan/errors.h"

namespace gantangan {
namespace {

constexpr double kRowSumTolerance = 1e-12;

void ValidateStep(double dt, double t_end) {
  if (!(std::isfinite(dt) && dt > 0.0)) {
    throw DomainError("dt must be a finite value > 0");
  }
  if (!(std::isfinite(t_end) && t_end >= dt)) {
    std::ostringstream msg;
    msg << "t_end must be finite and >= dt (got t_end=" << t_end
        << ", dt=" << dt << ")";
    throw DomainError(msg.str());
  }
}

Vec3 Axpy(const Vec3& x, double a, const Vec3& y) {
  return {x[0] + a * y[0], x[1] + a * y[1], x[2] + a * y[2]};
}

// Next state after one RK4 step, given the field already evaluated at x.
PopulationState Advance(const Vec3& x, const Vec3& k1,
                        const PayoffMatrix& payoff,
                        const MutationKernel& kernel, double dt) {
  const Vec3 k2 = VectorField(Axpy(x, 0.5 * dt, k1), payoff, kernel);
  const Vec3 k3 = VectorField(Axpy(x, 0.5 * dt, k2), payoff, kernel);
  const Vec3 k4 = VectorField(Axpy(x, dt, k3), payoff, kernel);

  Vec3 next{};
  double sum = 0.0;
  double lowest = 0.0;
  for (int i = 0; i < 3; ++i) {
    next[i] = x[i] + dt / 6.0 * (k1[i] + 2.0 * (k2[i] + k3[i]) + k4[i]);
    sum += next[i];
    lowest = std::min(lowest, next[i]);
  }
  if (!std::isfinite(sum) || lowest < -kStepExcursionTolerance ||
      std::abs(sum - 1.0) > kStepExcursionTolerance) {
    std::ostringstream msg;
    msg << "RK4 step with dt=" << dt << " left the simplex (min component "
        << lowest << ", sum " << sum << "); reduce dt";
    throw StepError(msg.str());
  }

  sum = 0.0;
  for (double& xi : next) {
    xi = std::max(xi, 0.0);
    sum += xi;
  }
  for (double& xi : next) xi /= sum;
  return PopulationState(next);
}

}  // namespace

MutationKernel::MutationKernel(const Mat3& q) : q_(q), mu_(0.0) {
  for (int j = 0; j < 3; ++j) {
    double row_sum = 0.0;
    for (int i = 0; i < 3; ++i) {
      if (!(q_[j][i] >= 0.0 && q_[j][i] <= 1.0)) {
        throw DomainError("mutation kernel entries must lie in [0, 1]");
      }
      row_sum += q_[j][i];
    }
    if (std::abs(row_sum - 1.0) > kRowSumTolerance) {
      throw DomainError("mutation kernel rows must sum to 1");
    }
    mu_ = std::max(mu_, 1.0 - q_[j][j]);
  }
}

MutationKernel MutationKernel::Identity() { return UniformKernel(0.0); }

MutationKernel UniformKernel(double mu) {
  if (!(mu >= 0.0 && mu < 1.0)) {
    std::ostringstream msg;
    msg << "mutation rate must satisfy 0 <= mu < 1 (got " << mu << ")";
    throw DomainError(msg.str());
  }
  const double stay = 1.0 - mu;
  const double move = mu / 2.0;
  return MutationKernel({{
      {stay, move, move},
      {move, stay, move},
      {move, move, stay},
  }});
}

Vec3 VectorField(const Vec3& x, const PayoffMatrix& payoff,
                 const MutationKernel& kernel) {
  const Vec3 f = Fitness(x, payoff);
  const double phi = AverageFitness(x, f);
  Vec3 dx{};
  for (int i = 0; i < 3; ++i) {
    double inflow = 0.0;
    for (int j = 0; j < 3; ++j) inflow += x[j] * f[j] * kernel(j, i);
    dx[i] = inflow - x[i] * phi;
  }
  return dx;
}

Vec3 Derivative(const PopulationState& state, const PayoffMatrix& payoff,
                const MutationKernel& kernel) {
  return VectorField(state.frequencies(), payoff, kernel);
}

Vec3 ReplicatorDerivative(const PopulationState& state,
                          const PayoffMatrix& payoff) {
  const Vec3 f = Fitness(state, payoff);
  const double phi = AverageFitness(state, f);
  return {state[0] * (f[0] - phi), state[1] * (f[1] - phi),
          state[2] * (f[2] - phi)};
}

double MaxNorm(const Vec3& v) {
  return std::max({std::abs(v[0]), std::abs(v[1]), std::abs(v[2])});
}

Trajectory::Trajectory(GantanganParams params, double mu, double dt,
                       std::vector<double> times,
                       std::vector<PopulationState> states)
    : params_(std::move(params)),
      mu_(mu),
      dt_(dt),
      times_(std::move(times)),
      states_(std::move(states)) {
  if (times_.empty() || times_.size() != states_.size()) {
    throw DomainError("trajectory needs one state per time, at least one");
  }
  if (!(dt_ > 0.0)) throw DomainError("trajectory dt must be > 0");
  if (times_.front() < 0.0) throw DomainError("trajectory times must be >= 0");
  for (std::size_t k = 1; k < times_.size(); ++k) {
    const double gap = times_[k] - times_[k - 1];
    if (!(gap > 0.0) || std::abs(gap - dt_) > 1e-9 * std::max(1.0, dt_)) {
      throw DomainError("trajectory times must be spaced uniformly by dt");
    }
  }
}

PopulationState RungeKuttaStep(const PopulationState& state,
                               const PayoffMatrix& payoff,
                               const MutationKernel& kernel, double dt) {
  const Vec3& x = state.frequencies();
  return Advance(x, VectorField(x, payoff, kernel), payoff, kernel, dt);
}

Trajectory Integrate(const PopulationState& x0, const GantanganParams& params,
                     double mu, double dt, double t_end) {
  ValidateStep(dt, t_end);
  const MutationKernel kernel = UniformKernel(mu);
  const PayoffMatrix payoff = BuildPayoff(params);

  const auto steps = static_cast<std::size_t>(std::floor(t_end / dt + 1e-9));
  std::vector<double> times;
  std::vector<PopulationState> states;
  times.reserve(steps + 1);
  states.reserve(steps + 1);
  times.push_back(0.0);
  states.push_back(x0);
  for (std::size_t k = 1; k <= steps; ++k) {
    states.push_back(RungeKuttaStep(states.back(), payoff, kernel, dt));
    times.push_back(static_cast<double>(k) * dt);
  }
  return Trajectory(params, mu, dt, std::move(times), std::move(states));
}

FlowEndpoint IntegrateToConvergence(const PopulationState& x0,
                                    const GantanganParams& params, double mu,
                                    double dt, double t_max, double tol) {
  ValidateStep(dt, t_max);
  const MutationKernel kernel = UniformKernel(mu);
  const PayoffMatrix payoff = BuildPayoff(params);

  const auto steps = static_cast<std::size_t>(std::floor(t_max / dt + 1e-9));
  PopulationState x = x0;
  for (std::size_t k = 0; k < steps; ++k) {
    const Vec3 speed = VectorField(x.frequencies(), payoff, kernel);
    if (MaxNorm(speed) < tol) {
      return {x, static_cast<double>(k) * dt, true};
    }
    x = Advance(x.frequencies(), speed, payoff, kernel, dt);
  }
  const bool settled =
      MaxNorm(VectorField(x.frequencies(), payoff, kernel)) < tol;
  return {x, static_cast<double>(steps) * dt, settled};
}

std::vector<double> TrajectoryPhi(const Trajectory& trajectory) {
  const PayoffMatrix payoff = BuildPayoff(trajectory.params());
  std::vector<double> phi;
  phi.reserve(trajectory.size());
  for (const PopulationState& x : trajectory.states()) {
    phi.push_back(AverageFitness(x, Fitness(x, payoff)));
  }
  return phi;
}

}  // namespace gantangan
