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

#ifndef GANTANGAN_DYNAMICS_H_
#define GANTANGAN_DYNAMICS_H_

#include <vector>

#include "gantangan/game.h"

namespace gantangan {

// Row-stochastic offspring kernel: (*this)(j, i) is the probability that a
// reproducing j-strategist produces an i-strategist.
class MutationKernel {
 public:
  // Rows must sum to 1 within 1e-12 and entries must lie in [0, 1].
  explicit MutationKernel(const Mat3& q);

  static MutationKernel Identity();

  double operator()(int parent, int offspring) const {
    return q_[parent][offspring];
  }
  const Mat3& entries() const { return q_; }

  // Largest probability mass any row sends off its own strategy. Equals the
  // rate passed to UniformKernel.
  double mu() const { return mu_; }

 private:
  Mat3 q_;
  double mu_;
};

// Diagonal 1 - mu, off-diagonal mu / 2. Requires 0 <= mu < 1.
MutationKernel UniformKernel(double mu);

// Replicator-mutator field: dx_i/dt = sum_j x_j f_j q_ji - x_i phi.
Vec3 Derivative(const PopulationState& state, const PayoffMatrix& payoff,
                const MutationKernel& kernel);

// Same field evaluated at an arbitrary point of R^3 (Runge-Kutta stages and
// finite differences step slightly off the simplex).
Vec3 VectorField(const Vec3& x, const PayoffMatrix& payoff,
                 const MutationKernel& kernel);

// Mutation-free form x_i (f_i - phi), written out separately.
Vec3 ReplicatorDerivative(const PopulationState& state,
                          const PayoffMatrix& payoff);

double MaxNorm(const Vec3& v);

inline constexpr double kDefaultStep = 0.01;
inline constexpr double kDefaultHorizon = 500.0;
// Flows whose speed drops below this are considered settled.
inline constexpr double kConvergenceTolerance = 1e-10;
// A raw RK4 step may undershoot zero or drift in sum by at most this much.
inline constexpr double kStepExcursionTolerance = 1e-6;

// States sampled at t = k * dt, k = 0, 1, ..., starting from x0.
class Trajectory {
 public:
  Trajectory(GantanganParams params, double mu, double dt,
             std::vector<double> times, std::vector<PopulationState> states);

  const GantanganParams& params() const { return params_; }
  double mu() const { return mu_; }
  double dt() const { return dt_; }
  const std::vector<double>& times() const { return times_; }
  const std::vector<PopulationState>& states() const { return states_; }
  std::size_t size() const { return states_.size(); }
  const PopulationState& back() const { return states_.back(); }

 private:
  GantanganParams params_;
  double mu_;
  double dt_;
  std::vector<double> times_;
  std::vector<PopulationState> states_;
};

// One classical RK4 step followed by projection onto the simplex (negative
// components clamped, then renormalized). Throws StepError if the raw step
// lands further than kStepExcursionTolerance outside the simplex.
PopulationState RungeKuttaStep(const PopulationState& state,
                               const PayoffMatrix& payoff,
                               const MutationKernel& kernel, double dt);

// Fixed-step RK4 from x0 over [0, t_end], uniform kernel with rate mu.
Trajectory Integrate(const PopulationState& x0, const GantanganParams& params,
                     double mu, double dt = kDefaultStep,
                     double t_end = kDefaultHorizon);

struct FlowEndpoint {
  PopulationState state;
  double time;     // when the run stopped
  bool converged;  // true if the speed fell below tol before t_max
};

// Like Integrate but keeps only the current state and stops as soon as
// ||dx/dt||_inf < tol.
FlowEndpoint IntegrateToConvergence(const PopulationState& x0,
                                    const GantanganParams& params, double mu,
                                    double dt, double t_max,
                                    double tol = kConvergenceTolerance);

// Average fitness at every stored state.
std::vector<double> TrajectoryPhi(const Trajectory& trajectory);

}  // namespace gantangan

#endif  // GANTANGAN_DYNAMICS_H_
