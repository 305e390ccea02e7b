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

#ifndef GANTANGAN_EQUILIBRIA_H_
#define GANTANGAN_EQUILIBRIA_H_

#include <array>
#include <complex>
#include <string_view>
#include <vector>

#include "gantangan/dynamics.h"
#include "gantangan/game.h"

namespace gantangan {

enum class Stability { kSink, kSource, kSaddle, kNonhyperbolic };

enum class Location {
  kVertexAlpha,
  kVertexBeta,
  kVertexGamma,
  kEdgeAlphaBeta,
  kEdgeAlphaGamma,
  kEdgeBetaGamma,
  kInterior,
};

// Upper-case labels used in reports: "SINK", "EDGE_AB", ...
std::string_view StabilityName(Stability stability);
std::string_view LocationName(Location location);

using TangentEigenvalues = std::array<std::complex<double>, 2>;

struct FixedPointReport {
  PopulationState state;
  double residual;  // ||dx/dt||_inf at state
  TangentEigenvalues eigenvalues;  // ascending real part
  Stability stability;
  Location location;
};

inline constexpr double kMaxFixedPointResidual = 1e-8;
inline constexpr double kHyperbolicThreshold = 1e-9;
inline constexpr double kDedupRadius = 1e-6;
inline constexpr double kJacobianStep = 1e-6;
inline constexpr int kSeedGridResolution = 50;

// Central-difference Jacobian of the replicator-mutator field (uniform
// kernel with rate mu), step kJacobianStep per coordinate.
Mat3 Jacobian(const PopulationState& state, const GantanganParams& params,
              double mu);

// Restriction of a 3x3 Jacobian to the plane sum(x) = 1, expressed in the
// orthonormalized basis {e_beta - e_alpha, e_gamma - e_alpha}.
std::array<std::array<double, 2>, 2> TangentRestriction(const Mat3& jacobian);

TangentEigenvalues Eigenvalues2x2(const std::array<std::array<double, 2>, 2>& m);

// SINK: both real parts < -kHyperbolicThreshold; SOURCE: both above
// +kHyperbolicThreshold; SADDLE: one on each side; otherwise NONHYPERBOLIC.
Stability ClassifyEigenvalues(const TangentEigenvalues& eigenvalues);

// Vertex, edge or interior, treating coordinates <= 1e-9 as zero.
Location LocateOnSimplex(const PopulationState& state);

// Builds the full report for a candidate stationary state.
FixedPointReport ClassifyStability(const PopulationState& state,
                                   const GantanganParams& params, double mu);

// Every stationary state of the flow on the simplex, deduplicated within
// kDedupRadius and ordered by (x_alpha, x_beta) descending.
//
// mu == 0: the three vertices, the edge points where the two endpoint
// strategies have equal fitness, and interior points where all three
// fitnesses agree (Newton on the fitness differences from a coarse grid).
//
// mu > 0: damped Newton on the full field, seeded from a
// kSeedGridResolution barycentric grid.
std::vector<FixedPointReport> FindFixedPoints(const GantanganParams& params,
                                              double mu);

// Planar ternary-plot coordinates: alpha -> (0, 0), beta -> (1, 0),
// gamma -> (1/2, sqrt(3)/2).
struct TernaryPoint {
  double u;
  double v;
};

TernaryPoint TernaryProject(const PopulationState& state);

// `steps` evenly spaced values from lo to hi inclusive.
struct GridRange {
  double lo;
  double hi;
  int steps;

  double at(int k) const;
  bool operator==(const GridRange&) const = default;
};

enum class AttractorLabel { kAlphaDominant, kBetaDominant, kMixed, kOther };
std::string_view AttractorLabelName(AttractorLabel label);

inline constexpr double kAttractorRadius = 1e-3;
inline constexpr double kSweepHorizon = 2000.0;

// ALPHA_DOMINANT / BETA_DOMINANT within kAttractorRadius (inf-norm) of the
// vertex, MIXED when at least that far from all three, OTHER otherwise.
AttractorLabel LabelEndpoint(const PopulationState& endpoint);

struct SweepCell {
  double p_es;
  double m_ss;
  AttractorLabel label;
  int fixed_point_count;
  PopulationState endpoint;
};

struct SweepOptions {
  double dt = kDefaultStep;
  double t_max = kSweepHorizon;
};

// Integrates every (p, m) grid cell from x0 until the flow settles or t_max,
// in row-major order with p outer. Cells are evaluated in parallel.
std::vector<SweepCell> Sweep(const GridRange& p_range,
                             const GridRange& m_range, double n, double mu,
                             const PopulationState& x0,
                             const SweepOptions& options = {});

inline constexpr double kPortraitMargin = 0.05;

// Deterministic interior starting points: the smallest triangular
// barycentric lattice holding at least `seeds` points, shrunk so every
// coordinate is >= kPortraitMargin, sampled at evenly spaced indices.
std::vector<PopulationState> PortraitSeeds(int seeds);

struct PortraitTrajectory {
  Trajectory trajectory;
  std::vector<TernaryPoint> ternary;
};

std::vector<PortraitTrajectory> Portrait(const GantanganParams& params,
                                         double mu, int seeds,
                                         double dt = kDefaultStep,
                                         double t_end = kDefaultHorizon);

}  // namespace gantangan

#endif  // GANTANGAN_EQUILIBRIA_H_
