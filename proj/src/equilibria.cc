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

#include "gantangan/equilibria.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <functional>
#include <mutex>
#include <optional>
#include <sstream>
#include <thread>

#include "gantangan/errors.h"

namespace gantangan {
namespace {

using Vec2 = std::array<double, 2>;
using Mat2 = std::array<std::array<double, 2>, 2>;

constexpr double kZeroCoordinate = 1e-9;
constexpr double kNewtonTolerance = 1e-12;
constexpr int kNewtonMaxIterations = 100;
constexpr int kMaxStepHalvings = 30;
constexpr double kNewtonDifferenceStep = 1e-7;

double MaxNorm2(const Vec2& v) { return std::max(std::abs(v[0]), std::abs(v[1])); }

Vec3 FromReduced(const Vec2& z) { return {z[0], z[1], 1.0 - z[0] - z[1]}; }

// Runs `body(k)` for k in [0, count) on a small thread pool. The first
// exception thrown by any task is rethrown on the calling thread.
void ParallelFor(std::size_t count, const std::function<void(std::size_t)>& body) {
  const std::size_t workers = std::clamp<std::size_t>(
      std::thread::hardware_concurrency(), 1, std::max<std::size_t>(count, 1));
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto run = [&] {
    for (std::size_t k = next++; k < count; k = next++) {
      try {
        body(k);
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(run);
  run();
  for (std::thread& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

// Damped Newton for a map R^2 -> R^2 with a central-difference Jacobian.
// The step length is halved until the residual decreases; the seed is
// abandoned when that fails, the Jacobian is singular, or the iterate wanders
// far from the simplex.
std::optional<Vec2> NewtonSolve(const std::function<Vec2(const Vec2&)>& g,
                                Vec2 z) {
  Vec2 r = g(z);
  for (int iter = 0; iter < kNewtonMaxIterations; ++iter) {
    const double norm = MaxNorm2(r);
    if (norm <= kNewtonTolerance) return z;

    Mat2 jac{};
    for (int c = 0; c < 2; ++c) {
      Vec2 hi = z, lo = z;
      hi[c] += kNewtonDifferenceStep;
      lo[c] -= kNewtonDifferenceStep;
      const Vec2 gh = g(hi), gl = g(lo);
      for (int row = 0; row < 2; ++row) {
        jac[row][c] = (gh[row] - gl[row]) / (2.0 * kNewtonDifferenceStep);
      }
    }
    const double det = jac[0][0] * jac[1][1] - jac[0][1] * jac[1][0];
    const double scale = std::max({std::abs(jac[0][0]), std::abs(jac[0][1]),
                                   std::abs(jac[1][0]), std::abs(jac[1][1])});
    if (!(std::abs(det) > 1e-14 * scale * scale)) return std::nullopt;
    const Vec2 step{-(jac[1][1] * r[0] - jac[0][1] * r[1]) / det,
                    -(-jac[1][0] * r[0] + jac[0][0] * r[1]) / det};

    bool improved = false;
    double length = 1.0;
    for (int h = 0; h <= kMaxStepHalvings; ++h, length *= 0.5) {
      const Vec2 trial{z[0] + length * step[0], z[1] + length * step[1]};
      const Vec2 trial_r = g(trial);
      if (MaxNorm2(trial_r) < norm) {
        z = trial;
        r = trial_r;
        improved = true;
        break;
      }
    }
    if (!improved) return std::nullopt;
    const Vec3 x = FromReduced(z);
    if (std::min({x[0], x[1], x[2]}) < -0.5 || std::max({x[0], x[1], x[2]}) > 1.5) {
      return std::nullopt;
    }
  }
  return MaxNorm2(r) <= kNewtonTolerance ? std::optional<Vec2>(z) : std::nullopt;
}

// Snaps a root found by Newton onto the simplex, or rejects it if it lies
// outside by more than rounding.
std::optional<PopulationState> OntoSimplex(const Vec3& x) {
  Vec3 clamped{};
  double sum = 0.0;
  for (int i = 0; i < 3; ++i) {
    if (!std::isfinite(x[i]) || x[i] < -kZeroCoordinate) return std::nullopt;
    clamped[i] = std::max(x[i], 0.0);
    sum += clamped[i];
  }
  for (double& c : clamped) c /= sum;
  return PopulationState(clamped);
}

std::vector<Vec2> SeedGrid() {
  std::vector<Vec2> seeds;
  const int n = kSeedGridResolution;
  for (int i = 0; i <= n; ++i) {
    for (int j = 0; i + j <= n; ++j) {
      seeds.push_back({static_cast<double>(i) / n, static_cast<double>(j) / n});
    }
  }
  return seeds;
}

// Points strictly between vertices i and j where f_i == f_j.
std::optional<PopulationState> EdgeRoot(const PayoffMatrix& a, int i, int j) {
  // On the edge, f_i - f_j = x_i (a_ii - a_ji) + x_j (a_ij - a_jj).
  const double gain_at_i = a(i, i) - a(j, i);
  const double gain_at_j = a(i, j) - a(j, j);
  const double denom = gain_at_i - gain_at_j;
  const double scale = std::max(std::abs(gain_at_i), std::abs(gain_at_j));
  // A vanishing denominator means either no root or a whole edge of them;
  // neither yields an isolated point.
  if (!(std::abs(denom) > 1e-14 * scale)) return std::nullopt;
  const double xi = -gain_at_j / denom;
  if (!(xi > 0.0 && xi < 1.0)) return std::nullopt;
  Vec3 x{0.0, 0.0, 0.0};
  x[i] = xi;
  x[j] = 1.0 - xi;
  return PopulationState(x);
}

class FixedPointSet {
 public:
  FixedPointSet(const GantanganParams& params, double mu)
      : params_(params),
        mu_(mu),
        payoff_(BuildPayoff(params)),
        kernel_(UniformKernel(mu)) {}

  void Offer(const PopulationState& x) {
    for (const PopulationState& known : points_) {
      const Vec3 d{x[0] - known[0], x[1] - known[1], x[2] - known[2]};
      if (MaxNorm(d) <= kDedupRadius) return;
    }
    if (MaxNorm(Derivative(x, payoff_, kernel_)) > kMaxFixedPointResidual) return;
    points_.push_back(x);
  }

  std::vector<FixedPointReport> Reports() const {
    std::vector<FixedPointReport> reports;
    reports.reserve(points_.size());
    for (const PopulationState& x : points_) {
      reports.push_back(ClassifyStability(x, params_, mu_));
    }
    std::sort(reports.begin(), reports.end(),
              [](const FixedPointReport& l, const FixedPointReport& r) {
                if (l.state[0] != r.state[0]) return l.state[0] > r.state[0];
                return l.state[1] > r.state[1];
              });
    return reports;
  }

  const PayoffMatrix& payoff() const { return payoff_; }
  const MutationKernel& kernel() const { return kernel_; }

 private:
  GantanganParams params_;
  double mu_;
  PayoffMatrix payoff_;
  MutationKernel kernel_;
  std::vector<PopulationState> points_;
};

}  // namespace

std::string_view StabilityName(Stability stability) {
  switch (stability) {
    case Stability::kSink:
      return "SINK";
    case Stability::kSource:
      return "SOURCE";
    case Stability::kSaddle:
      return "SADDLE";
    case Stability::kNonhyperbolic:
      return "NONHYPERBOLIC";
  }
  return "NONHYPERBOLIC";
}

std::string_view LocationName(Location location) {
  switch (location) {
    case Location::kVertexAlpha:
      return "VERTEX_ALPHA";
    case Location::kVertexBeta:
      return "VERTEX_BETA";
    case Location::kVertexGamma:
      return "VERTEX_GAMMA";
    case Location::kEdgeAlphaBeta:
      return "EDGE_AB";
    case Location::kEdgeAlphaGamma:
      return "EDGE_AG";
    case Location::kEdgeBetaGamma:
      return "EDGE_BG";
    case Location::kInterior:
      return "INTERIOR";
  }
  return "INTERIOR";
}

Mat3 Jacobian(const PopulationState& state, const GantanganParams& params,
              double mu) {
  const PayoffMatrix payoff = BuildPayoff(params);
  const MutationKernel kernel = UniformKernel(mu);
  Mat3 jac{};
  for (int k = 0; k < 3; ++k) {
    Vec3 hi = state.frequencies(), lo = state.frequencies();
    hi[k] += kJacobianStep;
    lo[k] -= kJacobianStep;
    const Vec3 fh = VectorField(hi, payoff, kernel);
    const Vec3 fl = VectorField(lo, payoff, kernel);
    for (int i = 0; i < 3; ++i) {
      jac[i][k] = (fh[i] - fl[i]) / (2.0 * kJacobianStep);
    }
  }
  return jac;
}

std::array<std::array<double, 2>, 2> TangentRestriction(const Mat3& jacobian) {
  // Gram-Schmidt on e_beta - e_alpha, e_gamma - e_alpha.
  const double r2 = std::sqrt(2.0), r6 = std::sqrt(6.0);
  const std::array<Vec3, 2> basis = {{
      {-1.0 / r2, 1.0 / r2, 0.0},
      {-1.0 / r6, -1.0 / r6, 2.0 / r6},
  }};
  Mat2 out{};
  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 2; ++b) {
      double s = 0.0;
      for (int i = 0; i < 3; ++i) {
        for (int k = 0; k < 3; ++k) s += basis[a][i] * jacobian[i][k] * basis[b][k];
      }
      out[a][b] = s;
    }
  }
  return out;
}

TangentEigenvalues Eigenvalues2x2(const std::array<std::array<double, 2>, 2>& m) {
  const double half_trace = 0.5 * (m[0][0] + m[1][1]);
  const double det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
  const double disc = half_trace * half_trace - det;
  if (disc >= 0.0) {
    const double root = std::sqrt(disc);
    return {std::complex<double>(half_trace - root, 0.0),
            std::complex<double>(half_trace + root, 0.0)};
  }
  const double root = std::sqrt(-disc);
  return {std::complex<double>(half_trace, -root),
          std::complex<double>(half_trace, root)};
}

Stability ClassifyEigenvalues(const TangentEigenvalues& eigenvalues) {
  const double lo = std::min(eigenvalues[0].real(), eigenvalues[1].real());
  const double hi = std::max(eigenvalues[0].real(), eigenvalues[1].real());
  if (hi < -kHyperbolicThreshold) return Stability::kSink;
  if (lo > kHyperbolicThreshold) return Stability::kSource;
  if (lo < -kHyperbolicThreshold && hi > kHyperbolicThreshold) {
    return Stability::kSaddle;
  }
  return Stability::kNonhyperbolic;
}

Location LocateOnSimplex(const PopulationState& state) {
  const bool a = state[0] > kZeroCoordinate;
  const bool b = state[1] > kZeroCoordinate;
  const bool g = state[2] > kZeroCoordinate;
  if (a && b && g) return Location::kInterior;
  if (a && b) return Location::kEdgeAlphaBeta;
  if (a && g) return Location::kEdgeAlphaGamma;
  if (b && g) return Location::kEdgeBetaGamma;
  if (a) return Location::kVertexAlpha;
  if (b) return Location::kVertexBeta;
  return Location::kVertexGamma;
}

FixedPointReport ClassifyStability(const PopulationState& state,
                                   const GantanganParams& params, double mu) {
  const PayoffMatrix payoff = BuildPayoff(params);
  const double residual =
      MaxNorm(Derivative(state, payoff, UniformKernel(mu)));
  const TangentEigenvalues eigenvalues =
      Eigenvalues2x2(TangentRestriction(Jacobian(state, params, mu)));
  return {state, residual, eigenvalues, ClassifyEigenvalues(eigenvalues),
          LocateOnSimplex(state)};
}

std::vector<FixedPointReport> FindFixedPoints(const GantanganParams& params,
                                              double mu) {
  FixedPointSet found(params, mu);
  const PayoffMatrix& payoff = found.payoff();
  const MutationKernel& kernel = found.kernel();

  if (mu == 0.0) {
    for (Strategy s : kAllStrategies) found.Offer(PopulationState::Vertex(s));
    for (auto [i, j] : {std::pair{0, 1}, std::pair{0, 2}, std::pair{1, 2}}) {
      if (auto x = EdgeRoot(payoff, i, j)) found.Offer(*x);
    }
    // Interior stationary states of the pure replicator field are exactly
    // the points where all three fitnesses agree.
    auto fitness_gap = [&](const Vec2& z) -> Vec2 {
      const Vec3 f = Fitness(FromReduced(z), payoff);
      return {f[0] - f[1], f[0] - f[2]};
    };
    const int coarse = 5;
    for (int i = 1; i < coarse; ++i) {
      for (int j = 1; i + j < coarse; ++j) {
        const Vec2 seed{static_cast<double>(i) / coarse,
                        static_cast<double>(j) / coarse};
        if (auto z = NewtonSolve(fitness_gap, seed)) {
          if (auto x = OntoSimplex(FromReduced(*z))) found.Offer(*x);
        }
      }
    }
    return found.Reports();
  }

  // With mutation the boundary is no longer invariant, so the whole field
  // has to be solved. Its alpha and beta components determine the gamma one.
  auto field = [&](const Vec2& z) -> Vec2 {
    const Vec3 dx = VectorField(FromReduced(z), payoff, kernel);
    return {dx[0], dx[1]};
  };
  for (const Vec2& seed : SeedGrid()) {
    if (auto z = NewtonSolve(field, seed)) {
      if (auto x = OntoSimplex(FromReduced(*z))) found.Offer(*x);
    }
  }
  return found.Reports();
}

TernaryPoint TernaryProject(const PopulationState& state) {
  return {state[1] + 0.5 * state[2], 0.5 * std::sqrt(3.0) * state[2]};
}

double GridRange::at(int k) const {
  if (k == steps - 1) return hi;
  return lo + (hi - lo) * static_cast<double>(k) / (steps - 1);
}

std::string_view AttractorLabelName(AttractorLabel label) {
  switch (label) {
    case AttractorLabel::kAlphaDominant:
      return "ALPHA_DOMINANT";
    case AttractorLabel::kBetaDominant:
      return "BETA_DOMINANT";
    case AttractorLabel::kMixed:
      return "MIXED";
    case AttractorLabel::kOther:
      return "OTHER";
  }
  return "OTHER";
}

AttractorLabel LabelEndpoint(const PopulationState& endpoint) {
  std::array<double, 3> distance{};
  for (Strategy s : kAllStrategies) {
    const PopulationState vertex = PopulationState::Vertex(s);
    const Vec3 d{endpoint[0] - vertex[0], endpoint[1] - vertex[1],
                 endpoint[2] - vertex[2]};
    distance[Index(s)] = MaxNorm(d);
  }
  if (distance[0] < kAttractorRadius) return AttractorLabel::kAlphaDominant;
  if (distance[1] < kAttractorRadius) return AttractorLabel::kBetaDominant;
  if (std::min({distance[0], distance[1], distance[2]}) >= kAttractorRadius) {
    return AttractorLabel::kMixed;
  }
  return AttractorLabel::kOther;
}

std::vector<SweepCell> Sweep(const GridRange& p_range, const GridRange& m_range,
                             double n, double mu, const PopulationState& x0,
                             const SweepOptions& options) {
  for (const auto& [range, name] :
       {std::pair{p_range, "p_ES"}, std::pair{m_range, "m_SS"}}) {
    if (!(std::isfinite(range.lo) && std::isfinite(range.hi) && range.lo > 0.0 &&
          range.lo < range.hi && range.steps >= 2)) {
      std::ostringstream msg;
      msg << name << " grid must satisfy 0 < lo < hi and steps >= 2 (got "
          << range.lo << ":" << range.hi << ":" << range.steps << ")";
      throw DomainError(msg.str());
    }
  }
  // Validates n and mu before any thread starts.
  GantanganParams(p_range.lo, m_range.lo, n);
  UniformKernel(mu);

  const auto cols = static_cast<std::size_t>(m_range.steps);
  const std::size_t count = static_cast<std::size_t>(p_range.steps) * cols;
  std::vector<std::optional<SweepCell>> cells(count);
  ParallelFor(count, [&](std::size_t k) {
    const double p = p_range.at(static_cast<int>(k / cols));
    const double m = m_range.at(static_cast<int>(k % cols));
    const GantanganParams params(p, m, n);
    const FlowEndpoint end =
        IntegrateToConvergence(x0, params, mu, options.dt, options.t_max);
    const int fixed_points = static_cast<int>(FindFixedPoints(params, mu).size());
    cells[k] = SweepCell{p, m, LabelEndpoint(end.state), fixed_points, end.state};
  });

  std::vector<SweepCell> out;
  out.reserve(count);
  for (auto& cell : cells) out.push_back(std::move(*cell));
  return out;
}

std::vector<PopulationState> PortraitSeeds(int seeds) {
  if (seeds < 1) throw DomainError("seeds must be >= 1");
  int levels = 0;
  while ((levels + 1) * (levels + 2) / 2 < seeds) ++levels;

  std::vector<Vec3> lattice;
  if (levels == 0) {
    lattice.push_back({1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0});
  } else {
    for (int i = levels; i >= 0; --i) {
      for (int j = levels - i; j >= 0; --j) {
        lattice.push_back({static_cast<double>(i) / levels,
                           static_cast<double>(j) / levels,
                           static_cast<double>(levels - i - j) / levels});
      }
    }
  }

  const double shrink = 1.0 - 3.0 * kPortraitMargin;
  std::vector<PopulationState> out;
  out.reserve(seeds);
  for (int s = 0; s < seeds; ++s) {
    const Vec3& y = lattice[static_cast<std::size_t>(s) * lattice.size() / seeds];
    out.emplace_back(Vec3{kPortraitMargin + shrink * y[0],
                          kPortraitMargin + shrink * y[1],
                          kPortraitMargin + shrink * y[2]});
  }
  return out;
}

std::vector<PortraitTrajectory> Portrait(const GantanganParams& params,
                                         double mu, int seeds, double dt,
                                         double t_end) {
  const std::vector<PopulationState> starts = PortraitSeeds(seeds);
  std::vector<std::optional<PortraitTrajectory>> runs(starts.size());
  ParallelFor(starts.size(), [&](std::size_t k) {
    Trajectory trajectory = Integrate(starts[k], params, mu, dt, t_end);
    std::vector<TernaryPoint> ternary;
    ternary.reserve(trajectory.size());
    for (const PopulationState& x : trajectory.states()) {
      ternary.push_back(TernaryProject(x));
    }
    runs[k] = PortraitTrajectory{std::move(trajectory), std::move(ternary)};
  });

  std::vector<PortraitTrajectory> out;
  out.reserve(runs.size());
  for (auto& run : runs) out.push_back(std::move(*run));
  return out;
}

}  // namespace gantangan
