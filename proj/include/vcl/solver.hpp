#pragma once

#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "vcl/balance.hpp"
#include "vcl/config.hpp"
#include "vcl/jacobian.hpp"

namespace vcl {

/// Which rigid motions are pinned by extra rows in the Newton system.
enum class Gauge {
  Auto,         // chosen from the geometry and the supplied motion
  Rotating,     // Im p1
  Translating,  // sum of positions
  Stationary,   // p1 and p2
  Periodic,     // sum of positions
  None,
};

struct SolveSettings {
  double tol = 1e-13;
  int max_iter = 50;
  double damping = 1.0;
  Gauge gauge = Gauge::Auto;
};

struct SolveResult {
  VortexConfig config;
  Motion motion;
  BalanceReport report;
  int iterations = 0;
};

/// Gauss-Newton refinement of the positions with the motion held fixed.
SolveResult refine(const VortexConfig& c, const Motion& m, const SolveSettings& s = {});

/// Averages each position over the images of its partners under the group
/// elements, repeated a few times. Elements are matched with match_tol.
VortexConfig symmetrize(const VortexConfig& c, const SymmetryGroup& group, double match_tol = 1e-6);

/// As refine, but symmetrizes the seed first and then only moves along
/// perturbations invariant under the group.
SolveResult refine_symmetric(const VortexConfig& c, const Motion& m, const SymmetryGroup& group,
                             const SolveSettings& s = {}, double match_tol = 1e-6);

/// The concrete gauge that Auto resolves to.
Gauge resolve_gauge(const VortexConfig& c, const Motion& m, Gauge requested);

struct Trajectory {
  std::vector<double> times;
  std::vector<std::vector<cplx>> states;  // unreduced, continuous in time
  std::vector<Motion> motion_fit;
};

inline constexpr double kCollisionDistance = 1e-6;

/// Classical RK4 with fixed step; samples every `record_every` steps plus the
/// final time.
Trajectory integrate(const VortexConfig& c, double t_end, double dt, int record_every = 1);

/// Largest change of any pairwise distance relative to the first sample.
double rigidity_drift(const Trajectory& traj);

struct SweepStep {
  double param = 0.0;
  VortexConfig config;
  Motion motion;
  RankReport rank;
  bool rank_changed = false;  // rank differs from the previous step
};

/// Family generator: seed configuration for a parameter value.
using FamilyGenerator = std::function<std::pair<VortexConfig, Motion>(double)>;

/// Evaluates `steps` equally spaced parameters in [from, to] (one sample at
/// `from` when steps == 1). Each seed is refined with a re-fitted motion; if
/// that fails the previous solution is used as the seed instead.
std::vector<SweepStep> sweep(const FamilyGenerator& family, double from, double to, int steps,
                             const SolveSettings& s = {});

}  // namespace vcl
