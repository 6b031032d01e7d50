// Copyright 2026 The oqrw authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef OQRW_EVOLUTION_HPP
#define OQRW_EVOLUTION_HPP

#include <map>
#include <optional>
#include <vector>

#include "model.hpp"

namespace oqrw {

// Blocks with trace below this are dropped after a step; the occupied set is
// therefore exactly the set of stored keys.
inline constexpr double kPruneFloor = 1e-14;

// Trace drift allowed per step before the evolution is declared broken.
inline constexpr double kTraceDriftTol = 1e-10;

// Block-diagonal state over sites: site j carries the (unnormalized)
// positive block rho_j; total trace is 1 for a normalized state.  Absent
// sites carry the zero block.
struct BlockState {
  std::map<SiteId, Matrix> blocks;

  double total_trace() const;
  // Occupied sites, ascending.
  std::vector<SiteId> support() const;
  const Matrix* block(SiteId site) const;

  // A state concentrated on one site.
  static BlockState point(SiteId site, Matrix block);

  // Shape/positivity/normalization checks against a model; throws on defect.
  void check(const Model& m, double tol = kDefaultTol) const;
};

// One application of the walk's transition map, without bookkeeping checks:
// output block i collects B rho_j B* over incoming transitions, is
// re-hermitized against roundoff, and near-zero blocks are pruned.
BlockState apply_map(const Model& m, const BlockState& s);

// apply_map plus the safety rails used during trajectory generation: on a
// lattice window, occupied boundary sites abort (the truncation would leak
// mass); the step must preserve total trace within kTraceDriftTol.
BlockState step(const Model& m, const BlockState& s);

// The first `depth()+1` states of the walk and their occupied sites.
struct Trajectory {
  Model model;
  std::vector<BlockState> states;
  std::vector<std::vector<SiteId>> supports;

  int depth() const { return static_cast<int>(states.size()) - 1; }
  const BlockState& state(int n) const;
  const std::vector<SiteId>& support(int n) const;
  // Trace of the block at (n, site); 0 for unoccupied sites.
  double block_trace(int n, SiteId site) const;
};

// Runs `steps` applications of the transition map from rho0 (validated
// against m first) and records every intermediate state.
Trajectory trajectory(const Model& m, const BlockState& rho0, int steps);

// Probability of finding the walker at each occupied site: block traces.
std::map<SiteId, double> site_distribution(const BlockState& s);

struct InvariantInfo {
  bool found = false;
  double residual = 0.0;       // distance between omega and its image
  int iterations = 0;          // damped-iteration count actually used
  bool used_eigensolver = false;
  int fixed_space_dim = 0;     // eigenvalue-1 multiplicity seen by the solver
};

// A normalized fixed point of the transition map on a finite-site model,
// found by damped iteration with a dense-eigensolver fallback; nullopt when
// no positive fixed point is identified at the requested tolerance.
// Requires a model with finitely-many-sites semantics (explicit/classical).
std::optional<BlockState> invariant_state(const Model& m,
                                          double tol = kDefaultTol,
                                          int max_iter = 20000,
                                          InvariantInfo* info = nullptr);

// Probability-vector views of states of a classical-kind model.
BlockState classical_state(const Model& m, const Eigen::VectorXd& probs);
Eigen::VectorXd classical_vector(const Model& m, const BlockState& s);

}  // namespace oqrw

#endif  // OQRW_EVOLUTION_HPP
