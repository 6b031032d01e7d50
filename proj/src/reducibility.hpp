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

#ifndef OQRW_REDUCIBILITY_HPP
#define OQRW_REDUCIBILITY_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qmc.hpp"

namespace oqrw {

// A family of orthogonal projections p(j), one per site, applied from step
// n0 on.  Listed sites carry the listed projection; unlisted sites default
// to the identity.  Finite-site analyses list every site explicitly (a
// never-visited site gets the zero projection); lattice-window analyses
// leave unreachable sites unlisted, since the window boundary says nothing
// about the walk beyond it.
struct ProjectionFamily {
  int n0 = 1;
  std::map<SiteId, Matrix> p;

  Matrix at(SiteId site, int hdim) const;
  // True iff some listed projection differs from the identity.
  bool nontrivial(int hdim, double tol = kDefaultTol) const;
};

// Candidate reducing family read off the trajectory: p(j) is the support
// projection of the summed blocks at j over steps n0..depth().  Returns
// nullopt when the candidate is trivial (identity everywhere).
std::optional<ProjectionFamily> support_witness(const Trajectory& t, int n0,
                                                double tol = kDefaultTol);

// Definition-level check that a family actually reduces the process:
// (a) every block from step n0 on lies inside its projection, and
// (b) the cylinder of projections over steps n0..depth evaluates to 1.
struct ReducingCheck {
  bool state_condition = false;
  bool expectation_condition = false;
  double state_residual = 0.0;
  double expectation_residual = 0.0;
  bool trivial = false;  // family was identity everywhere: vacuous
  bool pass() const { return state_condition && expectation_condition; }
};

ReducingCheck verify_reducing(const Trajectory& t, const ProjectionFamily& fam,
                              int depth, int horizon = kDefaultHorizon,
                              double tol = kDefaultTol);

// Site-independent reduction: the projection h onto the joint column span
// of all jump operators.  If h is proper and nonzero, every evolved block
// lives inside h, so the constant family (h from step 1) reduces the
// process.  Returns nullopt when the span is full or zero.
std::optional<Matrix> common_range_condition(const Model& m,
                                             double tol = kDefaultTol);

// Irreducibility certificate from state positivity: every recorded block
// faithful (full rank) and every model site occupied at every step.  Under
// those conditions no proper reducing family can exist.
struct FaithfulnessReport {
  bool certified = false;
  bool all_blocks_faithful = false;
  bool full_site_coverage = false;
  int depth = 0;
};

FaithfulnessReport faithfulness_certificate(const Trajectory& t,
                                            double tol = kDefaultTol);

enum class MapVerdict { Reducible, Irreducible, Inconclusive };

const char* map_verdict_name(MapVerdict v);

// Reducibility of the transition map itself, decided by closing subspace
// families under the jump operators: starting from a seed vector at one
// site, repeatedly add B^i_j V_j to V_i until stable.  A proper stable
// family yields the reducing projections; if every seed closes to the full
// family the map is irreducible.  Seeds: each basis vector at each site,
// plus a few random vectors per site (deterministic in `seed`).
struct CpResult {
  MapVerdict verdict = MapVerdict::Inconclusive;
  std::optional<ProjectionFamily> family;  // proper stable family, n0 = 0
  int rounds = 0;
  int seeds_tried = 0;
  std::string note;
};

CpResult cp_irreducible(const Model& m, double tol = kDefaultTol,
                        int max_rounds = 0, std::uint64_t seed = 0x5EED);

enum class Tristate { Holds, Fails, Unknown };

const char* tristate_name(Tristate t);

// For a nearest-neighbour pair (B, C) with B*B + C*C = I: decides whether
// the only PSD solution of B*xB = 0 and C*xC = 0 is x = 0.  For PSD x,
// B*xB = (sqrt(x)B)*(sqrt(x)B) = 0 forces xB = 0, so a nonzero solution
// exists exactly when the joint column span of B and C is a proper
// subspace (then the complement projection solves both equations).  The
// rank decision makes the check exact in every dimension; Unknown is
// reserved for a rank sitting inside the tolerance ambiguity band.
Tristate nn_condition_check(const Matrix& b, const Matrix& c,
                            double tol = kDefaultTol);

// Communicating classes of a stochastic matrix: strongly connected
// components of the positive-entry digraph, each flagged closed when no
// edge leaves it.
struct ClassicalClasses {
  std::vector<std::vector<int>> classes;  // each sorted; ordered by least member
  std::vector<bool> closed;
  bool irreducible = false;
};

ClassicalClasses classical_classes(const Eigen::MatrixXd& p,
                                   double edge_tol = kAbsoluteFloor);

struct AnalyzeOptions {
  int n0 = 1;
  int horizon = kDefaultHorizon;
  double tol = kDefaultTol;
  std::uint64_t seed = 0x5EED;
};

// Everything the reducibility analysis produced, the verdict, and the
// cross-criterion consistency flags.  `consistent == false` marks an
// internal contradiction between criteria; callers must treat it as a hard
// failure, not a soft result.
struct Analysis {
  MapVerdict verdict = MapVerdict::Inconclusive;
  std::string certificate;
  int depth = 0;
  AnalyzeOptions options;

  std::optional<Matrix> common_range;
  std::optional<ProjectionFamily> support_family;
  ReducingCheck support_check;
  std::optional<ProjectionFamily> winning_family;  // the verified witness
  FaithfulnessReport faithfulness;
  CpResult cp;
  bool cp_counted = false;  // window truncations report cp but don't score it
  std::optional<ClassicalClasses> classes;

  bool consistent = true;
  std::vector<std::string> conflicts;
};

Analysis analyze(const Model& m, const BlockState& rho0, int depth,
                 const AnalyzeOptions& opts = {});

}  // namespace oqrw

#endif  // OQRW_REDUCIBILITY_HPP
