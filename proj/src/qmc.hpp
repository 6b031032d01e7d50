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

#ifndef OQRW_QMC_HPP
#define OQRW_QMC_HPP

#include <complex>
#include <map>
#include <utility>
#include <vector>

#include "evolution.hpp"

namespace oqrw {

// Levels the limit-operator recursion runs ahead of the step of interest
// when the caller does not choose.
inline constexpr int kDefaultHorizon = 20;

// A site-diagonal observable: site j carries the listed block, unlisted
// sites carry the identity (identity_tail) or zero.
struct BlockObservable {
  std::map<SiteId, Matrix> blocks;
  bool identity_tail = true;

  Matrix block(SiteId site, int hdim) const;

  static BlockObservable identity();
  // x at one site, zero elsewhere.
  static BlockObservable point(SiteId site, Matrix x);
};

// A finitely-based observable of the walk process: one site-diagonal factor
// per step 0..n, identity beyond.  factor(k) applies to the step-k algebra.
struct CylinderObservable {
  std::vector<BlockObservable> factors;

  int top_level() const { return static_cast<int>(factors.size()) - 1; }
  static CylinderObservable identity(int top_level);
  static CylinderObservable single_factor(int level, BlockObservable x);
};

// The transition expectation from step n to n+1 along the trajectory: maps
// a pair (x at step n, y at step n+1) to a site-diagonal observable carried
// by the step-n occupied sites,
//   E(x (.) y)(j) = [tr(rho_j x(j)) / tr(rho_j)] * sum_i B* y(i) B.
// It is sub-Markovian: E(I (.) I) <= I, with equality on occupied sites.
BlockObservable transition_expectation(const Trajectory& t, int n,
                                       const BlockObservable& x,
                                       const BlockObservable& y);

// Kraus presentation of the same transition expectation.  The jump part of
// each Kraus operator is the model operator B^i_j tagged with the site pair;
// the state part is sqrt(rho_j)/sqrt(tr rho_j) for occupied j (absent pairs
// have a zero factor and are omitted).  Nothing here materializes operators
// on the full site space; everything stays block-indexed.
struct KrausDilation {
  int level = 0;
  std::vector<std::pair<SiteId, SiteId>> pairs;  // (from j, to i), sorted
  std::map<SiteId, Matrix> sqrt_factor;          // j -> sqrt(rho_j/tr rho_j)
};

KrausDilation transition_kraus(const Trajectory& t, int n);

// Evaluates the dilated expectation sum_{ij} tr_2(K (y (.) x) K*); agrees
// with transition_expectation by construction and is cross-checked in tests.
BlockObservable kraus_apply(const Trajectory& t, const KrausDilation& k,
                            const BlockObservable& x,
                            const BlockObservable& y);

// Largest deviation of the contracted Kraus sum from the identity over the
// occupied sites of the dilation's level; the sum never exceeds I anywhere.
double kraus_contraction_defect(const Trajectory& t, const KrausDilation& k);

// The limit operators b(n, j): run the backward recursion
//   b(m, j) = sum_{i occupied at m+1} (B^i_j)* b(m+1, i) B^i_j
// from the identity at level n+horizon down to level n.  The family is
// monotone decreasing in the horizon and satisfies, at every finite horizon,
//   tr(rho_j b(n, j)) = tr(rho_j)        for occupied j,
// because paths exiting the occupied sets carry no mass.
struct BbarFamily {
  int level = 0;
  int horizon = 0;
  std::map<SiteId, Matrix> op;  // occupied sites of the level
  bool converged = false;       // horizon-(horizon-1) difference within tol
  double tail_delta = 0.0;      // that difference, operator norm
};

BbarFamily bbar(const Trajectory& t, int n, int horizon = kDefaultHorizon,
                double tol = kDefaultTol);

// The projection of a cylinder observable onto the step-0 algebra: a
// backward sweep through the transition expectations,
//   T(n, i) = ratio_n(i) b(n, i),
//   T(k, j) = ratio_k(j) sum_i (B^i_j)* T(k+1, i) B^i_j,
// with ratio_k(j) = tr(rho_j a_k(j)) / tr(rho_j); the result is T(0, .).
struct ConditionalExpectation {
  BlockObservable result;     // identity_tail = false
  int top_level = 0;
  int horizon = 0;
  bool bbar_converged = false;
  double bbar_tail_delta = 0.0;
};

ConditionalExpectation conditional_expectation(const Trajectory& t,
                                               const CylinderObservable& a,
                                               int horizon = kDefaultHorizon,
                                               double tol = kDefaultTol);

// The state functional of the walk process on cylinder observables:
//   value = sum_j tr(rho0_j  E0(a)(j)).
struct QmcValue {
  Complex value{0.0, 0.0};
  int top_level = 0;
  int horizon = 0;
  bool bbar_converged = false;
  double bbar_tail_delta = 0.0;
};

QmcValue qmc_evaluate(const Trajectory& t, const CylinderObservable& a,
                      int horizon = kDefaultHorizon, double tol = kDefaultTol);

// Two consistency checks that make the functional a stochastic process
// matching the walk: all-identity cylinders evaluate to 1, and single-factor
// cylinders reproduce the trajectory marginals tr(rho^n x).
struct MarkovPairReport {
  double unit_residual = 0.0;       // |phi(identity cylinder) - 1|
  double marginal_residual = 0.0;   // worst marginal mismatch
  int depth = 0;
  int checks = 0;
  bool pass(double tol) const {
    return unit_residual <= tol && marginal_residual <= tol;
  }
};

MarkovPairReport verify_markov_pair(const Trajectory& t, int depth,
                                    int horizon = kDefaultHorizon,
                                    double tol = kDefaultTol);

// Both faces of stationarity for a candidate state omega on a finite-site
// model: fixed point of the transition map, and stationarity of the
// one-step expectations tr(omega E(I (.) x)) = tr(omega x).
struct InvariantCheck {
  bool fixed_point = false;
  bool expectation_stationary = false;
  double fixed_point_residual = 0.0;
  double expectation_residual = 0.0;
  bool ok() const { return fixed_point && expectation_stationary; }
  bool agree() const { return fixed_point == expectation_stationary; }
};

InvariantCheck is_invariant_state(const Model& m, const BlockState& omega,
                                  double tol = kDefaultTol);

}  // namespace oqrw

#endif  // OQRW_QMC_HPP
