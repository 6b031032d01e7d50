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

// Shared helpers for the test suites: fixture paths, small matrix builders,
// the reference models used across suites, random model generation, and
// path-enumeration oracles that recompute the dynamic-programming results
// by brute force.

#ifndef OQRW_TESTS_SUPPORT_HPP
#define OQRW_TESTS_SUPPORT_HPP

#include <algorithm>
#include <complex>
#include <functional>
#include <initializer_list>
#include <map>
#include <random>
#include <string>
#include <tuple>
#include <vector>

#include "evolution.hpp"
#include "model.hpp"
#include "qmc.hpp"

namespace oqrw_test {

using oqrw::BlockObservable;
using oqrw::BlockState;
using oqrw::Complex;
using oqrw::CylinderObservable;
using oqrw::Matrix;
using oqrw::Model;
using oqrw::SiteId;
using oqrw::Trajectory;
using oqrw::Vector;

inline std::string fixture(const std::string& name) {
  return std::string(OQRW_FIXTURE_DIR) + "/" + name;
}

// Row-major complex matrix builders.
inline Matrix mat(int rows, int cols, std::initializer_list<Complex> cells) {
  Matrix m(rows, cols);
  auto it = cells.begin();
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) m(r, c) = *it++;
  }
  return m;
}

inline Matrix m2(Complex a, Complex b, Complex c, Complex d) {
  return mat(2, 2, {a, b, c, d});
}

inline double norm_diff(const Matrix& a, const Matrix& b) {
  return oqrw::operator_norm(a - b);
}

// 1/sqrt(2), matching the fixture documents digit for digit.
inline constexpr double kInvSqrt2 = 0.7071067811865476;

// --- Reference operator pairs and rules -----------------------------------

// Two-dimensional walk pair one: left factor kills the first basis vector
// into the second, with opposite phases left and right.
inline Matrix pair_one_left() { return m2(0, 0, kInvSqrt2, kInvSqrt2); }
inline Matrix pair_one_right() { return m2(0, 0, -kInvSqrt2, kInvSqrt2); }

// Walk pair two: both operators are rank one with orthogonal ranges.
inline Matrix pair_two_left() { return m2(kInvSqrt2, 0, -kInvSqrt2, 0); }
inline Matrix pair_two_right() { return m2(0, kInvSqrt2, 0, -kInvSqrt2); }

// Three-dimensional lazy walk: left and hold act inside the middle
// coordinate, the right move feeds the third coordinate from the first.
inline Matrix three_state_left() {
  return mat(3, 3, {0, 0, 0, 0, kInvSqrt2, kInvSqrt2, 0, 0, 0});
}
inline Matrix three_state_hold() {
  return mat(3, 3, {0, 0, 0, 0, kInvSqrt2, -kInvSqrt2, 0, 0, 0});
}
inline Matrix three_state_right() {
  return mat(3, 3, {0, 0, 0, 0, 0, 0, 1, 0, 0});
}

// Columns of a 2x2 unitary sliced into the two move operators; used on a
// ring, every site mapping left with the first column and right with the
// second.
inline Matrix ring_left() { return m2(kInvSqrt2, 0, kInvSqrt2, 0); }
inline Matrix ring_right() { return m2(0, kInvSqrt2, 0, -kInvSqrt2); }

inline Model pair_one_model(int window) {
  return Model::lattice_1d(
      2, {{-1, pair_one_left()}, {+1, pair_one_right()}}, window);
}

inline Model pair_two_model(int window) {
  return Model::lattice_1d(
      2, {{-1, pair_two_left()}, {+1, pair_two_right()}}, window);
}

inline Model three_state_model(int window) {
  return Model::lattice_1d(3,
                           {{-1, three_state_left()},
                            {0, three_state_hold()},
                            {+1, three_state_right()}},
                           window);
}

inline Model ring_model(int sites = 5) {
  std::vector<SiteId> ids;
  std::vector<std::tuple<SiteId, SiteId, Matrix>> ops;
  for (int i = 0; i < sites; ++i) {
    ids.push_back(i);
    ops.emplace_back(i, (i + sites - 1) % sites, ring_left());
    ops.emplace_back(i, (i + 1) % sites, ring_right());
  }
  return Model::make_explicit(2, ids, ops);
}

// Two sites exchanging mass through Hadamard hops, with a phase twist on the
// second self-loop.  The family spanned by (1,1) at site 0 and (1,0) at
// site 1 is left invariant by all four operators, so the transition map is
// reducible — yet a faithful initial state stays faithful forever, so the
// chain built on such a start is not: the verdict splits on where it began.
inline Model mixing_model() {
  const Matrix stay0 = m2(kInvSqrt2, 0, 0, kInvSqrt2);
  const Matrix hop = m2(0.5, 0.5, 0.5, -0.5);
  const Matrix stay1 = m2(kInvSqrt2, 0, 0, Complex(0, kInvSqrt2));
  return Model::make_explicit(2, {0, 1},
                              {{0, 0, stay0},
                               {0, 1, hop},
                               {1, 0, hop},
                               {1, 1, stay1}});
}

// Mass entering the second coordinate of site 0 is shunted to site 1 and
// then returned, while the first coordinate circulates at site 0 forever;
// the limit operators of this model are singular, not faithful.
inline Model blocked_flow_model() {
  const Matrix keep = m2(1, 0, 0, 0);
  const Matrix shunt = m2(0, 1, 0, 0);
  const Matrix back = m2(1, 0, 0, 1);
  return Model::make_explicit(2, {0, 1},
                              {{0, 0, keep}, {0, 1, shunt}, {1, 0, back}});
}

// --- Random generation ----------------------------------------------------

inline Matrix random_gaussian(std::mt19937_64& rng, int rows, int cols) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Matrix g(rows, cols);
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) g(r, c) = Complex(gauss(rng), gauss(rng));
  }
  return g;
}

inline Matrix random_hermitian(std::mt19937_64& rng, int d) {
  Matrix g = random_gaussian(rng, d, d);
  return oqrw::hermitian_part(g);
}

inline Matrix random_density(std::mt19937_64& rng, int d) {
  Matrix g = random_gaussian(rng, d, d);
  Matrix rho = g * g.adjoint();
  return rho / rho.trace().real();
}

// A valid random model: for every source site, a random subset of targets
// receives the row blocks of a Haar-ish isometry, so the normalization
// constraint holds to machine precision by construction.
inline Model random_model(std::mt19937_64& rng, int max_sites, int max_hdim) {
  std::uniform_int_distribution<int> site_count_dist(2, max_sites);
  std::uniform_int_distribution<int> hdim_dist(1, max_hdim);
  const int n_sites = max_sites <= 2 ? 2 : site_count_dist(rng);
  const int d = hdim_dist(rng);

  std::vector<SiteId> ids;
  for (int i = 0; i < n_sites; ++i) ids.push_back(i);

  std::vector<std::tuple<SiteId, SiteId, Matrix>> ops;
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  std::uniform_int_distribution<int> pick(0, n_sites - 1);
  for (int j = 0; j < n_sites; ++j) {
    std::vector<int> targets;
    for (int i = 0; i < n_sites; ++i) {
      if (coin(rng) < 0.6) targets.push_back(i);
    }
    if (targets.empty()) targets.push_back(pick(rng));
    const int t = static_cast<int>(targets.size());
    Matrix g = random_gaussian(rng, t * d, d);
    Eigen::HouseholderQR<Matrix> qr(g);
    Matrix q = qr.householderQ() * Matrix::Identity(t * d, d);
    for (int k = 0; k < t; ++k) {
      ops.emplace_back(j, targets[static_cast<std::size_t>(k)],
                       Matrix(q.block(k * d, 0, d, d)));
    }
  }
  return Model::make_explicit(d, ids, ops);
}

// A normalized random initial state over a nonempty subset of the sites.
inline BlockState random_state(std::mt19937_64& rng, const Model& m,
                               bool full_support = false) {
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  BlockState s;
  for (SiteId site : m.sites()) {
    if (full_support || coin(rng) < 0.5) {
      s.blocks[site] = random_density(rng, m.hdim());
    }
  }
  if (s.blocks.empty()) {
    s.blocks[m.sites().front()] = random_density(rng, m.hdim());
  }
  const double total = s.total_trace();
  for (auto& [site, blk] : s.blocks) blk /= total;
  return s;
}

// --- Enumeration oracles --------------------------------------------------

// Limit operators recomputed by forward path enumeration: the sum over all
// occupied paths from (level, start) up to `top` of (B_path)* B_path, where
// later steps multiply on the left.  The library computes the same family
// by a backward sweep; agreement cross-checks both.
inline Matrix enum_bbar(const Trajectory& t, int level, SiteId start,
                        int top) {
  const int d = t.model.hdim();
  Matrix acc = Matrix::Zero(d, d);
  struct Frame {
    SiteId site;
    int k;
    Matrix prod;
  };
  std::vector<Frame> stack;
  stack.push_back({start, level, Matrix::Identity(d, d)});
  while (!stack.empty()) {
    Frame f = stack.back();
    stack.pop_back();
    if (f.k == top) {
      acc += f.prod.adjoint() * f.prod;
      continue;
    }
    const auto& occupied = t.support(f.k + 1);
    for (const auto& e : t.model.edges_from(f.site)) {
      if (!std::binary_search(occupied.begin(), occupied.end(), e.to)) {
        continue;
      }
      stack.push_back({e.to, f.k + 1, Matrix(e.op * f.prod)});
    }
  }
  return acc;
}

// The conditional-expectation value recomputed by brute force: sum over all
// occupied paths of the product of per-level block ratios, weighted by the
// path operator sandwiched against the initial block and capped with the
// enumerated limit operator at the far end.
inline Complex enum_value(const Trajectory& t, const CylinderObservable& a,
                          int horizon) {
  const int d = t.model.hdim();
  const int n = a.top_level();
  std::map<SiteId, Matrix> caps;
  for (SiteId i : t.support(n)) {
    caps[i] = enum_bbar(t, n, i, n + horizon);
  }
  auto ratio = [&](int k, SiteId j) {
    const Matrix* rho = t.state(k).block(j);
    Matrix f = a.factors[static_cast<std::size_t>(k)].block(j, d);
    return ((*rho) * f).trace() / rho->trace().real();
  };
  Complex total(0.0, 0.0);
  std::function<void(SiteId, SiteId, int, const Matrix&, Complex)> walk =
      [&](SiteId start, SiteId site, int k, const Matrix& prod,
          Complex weight) {
        weight *= ratio(k, site);
        if (k == n) {
          const Matrix* rho0 = t.state(0).block(start);
          total +=
              weight * ((*rho0) * prod.adjoint() * caps.at(site) * prod)
                  .trace();
          return;
        }
        const auto& occupied = t.support(k + 1);
        for (const auto& e : t.model.edges_from(site)) {
          if (!std::binary_search(occupied.begin(), occupied.end(), e.to)) {
            continue;
          }
          walk(start, e.to, k + 1, Matrix(e.op * prod), weight);
        }
      };
  for (SiteId j0 : t.support(0)) {
    walk(j0, j0, 0, Matrix::Identity(d, d), Complex(1.0, 0.0));
  }
  return total;
}

}  // namespace oqrw_test

#endif  // OQRW_TESTS_SUPPORT_HPP
