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

#include "reducibility.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "errors.hpp"

namespace oqrw {

const char* map_verdict_name(MapVerdict v) {
  switch (v) {
    case MapVerdict::Reducible:
      return "Reducible";
    case MapVerdict::Irreducible:
      return "Irreducible";
    case MapVerdict::Inconclusive:
      return "Inconclusive";
  }
  return "Unknown";
}

const char* tristate_name(Tristate t) {
  switch (t) {
    case Tristate::Holds:
      return "Holds";
    case Tristate::Fails:
      return "Fails";
    case Tristate::Unknown:
      return "Unknown";
  }
  return "Unknown";
}

Matrix ProjectionFamily::at(SiteId site, int hdim) const {
  auto it = p.find(site);
  return it != p.end() ? it->second : Matrix::Identity(hdim, hdim);
}

bool ProjectionFamily::nontrivial(int hdim, double tol) const {
  const Matrix id = Matrix::Identity(hdim, hdim);
  for (const auto& [site, proj] : p) {
    if (operator_norm(proj - id) > tol) return true;
  }
  return false;
}

std::optional<ProjectionFamily> support_witness(const Trajectory& t, int n0,
                                                double tol) {
  if (n0 < 0 || n0 > t.depth()) {
    std::ostringstream msg;
    msg << "witness start " << n0 << " beyond trajectory depth " << t.depth();
    fail(Errc::IndexOutOfRange, msg.str());
  }
  const int d = t.model.hdim();
  std::map<SiteId, Matrix> acc;
  for (int n = n0; n <= t.depth(); ++n) {
    for (const auto& [site, blk] : t.state(n).blocks) {
      auto it = acc.find(site);
      if (it == acc.end()) {
        acc.emplace(site, blk);
      } else {
        it->second += blk;
      }
    }
  }
  ProjectionFamily fam;
  fam.n0 = n0;
  for (const auto& [site, sum] : acc) {
    fam.p[site] = support_projection(sum, tol);
  }
  // On a finite site set, a never-visited site genuinely carries the zero
  // projection.  On a lattice window it is left unlisted: the truncation
  // cannot speak for the walk beyond the window, and a zero there would
  // fabricate a witness out of the cutoff.
  if (t.model.kind() != ModelKind::Lattice1d) {
    for (SiteId s : t.model.sites()) {
      if (!fam.p.count(s)) fam.p[s] = Matrix::Zero(d, d);
    }
  }
  if (!fam.nontrivial(d, tol)) return std::nullopt;
  return fam;
}

ReducingCheck verify_reducing(const Trajectory& t, const ProjectionFamily& fam,
                              int depth, int horizon, double tol) {
  if (depth < fam.n0 || depth + horizon > t.depth()) {
    std::ostringstream msg;
    msg << "reducing check to depth " << depth << " (family starts at "
        << fam.n0 << ") with horizon " << horizon
        << " needs trajectory depth >= " << depth + horizon << ", have "
        << t.depth();
    fail(Errc::IndexOutOfRange, msg.str());
  }
  const int d = t.model.hdim();
  ReducingCheck out;
  out.trivial = !fam.nontrivial(d, tol);

  double worst = 0.0;
  for (int n = fam.n0; n <= depth; ++n) {
    for (const auto& [site, blk] : t.state(n).blocks) {
      Matrix proj = fam.at(site, d);
      worst = std::max(worst, operator_norm(blk * proj - blk));
    }
  }
  out.state_residual = worst;
  out.state_condition = worst <= tol;

  CylinderObservable a = CylinderObservable::identity(depth);
  for (int k = fam.n0; k <= depth; ++k) {
    BlockObservable f;
    f.identity_tail = true;
    f.blocks = fam.p;
    a.factors[static_cast<std::size_t>(k)] = std::move(f);
  }
  QmcValue v = qmc_evaluate(t, a, horizon, tol);
  out.expectation_residual = std::abs(v.value - Complex(1.0, 0.0));
  out.expectation_condition = out.expectation_residual <= tol;
  return out;
}

std::optional<Matrix> common_range_condition(const Model& m, double tol) {
  const int d = m.hdim();
  Matrix gram = Matrix::Zero(d, d);
  if (m.kind() == ModelKind::Lattice1d) {
    // All sites share the rule; summing it once avoids double-weighting
    // interior sites against truncated boundary ones.
    for (const auto& [offset, op] : m.lattice_rule()) {
      gram += op * op.adjoint();
    }
  } else {
    for (SiteId j : m.sites()) {
      for (const auto& e : m.edges_from(j)) gram += e.op * e.op.adjoint();
    }
  }
  int rank = support_rank(gram, tol);
  if (rank == 0 || rank >= d) return std::nullopt;
  return support_projection(gram, tol);
}

FaithfulnessReport faithfulness_certificate(const Trajectory& t, double tol) {
  FaithfulnessReport rep;
  rep.depth = t.depth();
  rep.all_blocks_faithful = true;
  rep.full_site_coverage = true;
  for (int n = 0; n <= t.depth(); ++n) {
    if (static_cast<int>(t.support(n).size()) != t.model.site_count()) {
      rep.full_site_coverage = false;
    }
    for (const auto& [site, blk] : t.state(n).blocks) {
      if (!is_faithful(blk, tol)) {
        rep.all_blocks_faithful = false;
        break;
      }
    }
    if (!rep.all_blocks_faithful && !rep.full_site_coverage) break;
  }
  // A lattice window shows only finitely many of infinitely many sites, so
  // full coverage of the window proves nothing about the walk.
  rep.certified = rep.all_blocks_faithful && rep.full_site_coverage &&
                  t.model.kind() != ModelKind::Lattice1d;
  return rep;
}

CpResult cp_irreducible(const Model& m, double tol, int max_rounds,
                        std::uint64_t seed) {
  (void)tol;
  const int d = m.hdim();
  const auto& sites = m.sites();
  if (max_rounds <= 0) max_rounds = m.site_count() * d + 2;

  // A direction is accepted as new when its component orthogonal to the
  // current basis exceeds kAccept (after normalization); components in the
  // band (kAmbiguous, kAccept] abort with Inconclusive rather than guess.
  constexpr double kAccept = 1e-8;
  constexpr double kAmbiguous = 1e-11;

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  auto random_unit = [&]() {
    Vector v(d);
    double nrm = 0.0;
    do {
      for (int k = 0; k < d; ++k) v(k) = Complex(gauss(rng), gauss(rng));
      nrm = v.norm();
    } while (nrm < 1e-6);
    return Vector(v / nrm);
  };

  std::vector<std::pair<SiteId, Vector>> seeds;
  for (SiteId s : sites) {
    for (int k = 0; k < d; ++k) {
      Vector e = Vector::Zero(d);
      e(k) = 1.0;
      seeds.emplace_back(s, std::move(e));
    }
  }
  for (SiteId s : sites) {
    for (int k = 0; k < 3; ++k) seeds.emplace_back(s, random_unit());
  }

  CpResult res;
  int worst_rounds = 0;
  for (const auto& [s0, psi] : seeds) {
    ++res.seeds_tried;
    std::map<SiteId, Matrix> basis;  // site -> orthonormal columns
    {
      Matrix first(d, 1);
      first.col(0) = psi;
      basis[s0] = std::move(first);
    }
    bool ambiguous = false;
    bool grew = true;
    int rounds = 0;
    while (grew && rounds < max_rounds && !ambiguous) {
      grew = false;
      ++rounds;
      for (SiteId j : sites) {
        auto itj = basis.find(j);
        if (itj == basis.end() || itj->second.cols() == 0) continue;
        const Matrix vj = itj->second;
        for (const auto& e : m.edges_from(j)) {
          Matrix cand = e.op * vj;
          Matrix& vi = basis[e.to];
          if (vi.size() == 0) vi = Matrix(d, 0);
          for (int c = 0; c < cand.cols(); ++c) {
            if (vi.cols() >= d) break;
            Vector w = cand.col(c);
            double base = w.norm();
            if (base <= 1e-13) continue;
            w /= base;
            for (int pass = 0; pass < 2; ++pass) {
              if (vi.cols() > 0) w -= vi * (vi.adjoint() * w);
            }
            double rem = w.norm();
            if (rem > kAccept) {
              vi.conservativeResize(Eigen::NoChange, vi.cols() + 1);
              vi.col(vi.cols() - 1) = w / rem;
              grew = true;
            } else if (rem > kAmbiguous) {
              ambiguous = true;
            }
          }
        }
      }
    }
    worst_rounds = std::max(worst_rounds, rounds);
    if (ambiguous) {
      res.verdict = MapVerdict::Inconclusive;
      res.note = "a subspace-growth decision fell inside the tolerance band";
      res.rounds = worst_rounds;
      return res;
    }
    if (grew) {
      res.verdict = MapVerdict::Inconclusive;
      res.note = "closure did not stabilize within the round budget";
      res.rounds = worst_rounds;
      return res;
    }
    bool full = true;
    for (SiteId s : sites) {
      auto it = basis.find(s);
      if (it == basis.end() || it->second.cols() < d) {
        full = false;
        break;
      }
    }
    if (!full) {
      ProjectionFamily fam;
      fam.n0 = 0;
      for (SiteId s : sites) {
        auto it = basis.find(s);
        if (it == basis.end() || it->second.size() == 0) {
          fam.p[s] = Matrix::Zero(d, d);
        } else {
          fam.p[s] = hermitian_part(it->second * it->second.adjoint());
        }
      }
      res.verdict = MapVerdict::Reducible;
      res.family = std::move(fam);
      res.rounds = worst_rounds;
      res.note = "a seed closed to a proper invariant family";
      return res;
    }
  }
  res.verdict = MapVerdict::Irreducible;
  res.rounds = worst_rounds;
  res.note = "every seed closed to the full family";
  return res;
}

Tristate nn_condition_check(const Matrix& b, const Matrix& c, double tol) {
  const int d = static_cast<int>(b.rows());
  if (d < 1 || b.cols() != d || c.rows() != d || c.cols() != d) {
    fail(Errc::DimensionMismatch, "the pair must be square matrices of one size");
  }
  double defect =
      operator_norm(b.adjoint() * b + c.adjoint() * c - Matrix::Identity(d, d));
  if (defect > std::max(tol, 1e-9)) {
    std::ostringstream msg;
    msg << "pair effects sum off identity by " << defect;
    fail(Errc::NotNormalized, msg.str());
  }
  Matrix gram = hermitian_part(b * b.adjoint() + c * c.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> es(gram);
  if (es.info() != Eigen::Success) {
    fail(Errc::Inconsistent, "eigenvalue decomposition failed");
  }
  double lambda_max = std::max(es.eigenvalues().maxCoeff(), 0.0);
  double cutoff = rank_cutoff(lambda_max, tol);
  int rank = 0;
  for (int k = 0; k < d; ++k) {
    double lambda = es.eigenvalues()(k);
    if (lambda > cutoff * 0.1 && lambda <= cutoff * 10.0) {
      return Tristate::Unknown;  // rank decision sits in the tolerance band
    }
    if (lambda > cutoff) ++rank;
  }
  return rank == d ? Tristate::Holds : Tristate::Fails;
}

ClassicalClasses classical_classes(const Eigen::MatrixXd& p, double edge_tol) {
  const int n = static_cast<int>(p.rows());
  if (n < 1 || p.cols() != n) {
    fail(Errc::DimensionMismatch, "stochastic matrix must be square and nonempty");
  }
  for (int i = 0; i < n; ++i) {
    double row = 0.0;
    for (int j = 0; j < n; ++j) {
      if (p(i, j) < -kDefaultTol) fail(Errc::NotStochastic, "negative entry");
      row += p(i, j);
    }
    if (std::abs(row - 1.0) > kDefaultTol) {
      fail(Errc::NotStochastic, "rows must sum to 1");
    }
  }

  std::vector<std::vector<int>> adj(static_cast<std::size_t>(n));
  std::vector<std::vector<int>> radj(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (p(i, j) > edge_tol) {
        adj[static_cast<std::size_t>(i)].push_back(j);
        radj[static_cast<std::size_t>(j)].push_back(i);
      }
    }
  }

  // Kosaraju: iterative DFS finish order on the graph, then sweeps of the
  // reverse graph in reverse finish order.
  std::vector<int> order;
  std::vector<char> seen(static_cast<std::size_t>(n), 0);
  for (int start = 0; start < n; ++start) {
    if (seen[static_cast<std::size_t>(start)]) continue;
    std::vector<std::pair<int, std::size_t>> stack{{start, 0}};
    seen[static_cast<std::size_t>(start)] = 1;
    while (!stack.empty()) {
      auto& [v, idx] = stack.back();
      if (idx < adj[static_cast<std::size_t>(v)].size()) {
        int w = adj[static_cast<std::size_t>(v)][idx++];
        if (!seen[static_cast<std::size_t>(w)]) {
          seen[static_cast<std::size_t>(w)] = 1;
          stack.emplace_back(w, 0);
        }
      } else {
        order.push_back(v);
        stack.pop_back();
      }
    }
  }

  std::vector<int> component(static_cast<std::size_t>(n), -1);
  int ncomp = 0;
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    if (component[static_cast<std::size_t>(*it)] != -1) continue;
    std::vector<int> stack{*it};
    component[static_cast<std::size_t>(*it)] = ncomp;
    while (!stack.empty()) {
      int v = stack.back();
      stack.pop_back();
      for (int w : radj[static_cast<std::size_t>(v)]) {
        if (component[static_cast<std::size_t>(w)] == -1) {
          component[static_cast<std::size_t>(w)] = ncomp;
          stack.push_back(w);
        }
      }
    }
    ++ncomp;
  }

  std::vector<std::vector<int>> classes(static_cast<std::size_t>(ncomp));
  for (int v = 0; v < n; ++v) {
    classes[static_cast<std::size_t>(component[static_cast<std::size_t>(v)])]
        .push_back(v);
  }
  for (auto& cls : classes) std::sort(cls.begin(), cls.end());
  std::sort(classes.begin(), classes.end(),
            [](const auto& a, const auto& b) { return a.front() < b.front(); });

  ClassicalClasses out;
  out.classes = std::move(classes);
  out.closed.resize(out.classes.size(), true);
  for (std::size_t k = 0; k < out.classes.size(); ++k) {
    for (int v : out.classes[k]) {
      for (int w : adj[static_cast<std::size_t>(v)]) {
        if (!std::binary_search(out.classes[k].begin(), out.classes[k].end(),
                                w)) {
          out.closed[k] = false;
        }
      }
    }
  }
  out.irreducible = out.classes.size() == 1;
  return out;
}

Analysis analyze(const Model& m, const BlockState& rho0, int depth,
                 const AnalyzeOptions& opts) {
  if (opts.n0 < 0 || depth < std::max(1, opts.n0)) {
    fail(Errc::IndexOutOfRange, "analysis depth must reach the witness start");
  }
  Analysis a;
  a.depth = depth;
  a.options = opts;
  const bool finite_kind = m.kind() != ModelKind::Lattice1d;

  Trajectory t = trajectory(m, rho0, depth + opts.horizon);

  a.common_range = common_range_condition(m, opts.tol);
  a.support_family = support_witness(t, opts.n0, opts.tol);
  if (a.support_family) {
    a.support_check =
        verify_reducing(t, *a.support_family, depth, opts.horizon, opts.tol);
    if (!a.support_check.pass()) {
      a.conflicts.push_back(
          "support witness failed its own reducing verification");
    }
  }
  a.faithfulness = faithfulness_certificate(t, opts.tol);
  a.cp = cp_irreducible(m, opts.tol, 0, opts.seed);
  a.cp_counted = finite_kind;
  if (m.kind() == ModelKind::Classical) {
    a.classes = classical_classes(m.stochastic());
  }

  const bool support_verified = a.support_family && a.support_check.pass();

  // The constant family built from the joint operator range must verify as
  // a reducing family whenever it is proper; anything else is numerics
  // misbehaving, and is flagged, not smoothed over.
  std::optional<ProjectionFamily> range_family;
  if (a.common_range) {
    ProjectionFamily fam;
    fam.n0 = std::max(1, opts.n0);
    for (SiteId s : m.sites()) fam.p[s] = *a.common_range;
    ReducingCheck check =
        verify_reducing(t, fam, depth, opts.horizon, opts.tol);
    if (check.pass()) {
      range_family = std::move(fam);
    } else {
      a.conflicts.push_back(
          "common-range projection failed the reducing verification");
    }
  }

  if (a.cp_counted && a.cp.verdict == MapVerdict::Irreducible) {
    if (support_verified) {
      a.conflicts.push_back(
          "verified support witness against subspace-closure irreducibility");
    }
    if (a.common_range) {
      a.conflicts.push_back(
          "proper common operator range against subspace-closure "
          "irreducibility");
    }
  }
  if (a.faithfulness.certified && support_verified) {
    a.conflicts.push_back(
        "faithful full-coverage trajectory against a verified support witness");
  }
  if (a.faithfulness.certified && a.common_range) {
    a.conflicts.push_back(
        "faithful full-coverage trajectory against a proper common operator "
        "range");
  }
  if (a.classes && a.cp_counted) {
    if (a.cp.verdict == MapVerdict::Irreducible && !a.classes->irreducible) {
      a.conflicts.push_back(
          "subspace closure irreducible but the chain has several classes");
    }
    if (a.cp.verdict == MapVerdict::Reducible && a.classes->irreducible) {
      a.conflicts.push_back(
          "subspace closure found an invariant family in an irreducible "
          "chain");
    }
  }
  a.consistent = a.conflicts.empty();

  if (support_verified || range_family) {
    a.verdict = MapVerdict::Reducible;
    if (support_verified) {
      a.winning_family = a.support_family;
      a.certificate = "verified reducing family from accumulated supports";
    } else {
      a.winning_family = range_family;
      a.certificate = "verified constant family from the joint operator range";
    }
  } else if ((a.cp_counted && a.cp.verdict == MapVerdict::Irreducible) ||
             a.faithfulness.certified) {
    a.verdict = MapVerdict::Irreducible;
    a.certificate = a.faithfulness.certified
                        ? "all trajectory blocks faithful with every site "
                          "occupied at every step"
                        : "every closure seed spans the full family";
  } else {
    a.verdict = MapVerdict::Inconclusive;
    a.certificate =
        "no verified reducing family and no irreducibility certificate at "
        "this depth";
  }
  return a;
}

}  // namespace oqrw
