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

#include "qmc.hpp"

#include <cmath>
#include <sstream>

#include "errors.hpp"

namespace oqrw {

namespace {

// tr(rho_j a(j)) / tr(rho_j) for an occupied block; the trajectory prunes
// zero blocks, so the denominator is bounded away from zero.
Complex block_ratio(const Trajectory& t, int n, SiteId j,
                    const BlockObservable& a) {
  const Matrix* rho = t.state(n).block(j);
  if (!rho) return Complex(0.0, 0.0);
  double denom = rho->trace().real();
  Matrix aj = a.block(j, t.model.hdim());
  return ((*rho) * aj).trace() / denom;
}

// One backward sweep of the limit-operator recursion from the identity at
// `top` down to `level`; returns the family at `level`.
std::map<SiteId, Matrix> bbar_sweep(const Trajectory& t, int level, int top) {
  const int d = t.model.hdim();
  std::map<SiteId, Matrix> next;
  for (SiteId i : t.support(top)) next[i] = Matrix::Identity(d, d);
  for (int m = top - 1; m >= level; --m) {
    std::map<SiteId, Matrix> cur;
    for (SiteId j : t.support(m)) {
      Matrix acc = Matrix::Zero(d, d);
      for (const auto& e : t.model.edges_from(j)) {
        auto it = next.find(e.to);
        if (it == next.end()) continue;  // target unoccupied: no mass flows
        acc += e.op.adjoint() * it->second * e.op;
      }
      cur[j] = hermitian_part(acc);
    }
    next = std::move(cur);
  }
  return next;
}

}  // namespace

Matrix BlockObservable::block(SiteId site, int hdim) const {
  auto it = blocks.find(site);
  if (it != blocks.end()) return it->second;
  if (identity_tail) return Matrix::Identity(hdim, hdim);
  return Matrix::Zero(hdim, hdim);
}

BlockObservable BlockObservable::identity() {
  BlockObservable x;
  x.identity_tail = true;
  return x;
}

BlockObservable BlockObservable::point(SiteId site, Matrix x) {
  BlockObservable out;
  out.identity_tail = false;
  out.blocks[site] = std::move(x);
  return out;
}

CylinderObservable CylinderObservable::identity(int top_level) {
  if (top_level < 0) {
    fail(Errc::IndexOutOfRange, "cylinder top level must be >= 0");
  }
  CylinderObservable a;
  a.factors.assign(static_cast<std::size_t>(top_level) + 1,
                   BlockObservable::identity());
  return a;
}

CylinderObservable CylinderObservable::single_factor(int level,
                                                     BlockObservable x) {
  CylinderObservable a = identity(level);
  a.factors.back() = std::move(x);
  return a;
}

BlockObservable transition_expectation(const Trajectory& t, int n,
                                       const BlockObservable& x,
                                       const BlockObservable& y) {
  if (n < 0 || n + 1 > t.depth()) {
    std::ostringstream msg;
    msg << "transition " << n << " -> " << n + 1
        << " beyond trajectory depth " << t.depth();
    fail(Errc::IndexOutOfRange, msg.str());
  }
  const int d = t.model.hdim();
  BlockObservable out;
  out.identity_tail = false;
  for (SiteId j : t.support(n)) {
    Complex ratio = block_ratio(t, n, j, x);
    Matrix acc = Matrix::Zero(d, d);
    for (const auto& e : t.model.edges_from(j)) {
      acc += e.op.adjoint() * y.block(e.to, d) * e.op;
    }
    out.blocks[j] = ratio * acc;
  }
  return out;
}

KrausDilation transition_kraus(const Trajectory& t, int n) {
  if (n < 0 || n + 1 > t.depth()) {
    std::ostringstream msg;
    msg << "transition " << n << " -> " << n + 1
        << " beyond trajectory depth " << t.depth();
    fail(Errc::IndexOutOfRange, msg.str());
  }
  KrausDilation k;
  k.level = n;
  for (SiteId j : t.support(n)) {
    const Matrix* rho = t.state(n).block(j);
    double trace = rho->trace().real();
    k.sqrt_factor[j] = psd_sqrt(*rho / trace);
    for (const auto& e : t.model.edges_from(j)) {
      k.pairs.emplace_back(j, e.to);
    }
  }
  return k;
}

BlockObservable kraus_apply(const Trajectory& t, const KrausDilation& k,
                            const BlockObservable& x,
                            const BlockObservable& y) {
  const int d = t.model.hdim();
  BlockObservable out;
  out.identity_tail = false;
  for (SiteId j : t.support(k.level)) out.blocks[j] = Matrix::Zero(d, d);
  for (const auto& [j, i] : k.pairs) {
    const Matrix& a = k.sqrt_factor.at(j);
    Complex weight = (a * x.block(j, d) * a).trace();
    const Matrix* b = t.model.op(j, i);
    out.blocks[j] += weight * (b->adjoint() * y.block(i, d) * (*b));
  }
  return out;
}

double kraus_contraction_defect(const Trajectory& t, const KrausDilation& k) {
  const int d = t.model.hdim();
  const Matrix id = Matrix::Identity(d, d);
  std::map<SiteId, Matrix> sums;
  for (SiteId j : t.support(k.level)) sums[j] = Matrix::Zero(d, d);
  for (const auto& [j, i] : k.pairs) {
    const Matrix* b = t.model.op(j, i);
    sums[j] += b->adjoint() * (*b);
  }
  double worst = 0.0;
  for (const auto& [j, sum] : sums) {
    worst = std::max(worst, operator_norm(sum - id));
  }
  return worst;
}

BbarFamily bbar(const Trajectory& t, int n, int horizon, double tol) {
  if (n < 0 || horizon < 0 || n + horizon > t.depth()) {
    std::ostringstream msg;
    msg << "limit operators at step " << n << " with horizon " << horizon
        << " need trajectory depth >= " << n + horizon << ", have "
        << t.depth();
    fail(Errc::IndexOutOfRange, msg.str());
  }
  BbarFamily fam;
  fam.level = n;
  fam.horizon = horizon;
  fam.op = bbar_sweep(t, n, n + horizon);
  if (horizon >= 1) {
    std::map<SiteId, Matrix> prev = bbar_sweep(t, n, n + horizon - 1);
    double delta = 0.0;
    for (const auto& [j, deep] : fam.op) {
      delta = std::max(delta, operator_norm(deep - prev.at(j)));
    }
    fam.tail_delta = delta;
    fam.converged = delta <= tol;
  }
  return fam;
}

ConditionalExpectation conditional_expectation(const Trajectory& t,
                                               const CylinderObservable& a,
                                               int horizon, double tol) {
  if (a.factors.empty()) {
    fail(Errc::IndexOutOfRange, "cylinder observable has no factors");
  }
  const int n = a.top_level();
  const int d = t.model.hdim();
  BbarFamily fam = bbar(t, n, horizon, tol);

  std::map<SiteId, Matrix> run;
  for (SiteId i : t.support(n)) {
    Complex ratio = block_ratio(t, n, i, a.factors.back());
    run[i] = ratio * fam.op.at(i);
  }
  for (int k = n - 1; k >= 0; --k) {
    std::map<SiteId, Matrix> cur;
    for (SiteId j : t.support(k)) {
      Matrix acc = Matrix::Zero(d, d);
      for (const auto& e : t.model.edges_from(j)) {
        auto it = run.find(e.to);
        if (it == run.end()) continue;
        acc += e.op.adjoint() * it->second * e.op;
      }
      Complex ratio =
          block_ratio(t, k, j, a.factors[static_cast<std::size_t>(k)]);
      cur[j] = ratio * acc;
    }
    run = std::move(cur);
  }

  ConditionalExpectation out;
  out.result.identity_tail = false;
  out.result.blocks = std::move(run);
  out.top_level = n;
  out.horizon = horizon;
  out.bbar_converged = fam.converged;
  out.bbar_tail_delta = fam.tail_delta;
  return out;
}

QmcValue qmc_evaluate(const Trajectory& t, const CylinderObservable& a,
                      int horizon, double tol) {
  ConditionalExpectation e = conditional_expectation(t, a, horizon, tol);
  QmcValue v;
  v.top_level = e.top_level;
  v.horizon = e.horizon;
  v.bbar_converged = e.bbar_converged;
  v.bbar_tail_delta = e.bbar_tail_delta;
  for (const auto& [j, block] : e.result.blocks) {
    const Matrix* rho = t.state(0).block(j);
    if (rho) v.value += ((*rho) * block).trace();
  }
  return v;
}

MarkovPairReport verify_markov_pair(const Trajectory& t, int depth,
                                    int horizon, double tol) {
  if (depth < 0 || depth + horizon > t.depth()) {
    std::ostringstream msg;
    msg << "pair check to depth " << depth << " with horizon " << horizon
        << " needs trajectory depth >= " << depth + horizon << ", have "
        << t.depth();
    fail(Errc::IndexOutOfRange, msg.str());
  }
  const int d = t.model.hdim();
  MarkovPairReport report;
  report.depth = depth;

  QmcValue unit = qmc_evaluate(t, CylinderObservable::identity(depth),
                               horizon, tol);
  report.unit_residual = std::abs(unit.value - Complex(1.0, 0.0));
  report.checks = 1;

  // Hermitian basis at each occupied site of each level.
  for (int n = 0; n <= depth; ++n) {
    for (SiteId s : t.support(n)) {
      std::vector<Matrix> basis;
      for (int r = 0; r < d; ++r) {
        for (int c = r; c < d; ++c) {
          if (r == c) {
            Matrix h = Matrix::Zero(d, d);
            h(r, c) = 1.0;
            basis.push_back(h);
          } else {
            Matrix h = Matrix::Zero(d, d);
            h(r, c) = h(c, r) = 1.0 / std::sqrt(2.0);
            basis.push_back(h);
            Matrix g = Matrix::Zero(d, d);
            g(r, c) = Complex(0.0, -1.0) / std::sqrt(2.0);
            g(c, r) = Complex(0.0, 1.0) / std::sqrt(2.0);
            basis.push_back(g);
          }
        }
      }
      for (const Matrix& h : basis) {
        QmcValue v = qmc_evaluate(
            t,
            CylinderObservable::single_factor(n, BlockObservable::point(s, h)),
            horizon, tol);
        const Matrix* rho = t.state(n).block(s);
        Complex direct = rho ? ((*rho) * h).trace() : Complex(0.0, 0.0);
        report.marginal_residual =
            std::max(report.marginal_residual, std::abs(v.value - direct));
        ++report.checks;
      }
    }
  }
  return report;
}

InvariantCheck is_invariant_state(const Model& m, const BlockState& omega,
                                  double tol) {
  omega.check(m, std::max(tol, kDefaultTol));
  InvariantCheck out;

  BlockState image = apply_map(m, omega);
  double acc = 0.0;
  for (const auto& [site, blk] : omega.blocks) {
    const Matrix* other = image.block(site);
    double dnorm = other ? (blk - *other).norm() : blk.norm();
    acc += dnorm * dnorm;
  }
  for (const auto& [site, blk] : image.blocks) {
    if (!omega.block(site)) acc += blk.norm() * blk.norm();
  }
  out.fixed_point_residual = std::sqrt(acc);
  out.fixed_point = out.fixed_point_residual <= tol;

  // Stationarity of the expectations: tr(omega E(I (.) x)) = tr(omega x),
  // with x running over a basis of each site algebra and the one-step
  // expectation written out directly, E(I (.) x)(j) = sum_i B* x(i) B.
  const int d = m.hdim();
  double worst = 0.0;
  for (SiteId s : m.sites()) {
    for (int r = 0; r < d; ++r) {
      for (int c = 0; c < d; ++c) {
        Matrix h = Matrix::Zero(d, d);
        h(r, c) = 1.0;
        Complex lhs(0.0, 0.0);
        for (const auto& [j, rho] : omega.blocks) {
          const Matrix* b = m.op(j, s);
          if (!b) continue;
          lhs += (rho * (b->adjoint() * h * (*b))).trace();
        }
        const Matrix* rho_s = omega.block(s);
        Complex rhs = rho_s ? ((*rho_s) * h).trace() : Complex(0.0, 0.0);
        worst = std::max(worst, std::abs(lhs - rhs));
      }
    }
  }
  out.expectation_residual = worst;
  out.expectation_stationary = worst <= tol;
  return out;
}

}  // namespace oqrw
