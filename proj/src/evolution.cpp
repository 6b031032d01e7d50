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

#include "evolution.hpp"

#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "errors.hpp"

namespace oqrw {

namespace {

// Frobenius distance between two block states, absent blocks read as zero.
double state_distance(const BlockState& a, const BlockState& b) {
  double acc = 0.0;
  for (const auto& [site, block] : a.blocks) {
    const Matrix* other = b.block(site);
    double d = other ? (block - *other).norm() : block.norm();
    acc += d * d;
  }
  for (const auto& [site, block] : b.blocks) {
    if (!a.block(site)) acc += block.norm() * block.norm();
  }
  return std::sqrt(acc);
}

BlockState scale_state(const BlockState& s, double factor) {
  BlockState out;
  for (const auto& [site, block] : s.blocks) out.blocks[site] = factor * block;
  return out;
}

// Blockwise positive part: clamp negative eigenvalues to zero.
BlockState positive_part(const BlockState& s) {
  BlockState out;
  for (const auto& [site, block] : s.blocks) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(hermitian_part(block));
    Matrix acc = Matrix::Zero(block.rows(), block.cols());
    for (int k = 0; k < es.eigenvalues().size(); ++k) {
      double lambda = es.eigenvalues()(k);
      if (lambda > 0.0) {
        acc += lambda * es.eigenvectors().col(k) *
               es.eigenvectors().col(k).adjoint();
      }
    }
    if (acc.trace().real() > kPruneFloor) out.blocks[site] = acc;
  }
  return out;
}

}  // namespace

double BlockState::total_trace() const {
  double acc = 0.0;
  for (const auto& [site, block] : blocks) acc += block.trace().real();
  return acc;
}

std::vector<SiteId> BlockState::support() const {
  std::vector<SiteId> out;
  out.reserve(blocks.size());
  for (const auto& [site, block] : blocks) out.push_back(site);
  return out;
}

const Matrix* BlockState::block(SiteId site) const {
  auto it = blocks.find(site);
  return it == blocks.end() ? nullptr : &it->second;
}

BlockState BlockState::point(SiteId site, Matrix block) {
  BlockState s;
  s.blocks[site] = std::move(block);
  return s;
}

void BlockState::check(const Model& m, double tol) const {
  if (blocks.empty()) fail(Errc::NotNormalized, "state has no blocks");
  for (const auto& [site, block] : blocks) {
    if (!m.has_site(site)) {
      std::ostringstream msg;
      msg << "state occupies unknown site " << site;
      fail(Errc::UnknownSite, msg.str());
    }
    if (block.rows() != m.hdim() || block.cols() != m.hdim()) {
      std::ostringstream msg;
      msg << "block at site " << site << " is " << block.rows() << "x"
          << block.cols() << ", expected " << m.hdim() << "x" << m.hdim();
      fail(Errc::DimensionMismatch, msg.str());
    }
    if (!is_hermitian(block, tol)) {
      std::ostringstream msg;
      msg << "block at site " << site << " is not Hermitian";
      fail(Errc::NotHermitian, msg.str());
    }
    double lambda = min_eigenvalue(hermitian_part(block));
    if (lambda < -tol) {
      std::ostringstream msg;
      msg << "block at site " << site << " has eigenvalue " << lambda;
      fail(Errc::NotPsd, msg.str());
    }
  }
  double trace = total_trace();
  if (std::abs(trace - 1.0) > tol) {
    std::ostringstream msg;
    msg << "state trace is " << trace;
    fail(Errc::NotNormalized, msg.str());
  }
}

BlockState apply_map(const Model& m, const BlockState& s) {
  std::map<SiteId, Matrix> acc;
  for (const auto& [from, block] : s.blocks) {
    for (const auto& e : m.edges_from(from)) {
      Matrix term = e.op * block * e.op.adjoint();
      auto it = acc.find(e.to);
      if (it == acc.end()) {
        acc.emplace(e.to, std::move(term));
      } else {
        it->second += term;
      }
    }
  }
  BlockState out;
  for (auto& [site, block] : acc) {
    Matrix h = hermitian_part(block);
    if (h.trace().real() >= kPruneFloor) out.blocks[site] = std::move(h);
  }
  return out;
}

BlockState step(const Model& m, const BlockState& s) {
  for (const auto& [site, block] : s.blocks) {
    if (m.is_boundary(site)) {
      std::ostringstream msg;
      msg << "state occupies boundary site " << site
          << "; enlarge the window";
      fail(Errc::BoundaryViolation, msg.str());
    }
  }
  BlockState out = apply_map(m, s);
  double drift = std::abs(out.total_trace() - s.total_trace());
  if (drift > kTraceDriftTol) {
    std::ostringstream msg;
    msg << "step changed total trace by " << drift;
    fail(Errc::NotNormalized, msg.str());
  }
  return out;
}

const BlockState& Trajectory::state(int n) const {
  if (n < 0 || n >= static_cast<int>(states.size())) {
    std::ostringstream msg;
    msg << "step " << n << " beyond trajectory depth " << depth();
    fail(Errc::IndexOutOfRange, msg.str());
  }
  return states[static_cast<std::size_t>(n)];
}

const std::vector<SiteId>& Trajectory::support(int n) const {
  if (n < 0 || n >= static_cast<int>(supports.size())) {
    std::ostringstream msg;
    msg << "step " << n << " beyond trajectory depth " << depth();
    fail(Errc::IndexOutOfRange, msg.str());
  }
  return supports[static_cast<std::size_t>(n)];
}

double Trajectory::block_trace(int n, SiteId site) const {
  const Matrix* b = state(n).block(site);
  return b ? b->trace().real() : 0.0;
}

Trajectory trajectory(const Model& m, const BlockState& rho0, int steps) {
  if (steps < 0) fail(Errc::IndexOutOfRange, "step count must be >= 0");
  rho0.check(m);
  Trajectory t{m, {}, {}};
  t.states.push_back(rho0);
  t.supports.push_back(rho0.support());
  for (int n = 0; n < steps; ++n) {
    t.states.push_back(step(m, t.states.back()));
    t.supports.push_back(t.states.back().support());
  }
  return t;
}

std::map<SiteId, double> site_distribution(const BlockState& s) {
  std::map<SiteId, double> out;
  for (const auto& [site, block] : s.blocks) {
    out[site] = block.trace().real();
  }
  return out;
}

namespace {

// Dense superoperator fallback: search the eigenvalue-1 eigenspace of the
// transition map for a positive element.  For a trace-preserving positive
// map, the positive part of a Hermitian fixed point is again fixed, so
// clamping an eigenvector's Hermitian part is sound even when the solver
// returns a difference of invariant states.
std::optional<BlockState> invariant_by_eigensolver(const Model& m, double tol,
                                                   InvariantInfo* info) {
  const int d = m.hdim();
  const int ns = m.site_count();
  const int dim = ns * d * d;
  const auto& sites = m.sites();
  auto flat = [&](const BlockState& s) {
    Vector v = Vector::Zero(dim);
    for (int si = 0; si < ns; ++si) {
      const Matrix* b = s.block(sites[static_cast<std::size_t>(si)]);
      if (!b) continue;
      for (int r = 0; r < d; ++r) {
        for (int c = 0; c < d; ++c) v(si * d * d + r * d + c) = (*b)(r, c);
      }
    }
    return v;
  };
  Eigen::MatrixXcd super = Eigen::MatrixXcd::Zero(dim, dim);
  for (int si = 0; si < ns; ++si) {
    for (int r = 0; r < d; ++r) {
      for (int c = 0; c < d; ++c) {
        Matrix unit = Matrix::Zero(d, d);
        unit(r, c) = 1.0;
        BlockState basis;
        basis.blocks[sites[static_cast<std::size_t>(si)]] = unit;
        // apply_map prunes near-zero blocks, which would bend linearity;
        // rebuild the image without pruning.
        std::map<SiteId, Matrix> acc;
        for (const auto& [from, block] : basis.blocks) {
          for (const auto& e : m.edges_from(from)) {
            Matrix term = e.op * block * e.op.adjoint();
            auto it = acc.find(e.to);
            if (it == acc.end()) acc.emplace(e.to, std::move(term));
            else it->second += term;
          }
        }
        BlockState image;
        for (auto& [site, blk] : acc) image.blocks[site] = blk;
        super.col(si * d * d + r * d + c) = flat(image);
      }
    }
  }
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(super);
  if (es.info() != Eigen::Success) return std::nullopt;

  std::vector<int> fixed;
  for (int k = 0; k < dim; ++k) {
    if (std::abs(es.eigenvalues()(k) - Complex(1.0, 0.0)) <= 1e-8) {
      fixed.push_back(k);
    }
  }
  if (info) {
    info->used_eigensolver = true;
    info->fixed_space_dim = static_cast<int>(fixed.size());
  }
  auto unflatten = [&](const Vector& v) {
    BlockState s;
    for (int si = 0; si < ns; ++si) {
      Matrix b(d, d);
      for (int r = 0; r < d; ++r) {
        for (int c = 0; c < d; ++c) b(r, c) = v(si * d * d + r * d + c);
      }
      if (b.norm() > 0.0) s.blocks[sites[static_cast<std::size_t>(si)]] = b;
    }
    return s;
  };
  for (int k : fixed) {
    Vector v = es.eigenvectors().col(k);
    for (Complex phase : {Complex(1.0, 0.0), Complex(0.0, 1.0)}) {
      BlockState raw = unflatten(phase * v);
      // Hermitian part of a fixed point is fixed; take its positive part.
      BlockState herm;
      for (const auto& [site, blk] : raw.blocks) {
        herm.blocks[site] = hermitian_part(blk);
      }
      BlockState pos = positive_part(herm);
      double trace = pos.total_trace();
      if (trace <= 1e-9) continue;
      BlockState candidate = scale_state(pos, 1.0 / trace);
      double residual = state_distance(apply_map(m, candidate), candidate);
      if (residual <= std::max(tol, 1e-9)) {
        if (info) {
          info->found = true;
          info->residual = residual;
        }
        return candidate;
      }
    }
  }
  return std::nullopt;
}

}  // namespace

std::optional<BlockState> invariant_state(const Model& m, double tol,
                                          int max_iter, InvariantInfo* info) {
  if (m.kind() == ModelKind::Lattice1d) {
    fail(Errc::Unsupported,
         "invariant-state search needs a finite site set, not a lattice window");
  }
  const int d = m.hdim();
  BlockState x;
  for (SiteId s : m.sites()) {
    x.blocks[s] = Matrix::Identity(d, d) /
                  static_cast<double>(m.site_count() * d);
  }
  // Damped iteration x <- (x + M(x)) / 2 shares its fixed points with the
  // map itself but suppresses peripheral eigenvalues other than 1, so
  // period-2 components (e.g. deterministic swaps) still converge.
  int iter = 0;
  double residual = 0.0;
  for (; iter < max_iter; ++iter) {
    BlockState y = apply_map(m, x);
    residual = state_distance(y, x);
    if (residual <= tol * 0.1) break;
    BlockState z;
    for (const auto& [site, blk] : x.blocks) z.blocks[site] = blk;
    for (const auto& [site, blk] : y.blocks) {
      auto it = z.blocks.find(site);
      if (it == z.blocks.end()) z.blocks[site] = blk;
      else it->second += blk;
    }
    z = scale_state(z, 0.5);
    double trace = z.total_trace();
    if (trace <= kPruneFloor) break;
    x = scale_state(z, 1.0 / trace);
  }
  if (info) {
    info->iterations = iter;
    info->residual = residual;
  }
  if (residual <= tol) {
    BlockState cleaned = positive_part(x);
    double trace = cleaned.total_trace();
    if (trace > kPruneFloor) {
      cleaned = scale_state(cleaned, 1.0 / trace);
      double final_residual = state_distance(apply_map(m, cleaned), cleaned);
      if (final_residual <= tol) {
        if (info) {
          info->found = true;
          info->residual = final_residual;
        }
        return cleaned;
      }
    }
  }
  return invariant_by_eigensolver(m, tol, info);
}

BlockState classical_state(const Model& m, const Eigen::VectorXd& probs) {
  if (m.kind() != ModelKind::Classical) {
    fail(Errc::Unsupported, "probability vectors describe classical models only");
  }
  if (probs.size() != m.site_count()) {
    fail(Errc::DimensionMismatch, "probability vector length differs from site count");
  }
  BlockState s;
  for (int i = 0; i < probs.size(); ++i) {
    if (probs(i) < -kDefaultTol) {
      fail(Errc::NotPsd, "negative probability entry");
    }
    if (probs(i) > kPruneFloor) {
      Matrix b(1, 1);
      b(0, 0) = Complex(probs(i), 0.0);
      s.blocks[m.sites()[static_cast<std::size_t>(i)]] = b;
    }
  }
  return s;
}

Eigen::VectorXd classical_vector(const Model& m, const BlockState& s) {
  if (m.kind() != ModelKind::Classical) {
    fail(Errc::Unsupported, "probability vectors describe classical models only");
  }
  Eigen::VectorXd v = Eigen::VectorXd::Zero(m.site_count());
  for (int i = 0; i < m.site_count(); ++i) {
    const Matrix* b = s.block(m.sites()[static_cast<std::size_t>(i)]);
    if (b) v(i) = b->trace().real();
  }
  return v;
}

}  // namespace oqrw
