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

#include "model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "errors.hpp"

namespace oqrw {

const char* model_kind_name(ModelKind kind) {
  switch (kind) {
    case ModelKind::Explicit:
      return "explicit";
    case ModelKind::Lattice1d:
      return "lattice1d";
    case ModelKind::Classical:
      return "classical";
  }
  return "unknown";
}

void Model::add_op(SiteId from, SiteId to, Matrix op) {
  if (op.rows() != hdim_ || op.cols() != hdim_) {
    std::ostringstream msg;
    msg << "operator " << from << " -> " << to << " is " << op.rows() << "x"
        << op.cols() << ", expected " << hdim_ << "x" << hdim_;
    fail(Errc::DimensionMismatch, msg.str());
  }
  auto& edges = out_[from];
  for (const auto& e : edges) {
    if (e.to == to) {
      std::ostringstream msg;
      msg << "duplicate operator for " << from << " -> " << to;
      fail(Errc::Schema, msg.str());
    }
  }
  edges.push_back(Edge{to, std::move(op)});
}

void Model::finalize() {
  site_set_.clear();
  for (SiteId s : sites_) {
    if (!site_set_.insert(s).second) {
      std::ostringstream msg;
      msg << "duplicate site label " << s;
      fail(Errc::Schema, msg.str());
    }
  }
  for (auto& [from, edges] : out_) {
    if (!site_set_.count(from)) {
      std::ostringstream msg;
      msg << "operator from unknown site " << from;
      fail(Errc::UnknownSite, msg.str());
    }
    for (const auto& e : edges) {
      if (!site_set_.count(e.to)) {
        std::ostringstream msg;
        msg << "operator to unknown site " << e.to;
        fail(Errc::UnknownSite, msg.str());
      }
    }
    std::sort(edges.begin(), edges.end(),
              [](const Edge& a, const Edge& b) { return a.to < b.to; });
  }
}

Model Model::make_explicit(
    int hdim, std::vector<SiteId> sites,
    const std::vector<std::tuple<SiteId, SiteId, Matrix>>& ops) {
  if (hdim < 1) fail(Errc::DimensionMismatch, "internal dimension must be >= 1");
  if (sites.empty()) fail(Errc::Schema, "site list is empty");
  if (ops.empty()) fail(Errc::Schema, "operator list is empty");
  Model m;
  m.kind_ = ModelKind::Explicit;
  m.hdim_ = hdim;
  std::sort(sites.begin(), sites.end());
  m.sites_ = std::move(sites);
  for (const auto& [from, to, op] : ops) m.add_op(from, to, op);
  m.finalize();
  return m;
}

Model Model::lattice_1d(int hdim,
                        const std::vector<std::pair<int, Matrix>>& rule,
                        int window) {
  if (hdim < 1) fail(Errc::DimensionMismatch, "internal dimension must be >= 1");
  if (rule.empty()) fail(Errc::Schema, "offset rule is empty");
  if (window < 1) fail(Errc::Schema, "window must be >= 1");
  Model m;
  m.kind_ = ModelKind::Lattice1d;
  m.hdim_ = hdim;
  m.window_ = window;
  std::set<int> seen_offsets;
  for (const auto& [offset, op] : rule) {
    if (!seen_offsets.insert(offset).second) {
      std::ostringstream msg;
      msg << "duplicate offset " << offset;
      fail(Errc::Schema, msg.str());
    }
  }
  m.rule_ = rule;
  std::sort(m.rule_.begin(), m.rule_.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  for (SiteId s = -window; s <= window; ++s) m.sites_.push_back(s);
  for (SiteId from = -window; from <= window; ++from) {
    for (const auto& [offset, op] : m.rule_) {
      SiteId to = from + offset;
      if (to < -window || to > window) {
        m.boundary_.insert(from);
        continue;
      }
      m.add_op(from, to, op);
    }
  }
  m.finalize();
  return m;
}

Model Model::from_stochastic(const Eigen::MatrixXd& p, double tol) {
  const int n = static_cast<int>(p.rows());
  if (n < 1 || p.cols() != n) {
    fail(Errc::DimensionMismatch, "stochastic matrix must be square and nonempty");
  }
  for (int i = 0; i < n; ++i) {
    double row = 0.0;
    for (int j = 0; j < n; ++j) {
      if (p(i, j) < -tol) {
        std::ostringstream msg;
        msg << "negative entry P(" << i << "," << j << ") = " << p(i, j);
        fail(Errc::NotStochastic, msg.str());
      }
      row += p(i, j);
    }
    if (std::abs(row - 1.0) > tol) {
      std::ostringstream msg;
      msg << "row " << i << " sums to " << row;
      fail(Errc::NotStochastic, msg.str());
    }
  }
  Model m;
  m.kind_ = ModelKind::Classical;
  m.hdim_ = 1;
  m.p_ = p;
  for (SiteId s = 0; s < n; ++s) m.sites_.push_back(s);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      if (p(j, i) <= kAbsoluteFloor) continue;
      Matrix op(1, 1);
      op(0, 0) = Complex(std::sqrt(p(j, i)), 0.0);
      m.add_op(j, i, std::move(op));
    }
  }
  m.finalize();
  return m;
}

bool Model::has_site(SiteId site) const { return site_set_.count(site) != 0; }

bool Model::is_boundary(SiteId site) const {
  return boundary_.count(site) != 0;
}

const std::vector<Edge>& Model::edges_from(SiteId site) const {
  if (!has_site(site)) {
    std::ostringstream msg;
    msg << "no site " << site << " in the model";
    fail(Errc::UnknownSite, msg.str());
  }
  static const std::vector<Edge> empty;
  auto it = out_.find(site);
  return it == out_.end() ? empty : it->second;
}

const Matrix* Model::op(SiteId from, SiteId to) const {
  for (const auto& e : edges_from(from)) {
    if (e.to == to) return &e.op;
  }
  return nullptr;
}

const Eigen::MatrixXd& Model::stochastic() const {
  if (kind_ != ModelKind::Classical) {
    fail(Errc::Unsupported, "model does not come from a stochastic matrix");
  }
  return p_;
}

ValidationReport Model::validate(double tol) const {
  ValidationReport report;
  const Matrix id = Matrix::Identity(hdim_, hdim_);
  for (SiteId j : sites_) {
    Matrix acc = Matrix::Zero(hdim_, hdim_);
    for (const auto& e : edges_from(j)) acc += e.op.adjoint() * e.op;
    double defect = operator_norm(acc - id);
    report.site_defects[j] = defect;
    if (is_boundary(j)) {
      report.boundary_sites.push_back(j);
      continue;
    }
    if (defect > report.max_defect) report.max_defect = defect;
    if (defect > tol) {
      report.valid = false;
      std::ostringstream msg;
      msg << "site " << j << ": outgoing effects sum off identity by "
          << defect;
      report.issues.push_back(msg.str());
    }
  }
  return report;
}

Matrix path_operator(const Model& m, const Path& path) {
  if (path.size() < 2) {
    fail(Errc::IndexOutOfRange, "a path needs at least two sites");
  }
  for (SiteId s : path) {
    if (!m.has_site(s)) {
      std::ostringstream msg;
      msg << "path visits unknown site " << s;
      fail(Errc::UnknownSite, msg.str());
    }
  }
  Matrix acc = Matrix::Identity(m.hdim(), m.hdim());
  for (std::size_t k = 0; k + 1 < path.size(); ++k) {
    const Matrix* step = m.op(path[k], path[k + 1]);
    if (step == nullptr) {
      std::ostringstream msg;
      msg << "no operator for step " << path[k] << " -> " << path[k + 1];
      fail(Errc::MissingOperator, msg.str());
    }
    acc = (*step) * acc;
  }
  return acc;
}

}  // namespace oqrw
