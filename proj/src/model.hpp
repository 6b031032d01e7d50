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

#ifndef OQRW_MODEL_HPP
#define OQRW_MODEL_HPP

#include <map>
#include <set>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "linalg.hpp"

namespace oqrw {

// Lattice-site label.  Window truncations of the integer lattice use the
// labels -W .. W directly.
using SiteId = int;

// A path is the ordered sequence of visited sites i0, i1, ..., il (l >= 1).
using Path = std::vector<SiteId>;

enum class ModelKind { Explicit, Lattice1d, Classical };

const char* model_kind_name(ModelKind kind);

// One outgoing transition: the operator applied when the walker moves from
// the owning site to `to`.
struct Edge {
  SiteId to;
  Matrix op;
};

struct ValidationReport {
  bool valid = true;
  // Worst normalization defect ||sum_i (B^i_j)* B^i_j - I|| over sites that
  // are not boundary-exempt.
  double max_defect = 0.0;
  std::map<SiteId, double> site_defects;  // every site, including boundary
  std::vector<SiteId> boundary_sites;     // exempted: operators leave the window
  std::vector<std::string> issues;
};

// An open quantum random walk: a finite site set and, per ordered site pair,
// a jump operator B^to_from on the hdim-dimensional internal space.  The
// family is normalized so that the effects leaving each site sum to the
// identity; on a window truncation of the integer lattice the sites at the
// edge necessarily lose outgoing operators and are flagged as boundary.
class Model {
 public:
  // ops entries are (from, to, operator).  Duplicate (from, to) pairs are
  // rejected; operators must be hdim x hdim.
  static Model make_explicit(
      int hdim, std::vector<SiteId> sites,
      const std::vector<std::tuple<SiteId, SiteId, Matrix>>& ops);

  // Translation-invariant walk on the integer lattice, materialized over the
  // window [-window, window].  `rule` maps a site offset to the operator for
  // the jump from j to j + offset.
  static Model lattice_1d(int hdim,
                          const std::vector<std::pair<int, Matrix>>& rule,
                          int window);

  // Classical Markov chain embedded as a walk with one-dimensional internal
  // space: the operator from j to i is the scalar sqrt(P(j, i)).  Rows of P
  // must sum to 1 within tol and entries must be nonnegative.
  static Model from_stochastic(const Eigen::MatrixXd& p,
                               double tol = kDefaultTol);

  ModelKind kind() const { return kind_; }
  int hdim() const { return hdim_; }
  const std::vector<SiteId>& sites() const { return sites_; }
  int site_count() const { return static_cast<int>(sites_.size()); }
  bool has_site(SiteId site) const;

  // True iff some lattice-rule offset from this site leaves the window, so
  // its outgoing family is incomplete.  Always false for explicit/classical.
  bool is_boundary(SiteId site) const;

  // Outgoing transitions, sorted by target site.  Empty for sites without
  // operators; throws UnknownSite for labels outside the model.
  const std::vector<Edge>& edges_from(SiteId site) const;

  // The operator from `from` to `to`, or nullptr if absent (absent = zero).
  const Matrix* op(SiteId from, SiteId to) const;

  int window() const { return window_; }
  const std::vector<std::pair<int, Matrix>>& lattice_rule() const {
    return rule_;
  }

  // The stochastic matrix behind a classical-kind model.
  const Eigen::MatrixXd& stochastic() const;

  // Per-site normalization defects; boundary sites are reported but exempt
  // from the validity decision.
  ValidationReport validate(double tol = kDefaultTol) const;

 private:
  Model() = default;
  void add_op(SiteId from, SiteId to, Matrix op);
  void finalize();

  ModelKind kind_ = ModelKind::Explicit;
  int hdim_ = 0;
  std::vector<SiteId> sites_;
  std::set<SiteId> site_set_;
  std::map<SiteId, std::vector<Edge>> out_;
  std::set<SiteId> boundary_;
  std::vector<std::pair<int, Matrix>> rule_;
  int window_ = 0;
  Eigen::MatrixXd p_;
};

// Ordered product of the step operators along the path: the operator for the
// later step multiplies on the left.  Every consecutive pair must have an
// operator in the model.
Matrix path_operator(const Model& m, const Path& path);

}  // namespace oqrw

#endif  // OQRW_MODEL_HPP
