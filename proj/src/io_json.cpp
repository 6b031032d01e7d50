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

#include "io_json.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "errors.hpp"

namespace oqrw {

namespace {

using ordered_json = nlohmann::ordered_json;

ordered_json parse_text(const std::string& text) {
  try {
    return ordered_json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    fail(Errc::Parse, e.what());
  }
}

const ordered_json& require(const ordered_json& j, const char* key,
                            const char* doc) {
  auto it = j.find(key);
  if (it == j.end()) {
    std::ostringstream msg;
    msg << doc << " is missing \"" << key << "\"";
    fail(Errc::Schema, msg.str());
  }
  return *it;
}

int require_int(const ordered_json& j, const char* key, const char* doc) {
  const ordered_json& v = require(j, key, doc);
  if (!v.is_number_integer()) {
    std::ostringstream msg;
    msg << doc << " field \"" << key << "\" must be an integer";
    fail(Errc::Schema, msg.str());
  }
  return v.get<int>();
}

Complex parse_entry(const ordered_json& e, const char* doc) {
  if (e.is_number()) return Complex(e.get<double>(), 0.0);
  if (e.is_array() && e.size() == 2 && e[0].is_number() && e[1].is_number()) {
    return Complex(e[0].get<double>(), e[1].get<double>());
  }
  std::ostringstream msg;
  msg << doc << ": matrix entry must be a number or [re, im]";
  fail(Errc::Schema, msg.str());
}

Matrix parse_matrix(const ordered_json& j, const char* doc) {
  if (!j.is_array() || j.empty()) {
    std::ostringstream msg;
    msg << doc << ": matrix must be a nonempty array of rows";
    fail(Errc::Schema, msg.str());
  }
  const std::size_t rows = j.size();
  Matrix m(static_cast<Eigen::Index>(rows), 0);
  for (std::size_t r = 0; r < rows; ++r) {
    const ordered_json& row = j[r];
    if (!row.is_array() || row.size() != rows) {
      std::ostringstream msg;
      msg << doc << ": matrix rows must all have length " << rows;
      fail(Errc::Schema, msg.str());
    }
    if (r == 0) m.resize(static_cast<Eigen::Index>(rows),
                         static_cast<Eigen::Index>(rows));
    for (std::size_t c = 0; c < rows; ++c) {
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
          parse_entry(row[c], doc);
    }
  }
  return m;
}

ordered_json matrix_to_ordered(const Matrix& m) {
  ordered_json rows = ordered_json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    ordered_json row = ordered_json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      row.push_back(ordered_json::array({m(r, c).real(), m(r, c).imag()}));
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

// Document-content defects discovered while assembling the object (unknown
// site references, shape clashes, bad stochastic rows) are schema problems
// of the document, not runtime validation failures.
template <typename Fn>
auto as_schema(Fn&& fn) {
  try {
    return fn();
  } catch (const Error& e) {
    if (e.code() == Errc::Schema || e.code() == Errc::Parse) throw;
    fail(Errc::Schema, e.what());
  }
}

}  // namespace

Model load_model_json(const std::string& text) {
  ordered_json j = parse_text(text);
  if (!j.is_object()) fail(Errc::Schema, "model document must be an object");
  const ordered_json& kind = require(j, "kind", "model");
  if (!kind.is_string()) fail(Errc::Schema, "model \"kind\" must be a string");
  const std::string k = kind.get<std::string>();

  if (k == "explicit") {
    const int hdim = require_int(j, "hdim", "model");
    const ordered_json& sites_j = require(j, "sites", "model");
    if (!sites_j.is_array() || sites_j.empty()) {
      fail(Errc::Schema, "model \"sites\" must be a nonempty array");
    }
    std::vector<SiteId> sites;
    for (const auto& s : sites_j) {
      if (!s.is_number_integer()) {
        fail(Errc::Schema, "model site labels must be integers");
      }
      sites.push_back(s.get<SiteId>());
    }
    const ordered_json& ops_j = require(j, "ops", "model");
    if (!ops_j.is_array() || ops_j.empty()) {
      fail(Errc::Schema, "model \"ops\" must be a nonempty array");
    }
    std::vector<std::tuple<SiteId, SiteId, Matrix>> ops;
    for (const auto& o : ops_j) {
      if (!o.is_object()) fail(Errc::Schema, "each op must be an object");
      ops.emplace_back(require_int(o, "from", "op"), require_int(o, "to", "op"),
                       parse_matrix(require(o, "matrix", "op"), "op"));
    }
    return as_schema(
        [&] { return Model::make_explicit(hdim, std::move(sites), ops); });
  }

  if (k == "lattice1d") {
    const int hdim = require_int(j, "hdim", "model");
    const int window = require_int(j, "window", "model");
    const ordered_json& offsets_j = require(j, "offsets", "model");
    if (!offsets_j.is_array() || offsets_j.empty()) {
      fail(Errc::Schema, "model \"offsets\" must be a nonempty array");
    }
    std::vector<std::pair<int, Matrix>> rule;
    for (const auto& o : offsets_j) {
      if (!o.is_object()) fail(Errc::Schema, "each offset must be an object");
      rule.emplace_back(require_int(o, "offset", "offset"),
                        parse_matrix(require(o, "matrix", "offset"), "offset"));
    }
    return as_schema([&] { return Model::lattice_1d(hdim, rule, window); });
  }

  if (k == "classical") {
    const ordered_json& p_j = require(j, "P", "model");
    if (!p_j.is_array() || p_j.empty()) {
      fail(Errc::Schema, "model \"P\" must be a nonempty array of rows");
    }
    const std::size_t n = p_j.size();
    Eigen::MatrixXd p(static_cast<Eigen::Index>(n),
                      static_cast<Eigen::Index>(n));
    for (std::size_t r = 0; r < n; ++r) {
      const ordered_json& row = p_j[r];
      if (!row.is_array() || row.size() != n) {
        fail(Errc::Schema, "model \"P\" must be square");
      }
      for (std::size_t c = 0; c < n; ++c) {
        if (!row[c].is_number()) {
          fail(Errc::Schema, "model \"P\" entries must be numbers");
        }
        p(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
            row[c].get<double>();
      }
    }
    return as_schema([&] { return Model::from_stochastic(p); });
  }

  std::ostringstream msg;
  msg << "unknown model kind \"" << k << "\"";
  fail(Errc::Schema, msg.str());
}

Model load_model_file(const std::string& path) {
  return load_model_json(read_file(path));
}

BlockState load_state_json(const std::string& text) {
  ordered_json j = parse_text(text);
  if (!j.is_object()) fail(Errc::Schema, "state document must be an object");
  const ordered_json& blocks = require(j, "blocks", "state");
  if (!blocks.is_array() || blocks.empty()) {
    fail(Errc::Schema, "state \"blocks\" must be a nonempty array");
  }
  BlockState s;
  for (const auto& b : blocks) {
    if (!b.is_object()) fail(Errc::Schema, "each block must be an object");
    SiteId site = require_int(b, "site", "block");
    if (s.blocks.count(site)) {
      fail(Errc::Schema, "duplicate state block for one site");
    }
    s.blocks[site] = parse_matrix(require(b, "matrix", "block"), "block");
  }
  return s;
}

BlockState load_state_file(const std::string& path) {
  return load_state_json(read_file(path));
}

CylinderObservable load_cylinder_json(const std::string& text) {
  ordered_json j = parse_text(text);
  if (!j.is_object()) fail(Errc::Schema, "cylinder document must be an object");
  const ordered_json& factors = require(j, "factors", "cylinder");
  if (!factors.is_array() || factors.empty()) {
    fail(Errc::Schema, "cylinder \"factors\" must be a nonempty array");
  }
  CylinderObservable a;
  for (const auto& f : factors) {
    if (!f.is_array()) {
      fail(Errc::Schema, "each cylinder factor must be an array of site terms");
    }
    BlockObservable x;
    x.identity_tail = true;
    for (const auto& term : f) {
      if (!term.is_object()) {
        fail(Errc::Schema, "each factor term must be an object");
      }
      SiteId site = require_int(term, "site", "factor term");
      if (x.blocks.count(site)) {
        fail(Errc::Schema, "duplicate factor term for one site");
      }
      x.blocks[site] =
          parse_matrix(require(term, "matrix", "factor term"), "factor term");
    }
    a.factors.push_back(std::move(x));
  }
  return a;
}

CylinderObservable load_cylinder_file(const std::string& path) {
  return load_cylinder_json(read_file(path));
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    std::ostringstream msg;
    msg << "cannot open " << path;
    fail(Errc::Parse, msg.str());
  }
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    std::ostringstream msg;
    msg << "cannot write " << path;
    fail(Errc::Parse, msg.str());
  }
  out << content;
}

std::string state_to_json(const BlockState& s) {
  ordered_json blocks = ordered_json::array();
  for (const auto& [site, m] : s.blocks) {
    ordered_json b;
    b["site"] = site;
    b["matrix"] = matrix_to_ordered(m);
    blocks.push_back(std::move(b));
  }
  ordered_json j;
  j["blocks"] = std::move(blocks);
  return j.dump(2) + "\n";
}

std::string validation_to_json(const ValidationReport& r) {
  ordered_json sites = ordered_json::array();
  for (const auto& [site, defect] : r.site_defects) {
    ordered_json s;
    s["site"] = site;
    s["defect"] = defect;
    s["boundary"] = std::binary_search(r.boundary_sites.begin(),
                                       r.boundary_sites.end(), site);
    sites.push_back(std::move(s));
  }
  ordered_json j;
  j["valid"] = r.valid;
  j["max_defect"] = r.max_defect;
  j["sites"] = std::move(sites);
  j["issues"] = r.issues;
  return j.dump(2) + "\n";
}

std::string distribution_csv(const Trajectory& t) {
  std::string out = "step,site,probability\n";
  char buf[80];
  for (int n = 0; n <= t.depth(); ++n) {
    for (const auto& [site, p] : site_distribution(t.state(n))) {
      std::snprintf(buf, sizeof buf, "%d,%d,%.17g\n", n, site, p);
      out += buf;
    }
  }
  return out;
}

std::string qmc_report_json(const QmcValue& v, const MarkovPairReport& pair) {
  ordered_json j;
  j["value"] = ordered_json::array({v.value.real(), v.value.imag()});
  j["top_level"] = v.top_level;
  j["horizon"] = v.horizon;
  j["bbar_converged"] = v.bbar_converged;
  j["bbar_tail_delta"] = v.bbar_tail_delta;
  ordered_json p;
  p["unit_residual"] = pair.unit_residual;
  p["marginal_residual"] = pair.marginal_residual;
  p["depth"] = pair.depth;
  p["checks"] = pair.checks;
  j["pair_check"] = std::move(p);
  return j.dump(2) + "\n";
}

namespace {

ordered_json family_to_ordered(const ProjectionFamily& fam) {
  ordered_json projections = ordered_json::array();
  for (const auto& [site, p] : fam.p) {
    ordered_json e;
    e["site"] = site;
    e["matrix"] = matrix_to_ordered(p);
    projections.push_back(std::move(e));
  }
  ordered_json j;
  j["n0"] = fam.n0;
  j["projections"] = std::move(projections);
  return j;
}

ordered_json classes_to_ordered(const ClassicalClasses& c) {
  ordered_json j;
  j["classes"] = c.classes;
  j["closed"] = ordered_json::array();
  for (bool b : c.closed) j["closed"].push_back(b);
  j["irreducible"] = c.irreducible;
  return j;
}

}  // namespace

std::string analysis_to_json(const Analysis& a) {
  ordered_json j;
  j["verdict"] = map_verdict_name(a.verdict);
  j["certificate"] = a.certificate;
  j["depth"] = a.depth;
  j["n0"] = a.options.n0;
  j["horizon"] = a.options.horizon;
  j["tol"] = a.options.tol;
  j["seed"] = a.options.seed;
  j["consistent"] = a.consistent;
  j["conflicts"] = a.conflicts;
  j["witness"] =
      a.winning_family ? family_to_ordered(*a.winning_family) : ordered_json();

  ordered_json criteria;
  {
    ordered_json c;
    c["proper"] = a.common_range.has_value();
    c["h"] = a.common_range ? matrix_to_ordered(*a.common_range)
                            : ordered_json();
    criteria["common_range"] = std::move(c);
  }
  {
    ordered_json c;
    c["found"] = a.support_family.has_value();
    c["family"] = a.support_family ? family_to_ordered(*a.support_family)
                                   : ordered_json();
    c["verified"] = a.support_family && a.support_check.pass();
    c["state_residual"] = a.support_check.state_residual;
    c["expectation_residual"] = a.support_check.expectation_residual;
    criteria["support_witness"] = std::move(c);
  }
  {
    ordered_json c;
    c["certified"] = a.faithfulness.certified;
    c["all_blocks_faithful"] = a.faithfulness.all_blocks_faithful;
    c["full_site_coverage"] = a.faithfulness.full_site_coverage;
    c["depth"] = a.faithfulness.depth;
    criteria["faithfulness"] = std::move(c);
  }
  {
    ordered_json c;
    c["verdict"] = map_verdict_name(a.cp.verdict);
    c["counted"] = a.cp_counted;
    c["rounds"] = a.cp.rounds;
    c["seeds"] = a.cp.seeds_tried;
    c["note"] = a.cp.note;
    c["family"] =
        a.cp.family ? family_to_ordered(*a.cp.family) : ordered_json();
    criteria["subspace_closure"] = std::move(c);
  }
  criteria["classical_classes"] =
      a.classes ? classes_to_ordered(*a.classes) : ordered_json();
  j["criteria"] = std::move(criteria);
  return j.dump(2) + "\n";
}

std::string classes_to_json(const ClassicalClasses& c) {
  return classes_to_ordered(c).dump(2) + "\n";
}

std::string invariant_to_json(const InvariantInfo& info, const BlockState* s) {
  ordered_json j;
  j["found"] = info.found;
  j["residual"] = info.residual;
  j["iterations"] = info.iterations;
  j["used_eigensolver"] = info.used_eigensolver;
  j["fixed_space_dim"] = info.fixed_space_dim;
  if (s) {
    ordered_json blocks = ordered_json::array();
    for (const auto& [site, m] : s->blocks) {
      ordered_json b;
      b["site"] = site;
      b["matrix"] = matrix_to_ordered(m);
      blocks.push_back(std::move(b));
    }
    ordered_json st;
    st["blocks"] = std::move(blocks);
    j["state"] = std::move(st);
  } else {
    j["state"] = ordered_json();
  }
  return j.dump(2) + "\n";
}

}  // namespace oqrw
