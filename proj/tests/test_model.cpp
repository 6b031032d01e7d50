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

#include "doctest.h"
#include "errors.hpp"
#include "model.hpp"
#include "support.hpp"

using namespace oqrw;
using namespace oqrw_test;

namespace {

Errc thrown_code(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return Errc::Parse;
}

}  // namespace

TEST_CASE("explicit model round trip") {
  Model m = mixing_model();
  CHECK(m.kind() == ModelKind::Explicit);
  CHECK(m.hdim() == 2);
  CHECK(m.site_count() == 2);
  CHECK(m.sites() == std::vector<SiteId>{0, 1});
  CHECK(m.has_site(1));
  CHECK_FALSE(m.has_site(2));
  CHECK_FALSE(m.is_boundary(0));

  const auto& edges = m.edges_from(0);
  REQUIRE(edges.size() == 2);
  CHECK(edges[0].to == 0);  // sorted by target
  CHECK(edges[1].to == 1);

  REQUIRE(m.op(0, 1) != nullptr);
  CHECK(norm_diff(*m.op(0, 1), m2(0.5, 0.5, 0.5, -0.5)) == 0.0);
  CHECK(blocked_flow_model().op(1, 1) == nullptr);  // known sites, no edge

  CHECK(thrown_code([&] { m.op(2, 0); }) == Errc::UnknownSite);
  CHECK(thrown_code([&] { m.edges_from(9); }) == Errc::UnknownSite);
  CHECK(thrown_code([&] { m.stochastic(); }) == Errc::Unsupported);
}

TEST_CASE("explicit model construction rejects malformed input") {
  const Matrix id = Matrix::Identity(2, 2);

  CHECK(thrown_code([&] {
          Model::make_explicit(0, {0}, {{0, 0, id}});
        }) == Errc::DimensionMismatch);
  CHECK(thrown_code([&] { Model::make_explicit(2, {}, {{0, 0, id}}); }) ==
        Errc::Schema);
  CHECK(thrown_code([&] { Model::make_explicit(2, {0}, {}); }) == Errc::Schema);
  CHECK(thrown_code([&] {
          Model::make_explicit(2, {0, 0}, {{0, 0, id}});
        }) == Errc::Schema);
  // Duplicate edge.
  CHECK(thrown_code([&] {
          Model::make_explicit(2, {0}, {{0, 0, id}, {0, 0, id}});
        }) == Errc::Schema);
  // Operator with the wrong shape.
  CHECK(thrown_code([&] {
          Model::make_explicit(2, {0}, {{0, 0, Matrix::Identity(3, 3)}});
        }) == Errc::DimensionMismatch);
  // Edge to a site that is not listed.
  CHECK(thrown_code([&] {
          Model::make_explicit(2, {0}, {{0, 5, id}});
        }) == Errc::UnknownSite);
}

TEST_CASE("lattice window materialization and boundary marking") {
  Model m = pair_one_model(3);
  CHECK(m.kind() == ModelKind::Lattice1d);
  CHECK(m.window() == 3);
  CHECK(m.site_count() == 7);
  CHECK(m.sites().front() == -3);
  CHECK(m.sites().back() == 3);
  REQUIRE(m.lattice_rule().size() == 2);

  CHECK(m.edges_from(0).size() == 2);
  // The edge off the window edge is simply absent.
  CHECK(m.edges_from(3).size() == 1);
  CHECK(m.edges_from(3)[0].to == 2);

  CHECK(m.is_boundary(-3));
  CHECK(m.is_boundary(3));
  CHECK_FALSE(m.is_boundary(2));

  CHECK(thrown_code([&] {
          Model::lattice_1d(2, {{-1, pair_one_left()}, {-1, pair_one_right()}},
                            3);
        }) == Errc::Schema);
}

TEST_CASE("validation measures the normalization defect") {
  SUBCASE("valid models") {
    for (const Model& m :
         {mixing_model(), ring_model(), pair_one_model(4), pair_two_model(4),
          three_state_model(4), blocked_flow_model()}) {
      ValidationReport rep = m.validate();
      CHECK(rep.valid);
      CHECK(rep.max_defect <= 1e-12);
    }
  }

  SUBCASE("a scaled operator shows up as the exact defect") {
    // One self-loop of twice the identity: the effect sum is 4I, off the
    // identity by exactly 3 in operator norm.
    Model m = Model::make_explicit(2, {0}, {{0, 0, 2.0 * Matrix::Identity(2, 2)}});
    ValidationReport rep = m.validate();
    CHECK_FALSE(rep.valid);
    CHECK(rep.max_defect == doctest::Approx(3.0));
    CHECK(rep.site_defects.at(0) == doctest::Approx(3.0));
  }

  SUBCASE("boundary sites are reported but exempt") {
    Model m = pair_one_model(2);
    ValidationReport rep = m.validate();
    CHECK(rep.valid);
    CHECK(rep.boundary_sites == std::vector<SiteId>{-2, 2});
    // The boundary defect itself is genuine (mass leaves the window).
    CHECK(rep.site_defects.at(2) > 0.1);
    CHECK(rep.site_defects.at(0) <= 1e-14);
  }
}

TEST_CASE("classical models wrap a stochastic matrix") {
  Eigen::MatrixXd p(2, 2);
  p << 0.5, 0.5, 0.25, 0.75;
  Model m = Model::from_stochastic(p);
  CHECK(m.kind() == ModelKind::Classical);
  CHECK(m.hdim() == 1);
  CHECK(m.site_count() == 2);
  REQUIRE(m.op(1, 0) != nullptr);
  CHECK(std::abs((*m.op(1, 0))(0, 0) - std::sqrt(0.25)) < 1e-15);
  CHECK((m.stochastic() - p).norm() == 0.0);
  CHECK(m.validate().valid);

  SUBCASE("zero rows and bad sums are rejected") {
    Eigen::MatrixXd bad(2, 2);
    bad << 0.5, 0.4, 0.25, 0.75;
    CHECK(thrown_code([&] { Model::from_stochastic(bad); }) ==
          Errc::NotStochastic);
    bad << 1.2, -0.2, 0.5, 0.5;
    CHECK(thrown_code([&] { Model::from_stochastic(bad); }) ==
          Errc::NotStochastic);
  }

  SUBCASE("vanishing entries do not materialize edges") {
    Eigen::MatrixXd sparse(2, 2);
    sparse << 1.0, 0.0, 0.0, 1.0;
    Model sm = Model::from_stochastic(sparse);
    CHECK(sm.op(0, 1) == nullptr);
    CHECK(sm.edges_from(0).size() == 1);
  }
}

TEST_CASE("path operators multiply later steps on the left") {
  Model m = pair_one_model(4);
  // Step out to the right then back: the composite is right-move followed
  // by left-move, i.e. the left factor times the right factor.
  Matrix round_trip = path_operator(m, {0, 1, 0});
  CHECK(norm_diff(round_trip, m2(0, 0, -0.5, 0.5)) < 1e-15);
  CHECK(norm_diff(round_trip, pair_one_left() * pair_one_right()) < 1e-15);

  CHECK(thrown_code([&] { path_operator(m, {0}); }) == Errc::IndexOutOfRange);
  CHECK(thrown_code([&] { path_operator(m, {0, 7}); }) == Errc::UnknownSite);
  CHECK(thrown_code([&] { path_operator(m, {0, 2}); }) ==
        Errc::MissingOperator);
}

TEST_CASE("kind names are stable identifiers") {
  CHECK(std::string(model_kind_name(ModelKind::Explicit)) == "explicit");
  CHECK(std::string(model_kind_name(ModelKind::Lattice1d)) == "lattice1d");
  CHECK(std::string(model_kind_name(ModelKind::Classical)) == "classical");
}
