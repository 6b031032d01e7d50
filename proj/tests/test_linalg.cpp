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
#include "linalg.hpp"
#include "support.hpp"

using namespace oqrw;
using oqrw_test::m2;
using oqrw_test::mat;
using oqrw_test::norm_diff;

TEST_CASE("operator norm is the largest singular value") {
  CHECK(operator_norm(m2(3, 0, 0, 4)) == doctest::Approx(4.0));
  // A nilpotent matrix still has a nonzero operator norm.
  CHECK(operator_norm(m2(0, 2, 0, 0)) == doctest::Approx(2.0));
  CHECK(operator_norm(Matrix::Zero(2, 2)) == doctest::Approx(0.0));
}

TEST_CASE("hermitian detection and the hermitian part") {
  const Matrix h = m2(1, Complex(0, 1), Complex(0, -1), 2);
  CHECK(is_hermitian(h));
  CHECK_FALSE(is_hermitian(m2(0, 1, 0, 0)));

  const Matrix g = m2(1, 4, 0, 1);
  const Matrix hp = hermitian_part(g);
  CHECK(is_hermitian(hp));
  CHECK(norm_diff(hp, m2(1, 2, 2, 1)) < 1e-15);
}

TEST_CASE("rank cutoff scales with the top eigenvalue") {
  CHECK(rank_cutoff(5.0, 1e-10) == doctest::Approx(5e-10));
  // Degenerate scale falls back to the absolute floor.
  CHECK(rank_cutoff(0.0, 1e-10) == doctest::Approx(kAbsoluteFloor));
}

TEST_CASE("support rank and projection ignore noise eigenvalues") {
  Matrix a = Matrix::Zero(3, 3);
  a(0, 0) = 5.0;
  a(2, 2) = 1e-16;  // far below 5 * 1e-10: noise
  CHECK(support_rank(a) == 1);
  Matrix p = support_projection(a);
  Matrix expect = Matrix::Zero(3, 3);
  expect(0, 0) = 1.0;
  CHECK(norm_diff(p, expect) < 1e-12);
  CHECK(is_projection(p));

  // A genuinely rank-two matrix keeps both directions.
  a(2, 2) = 1.0;
  CHECK(support_rank(a) == 2);
  expect(2, 2) = 1.0;
  CHECK(norm_diff(support_projection(a), expect) < 1e-12);
}

TEST_CASE("psd square root") {
  CHECK(norm_diff(psd_sqrt(m2(4, 0, 0, 9)), m2(2, 0, 0, 3)) < 1e-12);

  // Rank-one case: sqrt(2 vv*) = sqrt(2) vv* for a unit vector v.
  const double s = oqrw_test::kInvSqrt2;
  const Matrix ones = m2(1, 1, 1, 1);
  CHECK(norm_diff(psd_sqrt(ones), m2(s, s, s, s)) < 1e-12);

  // The square of the root returns the input.
  const Matrix r = psd_sqrt(ones);
  CHECK(norm_diff(r * r, ones) < 1e-12);

  CHECK_THROWS_AS(psd_sqrt(m2(1, 0, 0, -1)), Error);
  try {
    psd_sqrt(m2(1, 0, 0, -1));
  } catch (const Error& e) {
    CHECK(e.code() == Errc::NotPsd);
  }
}

TEST_CASE("psd and faithfulness predicates") {
  CHECK(is_psd(m2(1, 0, 0, 0)));
  CHECK(is_psd(Matrix::Zero(2, 2)));
  CHECK_FALSE(is_psd(m2(1.5, 0, 0, -0.5)));
  CHECK_FALSE(is_psd(m2(0, 1, 0, 0)));  // not even hermitian

  CHECK(is_faithful(m2(0.5, 0, 0, 0.5)));
  CHECK_FALSE(is_faithful(m2(1, 0, 0, 0)));
  CHECK_FALSE(is_faithful(m2(0, 1, 0, 0)));
}

TEST_CASE("projection predicate") {
  CHECK(is_projection(m2(1, 0, 0, 0)));
  CHECK(is_projection(Matrix::Identity(2, 2)));
  CHECK(is_projection(Matrix::Zero(2, 2)));
  const double s = oqrw_test::kInvSqrt2;
  CHECK(is_projection(m2(0.5, 0.5, 0.5, 0.5)));
  CHECK_FALSE(is_projection(m2(s, 0, 0, s)));
}

TEST_CASE("minimum eigenvalue") {
  CHECK(min_eigenvalue(m2(2, 1, 1, 2)) == doctest::Approx(1.0));
  CHECK(min_eigenvalue(m2(1, 0, 0, -3)) == doctest::Approx(-3.0));
}
