#include <catch2/catch_amalgamated.hpp>

#include "fquad/category.hpp"
#include "fquad/sampling.hpp"

using namespace fquad;

namespace {

const QuadSpace H0 = hyperbolic(false);
const QuadSpace H1 = hyperbolic(true);
const QuadSpace HH = orthogonal_sum(H0, H0);

}  // namespace

TEST_CASE("make_tq basics") {
  TqMorphism id = tq_identity(H0);
  CHECK(id.source() == H0);
  CHECK(id.apex() == H0);

  TqMorphism inc = tq_inclusion(H0, H0);
  CHECK(inc.source() == H0);
  CHECK(inc.target() == HH);
  CHECK(inc.apex() == HH);

  // degenerate apex is rejected
  QuadSpace pt = point_space(false);
  CHECK_THROWS_AS(make_tq(iso_identity(pt), iso_identity(pt)), std::invalid_argument);
  // a non-isometry cannot even be built as an IsoMap
  CHECK_THROWS_AS(IsoMap(H0, H0, F2Matrix::from_bits({{1, 1}, {0, 1}})), std::invalid_argument);
}

TEST_CASE("epsilon of simple cospans") {
  CHECK(epsilon(tq_identity(H0)) == F2Matrix::identity(2));

  // two orthogonal blocks: projection kills the image of the left leg
  TqMorphism cross = make_tq(inclusion_block(H0, HH, 0), inclusion_block(H0, HH, 2));
  CHECK(epsilon(cross) == F2Matrix(2, 2));

  // left leg into the first block, right leg the identity
  TqMorphism inc = tq_inclusion(H0, H1);
  F2Matrix expect(4, 2);
  expect.set(0, 0, true);
  expect.set(1, 1, true);
  CHECK(epsilon(inc) == expect);

  // retraction onto the first block
  TqMorphism ret = tq_retraction(H0, H1);
  F2Matrix pr(2, 4);
  pr.set(0, 0, true);
  pr.set(1, 1, true);
  CHECK(epsilon(ret) == pr);
}

TEST_CASE("epsilon through a projection instance") {
  // a |-> a1, b |-> b1 + a2; the projection onto the first block drops a2
  F2Matrix m(4, 2);
  m.set(0, 0, true);
  m.set(1, 1, true);
  m.set(2, 1, true);
  IsoMap f(H0, HH, m);
  TqMorphism t = make_tq(f, inclusion_block(H0, HH, 0));
  CHECK(epsilon(t) == F2Matrix::identity(2));
}

TEST_CASE("identity is a two-sided unit for composition") {
  Sampler s(42);
  for (int i = 0; i < 20; ++i) {
    TqMorphism t = random_cospan(H0, H1, s);
    TqMorphism a = compose_tq(tq_identity(H0), t);
    CHECK(a.left.matrix() == t.left.matrix());
    CHECK(a.right.matrix() == t.right.matrix());
    CHECK(a.apex() == t.apex());
    // right unit gives another representative of the same class
    TqMorphism b = compose_tq(t, tq_identity(H1));
    CHECK(epsilon(b) == epsilon(t));
  }
}

TEST_CASE("epsilon is functorial on seeded composites") {
  Sampler s(7);
  std::vector<QuadSpace> objs = {H0, H1, HH};
  for (int i = 0; i < 25; ++i) {
    const QuadSpace& v = objs[s.index(objs.size())];
    const QuadSpace& w = objs[s.index(objs.size())];
    const QuadSpace& z = objs[s.index(objs.size())];
    TqMorphism t1 = random_cospan(v, w, s);
    TqMorphism t2 = random_cospan(w, z, s);
    TqMorphism c = compose_tq(t1, t2);
    CHECK(c.source() == v);
    CHECK(c.target() == z);
    CHECK(epsilon(c) == epsilon(t2) * epsilon(t1));
  }
}

TEST_CASE("composition is associative at the epsilon level") {
  Sampler s(19);
  for (int i = 0; i < 10; ++i) {
    TqMorphism t1 = random_cospan(H0, H1, s);
    TqMorphism t2 = random_cospan(H1, H0, s);
    TqMorphism t3 = random_cospan(H0, HH, s);
    F2Matrix lhs = epsilon(compose_tq(compose_tq(t1, t2), t3));
    F2Matrix rhs = epsilon(compose_tq(t1, compose_tq(t2, t3)));
    CHECK(lhs == rhs);
    CHECK(lhs == epsilon(t3) * epsilon(t2) * epsilon(t1));
  }
}

TEST_CASE("composition trace: inclusion then retraction") {
  // [V -> V_|_H0 <- V_|_H0] then [V_|_H0 -> V_|_H0 <- V] composes to a
  // morphism V -> V with apex V_|_H0
  TqMorphism inc = tq_inclusion(H0, H0);
  TqMorphism ret = tq_retraction(H0, H0);
  TqMorphism c = compose_tq(inc, ret);
  CHECK(c.source() == H0);
  CHECK(c.target() == H0);
  CHECK(c.apex().dim() == 4);
  CHECK(epsilon(c) == F2Matrix::identity(2));
}

TEST_CASE("lift_linear hits every linear map") {
  // identity, zero, and the non-isometry a0 |-> a0+b0
  CHECK(epsilon(lift_linear(F2Matrix::identity(2), H0, H0)) == F2Matrix::identity(2));
  CHECK(epsilon(lift_linear(F2Matrix(2, 2), H0, H0)) == F2Matrix(2, 2));
  F2Matrix f = F2Matrix::from_bits({{1, 0}, {1, 1}});  // e0 |-> e0+e1
  TqMorphism t = lift_linear(f, H0, H0);
  CHECK(epsilon(t) == f);
  CHECK(t.apex().dim() == 2 + 12);

  Sampler s(99);
  std::vector<QuadSpace> objs = {zero_space(), H0, H1, HH};
  for (int i = 0; i < 30; ++i) {
    const QuadSpace& v = objs[s.index(objs.size())];
    const QuadSpace& w = objs[s.index(objs.size())];
    F2Matrix m = random_matrix(w.dim(), v.dim(), s);
    CHECK(epsilon(lift_linear(m, v, w)) == m);
  }
}

TEST_CASE("transport of embeddings") {
  IsoMap h = enumerate_embeddings(point_space(true), H0)[0];  // x -> a+b

  auto through_id = transport_embedding(h, tq_identity(H0));
  REQUIRE(through_id.has_value());
  CHECK(through_id->matrix() == h.matrix());

  // second-block cospan: a+b does not land in the other block
  TqMorphism cross = make_tq(inclusion_block(H0, HH, 0), inclusion_block(H0, HH, 2));
  CHECK_FALSE(transport_embedding(h, cross).has_value());

  // inclusion morphism transports to the composite with the inclusion
  TqMorphism inc = tq_inclusion(H0, H0);
  auto moved = transport_embedding(h, inc);
  REQUIRE(moved.has_value());
  CHECK(moved->matrix() == inc.left.matrix() * h.matrix());
}

TEST_CASE("relation moves preserve epsilon") {
  Sampler s(5);
  for (int i = 0; i < 15; ++i) {
    TqMorphism t = random_cospan(H0, H0, s);
    // enlarge the apex
    QuadSpace bigger = orthogonal_sum(t.apex(), H0);
    TqMorphism moved = apply_relation_move(t, inclusion_block(t.apex(), bigger, 0));
    CHECK(epsilon(moved) == epsilon(t));
    // twist the apex by one of its isometries
    IsoMap alpha = random_orthogonal(t.apex(), s);
    TqMorphism twisted = apply_relation_move(t, alpha);
    CHECK(epsilon(twisted) == epsilon(t));
  }
}

TEST_CASE("relation move rejects maps not starting at the apex") {
  TqMorphism t = tq_identity(H0);
  CHECK_THROWS_AS(apply_relation_move(t, iso_identity(HH)), std::invalid_argument);
}
