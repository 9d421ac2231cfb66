#pragma once

// The cospan category of nondegenerate quadratic spaces: a morphism V -> W
// is (a representative of) a diagram V -> X <- W of isometries into a
// nondegenerate apex X. Composition glues along the pseudo push-out,
// the forgetful functor epsilon projects a cospan to a plain linear map,
// and lift_linear produces a cospan with prescribed epsilon.

#include <optional>
#include <stdexcept>
#include <utility>

#include "fquad/quadspace.hpp"

namespace fquad {

// One representative of an equivalence class of cospans. No normalization
// is performed; functor evaluations must not depend on the representative.
struct TqMorphism {
  IsoMap left;   // source -> apex
  IsoMap right;  // target -> apex

  const QuadSpace& source() const { return left.source(); }
  const QuadSpace& target() const { return right.source(); }
  const QuadSpace& apex() const { return left.target(); }
};

inline TqMorphism make_tq(const IsoMap& f, const IsoMap& g) {
  if (!(f.target() == g.target())) throw std::invalid_argument("make_tq: apex mismatch");
  if (!is_nondegenerate(f.target())) throw std::invalid_argument("make_tq: degenerate apex");
  if (!is_nondegenerate(f.source()) || !is_nondegenerate(g.source()))
    throw std::invalid_argument("make_tq: endpoints must be nondegenerate");
  return TqMorphism{f, g};
}

inline TqMorphism tq_identity(const QuadSpace& v) {
  return make_tq(iso_identity(v), iso_identity(v));
}

// [V ->g W <-id W] for an isometry g.
inline TqMorphism tq_from_isometry(const IsoMap& g) {
  return make_tq(g, iso_identity(g.target()));
}

// [V ->incl V_|_W <-id V_|_W]
inline TqMorphism tq_inclusion(const QuadSpace& v, const QuadSpace& w) {
  QuadSpace sum = orthogonal_sum(v, w);
  return make_tq(inclusion_block(v, sum, 0), iso_identity(sum));
}

// [V_|_W ->id V_|_W <-incl V], the retraction onto the first block.
inline TqMorphism tq_retraction(const QuadSpace& v, const QuadSpace& w) {
  QuadSpace sum = orthogonal_sum(v, w);
  return make_tq(iso_identity(sum), inclusion_block(v, sum, 0));
}

inline TqMorphism tq_block_sum(const TqMorphism& s, const TqMorphism& t) {
  return make_tq(iso_block_sum(s.left, t.left), iso_block_sum(s.right, t.right));
}

namespace detail {

// Decomposition X = g(W) _|_ C for an isometry g: W -> X. Wpart reads the
// W-coordinates of x = g(w) + c, Cpart the C-coordinates; cbasis rows are
// the basis of C inside X.
struct ImageSplit {
  F2Matrix wpart;   // dim W x dim X
  F2Matrix cpart;   // dim C x dim X
  F2Matrix cbasis;  // dim C x dim X
  QuadSpace cspace;
};

inline ImageSplit split_along_image(const IsoMap& g) {
  const QuadSpace& x = g.target();
  Subspace comp = perp_subspace(x, g.matrix().transposed());
  F2Matrix a = hstack(g.matrix(), comp.basis.transposed());
  auto ainv = inverse(a);
  if (!ainv) throw std::logic_error("split_along_image: image meets its complement");
  return ImageSplit{take_rows(*ainv, 0, g.source().dim()),
                    take_rows(*ainv, g.source().dim(), comp.dim()), comp.basis,
                    induced_subspace_form(x, comp.basis)};
}

}  // namespace detail

// The forgetful functor on morphisms: decompose apex = g(W) _|_ g(W)^perp
// and return (projection onto g(W), read back through g) composed with f.
inline F2Matrix epsilon(const TqMorphism& t) {
  return detail::split_along_image(t.right).wpart * t.left.matrix();
}

// Composition via the pseudo push-out. For T1 = [V -> X1 <- W] and
// T2 = [W -> X2 <- Z], write X1 = g1(W) _|_ C; the composite has apex
// X2 _|_ C, left leg x = g1(w)+c |-> f2(w)+c after f1, and right leg Z
// included in the X2 block.
inline TqMorphism compose_tq(const TqMorphism& t1, const TqMorphism& t2) {
  if (!(t1.target() == t2.source())) throw std::invalid_argument("compose_tq: middle mismatch");
  auto split = detail::split_along_image(t1.right);
  QuadSpace apex = orthogonal_sum(t2.apex(), split.cspace);
  F2Matrix j1 = vstack(t2.left.matrix() * split.wpart, split.cpart);
  IsoMap glue(t1.apex(), apex, j1);  // construction validates the isometry
  IsoMap left(t1.source(), apex, glue.matrix() * t1.left.matrix());
  IsoMap right(t2.target(), apex,
               vstack(t2.right.matrix(), F2Matrix(split.cspace.dim(), t2.target().dim())));
  return TqMorphism{left, right};
}

// Pullback transport of an embedding h: D -> W through T = [W -> X <- Z]:
// if (left . h)(D) lies in the image of the right leg, the unique h' with
// right . h' = left . h; otherwise nothing.
inline std::optional<IsoMap> transport_embedding(const IsoMap& h, const TqMorphism& t) {
  if (!(h.target() == t.source()))
    throw std::invalid_argument("transport_embedding: domain mismatch");
  F2Matrix u = t.left.matrix() * h.matrix();
  auto sol = solve_many(t.right.matrix(), u);
  if (!sol) return std::nullopt;
  return IsoMap(h.source(), t.target(), *sol);
}

// A cospan with epsilon equal to an arbitrary linear map f: V -> W.
// Apex W _|_ H0^(3n) with n = dim V: per source basis vector e_i, one
// hyperbolic block repairs B-defects against later vectors, one repairs the
// q-defect, and one contributes a fresh a_i that forces injectivity.
inline TqMorphism lift_linear(const F2Matrix& f, const QuadSpace& v, const QuadSpace& w) {
  if (f.rows() != w.dim() || f.cols() != v.dim())
    throw std::invalid_argument("lift_linear: matrix shape mismatch");
  if (!is_nondegenerate(v) || !is_nondegenerate(w))
    throw std::invalid_argument("lift_linear: spaces must be nondegenerate");
  std::size_t n = v.dim();
  QuadSpace apex = orthogonal_sum(w, orthogonal_power(hyperbolic(false), 3 * n));
  auto block_a = [&](std::size_t k) { return w.dim() + 2 * k; };
  auto block_b = [&](std::size_t k) { return w.dim() + 2 * k + 1; };
  F2Matrix leftm(apex.dim(), n);
  for (std::size_t i = 0; i < n; ++i) {
    F2Vector ci(apex.dim());
    ci.set(block_a(i), true);  // B-repair block P_i
    for (std::size_t k = 0; k < i; ++k) {
      bool defect = v.gram().get(k, i) ^ w.b(f.col(k), f.col(i));
      if (defect) ci.set(block_b(k), true);
    }
    bool qdefect = v.q_diag().get(i) ^ w.q(f.col(i));
    if (qdefect) {  // q-repair block Q_i
      ci.set(block_a(n + i), true);
      ci.set(block_b(n + i), true);
    }
    ci.set(block_a(2 * n + i), true);  // injectivity block J_i
    F2Vector col = f.col(i);
    for (std::size_t r = 0; r < w.dim(); ++r)
      if (col.get(r)) ci.set(r, true);
    leftm.set_col(i, ci);
  }
  IsoMap left(v, apex, leftm);
  IsoMap right = inclusion_block(w, apex, 0);
  return make_tq(left, right);
}

// Same contract as lift_linear through the smaller apex W _|_ H0^n: block i
// carries the injectivity vector a_i, the q-repair term a_i + b_i collapses
// onto gamma_i b_i, and b-blocks of earlier indices absorb B-defects. Used
// where apex size is budgeted; lift_linear remains the reference shape.
inline TqMorphism compact_lift_linear(const F2Matrix& f, const QuadSpace& v,
                                      const QuadSpace& w) {
  if (f.rows() != w.dim() || f.cols() != v.dim())
    throw std::invalid_argument("compact_lift_linear: matrix shape mismatch");
  if (!is_nondegenerate(v) || !is_nondegenerate(w))
    throw std::invalid_argument("compact_lift_linear: spaces must be nondegenerate");
  std::size_t n = v.dim();
  QuadSpace apex = orthogonal_sum(w, orthogonal_power(hyperbolic(false), n));
  F2Matrix leftm(apex.dim(), n);
  for (std::size_t i = 0; i < n; ++i) {
    F2Vector ci(apex.dim());
    ci.set(w.dim() + 2 * i, true);  // a_i
    if (v.q_diag().get(i) ^ w.q(f.col(i))) ci.set(w.dim() + 2 * i + 1, true);
    for (std::size_t k = 0; k < i; ++k)
      if (v.gram().get(k, i) ^ w.b(f.col(k), f.col(i))) ci.set(w.dim() + 2 * k + 1, true);
    F2Vector col = f.col(i);
    for (std::size_t r = 0; r < w.dim(); ++r)
      if (col.get(r)) ci.set(r, true);
    leftm.set_col(i, ci);
  }
  return make_tq(IsoMap(v, apex, leftm), inclusion_block(w, apex, 0));
}

// One step of the generating relation: replace the representative by its
// image under an isometry of apexes.
inline TqMorphism apply_relation_move(const TqMorphism& t, const IsoMap& alpha) {
  if (!(alpha.source() == t.apex()))
    throw std::invalid_argument("apply_relation_move: alpha must start at the apex");
  if (!is_nondegenerate(alpha.target()))
    throw std::invalid_argument("apply_relation_move: target apex must be nondegenerate");
  return make_tq(iso_compose(alpha, t.left), iso_compose(alpha, t.right));
}

}  // namespace fquad
