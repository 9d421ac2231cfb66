#pragma once

// Seeded generation of isometries, linear maps and cospans. All draws come
// from a single mt19937_64 stream so equal seeds give identical samples on
// every platform.

#include <random>
#include <stdexcept>
#include <vector>

#include "fquad/category.hpp"
#include "fquad/quadspace.hpp"

namespace fquad {

class Sampler {
 public:
  explicit Sampler(std::uint64_t seed) : rng_(seed) {}

  std::uint64_t u64() { return rng_(); }
  bool bit() { return rng_() & 1u; }

  std::size_t index(std::size_t bound) {
    if (bound == 0) throw std::invalid_argument("Sampler::index: empty range");
    return static_cast<std::size_t>(rng_() % bound);
  }

  std::mt19937_64& engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
};

inline F2Matrix random_matrix(std::size_t rows, std::size_t cols, Sampler& s) {
  F2Matrix m(rows, cols);
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c) m.set(r, c, s.bit());
  return m;
}

// A uniform-ish isometry src -> tgt found by randomized backtracking.
// Throws if no isometry exists at all.
inline IsoMap random_isometry(const QuadSpace& src, const QuadSpace& tgt, Sampler& s) {
  auto m = detail::extend_isometry(src, tgt, {}, {}, &s.engine());
  if (!m) throw std::invalid_argument("random_isometry: no isometry exists");
  return IsoMap(src, tgt, *m);
}

inline IsoMap random_orthogonal(const QuadSpace& v, Sampler& s) {
  return random_isometry(v, v, s);
}

// A cospan V -> W whose apex is V _|_ W _|_ H0^extra, with independently
// randomized legs.
inline TqMorphism random_cospan(const QuadSpace& v, const QuadSpace& w, Sampler& s,
                                std::size_t extra_h0 = 1) {
  QuadSpace apex = orthogonal_sum(orthogonal_sum(v, w),
                                  orthogonal_power(hyperbolic(false), extra_h0));
  return make_tq(random_isometry(v, apex, s), random_isometry(w, apex, s));
}

// The morphism shapes the naturality and well-definedness suites run over:
// identities, isometry cospans, block inclusions and their retractions,
// epsilon-lifts of seeded linear maps, and relation moves of those.
inline std::vector<TqMorphism> generating_morphisms(const QuadSpace& v, const QuadSpace& w,
                                                    Sampler& s, std::size_t lift_samples = 3) {
  std::vector<TqMorphism> out;
  if (v == w) {
    out.push_back(tq_identity(v));
    if (v.dim() > 0) {
      out.push_back(tq_from_isometry(random_orthogonal(v, s)));
      out.push_back(tq_from_isometry(random_orthogonal(v, s)));
    }
    // relation moves of the identity: enlarge the apex, twist the apex
    QuadSpace bigger = orthogonal_sum(v, hyperbolic(false));
    TqMorphism inc_moved = apply_relation_move(tq_identity(v), inclusion_block(v, bigger, 0));
    out.push_back(inc_moved);
    out.push_back(apply_relation_move(inc_moved, random_orthogonal(bigger, s)));
  }
  if (w == orthogonal_sum(v, hyperbolic(false))) out.push_back(tq_inclusion(v, hyperbolic(false)));
  if (v == orthogonal_sum(w, hyperbolic(false))) out.push_back(tq_retraction(w, hyperbolic(false)));
  for (std::size_t i = 0; i < lift_samples; ++i)
    out.push_back(lift_linear(random_matrix(w.dim(), v.dim(), s), v, w));
  return out;
}

}  // namespace fquad
