#pragma once

// Quadratic spaces over F2 and their isometries: evaluation, radical, Arf
// invariant, classification into H0/H1 normal forms, exhaustive embedding
// and orthogonal-group enumeration, and Witt extension of partial
// isometries. Spaces may be degenerate; nondegeneracy is asserted only
// where an operation requires it.

#include <cctype>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "fquad/f2.hpp"
#include "json.hpp"

namespace fquad {

// A finite-dimensional F2 space with quadratic form q and associated
// bilinear form B, determined by q on basis vectors and B on basis pairs.
// B is alternating: gram is symmetric with zero diagonal, and
// q(u+v) = q(u) + q(v) + B(u,v) holds by construction.
class QuadSpace {
 public:
  QuadSpace() : q_diag_(0), gram_(0, 0), upper_(0, 0) {}

  QuadSpace(F2Vector q_diag, F2Matrix gram)
      : q_diag_(std::move(q_diag)), gram_(std::move(gram)) {
    std::size_t n = q_diag_.dim();
    if (gram_.rows() != n || gram_.cols() != n)
      throw std::invalid_argument("QuadSpace: gram shape mismatch");
    for (std::size_t i = 0; i < n; ++i) {
      if (gram_.get(i, i)) throw std::invalid_argument("QuadSpace: gram diagonal must be zero");
      for (std::size_t j = i + 1; j < n; ++j)
        if (gram_.get(i, j) != gram_.get(j, i))
          throw std::invalid_argument("QuadSpace: gram must be symmetric");
    }
    upper_ = F2Matrix(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j)
        if (gram_.get(i, j)) upper_.set(i, j, true);
  }

  std::size_t dim() const { return q_diag_.dim(); }
  const F2Vector& q_diag() const { return q_diag_; }
  const F2Matrix& gram() const { return gram_; }

  bool q(const F2Vector& v) const {
    if (v.dim() != dim()) throw std::invalid_argument("q: dimension mismatch");
    return v.dot(q_diag_) ^ v.dot(upper_.apply(v));
  }

  bool b(const F2Vector& u, const F2Vector& v) const {
    if (u.dim() != dim() || v.dim() != dim())
      throw std::invalid_argument("b: dimension mismatch");
    return u.dot(gram_.apply(v));
  }

  std::string key() const { return std::to_string(dim()) + "|" + q_diag_.str() + "|" + gram_.key(); }

  bool operator==(const QuadSpace& o) const {
    return q_diag_ == o.q_diag_ && gram_ == o.gram_;
  }

 private:
  F2Vector q_diag_;
  F2Matrix gram_;
  F2Matrix upper_;  // strict upper part of gram, for q evaluation
};

inline QuadSpace zero_space() { return QuadSpace(); }

// The two nondegenerate planes: q(a)=q(b)=arf, B(a,b)=1.
inline QuadSpace hyperbolic(bool arf) {
  F2Vector qd(2);
  if (arf) {
    qd.set(0, true);
    qd.set(1, true);
  }
  F2Matrix g(2, 2);
  g.set(0, 1, true);
  g.set(1, 0, true);
  return QuadSpace(qd, g);
}

// The degenerate line (x, alpha) with q(x) = alpha.
inline QuadSpace point_space(bool alpha) {
  F2Vector qd(1);
  qd.set(0, alpha);
  return QuadSpace(qd, F2Matrix(1, 1));
}

inline QuadSpace orthogonal_sum(const QuadSpace& s, const QuadSpace& t) {
  return QuadSpace(s.q_diag().concat(t.q_diag()), block_diag(s.gram(), t.gram()));
}

inline QuadSpace orthogonal_power(const QuadSpace& s, std::size_t copies) {
  QuadSpace out = zero_space();
  for (std::size_t i = 0; i < copies; ++i) out = orthogonal_sum(out, s);
  return out;
}

inline Subspace radical(const QuadSpace& s) { return kernel_basis(s.gram()); }

inline bool is_nondegenerate(const QuadSpace& s) { return radical(s).dim() == 0; }

// Vectors B-orthogonal to every row of `rows`.
inline Subspace perp_subspace(const QuadSpace& s, const F2Matrix& rows) {
  if (rows.cols() != s.dim()) throw std::invalid_argument("perp_subspace: dimension mismatch");
  return kernel_basis(rows * s.gram());
}

inline Subspace perp_subspace(const QuadSpace& s, const F2Vector& v) {
  return perp_subspace(s, F2Matrix::from_rows({v}, s.dim()));
}

// The form a subset basis inherits from its ambient space.
inline QuadSpace induced_subspace_form(const QuadSpace& s, const F2Matrix& basis_rows) {
  if (basis_rows.cols() != s.dim())
    throw std::invalid_argument("induced_subspace_form: dimension mismatch");
  std::size_t k = basis_rows.rows();
  F2Vector qd(k);
  F2Matrix g(k, k);
  for (std::size_t i = 0; i < k; ++i) {
    qd.set(i, s.q(basis_rows.row(i)));
    for (std::size_t j = i + 1; j < k; ++j) {
      bool v = s.b(basis_rows.row(i), basis_rows.row(j));
      g.set(i, j, v);
      g.set(j, i, v);
    }
  }
  return QuadSpace(qd, g);
}

// An injective linear map between quadratic spaces that preserves q (and
// therefore B). Column j of the matrix is the image of e_j. Construction
// verifies injectivity plus q on basis vectors and B on basis pairs, which
// together force q-preservation on every vector.
class IsoMap {
 public:
  IsoMap(QuadSpace source, QuadSpace target, F2Matrix matrix)
      : source_(std::move(source)), target_(std::move(target)), matrix_(std::move(matrix)) {
    if (matrix_.rows() != target_.dim() || matrix_.cols() != source_.dim())
      throw std::invalid_argument("IsoMap: matrix shape mismatch");
    if (rank(matrix_) != source_.dim()) throw std::invalid_argument("IsoMap: not injective");
    for (std::size_t j = 0; j < source_.dim(); ++j) {
      F2Vector cj = matrix_.col(j);
      if (target_.q(cj) != source_.q_diag().get(j))
        throw std::invalid_argument("IsoMap: q not preserved");
      for (std::size_t i = 0; i < j; ++i)
        if (target_.b(matrix_.col(i), cj) != source_.gram().get(i, j))
          throw std::invalid_argument("IsoMap: B not preserved");
    }
  }

  const QuadSpace& source() const { return source_; }
  const QuadSpace& target() const { return target_; }
  const F2Matrix& matrix() const { return matrix_; }

  F2Vector apply(const F2Vector& v) const { return matrix_.apply(v); }

  bool operator==(const IsoMap& o) const {
    return source_ == o.source_ && target_ == o.target_ && matrix_ == o.matrix_;
  }

 private:
  QuadSpace source_, target_;
  F2Matrix matrix_;
};

inline IsoMap iso_identity(const QuadSpace& v) {
  return IsoMap(v, v, F2Matrix::identity(v.dim()));
}

inline IsoMap iso_compose(const IsoMap& outer, const IsoMap& inner) {
  if (!(inner.target() == outer.source()))
    throw std::invalid_argument("iso_compose: middle space mismatch");
  return IsoMap(inner.source(), outer.target(), outer.matrix() * inner.matrix());
}

inline IsoMap iso_block_sum(const IsoMap& f, const IsoMap& g) {
  return IsoMap(orthogonal_sum(f.source(), g.source()),
                orthogonal_sum(f.target(), g.target()),
                block_diag(f.matrix(), g.matrix()));
}

// part sits in `whole` starting at coordinate `offset`.
inline IsoMap inclusion_block(const QuadSpace& part, const QuadSpace& whole, std::size_t offset) {
  F2Matrix m(whole.dim(), part.dim());
  for (std::size_t j = 0; j < part.dim(); ++j) m.set(offset + j, j, true);
  return IsoMap(part, whole, m);
}

// Hyperbolic pairs (a_i, b_i): B(a_i, b_i) = 1, all other pairings zero.
inline std::vector<std::pair<F2Vector, F2Vector>> symplectic_basis(const QuadSpace& s) {
  if (!is_nondegenerate(s)) throw std::invalid_argument("symplectic_basis: degenerate space");
  std::vector<std::pair<F2Vector, F2Vector>> pairs;
  F2Matrix rem = F2Matrix::identity(s.dim());
  while (rem.rows() > 0) {
    F2Vector a = rem.row(0);
    std::size_t j = 1;
    while (j < rem.rows() && !s.b(a, rem.row(j))) ++j;
    if (j == rem.rows()) throw std::logic_error("symplectic_basis: no hyperbolic partner");
    F2Vector bv = rem.row(j);
    pairs.emplace_back(a, bv);
    // orthogonal complement of (a, bv) inside span(rem), in coefficient space
    std::size_t r = rem.rows();
    F2Matrix constraints(2, r);
    for (std::size_t i = 0; i < r; ++i) {
      constraints.set(0, i, s.b(rem.row(i), a));
      constraints.set(1, i, s.b(rem.row(i), bv));
    }
    Subspace coeffs = kernel_basis(constraints);
    std::vector<F2Vector> next;
    for (std::size_t i = 0; i < coeffs.dim(); ++i) {
      F2Vector c = coeffs.basis.row(i);
      F2Vector x(s.dim());
      for (std::size_t t = 0; t < r; ++t)
        if (c.get(t)) x ^= rem.row(t);
      next.push_back(x);
    }
    rem = span_basis(next, s.dim()).basis;
  }
  return pairs;
}

// Sum of q(a_i) q(b_i) over a symplectic basis; basis-independent.
inline bool arf_invariant(const QuadSpace& s) {
  if (!is_nondegenerate(s)) throw std::invalid_argument("arf_invariant: degenerate space");
  bool arf = false;
  for (const auto& [a, b] : symplectic_basis(s)) arf ^= s.q(a) && s.q(b);
  return arf;
}

// Normal form: m copies of H0 followed by arf copies of H1, with an
// explicit isometry onto it.
struct NormalForm {
  std::size_t h0_copies;
  bool arf;
  QuadSpace space;
  IsoMap iso;
};

inline NormalForm classify(const QuadSpace& s) {
  if (!is_nondegenerate(s)) throw std::invalid_argument("classify: degenerate space");
  auto pairs = symplectic_basis(s);
  // normalize each pair to q-type (0,0) or (1,1)
  for (auto& [a, b] : pairs) {
    if (s.q(a) && !s.q(b)) std::swap(a, b);
    if (!s.q(a) && s.q(b)) b ^= a;  // q(a+b) = q(a)+q(b)+1
  }
  // two (1,1) pairs merge into two (0,0) pairs
  std::vector<std::size_t> odd;
  for (std::size_t i = 0; i < pairs.size(); ++i)
    if (s.q(pairs[i].first)) odd.push_back(i);
  while (odd.size() >= 2) {
    auto& [a1, b1] = pairs[odd[odd.size() - 2]];
    auto& [a2, b2] = pairs[odd[odd.size() - 1]];
    F2Vector na1 = a1 ^ a2 ^ b2, nb1 = b1 ^ a2 ^ b2;
    F2Vector na2 = a1 ^ b1 ^ a2, nb2 = a1 ^ b1 ^ b2;
    a1 = na1;
    b1 = nb1;
    a2 = na2;
    b2 = nb2;
    odd.pop_back();
    odd.pop_back();
  }
  std::stable_sort(pairs.begin(), pairs.end(), [&](const auto& p, const auto& q) {
    return !s.q(p.first) && s.q(q.first);
  });
  bool eps = !pairs.empty() && s.q(pairs.back().first);
  std::size_t m = pairs.size() - (eps ? 1 : 0);
  QuadSpace normal = orthogonal_sum(orthogonal_power(hyperbolic(false), m),
                                    orthogonal_power(hyperbolic(true), eps ? 1 : 0));
  F2Matrix u(s.dim(), s.dim());
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    u.set_col(2 * i, pairs[i].first);
    u.set_col(2 * i + 1, pairs[i].second);
  }
  auto uinv = inverse(u);
  if (!uinv) throw std::logic_error("classify: degenerate basis");
  return NormalForm{m, eps, normal, IsoMap(s, normal, *uinv)};
}

namespace detail {

// Extends the partial isometry pre[i] |-> img[i] (pre in src, img in tgt)
// to a total isometry src -> tgt by backtracking. Candidate images are
// tried in increasing bit-pattern order, or shuffled when rng is given.
inline bool extend_isometry_rec(const QuadSpace& src, const QuadSpace& tgt,
                                std::vector<F2Vector>& pre, std::vector<F2Vector>& img,
                                const std::vector<bool>& q_tgt_table, std::mt19937_64* rng,
                                F2Matrix* out) {
  Subspace pre_span = span_basis(pre, src.dim());
  if (pre_span.dim() == src.dim()) {
    F2Matrix pcols(src.dim(), pre.size()), icols(tgt.dim(), img.size());
    for (std::size_t t = 0; t < pre.size(); ++t) {
      pcols.set_col(t, pre[t]);
      icols.set_col(t, img[t]);
    }
    // g with g(pre_t) = img_t; pre spans, so solve g . pcols = icols
    auto sol = solve_many(pcols.transposed(), icols.transposed());
    if (!sol) return false;
    *out = sol->transposed();
    return true;
  }
  F2Vector v(src.dim());
  for (std::size_t t = 0; t < src.dim(); ++t) {
    F2Vector e(src.dim());
    e.set(t, true);
    if (!pre_span.contains(e)) {
      v = e;
      break;
    }
  }
  Subspace img_span = span_basis(img, tgt.dim());
  std::vector<std::uint64_t> order(std::size_t{1} << tgt.dim());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  if (rng) {
    // Fisher-Yates with raw engine output; std::shuffle is not
    // reproducible across standard library implementations.
    for (std::size_t i = order.size(); i > 1; --i)
      std::swap(order[i - 1], order[(*rng)() % i]);
  }
  for (std::uint64_t widx : order) {
    F2Vector w = F2Vector::from_index(tgt.dim(), widx);
    if (q_tgt_table[widx] != src.q(v)) continue;
    if (img_span.contains(w)) continue;
    bool ok = true;
    for (std::size_t t = 0; t < pre.size() && ok; ++t)
      if (tgt.b(w, img[t]) != src.b(v, pre[t])) ok = false;
    if (!ok) continue;
    pre.push_back(v);
    img.push_back(w);
    if (extend_isometry_rec(src, tgt, pre, img, q_tgt_table, rng, out)) return true;
    pre.pop_back();
    img.pop_back();
  }
  return false;
}

inline std::vector<bool> q_table(const QuadSpace& s) {
  if (s.dim() > 20) throw std::invalid_argument("q_table: space too large");
  std::vector<bool> t(std::size_t{1} << s.dim());
  for (std::size_t i = 0; i < t.size(); ++i) t[i] = s.q(F2Vector::from_index(s.dim(), i));
  return t;
}

inline std::optional<F2Matrix> extend_isometry(const QuadSpace& src, const QuadSpace& tgt,
                                               std::vector<F2Vector> pre,
                                               std::vector<F2Vector> img,
                                               std::mt19937_64* rng = nullptr) {
  auto table = q_table(tgt);
  F2Matrix out;
  if (extend_isometry_rec(src, tgt, pre, img, table, rng, &out)) return out;
  return std::nullopt;
}

}  // namespace detail

// All injective q-preserving linear maps D -> W, ordered lexicographically
// on row-major matrix bits.
inline std::vector<IsoMap> enumerate_embeddings(const QuadSpace& d, const QuadSpace& w) {
  if (w.dim() > 16) throw std::invalid_argument("enumerate_embeddings: target too large");
  auto table = detail::q_table(w);
  std::vector<F2Matrix> found;
  std::vector<F2Vector> cols;
  std::uint64_t wsize = std::uint64_t{1} << w.dim();

  std::function<void()> rec = [&]() {
    std::size_t j = cols.size();
    if (j == d.dim()) {
      F2Matrix m(w.dim(), d.dim());
      for (std::size_t t = 0; t < cols.size(); ++t) m.set_col(t, cols[t]);
      found.push_back(m);
      return;
    }
    Subspace sp = span_basis(cols, w.dim());
    for (std::uint64_t widx = 0; widx < wsize; ++widx) {
      if (table[widx] != d.q_diag().get(j)) continue;
      F2Vector cand = F2Vector::from_index(w.dim(), widx);
      if (sp.contains(cand)) continue;
      bool ok = true;
      for (std::size_t i = 0; i < j && ok; ++i)
        if (w.b(cols[i], cand) != d.gram().get(i, j)) ok = false;
      if (!ok) continue;
      cols.push_back(cand);
      rec();
      cols.pop_back();
    }
  };
  rec();
  std::sort(found.begin(), found.end(), F2Matrix::bits_less);
  std::vector<IsoMap> out;
  out.reserve(found.size());
  for (auto& m : found) out.emplace_back(d, w, std::move(m));
  return out;
}

// All isometries V -> V. Enumeration guard: dim V <= 6.
inline std::vector<IsoMap> orthogonal_group(const QuadSpace& v) {
  if (v.dim() > 6) throw std::invalid_argument("orthogonal_group: dimension guard exceeded");
  return enumerate_embeddings(v, v);
}

// Witt extension: dom_rows and img_rows span subspaces D, D' of V, and
// dom_rows[i] |-> img_rows[i] is an isometry D -> D'. Returns g in O(V)
// with g restricted to D equal to that isometry. Existence is guaranteed
// for nondegenerate V; a failed search is an internal defect.
inline IsoMap witt_extend(const QuadSpace& v, const F2Matrix& dom_rows,
                          const F2Matrix& img_rows) {
  if (!is_nondegenerate(v)) throw std::invalid_argument("witt_extend: V must be nondegenerate");
  if (dom_rows.cols() != v.dim() || img_rows.cols() != v.dim() ||
      dom_rows.rows() != img_rows.rows())
    throw std::invalid_argument("witt_extend: shape mismatch");
  std::size_t k = dom_rows.rows();
  if (rank(dom_rows) != k || rank(img_rows) != k)
    throw std::invalid_argument("witt_extend: rows must be independent");
  for (std::size_t i = 0; i < k; ++i) {
    if (v.q(dom_rows.row(i)) != v.q(img_rows.row(i)))
      throw std::invalid_argument("witt_extend: map does not preserve q");
    for (std::size_t j = i + 1; j < k; ++j)
      if (v.b(dom_rows.row(i), dom_rows.row(j)) != v.b(img_rows.row(i), img_rows.row(j)))
        throw std::invalid_argument("witt_extend: map does not preserve B");
  }
  std::vector<F2Vector> pre, img;
  for (std::size_t i = 0; i < k; ++i) {
    pre.push_back(dom_rows.row(i));
    img.push_back(img_rows.row(i));
  }
  auto g = detail::extend_isometry(v, v, std::move(pre), std::move(img));
  if (!g) throw std::logic_error("witt_extend: no extension found");
  return IsoMap(v, v, *g);
}

// ---- space expression grammar and JSON format ----------------------------

// {"dim": n, "q_diag": [bits...], "gram": [[bits...]...]}
inline nlohmann::ordered_json space_to_json(const QuadSpace& s) {
  nlohmann::ordered_json j;
  j["dim"] = s.dim();
  std::vector<int> qd;
  for (std::size_t i = 0; i < s.dim(); ++i) qd.push_back(s.q_diag().get(i) ? 1 : 0);
  j["q_diag"] = qd;
  std::vector<std::vector<int>> g;
  for (std::size_t r = 0; r < s.dim(); ++r) {
    std::vector<int> row;
    for (std::size_t c = 0; c < s.dim(); ++c) row.push_back(s.gram().get(r, c) ? 1 : 0);
    g.push_back(row);
  }
  j["gram"] = g;
  return j;
}

inline QuadSpace space_from_json(const nlohmann::json& j) {
  std::size_t n = j.at("dim").get<std::size_t>();
  auto qd = j.at("q_diag").get<std::vector<int>>();
  auto g = j.at("gram").get<std::vector<std::vector<int>>>();
  if (qd.size() != n || g.size() != n)
    throw std::invalid_argument("space_from_json: shape mismatch");
  F2Vector q(n);
  for (std::size_t i = 0; i < n; ++i) q.set(i, qd[i] != 0);
  F2Matrix gram(n, n);
  for (std::size_t r = 0; r < n; ++r) {
    if (g[r].size() != n) throw std::invalid_argument("space_from_json: ragged gram");
    for (std::size_t c = 0; c < n; ++c) gram.set(r, c, g[r][c] != 0);
  }
  return QuadSpace(q, gram);
}

// Accepts "H0", "H1", "x0", "x1" and "0" joined by '+' (orthogonal sum),
// or an inline JSON object in the format above.
inline QuadSpace parse_space(const std::string& expr) {
  std::string s;
  for (char c : expr)
    if (!std::isspace(static_cast<unsigned char>(c))) s += c;
  if (!s.empty() && s[0] == '{') {
    try {
      return space_from_json(nlohmann::json::parse(expr));
    } catch (const nlohmann::json::exception& e) {
      throw std::invalid_argument(std::string("space JSON: ") + e.what());
    }
  }
  QuadSpace out = zero_space();
  std::size_t pos = 0;
  while (pos <= s.size()) {
    std::size_t next = s.find('+', pos);
    std::string tok = s.substr(pos, next == std::string::npos ? std::string::npos : next - pos);
    if (tok == "H0")
      out = orthogonal_sum(out, hyperbolic(false));
    else if (tok == "H1")
      out = orthogonal_sum(out, hyperbolic(true));
    else if (tok == "x0")
      out = orthogonal_sum(out, point_space(false));
    else if (tok == "x1")
      out = orthogonal_sum(out, point_space(true));
    else if (tok == "0")
      ;  // zero space contributes nothing
    else
      throw std::invalid_argument("unknown space token '" + tok + "' at position " +
                                  std::to_string(pos));
    if (next == std::string::npos) break;
    pos = next + 1;
  }
  return out;
}

}  // namespace fquad
