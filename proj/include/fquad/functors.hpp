#pragma once

// Functor evaluation: each functor yields a labeled ordered basis on
// objects and a matrix on cospan morphisms. The concrete families are the
// isotropic functors iso_D, the linearization P_F and exterior powers
// pulled back along epsilon, tensor products, the mixed functors and their
// symmetrization m, the polynomial filtrations k_d, and the kernels K^n,
// L^n inside Lambda^n (x) iso. Natural maps between these families are
// provided as per-object component matrices.
//
// Values are memoized per (functor, space); caches are mutex-guarded so
// concurrent evaluation behaves as if computed once.

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "fquad/category.hpp"
#include "fquad/quadspace.hpp"

namespace fquad {

// A labeled ordered basis of F(W).
struct FunctorValue {
  std::size_t dim = 0;
  std::vector<std::string> labels;
};

class Functor {
 public:
  virtual ~Functor() = default;

  const std::string& name() const { return name_; }

  FunctorValue value(const QuadSpace& w) const {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = cache_.find(w.key());
    if (it != cache_.end()) return it->second;
    FunctorValue v = compute_value(w);
    if (v.labels.size() != v.dim) throw std::logic_error(name_ + ": label count mismatch");
    cache_.emplace(w.key(), v);
    return v;
  }

  F2Matrix matrix(const TqMorphism& t) const {
    F2Matrix m = compute_matrix(t);
    if (m.rows() != value(t.target()).dim || m.cols() != value(t.source()).dim)
      throw std::logic_error(name_ + ": morphism matrix shape mismatch");
    return m;
  }

 protected:
  explicit Functor(std::string name) : name_(std::move(name)) {}

  virtual FunctorValue compute_value(const QuadSpace& w) const = 0;
  virtual F2Matrix compute_matrix(const TqMorphism& t) const = 0;

 private:
  std::string name_;
  mutable std::mutex mu_;
  mutable std::map<std::string, FunctorValue> cache_;
};

using FunctorPtr = std::shared_ptr<const Functor>;

// F(T) bundled with the bases it maps between.
struct FunctorMap {
  FunctorValue source;
  FunctorValue target;
  F2Matrix matrix;
};

inline FunctorMap apply_functor(const FunctorPtr& f, const TqMorphism& t) {
  return FunctorMap{f->value(t.source()), f->value(t.target()), f->matrix(t)};
}

// ---- isotropic functors ---------------------------------------------------

// kappa(iso_D): basis indexed by the isometric embeddings D -> W; a cospan
// acts by pullback transport of the embedding, or by zero.
class IsoFunctor : public Functor {
 public:
  IsoFunctor(QuadSpace d, std::string name) : Functor(std::move(name)), d_(std::move(d)) {}

  const QuadSpace& domain() const { return d_; }

  const std::vector<IsoMap>& embeddings(const QuadSpace& w) const {
    std::lock_guard<std::mutex> lock(emu_);
    auto it = embs_.find(w.key());
    if (it != embs_.end()) return it->second;
    auto [pos, ignore] = embs_.emplace(w.key(), enumerate_embeddings(d_, w));
    auto& idx = index_[w.key()];
    for (std::size_t i = 0; i < pos->second.size(); ++i)
      idx.emplace(pos->second[i].matrix().key(), i);
    return pos->second;
  }

  // Position of an embedding in the basis order, or npos.
  std::size_t embedding_index(const QuadSpace& w, const F2Matrix& h) const {
    embeddings(w);
    std::lock_guard<std::mutex> lock(emu_);
    const auto& idx = index_.at(w.key());
    auto it = idx.find(h.key());
    return it == idx.end() ? npos : it->second;
  }

  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

 protected:
  FunctorValue compute_value(const QuadSpace& w) const override {
    const auto& embs = embeddings(w);
    FunctorValue v;
    v.dim = embs.size();
    for (const auto& h : embs) v.labels.push_back("h:" + h.matrix().key());
    return v;
  }

  F2Matrix compute_matrix(const TqMorphism& t) const override {
    const auto& src = embeddings(t.source());
    F2Matrix out(value(t.target()).dim, src.size());
    for (std::size_t j = 0; j < src.size(); ++j) {
      auto moved = transport_embedding(src[j], t);
      if (!moved) continue;
      std::size_t i = embedding_index(t.target(), moved->matrix());
      if (i == npos) throw std::logic_error("iso: transported embedding missing from basis");
      out.set(i, j, true);
    }
    return out;
  }

 private:
  QuadSpace d_;
  mutable std::mutex emu_;
  mutable std::map<std::string, std::vector<IsoMap>> embs_;
  mutable std::map<std::string, std::map<std::string, std::size_t>> index_;
};

// ---- functors pulled back along epsilon -----------------------------------

// iota(P^F_V): basis = all linear maps V -> W (for dim V = 1, the vectors
// of W ordered by bit pattern); morphisms act through epsilon.
class PFFunctor : public Functor {
 public:
  explicit PFFunctor(std::size_t vdim, std::string name)
      : Functor(std::move(name)), vdim_(vdim) {}

  std::size_t vdim() const { return vdim_; }

  // All linear maps V -> W in basis order.
  std::vector<F2Matrix> maps(const QuadSpace& w) const {
    std::size_t bits = vdim_ * w.dim();
    if (bits > 24) throw std::invalid_argument("pf: value too large to enumerate");
    std::vector<F2Matrix> out;
    out.reserve(std::size_t{1} << bits);
    for (std::uint64_t code = 0; code < (std::uint64_t{1} << bits); ++code)
      out.push_back(decode(w.dim(), code));
    return out;
  }

  std::uint64_t encode(const F2Matrix& f) const {
    std::uint64_t code = 0;
    for (std::size_t j = 0; j < vdim_; ++j)
      code |= f.col(j).to_index() << (j * f.rows());
    return code;
  }

  F2Matrix decode(std::size_t wdim, std::uint64_t code) const {
    F2Matrix f(wdim, vdim_);
    for (std::size_t j = 0; j < vdim_; ++j)
      f.set_col(j, F2Vector::from_index(wdim, (code >> (j * wdim)) & ((std::uint64_t{1} << wdim) - 1)));
    return f;
  }

 protected:
  FunctorValue compute_value(const QuadSpace& w) const override {
    std::size_t bits = vdim_ * w.dim();
    if (bits > 24) throw std::invalid_argument("pf: value too large to enumerate");
    FunctorValue v;
    v.dim = std::size_t{1} << bits;
    for (std::uint64_t code = 0; code < v.dim; ++code) {
      if (vdim_ == 1)
        v.labels.push_back("v:" + F2Vector::from_index(w.dim(), code).str());
      else
        v.labels.push_back("f:" + decode(w.dim(), code).key());
    }
    return v;
  }

  F2Matrix compute_matrix(const TqMorphism& t) const override {
    F2Matrix eps = epsilon(t);
    std::size_t sdim = value(t.source()).dim;
    F2Matrix out(value(t.target()).dim, sdim);
    for (std::uint64_t code = 0; code < sdim; ++code) {
      F2Matrix f = decode(t.source().dim(), code);
      out.set(encode(eps * f), code, true);
    }
    return out;
  }

 private:
  std::size_t vdim_;
};

// iota(Lambda^n): basis = n-subsets of coordinates in lexicographic order;
// a morphism acts by the exterior power of epsilon.
class LambdaFunctor : public Functor {
 public:
  LambdaFunctor(std::size_t n, std::string name) : Functor(std::move(name)), n_(n) {}

  std::size_t degree() const { return n_; }

 protected:
  FunctorValue compute_value(const QuadSpace& w) const override {
    FunctorValue v;
    auto subs = k_subsets(w.dim(), n_);
    v.dim = subs.size();
    for (const auto& s : subs) {
      std::string l = "w:{";
      for (std::size_t i = 0; i < s.size(); ++i) {
        if (i) l += ",";
        l += std::to_string(s[i]);
      }
      v.labels.push_back(l + "}");
    }
    return v;
  }

  F2Matrix compute_matrix(const TqMorphism& t) const override {
    F2Matrix eps = epsilon(t);
    std::size_t nt = t.target().dim();
    auto src_subs = k_subsets(t.source().dim(), n_);
    F2Matrix out(value(t.target()).dim, src_subs.size());
    for (std::size_t j = 0; j < src_subs.size(); ++j) {
      std::vector<F2Vector> imgs;
      for (std::size_t s : src_subs[j]) imgs.push_back(eps.col(s));
      out.set_col(j, wedge_coordinates(imgs, nt));
    }
    return out;
  }

 private:
  std::size_t n_;
};

// Tensor product: basis = pairs in row-major order (left factor major),
// morphisms by Kronecker product.
class TensorFunctor : public Functor {
 public:
  TensorFunctor(FunctorPtr f, FunctorPtr g, std::string name)
      : Functor(std::move(name)), f_(std::move(f)), g_(std::move(g)) {}

  const FunctorPtr& left() const { return f_; }
  const FunctorPtr& right() const { return g_; }

 protected:
  FunctorValue compute_value(const QuadSpace& w) const override {
    FunctorValue a = f_->value(w), b = g_->value(w);
    FunctorValue v;
    v.dim = a.dim * b.dim;
    v.labels.reserve(v.dim);
    for (const auto& la : a.labels)
      for (const auto& lb : b.labels) v.labels.push_back(la + "(x)" + lb);
    return v;
  }

  F2Matrix compute_matrix(const TqMorphism& t) const override {
    return f_->matrix(t).kron(g_->matrix(t));
  }

 private:
  FunctorPtr f_, g_;
};

// ---- mixed functors -------------------------------------------------------

// Mix_{V,D,eta} inside iota(P^F_V) (x) kappa(iso_D): pairs (f, h) with
// B_W(f(v_i), h(d_j)) = eta(v_i (x) d_j). The action sends (f, h) to
// (epsilon(T) f, h') when h transports, and to zero otherwise.
class MixGeneralFunctor : public Functor {
 public:
  MixGeneralFunctor(std::size_t vdim, QuadSpace d, F2Vector eta, std::string name)
      : Functor(std::move(name)), vdim_(vdim), d_(std::move(d)), eta_(std::move(eta)) {
    if (eta_.dim() != vdim_ * d_.dim())
      throw std::invalid_argument("mix: eta must index (V (x) D)*");
  }

  struct Generator {
    F2Matrix f;
    IsoMap h;
  };

  const std::vector<Generator>& generators(const QuadSpace& w) const {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = gens_.find(w.key());
    if (it != gens_.end()) return it->second;
    std::vector<Generator> gens;
    auto hs = enumerate_embeddings(d_, w);
    std::size_t bits = vdim_ * w.dim();
    if (bits > 24) throw std::invalid_argument("mix: value too large to enumerate");
    for (std::uint64_t code = 0; code < (std::uint64_t{1} << bits); ++code) {
      F2Matrix f(w.dim(), vdim_);
      for (std::size_t j = 0; j < vdim_; ++j)
        f.set_col(j, F2Vector::from_index(
                         w.dim(), (code >> (j * w.dim())) & ((std::uint64_t{1} << w.dim()) - 1)));
      for (const auto& h : hs) {
        bool ok = true;
        for (std::size_t i = 0; i < vdim_ && ok; ++i)
          for (std::size_t j = 0; j < d_.dim() && ok; ++j)
            if (w.b(f.col(i), h.matrix().col(j)) != eta_.get(i * d_.dim() + j)) ok = false;
        if (ok) gens.push_back(Generator{f, h});
      }
    }
    auto [pos, ignore] = gens_.emplace(w.key(), std::move(gens));
    auto& idx = index_[w.key()];
    for (std::size_t i = 0; i < pos->second.size(); ++i)
      idx.emplace(pos->second[i].f.key() + "|" + pos->second[i].h.matrix().key(), i);
    return pos->second;
  }

 protected:
  FunctorValue compute_value(const QuadSpace& w) const override {
    FunctorValue v;
    const auto& gens = generators(w);
    v.dim = gens.size();
    for (const auto& g : gens)
      v.labels.push_back("f:" + g.f.key() + "|h:" + g.h.matrix().key());
    return v;
  }

  F2Matrix compute_matrix(const TqMorphism& t) const override {
    const auto& src = generators(t.source());
    generators(t.target());
    F2Matrix eps = epsilon(t);
    F2Matrix out(value(t.target()).dim, src.size());
    std::lock_guard<std::mutex> lock(mu_);
    const auto& idx = index_.at(t.target().key());
    for (std::size_t j = 0; j < src.size(); ++j) {
      auto moved = transport_embedding(src[j].h, t);
      if (!moved) continue;
      F2Matrix fprime = eps * src[j].f;
      auto it = idx.find(fprime.key() + "|" + moved->matrix().key());
      if (it == idx.end()) throw std::logic_error("mix: image generator missing");
      out.set(it->second, j, true);
    }
    return out;
  }

 private:
  std::size_t vdim_;
  QuadSpace d_;
  F2Vector eta_;
  mutable std::mutex mu_;
  mutable std::map<std::string, std::vector<Generator>> gens_;
  mutable std::map<std::string, std::map<std::string, std::size_t>> index_;
};

// Mix_{alpha,beta} in the pair coordinates: ordered pairs (w1, w2) with
// w1 != w2, q(w1+w2) = alpha and B(w1, w2) = beta, ordered lexicographically
// by bit pattern. The action applies epsilon to both entries when w1+w2
// transports through the cospan.
class MixAbFunctor : public Functor {
 public:
  MixAbFunctor(bool alpha, bool beta, std::string name)
      : Functor(std::move(name)), alpha_(alpha), beta_(beta) {}

  bool alpha() const { return alpha_; }
  bool beta() const { return beta_; }

  const std::vector<std::pair<F2Vector, F2Vector>>& pairs(const QuadSpace& w) const {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = pairs_.find(w.key());
    if (it != pairs_.end()) return it->second;
    if (w.dim() > 16) throw std::invalid_argument("mix: space too large to enumerate");
    std::vector<std::pair<F2Vector, F2Vector>> ps;
    std::uint64_t n = std::uint64_t{1} << w.dim();
    for (std::uint64_t a = 0; a < n; ++a)
      for (std::uint64_t b = 0; b < n; ++b) {
        if (a == b) continue;
        F2Vector w1 = F2Vector::from_index(w.dim(), a), w2 = F2Vector::from_index(w.dim(), b);
        if (w.q(w1 ^ w2) != alpha_ || w.b(w1, w2) != beta_) continue;
        ps.emplace_back(w1, w2);
      }
    auto [pos, ignore] = pairs_.emplace(w.key(), std::move(ps));
    auto& idx = index_[w.key()];
    for (std::size_t i = 0; i < pos->second.size(); ++i)
      idx.emplace(std::make_pair(pos->second[i].first.to_index(), pos->second[i].second.to_index()),
                  i);
    return pos->second;
  }

  std::size_t pair_index(const QuadSpace& w, const F2Vector& w1, const F2Vector& w2) const {
    pairs(w);
    std::lock_guard<std::mutex> lock(mu_);
    const auto& idx = index_.at(w.key());
    auto it = idx.find(std::make_pair(w1.to_index(), w2.to_index()));
    return it == idx.end() ? IsoFunctor::npos : it->second;
  }

  // The swap involution tau [(w1,w2)] = [(w2,w1)].
  F2Matrix tau(const QuadSpace& w) const {
    const auto& ps = pairs(w);
    F2Matrix out(ps.size(), ps.size());
    for (std::size_t j = 0; j < ps.size(); ++j) {
      std::size_t i = pair_index(w, ps[j].second, ps[j].first);
      if (i == IsoFunctor::npos) throw std::logic_error("tau: swapped pair missing");
      out.set(i, j, true);
    }
    return out;
  }

 protected:
  FunctorValue compute_value(const QuadSpace& w) const override {
    FunctorValue v;
    const auto& ps = pairs(w);
    v.dim = ps.size();
    for (const auto& [a, b] : ps) v.labels.push_back("(" + a.str() + "," + b.str() + ")");
    return v;
  }

  F2Matrix compute_matrix(const TqMorphism& t) const override {
    const auto& src = pairs(t.source());
    pairs(t.target());
    F2Matrix eps = epsilon(t);
    F2Matrix out(value(t.target()).dim, src.size());
    std::map<std::uint64_t, bool> transports;  // by h(x) = w1+w2
    for (std::size_t j = 0; j < src.size(); ++j) {
      F2Vector s = src[j].first ^ src[j].second;
      auto [it, fresh] = transports.try_emplace(s.to_index(), false);
      if (fresh)
        it->second = solve(t.right.matrix(), t.left.matrix().apply(s)).has_value();
      if (!it->second) continue;
      std::size_t i = pair_index(t.target(), eps.apply(src[j].first), eps.apply(src[j].second));
      if (i == IsoFunctor::npos) throw std::logic_error("mix: image pair missing");
      out.set(i, j, true);
    }
    return out;
  }

 private:
  bool alpha_, beta_;
  mutable std::mutex mu_;
  mutable std::map<std::string, std::vector<std::pair<F2Vector, F2Vector>>> pairs_;
  mutable std::map<std::string, std::map<std::pair<std::uint64_t, std::uint64_t>, std::size_t>>
      index_;
};

// m_{alpha,1}: unordered pairs {w1, w2}, the common quotient/invariants of
// Mix_{alpha,1} under the swap.
class MFunctor : public Functor {
 public:
  MFunctor(bool alpha, std::string name) : Functor(std::move(name)), alpha_(alpha) {}

  bool alpha() const { return alpha_; }

  const std::vector<std::pair<F2Vector, F2Vector>>& upairs(const QuadSpace& w) const {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = pairs_.find(w.key());
    if (it != pairs_.end()) return it->second;
    if (w.dim() > 16) throw std::invalid_argument("m: space too large to enumerate");
    std::vector<std::pair<F2Vector, F2Vector>> ps;
    std::uint64_t n = std::uint64_t{1} << w.dim();
    for (std::uint64_t a = 0; a < n; ++a)
      for (std::uint64_t b = a + 1; b < n; ++b) {
        F2Vector w1 = F2Vector::from_index(w.dim(), a), w2 = F2Vector::from_index(w.dim(), b);
        if (w.q(w1 ^ w2) != alpha_ || !w.b(w1, w2)) continue;
        ps.emplace_back(w1, w2);
      }
    auto [pos, ignore] = pairs_.emplace(w.key(), std::move(ps));
    auto& idx = index_[w.key()];
    for (std::size_t i = 0; i < pos->second.size(); ++i)
      idx.emplace(
          std::make_pair(pos->second[i].first.to_index(), pos->second[i].second.to_index()), i);
    return pos->second;
  }

  std::size_t upair_index(const QuadSpace& w, const F2Vector& a, const F2Vector& b) const {
    upairs(w);
    std::uint64_t x = a.to_index(), y = b.to_index();
    if (x > y) std::swap(x, y);
    std::lock_guard<std::mutex> lock(mu_);
    const auto& idx = index_.at(w.key());
    auto it = idx.find(std::make_pair(x, y));
    return it == idx.end() ? IsoFunctor::npos : it->second;
  }

 protected:
  FunctorValue compute_value(const QuadSpace& w) const override {
    FunctorValue v;
    const auto& ps = upairs(w);
    v.dim = ps.size();
    for (const auto& [a, b] : ps) v.labels.push_back("{" + a.str() + "," + b.str() + "}");
    return v;
  }

  F2Matrix compute_matrix(const TqMorphism& t) const override {
    const auto& src = upairs(t.source());
    upairs(t.target());
    F2Matrix eps = epsilon(t);
    F2Matrix out(value(t.target()).dim, src.size());
    std::map<std::uint64_t, bool> transports;
    for (std::size_t j = 0; j < src.size(); ++j) {
      F2Vector s = src[j].first ^ src[j].second;
      auto [it, fresh] = transports.try_emplace(s.to_index(), false);
      if (fresh)
        it->second = solve(t.right.matrix(), t.left.matrix().apply(s)).has_value();
      if (!it->second) continue;
      std::size_t i = upair_index(t.target(), eps.apply(src[j].first), eps.apply(src[j].second));
      if (i == IsoFunctor::npos) throw std::logic_error("m: image pair missing");
      out.set(i, j, true);
    }
    return out;
  }

 private:
  bool alpha_;
  mutable std::mutex mu_;
  mutable std::map<std::string, std::vector<std::pair<F2Vector, F2Vector>>> pairs_;
  mutable std::map<std::string, std::map<std::pair<std::uint64_t, std::uint64_t>, std::size_t>>
      index_;
};

// ---- subfunctors and quotient functors ------------------------------------

// A subfunctor given extensionally: an echelon basis inside the ambient
// value at each object. The morphism action is the ambient action
// restricted, with a defect check that images stay inside the subspace.
class SubFunctor : public Functor {
 public:
  SubFunctor(std::string name, FunctorPtr ambient,
             std::function<F2Matrix(const QuadSpace&)> basis_fn)
      : Functor(std::move(name)), ambient_(std::move(ambient)), basis_fn_(std::move(basis_fn)) {}

  const FunctorPtr& ambient() const { return ambient_; }

  const F2Matrix& basis(const QuadSpace& w) const {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = basis_.find(w.key());
    if (it != basis_.end()) return it->second;
    F2Matrix b = basis_fn_(w);
    if (b.cols() != ambient_->value(w).dim)
      throw std::logic_error(name() + ": basis has wrong ambient dimension");
    return basis_.emplace(w.key(), std::move(b)).first->second;
  }

 protected:
  FunctorValue compute_value(const QuadSpace& w) const override {
    const F2Matrix& b = basis(w);
    FunctorValue amb = ambient_->value(w);
    FunctorValue v;
    v.dim = b.rows();
    for (std::size_t r = 0; r < b.rows(); ++r)
      v.labels.push_back("b" + std::to_string(r) + "@" + amb.labels[b.row(r).leading()]);
    return v;
  }

  F2Matrix compute_matrix(const TqMorphism& t) const override {
    const F2Matrix& src = basis(t.source());
    const F2Matrix& tgt = basis(t.target());
    F2Matrix amb = ambient_->matrix(t);
    F2Matrix out(tgt.rows(), src.rows());
    for (std::size_t j = 0; j < src.rows(); ++j) {
      auto coeff = express_in_rref(tgt, amb.apply(src.row(j)));
      if (!coeff) throw std::logic_error(name() + ": image leaves the subfunctor");
      out.set_col(j, *coeff);
    }
    return out;
  }

 private:
  FunctorPtr ambient_;
  std::function<F2Matrix(const QuadSpace&)> basis_fn_;
  mutable std::mutex mu_;
  mutable std::map<std::string, F2Matrix> basis_;
};

// Quotient of an ambient functor by a subfunctor. Coset representatives are
// the ambient coordinates away from the pivots of the subspace basis.
class QuotientFunctor : public Functor {
 public:
  QuotientFunctor(std::string name, FunctorPtr ambient,
                  std::function<F2Matrix(const QuadSpace&)> sub_fn)
      : Functor(std::move(name)), ambient_(std::move(ambient)), sub_fn_(std::move(sub_fn)) {}

  const FunctorPtr& ambient() const { return ambient_; }

  const F2Matrix& sub_basis(const QuadSpace& w) const {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = sub_.find(w.key());
    if (it != sub_.end()) return it->second;
    F2Matrix b = sub_fn_(w);
    if (b.cols() != ambient_->value(w).dim)
      throw std::logic_error(name() + ": sub basis has wrong ambient dimension");
    return sub_.emplace(w.key(), std::move(b)).first->second;
  }

  // Ambient coordinates used as coset representatives, in order.
  std::vector<std::size_t> coset_coords(const QuadSpace& w) const {
    const F2Matrix& b = sub_basis(w);
    std::size_t n = ambient_->value(w).dim;
    std::vector<bool> pivot(n, false);
    for (std::size_t r = 0; r < b.rows(); ++r) pivot[b.row(r).leading()] = true;
    std::vector<std::size_t> out;
    for (std::size_t c = 0; c < n; ++c)
      if (!pivot[c]) out.push_back(c);
    return out;
  }

  // Reduce an ambient vector modulo the subspace and read the coset coords.
  F2Vector project(const QuadSpace& w, const F2Vector& ambient_vec) const {
    const F2Matrix& b = sub_basis(w);
    F2Vector v = ambient_vec;
    for (std::size_t r = 0; r < b.rows(); ++r) {
      F2Vector row = b.row(r);
      if (v.get(row.leading())) v ^= row;
    }
    auto coords = coset_coords(w);
    F2Vector out(coords.size());
    for (std::size_t i = 0; i < coords.size(); ++i) out.set(i, v.get(coords[i]));
    return out;
  }

  F2Matrix projection_matrix(const QuadSpace& w) const {
    std::size_t n = ambient_->value(w).dim;
    auto coords = coset_coords(w);
    F2Matrix out(coords.size(), n);
    for (std::size_t c = 0; c < n; ++c) {
      F2Vector e(n);
      e.set(c, true);
      out.set_col(c, project(w, e));
    }
    return out;
  }

 protected:
  FunctorValue compute_value(const QuadSpace& w) const override {
    FunctorValue amb = ambient_->value(w);
    auto coords = coset_coords(w);
    FunctorValue v;
    v.dim = coords.size();
    for (std::size_t c : coords) v.labels.push_back(amb.labels[c] + "|mod");
    return v;
  }

  F2Matrix compute_matrix(const TqMorphism& t) const override {
    F2Matrix amb = ambient_->matrix(t);
    auto src_coords = coset_coords(t.source());
    std::size_t n = ambient_->value(t.source()).dim;
    F2Matrix out(coset_coords(t.target()).size(), src_coords.size());
    for (std::size_t j = 0; j < src_coords.size(); ++j) {
      F2Vector e(n);
      e.set(src_coords[j], true);
      out.set_col(j, project(t.target(), amb.apply(e)));
    }
    return out;
  }

 private:
  FunctorPtr ambient_;
  std::function<F2Matrix(const QuadSpace&)> sub_fn_;
  mutable std::mutex mu_;
  mutable std::map<std::string, F2Matrix> sub_;
};

// ---- registry and factories -----------------------------------------------

namespace detail {

inline std::map<std::string, FunctorPtr>& functor_registry() {
  static std::map<std::string, FunctorPtr> reg;
  return reg;
}

inline std::mutex& functor_registry_mutex() {
  static std::mutex mu;
  return mu;
}

// Makers may themselves consult the registry, so construction happens
// outside the lock; a losing race discards its instance.
template <typename T>
std::shared_ptr<const T> registered(const std::string& name,
                                    const std::function<std::shared_ptr<const T>()>& make) {
  {
    std::lock_guard<std::mutex> lock(functor_registry_mutex());
    auto& reg = functor_registry();
    auto it = reg.find(name);
    if (it != reg.end()) {
      auto typed = std::dynamic_pointer_cast<const T>(it->second);
      if (!typed) throw std::logic_error("functor registry type clash for " + name);
      return typed;
    }
  }
  std::shared_ptr<const T> fresh = make();
  std::lock_guard<std::mutex> lock(functor_registry_mutex());
  auto& reg = functor_registry();
  auto it = reg.find(name);
  if (it == reg.end()) it = reg.emplace(name, fresh).first;
  auto typed = std::dynamic_pointer_cast<const T>(it->second);
  if (!typed) throw std::logic_error("functor registry type clash for " + name);
  return typed;
}

}  // namespace detail

inline std::shared_ptr<const IsoFunctor> iso_functor(bool alpha) {
  std::string name = std::string("iso:x") + (alpha ? "1" : "0");
  return detail::registered<IsoFunctor>(
      name, [&] { return std::make_shared<IsoFunctor>(point_space(alpha), name); });
}

inline std::shared_ptr<const IsoFunctor> iso_functor_for(const QuadSpace& d) {
  std::string name = "iso:[" + d.key() + "]";
  return detail::registered<IsoFunctor>(
      name, [&] { return std::make_shared<IsoFunctor>(d, name); });
}

inline std::shared_ptr<const PFFunctor> pf_functor(std::size_t vdim = 1) {
  std::string name = vdim == 1 ? "pf" : "pf:v=" + std::to_string(vdim);
  return detail::registered<PFFunctor>(
      name, [&] { return std::make_shared<PFFunctor>(vdim, name); });
}

inline std::shared_ptr<const LambdaFunctor> lambda_functor(std::size_t n) {
  std::string name = "lambda:n=" + std::to_string(n);
  return detail::registered<LambdaFunctor>(
      name, [&] { return std::make_shared<LambdaFunctor>(n, name); });
}

inline std::shared_ptr<const TensorFunctor> tensor_functor(const FunctorPtr& f,
                                                           const FunctorPtr& g) {
  std::string name = f->name() + "(x)" + g->name();
  return detail::registered<TensorFunctor>(
      name, [&] { return std::make_shared<TensorFunctor>(f, g, name); });
}

inline std::shared_ptr<const MixGeneralFunctor> mix_general_functor(std::size_t vdim,
                                                                    const QuadSpace& d,
                                                                    const F2Vector& eta) {
  std::string name = "mixgen:v=" + std::to_string(vdim) + ",D=[" + d.key() + "],eta=" + eta.str();
  return detail::registered<MixGeneralFunctor>(
      name, [&] { return std::make_shared<MixGeneralFunctor>(vdim, d, eta, name); });
}

inline std::shared_ptr<const MixAbFunctor> mix_functor(bool alpha, bool beta) {
  std::string name = "mix:a=" + std::to_string(alpha) + ",b=" + std::to_string(beta);
  return detail::registered<MixAbFunctor>(
      name, [&] { return std::make_shared<MixAbFunctor>(alpha, beta, name); });
}

inline std::shared_ptr<const MFunctor> m_functor(bool alpha) {
  std::string name = "m:a=" + std::to_string(alpha);
  return detail::registered<MFunctor>(
      name, [&] { return std::make_shared<MFunctor>(alpha, name); });
}

// Invariants of the swap action on Mix_{alpha,beta}.
inline std::shared_ptr<const SubFunctor> sigma_functor(bool alpha, bool beta) {
  std::string name = "sigma:a=" + std::to_string(alpha) + ",b=" + std::to_string(beta);
  return detail::registered<SubFunctor>(name, [&]() -> std::shared_ptr<const SubFunctor> {
    auto mix = mix_functor(alpha, beta);
    auto fn = [mix](const QuadSpace& w) {
      F2Matrix tau = mix->tau(w);
      return kernel_basis(mat_xor(tau, F2Matrix::identity(tau.rows()))).basis;
    };
    return std::make_shared<SubFunctor>(name, mix, fn);
  });
}

// k_d P_F: the span of full sums over (d+1)-dimensional subspaces.
inline std::shared_ptr<const SubFunctor> kd_pf_functor(std::size_t d) {
  std::string name = "kd_pf:d=" + std::to_string(d);
  return detail::registered<SubFunctor>(name, [&]() -> std::shared_ptr<const SubFunctor> {
    auto pf = pf_functor();
    auto fn = [d](const QuadSpace& w) {
      std::size_t n = w.dim();
      std::size_t amb = std::size_t{1} << n;
      std::vector<F2Vector> gens;
      if (d + 1 <= n) {
        for_each_subspace(n, d + 1, [&](const Subspace& l) {
          F2Vector g(amb);
          for (const auto& z : l.elements()) g.set(z.to_index(), true);
          gens.push_back(g);
        });
      }
      return span_basis(gens, amb).basis;
    };
    return std::make_shared<SubFunctor>(name, pf, fn);
  });
}

// q_d P_F = P_F / k_d P_F, the largest polynomial quotient of degree d.
inline std::shared_ptr<const QuotientFunctor> qd_pf_functor(std::size_t d) {
  std::string name = "qd_pf:d=" + std::to_string(d);
  return detail::registered<QuotientFunctor>(name, [&]() -> std::shared_ptr<const QuotientFunctor> {
    auto pf = pf_functor();
    auto kd = kd_pf_functor(d);
    auto fn = [kd](const QuadSpace& w) { return kd->basis(w); };
    return std::make_shared<QuotientFunctor>(name, pf, fn);
  });
}

// k_d m_{alpha,1}: the span of sums over d-dimensional subspaces of
// (x+y)^perp translating an unordered pair {x, y}.
inline std::shared_ptr<const SubFunctor> kd_m_functor(bool alpha, std::size_t d) {
  std::string name = "kd_m:a=" + std::to_string(alpha) + ",d=" + std::to_string(d);
  return detail::registered<SubFunctor>(name, [&]() -> std::shared_ptr<const SubFunctor> {
    auto m = m_functor(alpha);
    auto fn = [m, d](const QuadSpace& w) {
      const auto& labels = m->upairs(w);
      std::size_t amb = labels.size();
      // group labels by x+y so each perp space is enumerated once
      std::map<std::uint64_t, std::vector<std::size_t>> by_sum;
      for (std::size_t i = 0; i < labels.size(); ++i)
        by_sum[(labels[i].first ^ labels[i].second).to_index()].push_back(i);
      std::vector<F2Vector> gens;
      for (const auto& [sidx, members] : by_sum) {
        F2Vector s = F2Vector::from_index(w.dim(), sidx);
        Subspace perp = perp_subspace(w, s);
        if (d > perp.dim()) continue;
        for_each_subspace(perp.dim(), d, [&](const Subspace& coeffs) {
          // subspace L of the perp, via coefficient vectors
          std::vector<F2Vector> l;
          for (const auto& c : coeffs.elements()) {
            F2Vector z(w.dim());
            for (std::size_t t = 0; t < perp.dim(); ++t)
              if (c.get(t)) z ^= perp.basis.row(t);
            l.push_back(z);
          }
          for (std::size_t li : members) {
            F2Vector g(amb);
            for (const auto& z : l) {
              std::size_t idx = m->upair_index(w, labels[li].first ^ z, labels[li].second ^ z);
              if (idx == IsoFunctor::npos)
                throw std::logic_error("kd_m: translated pair missing");
              g.set(idx, g.get(idx) ^ true);
            }
            gens.push_back(g);
          }
        });
      }
      return span_basis(gens, amb).basis;
    };
    return std::make_shared<SubFunctor>(name, m, fn);
  });
}

// ---- the wedge maps mu_n / nu_n and the kernels K^n, L^n -------------------

// Matrix of mu_n at W: z (x) [h] |-> (z ^ h(x)) (x) [h], from
// Lambda^n (x) iso to Lambda^(n+1) (x) iso. Index layout is subset-major.
inline F2Matrix mu_n_matrix(bool alpha, std::size_t n, const QuadSpace& w) {
  const auto& embs = iso_functor(alpha)->embeddings(w);
  std::size_t nh = embs.size();
  std::size_t dim = w.dim();
  auto src_subs = k_subsets(dim, n);
  std::size_t rows = static_cast<std::size_t>(binomial(dim, n + 1)) * nh;
  F2Matrix out(rows, src_subs.size() * nh);
  for (std::size_t ih = 0; ih < nh; ++ih) {
    F2Vector hx = embs[ih].matrix().col(0);
    for (std::size_t is = 0; is < src_subs.size(); ++is) {
      std::vector<F2Vector> vs;
      for (std::size_t c : src_subs[is]) {
        F2Vector e(dim);
        e.set(c, true);
        vs.push_back(e);
      }
      vs.push_back(hx);
      F2Vector img = wedge_coordinates(vs, dim);
      for (std::size_t t = 0; t < img.dim(); ++t)
        if (img.get(t)) out.set(t * nh + ih, is * nh + ih, true);
    }
  }
  return out;
}

// Matrix of nu_n at W: v_1^...^v_(n+1) (x) [h] |-> sum_i B(v_i, h(x))
// v_1^...^hat v_i^...^v_(n+1) (x) [h].
inline F2Matrix nu_n_matrix(bool alpha, std::size_t n, const QuadSpace& w) {
  const auto& embs = iso_functor(alpha)->embeddings(w);
  std::size_t nh = embs.size();
  std::size_t dim = w.dim();
  auto src_subs = k_subsets(dim, n + 1);
  std::size_t rows = static_cast<std::size_t>(binomial(dim, n)) * nh;
  F2Matrix out(rows, src_subs.size() * nh);
  for (std::size_t ih = 0; ih < nh; ++ih) {
    F2Vector hx = embs[ih].matrix().col(0);
    F2Vector beta = w.gram().apply(hx);  // beta_i = B(e_i, h(x))
    for (std::size_t is = 0; is < src_subs.size(); ++is) {
      const auto& s = src_subs[is];
      for (std::size_t t = 0; t < s.size(); ++t) {
        if (!beta.get(s[t])) continue;
        std::vector<std::size_t> rest;
        for (std::size_t u = 0; u < s.size(); ++u)
          if (u != t) rest.push_back(s[u]);
        std::size_t ridx = subset_index(dim, rest);
        out.set(ridx * nh + ih, is * nh + ih, true);
      }
    }
  }
  return out;
}

// K^n = ker(mu_n) inside Lambda^n (x) iso.
inline std::shared_ptr<const SubFunctor> k_functor(bool alpha, std::size_t n) {
  if (n < 1) throw std::invalid_argument("K: n must be >= 1");
  std::string name = "K:a=" + std::to_string(alpha) + ",n=" + std::to_string(n);
  return detail::registered<SubFunctor>(name, [&]() -> std::shared_ptr<const SubFunctor> {
    auto amb = tensor_functor(lambda_functor(n), iso_functor(alpha));
    auto fn = [alpha, n](const QuadSpace& w) { return kernel_basis(mu_n_matrix(alpha, n, w)).basis; };
    return std::make_shared<SubFunctor>(name, amb, fn);
  });
}

// L^n: for n >= 2 the kernel of nu_(n-1) restricted to K^n; L^1 = K^1.
inline std::shared_ptr<const SubFunctor> l_functor(bool alpha, std::size_t n) {
  if (n < 1) throw std::invalid_argument("L: n must be >= 1");
  std::string name = "L:a=" + std::to_string(alpha) + ",n=" + std::to_string(n);
  return detail::registered<SubFunctor>(name, [&]() -> std::shared_ptr<const SubFunctor> {
    auto amb = tensor_functor(lambda_functor(n), iso_functor(alpha));
    auto fn = [alpha, n](const QuadSpace& w) {
      if (n == 1) return kernel_basis(mu_n_matrix(alpha, 1, w)).basis;
      return kernel_basis(vstack(mu_n_matrix(alpha, n, w), nu_n_matrix(alpha, n - 1, w))).basis;
    };
    return std::make_shared<SubFunctor>(name, amb, fn);
  });
}

// The layer k_d m / k_(d+1) m.
inline std::shared_ptr<const QuotientFunctor> layer_functor(bool alpha, std::size_t d) {
  std::string name = "layer:a=" + std::to_string(alpha) + ",d=" + std::to_string(d);
  return detail::registered<QuotientFunctor>(name, [&]() -> std::shared_ptr<const QuotientFunctor> {
    auto kd = kd_m_functor(alpha, d);
    auto kd1 = kd_m_functor(alpha, d + 1);
    auto fn = [kd, kd1](const QuadSpace& w) {
      const F2Matrix& big = kd->basis(w);
      const F2Matrix& small = kd1->basis(w);
      std::vector<F2Vector> rows;
      for (std::size_t r = 0; r < small.rows(); ++r) {
        auto c = express_in_rref(big, small.row(r));
        if (!c) throw std::logic_error("layer: filtration is not decreasing");
        rows.push_back(*c);
      }
      return span_basis(rows, big.rows()).basis;
    };
    return std::make_shared<QuotientFunctor>(name, kd, fn);
  });
}

// Alternative spanning-set routes, asserted equal to the kernels in tests:
// K^n(W) from z ^ h(x) (x) [h] over z in Lambda^(n-1)(W), and L^n(W) from
// z in Lambda^(n-1)(h(x)^perp).
inline F2Matrix k_span_basis(bool alpha, std::size_t n, const QuadSpace& w) {
  if (n < 1) throw std::invalid_argument("k_span_basis: n must be >= 1");
  const auto& embs = iso_functor(alpha)->embeddings(w);
  std::size_t nh = embs.size();
  std::size_t amb = static_cast<std::size_t>(binomial(w.dim(), n)) * nh;
  std::vector<F2Vector> gens;
  for (std::size_t ih = 0; ih < nh; ++ih) {
    F2Vector hx = embs[ih].matrix().col(0);
    for (const auto& s : k_subsets(w.dim(), n - 1)) {
      std::vector<F2Vector> vs;
      for (std::size_t c : s) {
        F2Vector e(w.dim());
        e.set(c, true);
        vs.push_back(e);
      }
      vs.push_back(hx);
      F2Vector img = wedge_coordinates(vs, w.dim());
      F2Vector g(amb);
      for (std::size_t t = 0; t < img.dim(); ++t)
        if (img.get(t)) g.set(t * nh + ih, true);
      gens.push_back(g);
    }
  }
  return span_basis(gens, amb).basis;
}

inline F2Matrix l_span_basis(bool alpha, std::size_t n, const QuadSpace& w) {
  if (n < 1) throw std::invalid_argument("l_span_basis: n must be >= 1");
  const auto& embs = iso_functor(alpha)->embeddings(w);
  std::size_t nh = embs.size();
  std::size_t amb = static_cast<std::size_t>(binomial(w.dim(), n)) * nh;
  std::vector<F2Vector> gens;
  for (std::size_t ih = 0; ih < nh; ++ih) {
    F2Vector hx = embs[ih].matrix().col(0);
    Subspace perp = perp_subspace(w, hx);
    for (const auto& s : k_subsets(perp.dim(), n - 1)) {
      std::vector<F2Vector> vs;
      for (std::size_t c : s) vs.push_back(perp.basis.row(c));
      vs.push_back(hx);
      F2Vector img = wedge_coordinates(vs, w.dim());
      F2Vector g(amb);
      for (std::size_t t = 0; t < img.dim(); ++t)
        if (img.get(t)) g.set(t * nh + ih, true);
      gens.push_back(g);
    }
  }
  return span_basis(gens, amb).basis;
}

// ---- natural transformations ----------------------------------------------

// A natural map as a family of component matrices, memoized per object.
struct NaturalMap {
  std::string name;
  FunctorPtr source;
  FunctorPtr target;
  std::function<F2Matrix(const QuadSpace&)> component;

  NaturalMap(std::string name_, FunctorPtr source_, FunctorPtr target_,
             std::function<F2Matrix(const QuadSpace&)> component_)
      : name(std::move(name_)),
        source(std::move(source_)),
        target(std::move(target_)),
        component(std::move(component_)) {}

  F2Matrix at(const QuadSpace& w) const {
    {
      std::lock_guard<std::mutex> lock(*mu_);
      auto it = cache_->find(w.key());
      if (it != cache_->end()) return it->second;
    }
    F2Matrix m = component(w);
    if (m.rows() != target->value(w).dim || m.cols() != source->value(w).dim)
      throw std::logic_error(name + ": component shape mismatch");
    std::lock_guard<std::mutex> lock(*mu_);
    return cache_->emplace(w.key(), std::move(m)).first->second;
  }

 private:
  std::shared_ptr<std::map<std::string, F2Matrix>> cache_ =
      std::make_shared<std::map<std::string, F2Matrix>>();
  std::shared_ptr<std::mutex> mu_ = std::make_shared<std::mutex>();
};

// phi is natural for the supplied morphisms iff phi_Z F(T) = G(T) phi_W.
inline bool natural_check(const NaturalMap& phi, const std::vector<TqMorphism>& ts,
                          std::string* why = nullptr) {
  for (std::size_t i = 0; i < ts.size(); ++i) {
    const TqMorphism& t = ts[i];
    F2Matrix lhs = phi.at(t.target()) * phi.source->matrix(t);
    F2Matrix rhs = phi.target->matrix(t) * phi.at(t.source());
    if (!(lhs == rhs)) {
      if (why)
        *why = phi.name + ": naturality fails on morphism #" + std::to_string(i) + " (" +
               std::to_string(t.source().dim()) + " -> " + std::to_string(t.target().dim()) + ")";
      return false;
    }
  }
  return true;
}

// mu: iso -> Lambda^1 (x) iso, [h] |-> h(x) (x) [h].
inline NaturalMap nat_mu(bool alpha) {
  auto iso = iso_functor(alpha);
  auto tgt = tensor_functor(lambda_functor(1), iso);
  return NaturalMap{
      "mu:a=" + std::to_string(alpha), iso, tgt, [alpha](const QuadSpace& w) {
        const auto& embs = iso_functor(alpha)->embeddings(w);
        std::size_t nh = embs.size();
        F2Matrix out(w.dim() * nh, nh);
        for (std::size_t ih = 0; ih < nh; ++ih) {
          F2Vector hx = embs[ih].matrix().col(0);
          for (std::size_t i = 0; i < w.dim(); ++i)
            if (hx.get(i)) out.set(i * nh + ih, ih, true);
        }
        return out;
      }};
}

// nu: Lambda^1 (x) iso -> iso, w (x) [h] |-> B(w, h(x)) [h].
inline NaturalMap nat_nu(bool alpha) {
  auto iso = iso_functor(alpha);
  auto src = tensor_functor(lambda_functor(1), iso);
  return NaturalMap{
      "nu:a=" + std::to_string(alpha), src, iso, [alpha](const QuadSpace& w) {
        const auto& embs = iso_functor(alpha)->embeddings(w);
        std::size_t nh = embs.size();
        F2Matrix out(nh, w.dim() * nh);
        for (std::size_t ih = 0; ih < nh; ++ih) {
          F2Vector beta = w.gram().apply(embs[ih].matrix().col(0));
          for (std::size_t i = 0; i < w.dim(); ++i)
            if (beta.get(i)) out.set(ih, i * nh + ih, true);
        }
        return out;
      }};
}

inline NaturalMap nat_mu_n(bool alpha, std::size_t n) {
  auto src = tensor_functor(lambda_functor(n), iso_functor(alpha));
  auto tgt = tensor_functor(lambda_functor(n + 1), iso_functor(alpha));
  return NaturalMap{"mu_" + std::to_string(n) + ":a=" + std::to_string(alpha), src, tgt,
                    [alpha, n](const QuadSpace& w) { return mu_n_matrix(alpha, n, w); }};
}

inline NaturalMap nat_nu_n(bool alpha, std::size_t n) {
  auto src = tensor_functor(lambda_functor(n + 1), iso_functor(alpha));
  auto tgt = tensor_functor(lambda_functor(n), iso_functor(alpha));
  return NaturalMap{"nu_" + std::to_string(n) + ":a=" + std::to_string(alpha), src, tgt,
                    [alpha, n](const QuadSpace& w) { return nu_n_matrix(alpha, n, w); }};
}

// f_d: P_F ->> q_d P_F, the quotient projection.
inline NaturalMap nat_f_d(std::size_t d) {
  auto pf = pf_functor();
  auto qd = qd_pf_functor(d);
  return NaturalMap{"f_" + std::to_string(d), pf, qd,
                    [qd](const QuadSpace& w) { return qd->projection_matrix(w); }};
}

// g_d: k_d P_F ->> Lambda^(d+1), sum over a subspace |-> wedge of a basis.
// The component solves each echelon basis vector against the generator
// assignment and verifies the assignment is linear-consistent.
inline NaturalMap nat_g_d(std::size_t d) {
  auto kd = kd_pf_functor(d);
  auto lam = lambda_functor(d + 1);
  return NaturalMap{
      "g_" + std::to_string(d), kd, lam, [d, kd](const QuadSpace& w) {
        std::size_t n = w.dim();
        std::size_t amb = std::size_t{1} << n;
        std::size_t ldim = static_cast<std::size_t>(binomial(n, d + 1));
        AugmentedRref acc(amb, ldim);
        std::vector<std::pair<F2Vector, F2Vector>> assignment;
        if (d + 1 <= n) {
          for_each_subspace(n, d + 1, [&](const Subspace& l) {
            F2Vector gen(amb);
            for (const auto& z : l.elements()) gen.set(z.to_index(), true);
            std::vector<F2Vector> basis_vs;
            for (std::size_t r = 0; r < l.dim(); ++r) basis_vs.push_back(l.basis.row(r));
            F2Vector img = wedge_coordinates(basis_vs, n);
            acc.add(gen, img);
            assignment.emplace_back(gen, img);
          });
        }
        for (const auto& [gen, img] : assignment) {
          auto got = acc.reduce(gen);
          if (!got || !(*got == img))
            throw std::logic_error("g_d: generator assignment is not linear");
        }
        const F2Matrix& basis = kd->basis(w);
        F2Matrix out(ldim, basis.rows());
        for (std::size_t j = 0; j < basis.rows(); ++j) {
          auto img = acc.reduce(basis.row(j));
          if (!img) throw std::logic_error("g_d: basis vector outside generator span");
          out.set_col(j, *img);
        }
        return out;
      }};
}

// i_d: k_d m -> (k_d P_F) (x) iso. On an unordered pair {x, y} the ambient
// map sends [{x,y}] to ([x]+[y]) (x) [h] with h(x) = x+y; i_d restricts it
// to the filtration stage.
inline NaturalMap nat_i_d(bool alpha, std::size_t d) {
  auto kdm = kd_m_functor(alpha, d);
  auto kdp = kd_pf_functor(d);
  auto iso = iso_functor(alpha);
  auto tgt = tensor_functor(kdp, iso);
  return NaturalMap{
      "i_" + std::to_string(d) + ":a=" + std::to_string(alpha), kdm, tgt,
      [alpha, d](const QuadSpace& w) {
        auto m = m_functor(alpha);
        auto kdm_ = kd_m_functor(alpha, d);
        auto kdp_ = kd_pf_functor(d);
        auto iso_ = iso_functor(alpha);
        const auto& labels = m->upairs(w);
        const auto& embs = iso_->embeddings(w);
        std::size_t nh = embs.size();
        // embedding index by its image vector h(x)
        std::map<std::uint64_t, std::size_t> emb_by_vec;
        for (std::size_t ih = 0; ih < nh; ++ih)
          emb_by_vec[embs[ih].matrix().col(0).to_index()] = ih;
        const F2Matrix& kb = kdm_->basis(w);
        const F2Matrix& pb = kdp_->basis(w);
        std::size_t np = std::size_t{1} << w.dim();
        F2Matrix out(pb.rows() * nh, kb.rows());
        for (std::size_t j = 0; j < kb.rows(); ++j) {
          // ambient image, one P_F block per embedding
          std::vector<F2Vector> blocks(nh, F2Vector(np));
          F2Vector row = kb.row(j);
          for (std::size_t t = 0; t < labels.size(); ++t) {
            if (!row.get(t)) continue;
            const auto& [x, y] = labels[t];
            std::size_t ih = emb_by_vec.at((x ^ y).to_index());
            blocks[ih].set(x.to_index(), blocks[ih].get(x.to_index()) ^ true);
            blocks[ih].set(y.to_index(), blocks[ih].get(y.to_index()) ^ true);
          }
          for (std::size_t ih = 0; ih < nh; ++ih) {
            if (blocks[ih].is_zero()) continue;
            auto coeff = express_in_rref(pb, blocks[ih]);
            if (!coeff) throw std::logic_error("i_d: image leaves k_d P_F (x) iso");
            for (std::size_t r = 0; r < coeff->dim(); ++r)
              if (coeff->get(r)) out.set(r * nh + ih, j, true);
          }
        }
        return out;
      }};
}

// The induced map (k_d m / k_(d+1) m) -> Lambda^(d+1) (x) iso from the
// filtration square: compose i_d with g_d (x) id and lift coset reps.
inline NaturalMap nat_sigma_layer(bool alpha, std::size_t d) {
  auto layer = layer_functor(alpha, d);
  auto tgt = tensor_functor(lambda_functor(d + 1), iso_functor(alpha));
  return NaturalMap{
      "sigma_layer:a=" + std::to_string(alpha) + ",d=" + std::to_string(d), layer, tgt,
      [alpha, d, layer](const QuadSpace& w) {
        std::size_t nh = iso_functor(alpha)->embeddings(w).size();
        F2Matrix id_ = nat_i_d(alpha, d).at(w);
        F2Matrix gd = nat_g_d(d).at(w);
        F2Matrix composite = gd.kron(F2Matrix::identity(nh)) * id_;
        auto coords = layer->coset_coords(w);
        std::size_t kdim = layer->ambient()->value(w).dim;
        F2Matrix out(composite.rows(), coords.size());
        for (std::size_t j = 0; j < coords.size(); ++j) {
          F2Vector e(kdim);
          e.set(coords[j], true);
          out.set_col(j, composite.apply(e));
        }
        return out;
      }};
}

// sigma: K^1 -> iso, h(x) (x) [h] |-> [h].
inline NaturalMap nat_sigma_iso(bool alpha) {
  auto k1 = k_functor(alpha, 1);
  auto iso = iso_functor(alpha);
  return NaturalMap{
      "sigma:a=" + std::to_string(alpha), k1, iso, [alpha](const QuadSpace& w) {
        auto k1_ = k_functor(alpha, 1);
        const auto& embs = iso_functor(alpha)->embeddings(w);
        std::size_t nh = embs.size();
        const F2Matrix& basis = k1_->basis(w);
        F2Matrix out(nh, basis.rows());
        for (std::size_t j = 0; j < basis.rows(); ++j) {
          F2Vector row = basis.row(j);
          for (std::size_t ih = 0; ih < nh; ++ih) {
            F2Vector vh(w.dim());
            for (std::size_t i = 0; i < w.dim(); ++i)
              if (row.get(i * nh + ih)) vh.set(i, true);
            if (vh.is_zero()) continue;
            if (!(vh == embs[ih].matrix().col(0)))
              throw std::logic_error("sigma: K^1 vector not of the form h(x) (x) [h]");
            out.set(ih, j, true);
          }
        }
        return out;
      }};
}

// nu_n^K: K^(n+1) -> K^n, the restriction of nu_n.
inline NaturalMap nat_nu_k(bool alpha, std::size_t n) {
  auto src = k_functor(alpha, n + 1);
  auto tgt = k_functor(alpha, n);
  return NaturalMap{
      "nuK_" + std::to_string(n) + ":a=" + std::to_string(alpha), src, tgt,
      [alpha, n](const QuadSpace& w) {
        auto src_ = k_functor(alpha, n + 1);
        auto tgt_ = k_functor(alpha, n);
        F2Matrix nu = nu_n_matrix(alpha, n, w);
        const F2Matrix& sb = src_->basis(w);
        const F2Matrix& tb = tgt_->basis(w);
        F2Matrix out(tb.rows(), sb.rows());
        for (std::size_t j = 0; j < sb.rows(); ++j) {
          auto c = express_in_rref(tb, nu.apply(sb.row(j)));
          if (!c) throw std::logic_error("nu_K: image leaves K^n");
          out.set_col(j, *c);
        }
        return out;
      }};
}

// The factorization of nu_n^K through L^n; surjective with kernel L^(n+1).
inline NaturalMap nat_nu_tilde(bool alpha, std::size_t n) {
  auto src = k_functor(alpha, n + 1);
  auto tgt = l_functor(alpha, n);
  return NaturalMap{
      "nu_tilde_" + std::to_string(n) + ":a=" + std::to_string(alpha), src, tgt,
      [alpha, n](const QuadSpace& w) {
        auto src_ = k_functor(alpha, n + 1);
        auto tgt_ = l_functor(alpha, n);
        F2Matrix nu = nu_n_matrix(alpha, n, w);
        const F2Matrix& sb = src_->basis(w);
        const F2Matrix& tb = tgt_->basis(w);
        F2Matrix out(tb.rows(), sb.rows());
        for (std::size_t j = 0; j < sb.rows(); ++j) {
          auto c = express_in_rref(tb, nu.apply(sb.row(j)));
          if (!c) throw std::logic_error("nu_tilde: image leaves L^n");
          out.set_col(j, *c);
        }
        return out;
      }};
}

// The swap action on Mix as a natural involution.
inline NaturalMap nat_tau(bool alpha, bool beta) {
  auto mix = mix_functor(alpha, beta);
  return NaturalMap{"tau:a=" + std::to_string(alpha) + ",b=" + std::to_string(beta), mix, mix,
                    [mix](const QuadSpace& w) { return mix->tau(w); }};
}

// Projection Mix_{alpha,1} ->> m_{alpha,1}, [(w1,w2)] |-> [{w1,w2}].
inline NaturalMap nat_mix_to_m(bool alpha) {
  auto mix = mix_functor(alpha, true);
  auto m = m_functor(alpha);
  return NaturalMap{
      "pi:a=" + std::to_string(alpha), mix, m, [mix, m](const QuadSpace& w) {
        const auto& ps = mix->pairs(w);
        F2Matrix out(m->value(w).dim, ps.size());
        for (std::size_t j = 0; j < ps.size(); ++j) {
          std::size_t i = m->upair_index(w, ps[j].first, ps[j].second);
          if (i == IsoFunctor::npos) throw std::logic_error("pi: unordered pair missing");
          out.set(i, j, true);
        }
        return out;
      }};
}

// Inclusion m_{alpha,1} (as the invariants) into Mix_{alpha,1}:
// [{x,y}] |-> [(x,y)] + [(y,x)].
inline NaturalMap nat_m_to_mix(bool alpha) {
  auto mix = mix_functor(alpha, true);
  auto m = m_functor(alpha);
  return NaturalMap{
      "iota_m:a=" + std::to_string(alpha), m, mix, [mix, m](const QuadSpace& w) {
        const auto& ups = m->upairs(w);
        F2Matrix out(mix->value(w).dim, ups.size());
        for (std::size_t j = 0; j < ups.size(); ++j) {
          std::size_t i1 = mix->pair_index(w, ups[j].first, ups[j].second);
          std::size_t i2 = mix->pair_index(w, ups[j].second, ups[j].first);
          if (i1 == IsoFunctor::npos || i2 == IsoFunctor::npos)
            throw std::logic_error("iota_m: ordered pair missing");
          out.set(i1, j, true);
          out.set(i2, j, true);
        }
        return out;
      }};
}

// ---- functor name grammar ---------------------------------------------------

inline std::string functor_grammar_help() {
  return "functor grammar: pf | lambda:n=N | kd_pf:d=D | qd_pf:d=D | iso:x0 | iso:x1 | "
         "mix:a=A,b=B | sigma:a=A,b=B | m:a=A | kd_m:a=A,d=D | K:a=A,n=N | L:a=A,n=N, "
         "tensored with (x), e.g. lambda:n=2(x)iso:x1";
}

namespace detail {

inline std::map<std::string, std::string> parse_params(const std::string& name,
                                                       const std::string& rest) {
  std::map<std::string, std::string> out;
  std::size_t pos = 0;
  while (pos < rest.size()) {
    std::size_t next = rest.find(',', pos);
    std::string item = rest.substr(pos, next == std::string::npos ? std::string::npos : next - pos);
    std::size_t eq = item.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("unknown functor parameter '" + item + "' in '" + name + "'. " +
                                  functor_grammar_help());
    out[item.substr(0, eq)] = item.substr(eq + 1);
    if (next == std::string::npos) break;
    pos = next + 1;
  }
  return out;
}

inline int param_int(const std::map<std::string, std::string>& params, const std::string& key,
                     const std::string& name) {
  auto it = params.find(key);
  if (it == params.end())
    throw std::invalid_argument("functor '" + name + "' needs parameter '" + key + "'. " +
                                functor_grammar_help());
  return std::stoi(it->second);
}

inline FunctorPtr parse_functor_factor(const std::string& spec) {
  std::size_t colon = spec.find(':');
  std::string name = spec.substr(0, colon);
  std::string rest = colon == std::string::npos ? "" : spec.substr(colon + 1);
  if (name == "pf" && rest.empty()) return pf_functor();
  if (name == "iso") {
    if (rest == "x0") return iso_functor(false);
    if (rest == "x1") return iso_functor(true);
    throw std::invalid_argument("iso expects x0 or x1. " + functor_grammar_help());
  }
  auto params = parse_params(name, rest);
  if (name == "lambda") return lambda_functor(static_cast<std::size_t>(param_int(params, "n", name)));
  if (name == "kd_pf") return kd_pf_functor(static_cast<std::size_t>(param_int(params, "d", name)));
  if (name == "qd_pf") return qd_pf_functor(static_cast<std::size_t>(param_int(params, "d", name)));
  if (name == "mix")
    return mix_functor(param_int(params, "a", name) != 0, param_int(params, "b", name) != 0);
  if (name == "sigma")
    return sigma_functor(param_int(params, "a", name) != 0, param_int(params, "b", name) != 0);
  if (name == "m") return m_functor(param_int(params, "a", name) != 0);
  if (name == "kd_m")
    return kd_m_functor(param_int(params, "a", name) != 0,
                        static_cast<std::size_t>(param_int(params, "d", name)));
  if (name == "K")
    return k_functor(param_int(params, "a", name) != 0,
                     static_cast<std::size_t>(param_int(params, "n", name)));
  if (name == "L")
    return l_functor(param_int(params, "a", name) != 0,
                     static_cast<std::size_t>(param_int(params, "n", name)));
  throw std::invalid_argument("unknown functor '" + name + "'. " + functor_grammar_help());
}

}  // namespace detail

// Parses the CLI functor grammar, e.g. "m:a=1" or "lambda:n=2(x)iso:x1".
inline FunctorPtr parse_functor(const std::string& spec) {
  std::vector<std::string> factors;
  std::size_t pos = 0;
  while (true) {
    std::size_t t = spec.find("(x)", pos);
    if (t == std::string::npos) {
      factors.push_back(spec.substr(pos));
      break;
    }
    factors.push_back(spec.substr(pos, t - pos));
    pos = t + 3;
  }
  FunctorPtr out = detail::parse_functor_factor(factors[0]);
  for (std::size_t i = 1; i < factors.size(); ++i)
    out = tensor_functor(out, detail::parse_functor_factor(factors[i]));
  return out;
}

}  // namespace fquad
