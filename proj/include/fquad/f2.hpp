#pragma once

// Exact linear algebra over the two-element field: bit-packed vectors and
// matrices, echelon forms, kernels, subspace enumeration and exterior-power
// coordinates. Everything is immutable in spirit: operations return fresh
// values and never mutate their inputs.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace fquad {

using word_t = std::uint64_t;

inline constexpr std::size_t kWordBits = 64;

inline std::size_t words_for(std::size_t bits) {
  return (bits + kWordBits - 1) / kWordBits;
}

inline int parity64(word_t w) { return __builtin_parityll(w); }
inline int popcount64(word_t w) { return __builtin_popcountll(w); }

// A vector in F2^dim, bit i stored in word i/64.
class F2Vector {
 public:
  F2Vector() = default;
  explicit F2Vector(std::size_t dim) : dim_(dim), w_(words_for(dim), 0) {}

  // Interprets bit i of `value` as coordinate i.
  static F2Vector from_index(std::size_t dim, std::uint64_t value) {
    if (dim > kWordBits) throw std::invalid_argument("from_index: dim > 64");
    F2Vector v(dim);
    if (dim > 0) v.w_[0] = (dim == kWordBits) ? value : (value & ((word_t{1} << dim) - 1));
    return v;
  }

  static F2Vector from_bits(const std::vector<int>& bits) {
    F2Vector v(bits.size());
    for (std::size_t i = 0; i < bits.size(); ++i)
      if (bits[i]) v.set(i, true);
    return v;
  }

  std::size_t dim() const { return dim_; }

  bool get(std::size_t i) const {
    check_index(i);
    return (w_[i / kWordBits] >> (i % kWordBits)) & 1u;
  }

  void set(std::size_t i, bool b) {
    check_index(i);
    word_t mask = word_t{1} << (i % kWordBits);
    if (b)
      w_[i / kWordBits] |= mask;
    else
      w_[i / kWordBits] &= ~mask;
  }

  bool is_zero() const {
    for (word_t w : w_)
      if (w) return false;
    return true;
  }

  std::size_t popcount() const {
    std::size_t n = 0;
    for (word_t w : w_) n += static_cast<std::size_t>(popcount64(w));
    return n;
  }

  // Index of the first set coordinate, or dim() if zero.
  std::size_t leading() const {
    for (std::size_t k = 0; k < w_.size(); ++k)
      if (w_[k]) return k * kWordBits + static_cast<std::size_t>(__builtin_ctzll(w_[k]));
    return dim_;
  }

  // The bit pattern as an integer, coordinate i contributing 2^i.
  std::uint64_t to_index() const {
    if (dim_ > kWordBits) throw std::logic_error("to_index: dim > 64");
    return w_.empty() ? 0 : w_[0];
  }

  F2Vector& operator^=(const F2Vector& o) {
    if (o.dim_ != dim_) throw std::invalid_argument("xor: dimension mismatch");
    for (std::size_t k = 0; k < w_.size(); ++k) w_[k] ^= o.w_[k];
    return *this;
  }

  friend F2Vector operator^(F2Vector a, const F2Vector& b) { return a ^= b; }

  // Parity of the coordinatewise product.
  bool dot(const F2Vector& o) const {
    if (o.dim_ != dim_) throw std::invalid_argument("dot: dimension mismatch");
    word_t acc = 0;
    for (std::size_t k = 0; k < w_.size(); ++k) acc ^= w_[k] & o.w_[k];
    return parity64(acc);
  }

  F2Vector concat(const F2Vector& tail) const {
    F2Vector r(dim_ + tail.dim_);
    for (std::size_t i = 0; i < dim_; ++i) r.set(i, get(i));
    for (std::size_t i = 0; i < tail.dim_; ++i) r.set(dim_ + i, tail.get(i));
    return r;
  }

  F2Vector slice(std::size_t begin, std::size_t len) const {
    if (begin + len > dim_) throw std::invalid_argument("slice: out of range");
    F2Vector r(len);
    for (std::size_t i = 0; i < len; ++i) r.set(i, get(begin + i));
    return r;
  }

  std::string str() const {
    std::string s(dim_, '0');
    for (std::size_t i = 0; i < dim_; ++i)
      if (get(i)) s[i] = '1';
    return s;
  }

  bool operator==(const F2Vector& o) const = default;

  // Orders by dimension, then by bit pattern viewed as an integer.
  friend bool operator<(const F2Vector& a, const F2Vector& b) {
    if (a.dim_ != b.dim_) return a.dim_ < b.dim_;
    for (std::size_t k = a.w_.size(); k-- > 0;)
      if (a.w_[k] != b.w_[k]) return a.w_[k] < b.w_[k];
    return false;
  }

  const std::vector<word_t>& words() const { return w_; }

 private:
  friend class F2Matrix;

  void check_index(std::size_t i) const {
    if (i >= dim_) throw std::out_of_range("F2Vector index out of range");
  }

  std::size_t dim_ = 0;
  std::vector<word_t> w_;
};

// Row-major bit-packed matrix over F2. A linear map f: F2^s -> F2^t is the
// t x s matrix whose column j is f(e_j); apply() computes y = M x.
class F2Matrix {
 public:
  F2Matrix() = default;
  F2Matrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), stride_(words_for(cols)), w_(rows * stride_, 0) {}

  static F2Matrix identity(std::size_t n) {
    F2Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m.set(i, i, true);
    return m;
  }

  static F2Matrix from_rows(const std::vector<F2Vector>& rows, std::size_t cols) {
    F2Matrix m(rows.size(), cols);
    for (std::size_t r = 0; r < rows.size(); ++r) m.set_row(r, rows[r]);
    return m;
  }

  static F2Matrix from_bits(const std::vector<std::vector<int>>& bits) {
    std::size_t rows = bits.size();
    std::size_t cols = rows ? bits[0].size() : 0;
    F2Matrix m(rows, cols);
    for (std::size_t r = 0; r < rows; ++r) {
      if (bits[r].size() != cols) throw std::invalid_argument("from_bits: ragged rows");
      for (std::size_t c = 0; c < cols; ++c)
        if (bits[r][c]) m.set(r, c, true);
    }
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  bool get(std::size_t r, std::size_t c) const {
    check(r, c);
    return (w_[r * stride_ + c / kWordBits] >> (c % kWordBits)) & 1u;
  }

  void set(std::size_t r, std::size_t c, bool b) {
    check(r, c);
    word_t mask = word_t{1} << (c % kWordBits);
    if (b)
      w_[r * stride_ + c / kWordBits] |= mask;
    else
      w_[r * stride_ + c / kWordBits] &= ~mask;
  }

  F2Vector row(std::size_t r) const {
    if (r >= rows_) throw std::out_of_range("row index");
    F2Vector v(cols_);
    for (std::size_t k = 0; k < stride_; ++k) v.w_[k] = w_[r * stride_ + k];
    return v;
  }

  void set_row(std::size_t r, const F2Vector& v) {
    if (r >= rows_ || v.dim() != cols_) throw std::invalid_argument("set_row: shape mismatch");
    for (std::size_t k = 0; k < stride_; ++k) w_[r * stride_ + k] = v.words()[k];
  }

  F2Vector col(std::size_t c) const {
    if (c >= cols_) throw std::out_of_range("col index");
    F2Vector v(rows_);
    for (std::size_t r = 0; r < rows_; ++r)
      if (get(r, c)) v.set(r, true);
    return v;
  }

  void set_col(std::size_t c, const F2Vector& v) {
    if (c >= cols_ || v.dim() != rows_) throw std::invalid_argument("set_col: shape mismatch");
    for (std::size_t r = 0; r < rows_; ++r) set(r, c, v.get(r));
  }

  void xor_row_into(std::size_t dst, std::size_t src) {
    for (std::size_t k = 0; k < stride_; ++k) w_[dst * stride_ + k] ^= w_[src * stride_ + k];
  }

  void swap_rows(std::size_t a, std::size_t b) {
    if (a == b) return;
    for (std::size_t k = 0; k < stride_; ++k)
      std::swap(w_[a * stride_ + k], w_[b * stride_ + k]);
  }

  F2Vector apply(const F2Vector& x) const {
    if (x.dim() != cols_) throw std::invalid_argument("apply: dimension mismatch");
    F2Vector y(rows_);
    for (std::size_t r = 0; r < rows_; ++r) {
      word_t acc = 0;
      for (std::size_t k = 0; k < stride_; ++k) acc ^= w_[r * stride_ + k] & x.words()[k];
      if (parity64(acc)) y.set(r, true);
    }
    return y;
  }

  F2Matrix operator*(const F2Matrix& rhs) const {
    if (cols_ != rhs.rows_) throw std::invalid_argument("matmul: shape mismatch");
    F2Matrix out(rows_, rhs.cols_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t k = 0; k < cols_; ++k)
        if (get(i, k))
          for (std::size_t w = 0; w < rhs.stride_; ++w)
            out.w_[i * out.stride_ + w] ^= rhs.w_[k * rhs.stride_ + w];
    return out;
  }

  F2Matrix transposed() const {
    F2Matrix t(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r)
      for (std::size_t c = 0; c < cols_; ++c)
        if (get(r, c)) t.set(c, r, true);
    return t;
  }

  F2Matrix kron(const F2Matrix& rhs) const {
    F2Matrix out(rows_ * rhs.rows_, cols_ * rhs.cols_);
    for (std::size_t i1 = 0; i1 < rows_; ++i1)
      for (std::size_t j1 = 0; j1 < cols_; ++j1)
        if (get(i1, j1))
          for (std::size_t i2 = 0; i2 < rhs.rows_; ++i2)
            for (std::size_t j2 = 0; j2 < rhs.cols_; ++j2)
              if (rhs.get(i2, j2)) out.set(i1 * rhs.rows_ + i2, j1 * rhs.cols_ + j2, true);
    return out;
  }

  bool is_zero() const {
    for (word_t w : w_)
      if (w) return false;
    return true;
  }

  bool operator==(const F2Matrix& o) const = default;

  // Row-major bit order; ties broken never (total on equal shapes).
  static bool bits_less(const F2Matrix& a, const F2Matrix& b) {
    if (a.rows_ != b.rows_) return a.rows_ < b.rows_;
    if (a.cols_ != b.cols_) return a.cols_ < b.cols_;
    for (std::size_t r = 0; r < a.rows_; ++r)
      for (std::size_t c = 0; c < a.cols_; ++c) {
        bool x = a.get(r, c), y = b.get(r, c);
        if (x != y) return y;
      }
    return false;
  }

  std::string str() const {
    std::string s;
    for (std::size_t r = 0; r < rows_; ++r) {
      for (std::size_t c = 0; c < cols_; ++c) s += get(r, c) ? '1' : '0';
      if (r + 1 < rows_) s += '\n';
    }
    return s;
  }

  // Compact canonical serialization, usable as a map key.
  std::string key() const {
    std::string s = std::to_string(rows_) + "x" + std::to_string(cols_) + ":";
    for (std::size_t r = 0; r < rows_; ++r)
      for (std::size_t c = 0; c < cols_; ++c) s += get(r, c) ? '1' : '0';
    return s;
  }

 private:
  void check(std::size_t r, std::size_t c) const {
    if (r >= rows_ || c >= cols_) throw std::out_of_range("F2Matrix index out of range");
  }

  std::size_t rows_ = 0, cols_ = 0, stride_ = 0;
  std::vector<word_t> w_;
};

inline F2Matrix hstack(const F2Matrix& a, const F2Matrix& b) {
  if (a.rows() != b.rows()) throw std::invalid_argument("hstack: row mismatch");
  F2Matrix out(a.rows(), a.cols() + b.cols());
  for (std::size_t r = 0; r < a.rows(); ++r) {
    for (std::size_t c = 0; c < a.cols(); ++c)
      if (a.get(r, c)) out.set(r, c, true);
    for (std::size_t c = 0; c < b.cols(); ++c)
      if (b.get(r, c)) out.set(r, a.cols() + c, true);
  }
  return out;
}

inline F2Matrix vstack(const F2Matrix& a, const F2Matrix& b) {
  if (a.cols() != b.cols()) throw std::invalid_argument("vstack: col mismatch");
  F2Matrix out(a.rows() + b.rows(), a.cols());
  for (std::size_t r = 0; r < a.rows(); ++r) out.set_row(r, a.row(r));
  for (std::size_t r = 0; r < b.rows(); ++r) out.set_row(a.rows() + r, b.row(r));
  return out;
}

inline F2Matrix mat_xor(const F2Matrix& a, const F2Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw std::invalid_argument("mat_xor: shape mismatch");
  F2Matrix out = a;
  for (std::size_t r = 0; r < a.rows(); ++r) out.set_row(r, a.row(r) ^ b.row(r));
  return out;
}

inline F2Matrix take_rows(const F2Matrix& m, std::size_t begin, std::size_t count) {
  if (begin + count > m.rows()) throw std::invalid_argument("take_rows: out of range");
  F2Matrix out(count, m.cols());
  for (std::size_t r = 0; r < count; ++r) out.set_row(r, m.row(begin + r));
  return out;
}

// Block-diagonal sum of two linear maps.
inline F2Matrix block_diag(const F2Matrix& a, const F2Matrix& b) {
  F2Matrix out(a.rows() + b.rows(), a.cols() + b.cols());
  for (std::size_t r = 0; r < a.rows(); ++r)
    for (std::size_t c = 0; c < a.cols(); ++c)
      if (a.get(r, c)) out.set(r, c, true);
  for (std::size_t r = 0; r < b.rows(); ++r)
    for (std::size_t c = 0; c < b.cols(); ++c)
      if (b.get(r, c)) out.set(a.rows() + r, a.cols() + c, true);
  return out;
}

// Reduced row echelon form; reports pivot columns if requested.
inline F2Matrix rref(F2Matrix m, std::vector<std::size_t>* pivots = nullptr) {
  std::size_t r = 0;
  for (std::size_t c = 0; c < m.cols() && r < m.rows(); ++c) {
    std::size_t p = r;
    while (p < m.rows() && !m.get(p, c)) ++p;
    if (p == m.rows()) continue;
    m.swap_rows(r, p);
    for (std::size_t i = 0; i < m.rows(); ++i)
      if (i != r && m.get(i, c)) m.xor_row_into(i, r);
    if (pivots) pivots->push_back(c);
    ++r;
  }
  return m;
}

inline std::size_t rank(const F2Matrix& m) {
  std::vector<std::size_t> piv;
  rref(m, &piv);
  return piv.size();
}

// A subspace of F2^ambient_dim, stored as a reduced row-echelon basis so
// equality of subspaces is bitwise equality of values.
struct Subspace {
  std::size_t ambient_dim = 0;
  F2Matrix basis;  // dim() rows, each nonzero, pivots strictly increasing

  std::size_t dim() const { return basis.rows(); }

  bool contains(const F2Vector& v) const {
    if (v.dim() != ambient_dim) throw std::invalid_argument("contains: dimension mismatch");
    F2Vector w = v;
    for (std::size_t r = 0; r < basis.rows(); ++r) {
      std::size_t p = basis.row(r).leading();
      if (w.get(p)) w ^= basis.row(r);
    }
    return w.is_zero();
  }

  // All 2^dim elements, ordered by coefficient pattern.
  std::vector<F2Vector> elements() const {
    if (dim() > 26) throw std::invalid_argument("elements: subspace too large");
    std::vector<F2Vector> out;
    out.reserve(std::size_t{1} << dim());
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << dim()); ++mask) {
      F2Vector v(ambient_dim);
      for (std::size_t r = 0; r < dim(); ++r)
        if ((mask >> r) & 1u) v ^= basis.row(r);
      out.push_back(v);
    }
    return out;
  }

  bool operator==(const Subspace& o) const = default;
};

inline Subspace span_basis(const std::vector<F2Vector>& vecs, std::size_t ambient_dim) {
  for (const auto& v : vecs)
    if (v.dim() != ambient_dim) throw std::invalid_argument("span_basis: dimension mismatch");
  F2Matrix m = rref(F2Matrix::from_rows(vecs, ambient_dim));
  std::size_t nz = 0;
  while (nz < m.rows() && !m.row(nz).is_zero()) ++nz;
  return Subspace{ambient_dim, take_rows(m, 0, nz)};
}

inline Subspace row_space(const F2Matrix& m) {
  std::vector<F2Vector> rows;
  rows.reserve(m.rows());
  for (std::size_t r = 0; r < m.rows(); ++r) rows.push_back(m.row(r));
  return span_basis(rows, m.cols());
}

// Basis of { x : M x = 0 }.
inline Subspace kernel_basis(const F2Matrix& m) {
  std::vector<std::size_t> piv;
  F2Matrix r = rref(m, &piv);
  std::vector<bool> is_piv(m.cols(), false);
  for (std::size_t p : piv) is_piv[p] = true;
  std::vector<F2Vector> gens;
  for (std::size_t c = 0; c < m.cols(); ++c) {
    if (is_piv[c]) continue;
    F2Vector v(m.cols());
    v.set(c, true);
    for (std::size_t i = 0; i < piv.size(); ++i)
      if (r.get(i, c)) v.set(piv[i], true);
    gens.push_back(v);
  }
  return span_basis(gens, m.cols());
}

// Solves M X = B for all columns of B at once.
inline std::optional<F2Matrix> solve_many(const F2Matrix& m, const F2Matrix& b) {
  if (m.rows() != b.rows()) throw std::invalid_argument("solve_many: shape mismatch");
  F2Matrix aug = hstack(m, b);
  std::size_t r = 0;
  std::vector<std::size_t> piv;
  for (std::size_t c = 0; c < m.cols() && r < aug.rows(); ++c) {
    std::size_t p = r;
    while (p < aug.rows() && !aug.get(p, c)) ++p;
    if (p == aug.rows()) continue;
    aug.swap_rows(r, p);
    for (std::size_t i = 0; i < aug.rows(); ++i)
      if (i != r && aug.get(i, c)) aug.xor_row_into(i, r);
    piv.push_back(c);
    ++r;
  }
  for (std::size_t i = r; i < aug.rows(); ++i)
    for (std::size_t c = m.cols(); c < aug.cols(); ++c)
      if (aug.get(i, c)) return std::nullopt;
  F2Matrix x(m.cols(), b.cols());
  for (std::size_t i = 0; i < piv.size(); ++i)
    for (std::size_t c = 0; c < b.cols(); ++c)
      if (aug.get(i, m.cols() + c)) x.set(piv[i], c, true);
  return x;
}

inline std::optional<F2Vector> solve(const F2Matrix& m, const F2Vector& rhs) {
  F2Matrix b(rhs.dim(), 1);
  b.set_col(0, rhs);
  auto x = solve_many(m, b);
  if (!x) return std::nullopt;
  return x->col(0);
}

inline std::optional<F2Matrix> inverse(const F2Matrix& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("inverse: not square");
  return solve_many(m, F2Matrix::identity(m.rows()));
}

// Coefficients of v in a reduced row-echelon basis, or nullopt if v is
// outside the span.
inline std::optional<F2Vector> express_in_rref(const F2Matrix& basis, const F2Vector& v) {
  F2Vector w = v;
  F2Vector coeff(basis.rows());
  for (std::size_t r = 0; r < basis.rows(); ++r) {
    F2Vector row = basis.row(r);
    std::size_t p = row.leading();
    if (p < w.dim() && w.get(p)) {
      w ^= row;
      coeff.set(r, true);
    }
  }
  if (!w.is_zero()) return std::nullopt;
  return coeff;
}

// Echelon structure built from (generator, image) pairs. Reducing a vector
// through it applies the linear extension of the generator assignment; the
// assignment is consistent iff every generator reduces to its own image.
class AugmentedRref {
 public:
  AugmentedRref(std::size_t dim, std::size_t img_dim) : dim_(dim), img_dim_(img_dim) {}

  void add(F2Vector v, F2Vector img) {
    if (v.dim() != dim_ || img.dim() != img_dim_)
      throw std::invalid_argument("AugmentedRref: dimension mismatch");
    for (const auto& [bv, bi] : rows_) {
      std::size_t p = bv.leading();
      if (v.get(p)) {
        v ^= bv;
        img ^= bi;
      }
    }
    if (v.is_zero()) return;
    std::size_t p = v.leading();
    for (auto& [bv, bi] : rows_) {
      if (bv.get(p)) {
        bv ^= v;
        bi ^= img;
      }
    }
    rows_.emplace_back(std::move(v), std::move(img));
    std::sort(rows_.begin(), rows_.end(), [](const auto& a, const auto& b) {
      return a.first.leading() < b.first.leading();
    });
  }

  std::optional<F2Vector> reduce(F2Vector v) const {
    F2Vector img(img_dim_);
    for (const auto& [bv, bi] : rows_) {
      std::size_t p = bv.leading();
      if (v.get(p)) {
        v ^= bv;
        img ^= bi;
      }
    }
    if (!v.is_zero()) return std::nullopt;
    return img;
  }

  std::size_t rank() const { return rows_.size(); }

  F2Matrix basis() const {
    F2Matrix m(rows_.size(), dim_);
    for (std::size_t r = 0; r < rows_.size(); ++r) m.set_row(r, rows_[r].first);
    return m;
  }

 private:
  std::size_t dim_, img_dim_;
  std::vector<std::pair<F2Vector, F2Vector>> rows_;  // kept in echelon order
};

inline std::uint64_t binomial(std::size_t n, std::size_t k) {
  if (k > n) return 0;
  std::uint64_t r = 1;
  for (std::size_t i = 0; i < k; ++i) r = r * (n - i) / (i + 1);
  return r;
}

// Number of k-dimensional subspaces of F2^n.
inline std::uint64_t gaussian_binomial(std::size_t n, std::size_t k) {
  if (k > n) return 0;
  std::vector<std::vector<std::uint64_t>> g(n + 1, std::vector<std::uint64_t>(k + 1, 0));
  for (std::size_t i = 0; i <= n; ++i) g[i][0] = 1;
  for (std::size_t i = 1; i <= n; ++i)
    for (std::size_t j = 1; j <= std::min(i, k); ++j)
      g[i][j] = g[i - 1][j - 1] + (std::uint64_t{1} << j) * g[i - 1][j];
  return g[n][k];
}

// All k-element subsets of {0..n-1} in lexicographic order.
inline std::vector<std::vector<std::size_t>> k_subsets(std::size_t n, std::size_t k) {
  std::vector<std::vector<std::size_t>> out;
  if (k > n) return out;
  std::vector<std::size_t> s(k);
  for (std::size_t i = 0; i < k; ++i) s[i] = i;
  while (true) {
    out.push_back(s);
    if (k == 0) break;
    std::size_t i = k;
    while (i-- > 0) {
      if (s[i] < n - k + i) {
        ++s[i];
        for (std::size_t j = i + 1; j < k; ++j) s[j] = s[j - 1] + 1;
        break;
      }
      if (i == 0) return out;
    }
  }
  return out;
}

// Lexicographic rank of a sorted k-subset of {0..n-1}.
inline std::size_t subset_index(std::size_t n, const std::vector<std::size_t>& s) {
  std::size_t k = s.size();
  std::size_t idx = 0;
  std::size_t prev = 0;
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t c = prev; c < s[i]; ++c)
      idx += static_cast<std::size_t>(binomial(n - 1 - c, k - 1 - i));
    prev = s[i] + 1;
  }
  return idx;
}

// Every k-dimensional subspace of F2^n exactly once, as echelon bases.
// Order: pivot-column sets lexicographically, then free entries by mask.
inline void for_each_subspace(std::size_t n, std::size_t k,
                              const std::function<void(const Subspace&)>& fn) {
  if (k > n) throw std::invalid_argument("for_each_subspace: k > n");
  if (k == 0) {
    fn(Subspace{n, F2Matrix(0, n)});
    return;
  }
  for (const auto& piv : k_subsets(n, k)) {
    std::vector<bool> is_piv(n, false);
    for (std::size_t p : piv) is_piv[p] = true;
    std::vector<std::pair<std::size_t, std::size_t>> free_pos;  // (row, col)
    for (std::size_t r = 0; r < k; ++r)
      for (std::size_t c = piv[r] + 1; c < n; ++c)
        if (!is_piv[c]) free_pos.emplace_back(r, c);
    std::uint64_t total = std::uint64_t{1} << free_pos.size();
    for (std::uint64_t mask = 0; mask < total; ++mask) {
      F2Matrix basis(k, n);
      for (std::size_t r = 0; r < k; ++r) basis.set(r, piv[r], true);
      for (std::size_t t = 0; t < free_pos.size(); ++t)
        if ((mask >> t) & 1u) basis.set(free_pos[t].first, free_pos[t].second, true);
      fn(Subspace{n, basis});
    }
  }
}

inline std::vector<Subspace> enumerate_subspaces(std::size_t n, std::size_t k) {
  std::vector<Subspace> out;
  out.reserve(gaussian_binomial(n, k));
  for_each_subspace(n, k, [&](const Subspace& s) { out.push_back(s); });
  return out;
}

// Coordinates of v_1 ^ ... ^ v_k in the basis of Lambda^k(F2^n) indexed by
// k-subsets in lexicographic order. The coefficient on a subset S is the
// determinant of the k x k minor on columns S.
inline F2Vector wedge_coordinates(const std::vector<F2Vector>& vs, std::size_t n) {
  std::size_t k = vs.size();
  for (const auto& v : vs)
    if (v.dim() != n) throw std::invalid_argument("wedge_coordinates: dimension mismatch");
  if (k > n) return F2Vector(0);
  F2Vector out(static_cast<std::size_t>(binomial(n, k)));
  if (k == 0) {
    out.set(0, true);
    return out;
  }
  auto subsets = k_subsets(n, k);
  for (std::size_t si = 0; si < subsets.size(); ++si) {
    const auto& s = subsets[si];
    // k x k minor, one word per row since k <= 64
    std::vector<word_t> rowbits(k, 0);
    for (std::size_t r = 0; r < k; ++r)
      for (std::size_t c = 0; c < k; ++c)
        if (vs[r].get(s[c])) rowbits[r] |= word_t{1} << c;
    // determinant over F2 by elimination
    bool det = true;
    for (std::size_t c = 0; c < k && det; ++c) {
      word_t mask = word_t{1} << c;
      std::size_t p = c;
      while (p < k && !(rowbits[p] & mask)) ++p;
      if (p == k) {
        det = false;
        break;
      }
      std::swap(rowbits[c], rowbits[p]);
      for (std::size_t r = c + 1; r < k; ++r)
        if (rowbits[r] & mask) rowbits[r] ^= rowbits[c];
    }
    if (det) out.set(si, true);
  }
  return out;
}

}  // namespace fquad
