#pragma once

// The theorem harness: named checks that re-derive the exact sequences,
// filtrations and composition-series identities on a roster of small
// objects, reporting dimensions and ranks as exact integer equalities.
// Reports are deterministic for a fixed seed (runtime_ms aside).

#include <chrono>
#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include "fquad/functors.hpp"
#include "fquad/sampling.hpp"
#include "json.hpp"

namespace fquad {

inline constexpr std::uint64_t kDefaultSeed = 1729;

struct CheckRow {
  std::string object;
  std::vector<std::pair<std::string, std::int64_t>> quantities;
  bool ok = true;

  CheckRow& add(const std::string& key, std::int64_t value) {
    quantities.emplace_back(key, value);
    return *this;
  }

  CheckRow& require(const std::string& key, bool condition) {
    quantities.emplace_back(key, condition ? 1 : 0);
    ok = ok && condition;
    return *this;
  }
};

struct CheckReport {
  std::string check_name;
  std::vector<std::string> roster;
  std::vector<CheckRow> rows;
  bool passed = true;
  std::uint64_t seed = kDefaultSeed;
  std::int64_t runtime_ms = 0;
  std::string label;  // extra qualification, e.g. "evidence at budget 10"
  nlohmann::ordered_json samples;  // seeded inputs, reported in full

  void finish() {
    passed = true;
    for (const auto& r : rows) passed = passed && r.ok;
  }

  nlohmann::ordered_json to_json() const {
    nlohmann::ordered_json j;
    j["check"] = check_name;
    j["roster"] = roster;
    nlohmann::ordered_json jrows = nlohmann::ordered_json::array();
    for (const auto& r : rows) {
      nlohmann::ordered_json jr;
      jr["object"] = r.object;
      for (const auto& [k, v] : r.quantities) jr[k] = v;
      jr["ok"] = r.ok;
      jrows.push_back(jr);
    }
    j["rows"] = jrows;
    j["passed"] = passed;
    j["seed"] = seed;
    if (!label.empty()) j["label"] = label;
    if (!samples.is_null()) j["samples"] = samples;
    j["runtime_ms"] = runtime_ms;
    return j;
  }

  // Long-format flattening: check,object,quantity,value,ok
  void write_csv(std::ostream& os) const {
    for (const auto& r : rows)
      for (const auto& [k, v] : r.quantities)
        os << check_name << "," << r.object << "," << k << "," << v << ","
           << (r.ok ? 1 : 0) << "\n";
  }
};

struct VerifyOptions {
  std::vector<std::string> roster;  // space expressions; empty = default
  std::uint64_t seed = kDefaultSeed;
  int alpha = -1;  // -1 = both
  std::size_t nmax = 3;
  std::size_t dmax = 2;
  std::size_t samples = 100;
};

inline std::vector<std::string> default_roster_names() {
  return {"H0", "H1", "H0+H0", "H0+H1", "H0+H0+H0"};
}

inline std::vector<std::string> all_check_names() {
  return {"check_decomposition", "check_s2_ses",        "check_mu_complex",
          "check_KL_ses",        "check_layers",        "check_simplicity_evidence",
          "check_pairwise_noniso", "check_category_laws"};
}

namespace detail {

inline std::vector<std::pair<std::string, QuadSpace>> resolve_roster(const VerifyOptions& o) {
  std::vector<std::pair<std::string, QuadSpace>> out;
  for (const auto& name : (o.roster.empty() ? default_roster_names() : o.roster))
    out.emplace_back(name, parse_space(name));
  return out;
}

inline std::vector<bool> alphas(const VerifyOptions& o) {
  if (o.alpha == 0) return {false};
  if (o.alpha == 1) return {true};
  return {false, true};
}

class Stopwatch {
 public:
  Stopwatch() : start_(std::chrono::steady_clock::now()) {}
  std::int64_t ms() const {
    return std::chrono::duration_cast<std::chrono::milliseconds>(
               std::chrono::steady_clock::now() - start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

inline nlohmann::ordered_json morphism_sample_json(const TqMorphism& t) {
  nlohmann::ordered_json j;
  j["source"] = t.source().key();
  j["target"] = t.target().key();
  j["apex"] = t.apex().key();
  j["left"] = t.left.matrix().key();
  j["right"] = t.right.matrix().key();
  return j;
}

// Naturality suite morphisms among the roster objects (endomorphism
// families plus block inclusions and retractions against _|_ H0).
inline std::vector<TqMorphism> roster_morphisms(
    const std::vector<std::pair<std::string, QuadSpace>>& roster, Sampler& s,
    std::size_t max_dim = 4) {
  std::vector<TqMorphism> ts;
  for (const auto& [name, w] : roster) {
    if (w.dim() > max_dim) continue;
    for (const auto& t : generating_morphisms(w, w, s, 2)) ts.push_back(t);
    for (const auto& t : generating_morphisms(w, orthogonal_sum(w, hyperbolic(false)), s, 1))
      ts.push_back(t);
    for (const auto& t : generating_morphisms(orthogonal_sum(w, hyperbolic(false)), w, s, 1))
      ts.push_back(t);
  }
  return ts;
}

// The endomorphism family of V used for generation evidence, built from
// the shapes of the simplicity argument. Everything stays within the apex
// budget; the maximum apex dimension actually used is reported.
inline std::vector<TqMorphism> budgeted_endo_family(const QuadSpace& v, bool alpha, Sampler& s,
                                                    std::size_t* max_apex) {
  std::vector<TqMorphism> out;
  out.push_back(tq_identity(v));
  // isometry cospans
  if (v.dim() <= 4) {
    for (const auto& g : orthogonal_group(v)) out.push_back(tq_from_isometry(g));
  } else {
    for (int i = 0; i < 8; ++i) out.push_back(tq_from_isometry(random_orthogonal(v, s)));
  }
  const auto& embs = iso_functor(alpha)->embeddings(v);
  for (const auto& h : embs) {
    F2Vector hx = h.matrix().col(0);
    // a partner with B(hx, w) = 1
    F2Vector partner(v.dim());
    for (std::uint64_t i = 1; i < (std::uint64_t{1} << v.dim()); ++i) {
      F2Vector cand = F2Vector::from_index(v.dim(), i);
      if (v.b(hx, cand)) {
        partner = cand;
        break;
      }
    }
    // symplectic complement of span{hx, partner}
    Subspace comp = perp_subspace(v, F2Matrix::from_rows({hx, partner}, v.dim()));
    QuadSpace compform = induced_subspace_form(v, comp.basis);
    auto comp_pairs = symplectic_basis(compform);
    std::size_t m = comp_pairs.size();

    // basis of V adapted to the decomposition
    std::vector<F2Vector> basis = {hx, partner};
    for (const auto& [a, b] : comp_pairs) {
      F2Vector av(v.dim()), bv(v.dim());
      for (std::size_t t = 0; t < comp.dim(); ++t) {
        if (a.get(t)) av ^= comp.basis.row(t);
        if (b.get(t)) bv ^= comp.basis.row(t);
      }
      basis.push_back(av);
      basis.push_back(bv);
    }
    F2Matrix bcols(v.dim(), v.dim());
    for (std::size_t i = 0; i < basis.size(); ++i) bcols.set_col(i, basis[i]);
    auto binv = inverse(bcols);
    if (!binv) throw std::logic_error("budgeted_endo_family: adapted basis is degenerate");

    // retraction through V _|_ H0^(2m+1): every adapted basis vector except
    // h(x) picks up a fresh hyperbolic a-vector
    {
      QuadSpace apex = orthogonal_sum(v, orthogonal_power(hyperbolic(false), 2 * m + 1));
      F2Matrix img(apex.dim(), v.dim());
      for (std::size_t i = 0; i < basis.size(); ++i) {
        F2Vector c(apex.dim());
        for (std::size_t r = 0; r < v.dim(); ++r)
          if (basis[i].get(r)) c.set(r, true);
        if (i > 0) c.set(v.dim() + 2 * (i - 1), true);
        img.set_col(i, c);
      }
      F2Matrix f = img * *binv;  // image of the standard basis
      out.push_back(make_tq(IsoMap(v, apex, f), inclusion_block(v, apex, 0)));
    }

    // identity on span{hx, partner} orthogonally summed with a lift of an
    // arbitrary endomorphism of the complement, conjugated back
    QuadSpace w0 = induced_subspace_form(v, F2Matrix::from_rows({hx, partner}, v.dim()));
    QuadSpace adapted = orthogonal_sum(w0, compform);
    IsoMap change(v, adapted, *binv);
    TqMorphism to_adapted = tq_from_isometry(change);
    auto chinv = inverse(change.matrix());
    TqMorphism from_adapted = tq_from_isometry(IsoMap(adapted, v, *chinv));
    std::size_t endo_count = std::size_t{1} << (compform.dim() * compform.dim());
    for (std::uint64_t code = 0; code < endo_count; ++code) {
      F2Matrix g(compform.dim(), compform.dim());
      for (std::size_t i = 0; i < compform.dim() * compform.dim(); ++i)
        if ((code >> i) & 1u) g.set(i / compform.dim(), i % compform.dim(), true);
      TqMorphism lifted = compact_lift_linear(g, compform, compform);
      TqMorphism summed = tq_block_sum(tq_identity(w0), lifted);
      out.push_back(compose_tq(compose_tq(to_adapted, summed), from_adapted));
    }
  }
  if (max_apex) {
    *max_apex = 0;
    for (const auto& t : out) *max_apex = std::max(*max_apex, t.apex().dim());
  }
  return out;
}

// Closure of span{v} under the family action inside F(V).
inline Subspace orbit_span(const std::vector<F2Matrix>& family, const F2Vector& v) {
  Subspace span = span_basis({v}, v.dim());
  while (true) {
    std::vector<F2Vector> next;
    for (std::size_t r = 0; r < span.dim(); ++r) next.push_back(span.basis.row(r));
    for (const auto& m : family)
      for (std::size_t r = 0; r < span.dim(); ++r) next.push_back(m.apply(span.basis.row(r)));
    Subspace bigger = span_basis(next, v.dim());
    if (bigger.dim() == span.dim()) return bigger;
    span = bigger;
  }
}

}  // namespace detail

// Lemma-2.4 shape: the eta-indexed mixed pieces fill the tensor product.
inline CheckReport check_decomposition(const VerifyOptions& o) {
  detail::Stopwatch timer;
  CheckReport rep;
  rep.check_name = "check_decomposition";
  rep.seed = o.seed;
  auto roster = detail::resolve_roster(o);
  roster.insert(roster.begin(), {"0", zero_space()});
  for (const auto& [name, w] : roster) rep.roster.push_back(name);
  for (bool dalpha : detail::alphas(o)) {
    QuadSpace d = point_space(dalpha);
    auto iso = iso_functor_for(d);
    for (const auto& [name, w] : roster) {
      CheckRow row;
      row.object = name;
      row.add("D_alpha", dalpha);
      std::size_t tensor_dim = pf_functor()->value(w).dim * iso->value(w).dim;
      std::size_t mix0 = mix_general_functor(1, d, F2Vector::from_bits({0}))->value(w).dim;
      std::size_t mix1 = mix_general_functor(1, d, F2Vector::from_bits({1}))->value(w).dim;
      row.add("dim_tensor", tensor_dim);
      row.add("dim_mix_eta0", mix0);
      row.add("dim_mix_eta1", mix1);
      row.require("decomposes", tensor_dim == mix0 + mix1);
      rep.rows.push_back(row);
    }
  }
  rep.finish();
  rep.runtime_ms = timer.ms();
  return rep;
}

// The S2 short exact sequence 0 -> m -> Mix -> m -> 0 for beta = 1.
inline CheckReport check_s2_ses(const VerifyOptions& o) {
  detail::Stopwatch timer;
  CheckReport rep;
  rep.check_name = "check_s2_ses";
  rep.seed = o.seed;
  auto roster = detail::resolve_roster(o);
  for (const auto& [name, w] : roster) rep.roster.push_back(name);
  for (bool alpha : detail::alphas(o)) {
    auto mix = mix_functor(alpha, true);
    auto m = m_functor(alpha);
    for (const auto& [name, w] : roster) {
      CheckRow row;
      row.object = name;
      row.add("alpha", alpha);
      F2Matrix tau = mix->tau(w);
      std::size_t fixed = 0;
      for (std::size_t i = 0; i < tau.rows(); ++i)
        if (tau.get(i, i)) ++fixed;
      std::size_t dim_mix = mix->value(w).dim;
      std::size_t dim_m = m->value(w).dim;
      std::size_t norm_rank = rank(mat_xor(tau, F2Matrix::identity(tau.rows())));
      row.add("dim_mix", dim_mix);
      row.add("dim_m", dim_m);
      row.add("fixed_labels", fixed);
      row.add("norm_rank", norm_rank);
      row.require("free_action", fixed == 0);
      row.require("dim_doubles", dim_mix == 2 * dim_m);
      row.require("norm_rank_is_dim_m", norm_rank == dim_m);
      rep.rows.push_back(row);
    }
  }
  rep.finish();
  rep.runtime_ms = timer.ms();
  return rep;
}

// Exactness of ... -> Lambda^n (x) iso -> Lambda^(n+1) (x) iso -> ...
inline CheckReport check_mu_complex(const VerifyOptions& o) {
  detail::Stopwatch timer;
  CheckReport rep;
  rep.check_name = "check_mu_complex";
  rep.seed = o.seed;
  auto roster = detail::resolve_roster(o);
  for (const auto& [name, w] : roster) rep.roster.push_back(name);
  for (bool alpha : detail::alphas(o)) {
    for (const auto& [name, w] : roster) {
      for (std::size_t n = 0; n <= o.nmax; ++n) {
        CheckRow row;
        row.object = name;
        row.add("alpha", alpha);
        row.add("n", n);
        F2Matrix mun = mu_n_matrix(alpha, n, w);
        F2Matrix mun1 = mu_n_matrix(alpha, n + 1, w);
        std::size_t r = rank(mun);
        std::size_t k = kernel_basis(mun1).dim();
        row.add("rank_mu_n", r);
        row.add("ker_mu_n1", k);
        row.require("composite_zero", (mun1 * mun).is_zero());
        row.require("exact", r == k);
        rep.rows.push_back(row);
      }
    }
  }
  rep.finish();
  rep.runtime_ms = timer.ms();
  return rep;
}

// K/L bookkeeping: dim(Lambda^n (x) iso) = dim K^n + dim K^(n+1),
// dim K^(n+1) = dim L^(n+1) + dim L^n, nu_tilde surjective, dual routes
// agree, and sigma: K^1 -> iso is a natural isomorphism.
inline CheckReport check_KL_ses(const VerifyOptions& o) {
  detail::Stopwatch timer;
  CheckReport rep;
  rep.check_name = "check_KL_ses";
  rep.seed = o.seed;
  auto roster = detail::resolve_roster(o);
  for (const auto& [name, w] : roster) rep.roster.push_back(name);
  Sampler s(o.seed);
  auto ts = detail::roster_morphisms(roster, s);
  for (bool alpha : detail::alphas(o)) {
    for (const auto& [name, w] : roster) {
      for (std::size_t n = 1; n <= o.nmax; ++n) {
        CheckRow row;
        row.object = name;
        row.add("alpha", alpha);
        row.add("n", n);
        std::size_t lam = tensor_functor(lambda_functor(n), iso_functor(alpha))->value(w).dim;
        std::size_t kn = k_functor(alpha, n)->value(w).dim;
        std::size_t kn1 = k_functor(alpha, n + 1)->value(w).dim;
        std::size_t ln = l_functor(alpha, n)->value(w).dim;
        std::size_t ln1 = l_functor(alpha, n + 1)->value(w).dim;
        row.add("dim_lambda_iso", lam);
        row.add("dim_K_n", kn);
        row.add("dim_K_n1", kn1);
        row.add("dim_L_n", ln);
        row.add("dim_L_n1", ln1);
        row.require("K_ses", lam == kn + kn1);
        row.require("L_ses", kn1 == ln1 + ln);
        row.require("nu_tilde_onto", rank(nat_nu_tilde(alpha, n).at(w)) == ln);
        row.require("K_dual_routes", k_functor(alpha, n)->basis(w) == k_span_basis(alpha, n, w));
        row.require("L_dual_routes",
                    n == 1 || l_functor(alpha, n)->basis(w) == l_span_basis(alpha, n, w));
        rep.rows.push_back(row);
      }
      CheckRow srow;
      srow.object = name;
      srow.add("alpha", alpha);
      F2Matrix sig = nat_sigma_iso(alpha).at(w);
      srow.add("dim_K1", sig.cols());
      srow.add("dim_iso", sig.rows());
      srow.require("sigma_bijective", sig.rows() == sig.cols() && rank(sig) == sig.rows());
      rep.rows.push_back(srow);
    }
    CheckRow nrow;
    nrow.object = "(morphism family)";
    nrow.add("alpha", alpha);
    nrow.add("family_size", ts.size());
    nrow.require("sigma_natural", natural_check(nat_sigma_iso(alpha), ts));
    rep.rows.push_back(nrow);
  }
  rep.finish();
  rep.runtime_ms = timer.ms();
  return rep;
}

// Layer identities of the filtration of m: the induced map onto L^(d+1) is
// an isomorphism, the head has the dimension of iso, and the filtration
// stages on H0^(d+1) are nonzero through the explicit witness element.
inline CheckReport check_layers(const VerifyOptions& o) {
  detail::Stopwatch timer;
  CheckReport rep;
  rep.check_name = "check_layers";
  rep.seed = o.seed;
  auto roster = detail::resolve_roster(o);
  for (const auto& [name, w] : roster) rep.roster.push_back(name);
  for (bool alpha : detail::alphas(o)) {
    for (const auto& [name, w] : roster) {
      for (std::size_t d = 0; d <= o.dmax; ++d) {
        CheckRow row;
        row.object = name;
        row.add("alpha", alpha);
        row.add("d", d);
        std::size_t kd = kd_m_functor(alpha, d)->value(w).dim;
        std::size_t kd1 = kd_m_functor(alpha, d + 1)->value(w).dim;
        std::size_t ldim = l_functor(alpha, d + 1)->value(w).dim;
        row.add("dim_kd_m", kd);
        row.add("dim_kd1_m", kd1);
        row.add("dim_L", ldim);
        row.require("layer_dim", kd - kd1 == ldim);
        F2Matrix sl = nat_sigma_layer(alpha, d).at(w);
        bool inj = rank(sl) == kd - kd1;
        bool into = true;
        const F2Matrix& lb = l_functor(alpha, d + 1)->basis(w);
        for (std::size_t c = 0; c < sl.cols() && into; ++c)
          if (!express_in_rref(lb, sl.col(c))) into = false;
        row.require("sigma_injective", inj);
        row.require("sigma_hits_L", into && rank(sl) == ldim);
        if (d == 0) {
          std::size_t head = kd - kd1;
          std::size_t iso_dim = iso_functor(alpha)->value(w).dim;
          row.add("head_dim", head);
          row.add("dim_iso", iso_dim);
          row.require("head_is_iso", head == iso_dim);
        }
        rep.rows.push_back(row);
      }
    }
    // nonvanishing of k_d m on H0^(d+1) via the explicit witness
    for (std::size_t d = 0; d <= o.dmax; ++d) {
      CheckRow row;
      row.object = "H0^" + std::to_string(d + 1);
      row.add("alpha", alpha);
      row.add("d", d);
      QuadSpace w = orthogonal_power(hyperbolic(false), d + 1);
      auto m = m_functor(alpha);
      // pair {a0, b0} for alpha=1, {a0, a0+b0} for alpha=0; translated over
      // the span of one a-vector per extra block
      F2Vector y(w.dim()), yp(w.dim());
      y.set(0, true);
      if (alpha)
        yp.set(1, true);
      else {
        yp.set(0, true);
        yp.set(1, true);
      }
      std::vector<F2Vector> vs;
      for (std::size_t i = 0; i < d; ++i) {
        F2Vector vi(w.dim());
        vi.set(2 * (i + 1), true);
        vs.push_back(vi);
      }
      Subspace lsub = span_basis(vs, w.dim());
      F2Vector xm(m->value(w).dim);
      for (const auto& z : lsub.elements()) {
        std::size_t idx = m->upair_index(w, y ^ z, yp ^ z);
        if (idx == IsoFunctor::npos) throw std::logic_error("check_layers: witness pair missing");
        xm.set(idx, xm.get(idx) ^ true);
      }
      auto coeff = express_in_rref(kd_m_functor(alpha, d)->basis(w), xm);
      bool in_kd = coeff.has_value();
      bool nonzero_image = false;
      if (in_kd) {
        std::size_t nh = iso_functor(alpha)->value(w).dim;
        F2Matrix composite =
            nat_g_d(d).at(w).kron(F2Matrix::identity(nh)) * nat_i_d(alpha, d).at(w);
        nonzero_image = !composite.apply(*coeff).is_zero();
      }
      row.add("dim_kd_m", kd_m_functor(alpha, d)->value(w).dim);
      row.require("witness_in_kd_m", in_kd);
      row.require("witness_nonzero_under_gd_id", nonzero_image);
      row.require("kd_m_nonzero", kd_m_functor(alpha, d)->value(w).dim > 0);
      rep.rows.push_back(row);
    }
  }
  // head identification m/k_1 m = iso: dimension equality is covered by the
  // d = 0 rows; naturality of the induced map is checked here against the
  // generating morphism family. Evidence, not a certified theorem.
  {
    Sampler s(o.seed);
    auto ts = detail::roster_morphisms(roster, s);
    for (bool alpha : detail::alphas(o)) {
      CheckRow row;
      row.object = "(morphism family)";
      row.add("alpha", alpha);
      row.add("family_size", ts.size());
      row.require("head_map_natural", natural_check(nat_sigma_layer(alpha, 0), ts));
      rep.rows.push_back(row);
    }
  }
  rep.finish();
  rep.label = "head identification reported as evidence, not theorem-certified";
  rep.runtime_ms = timer.ms();
  return rep;
}

// Generation evidence for the simplicity of L^n: every sampled nonzero
// vector generates the full value under the budgeted endomorphism family.
// This is evidence, not a proof; the label records the apex budget.
inline CheckReport check_simplicity_evidence(const VerifyOptions& o) {
  detail::Stopwatch timer;
  CheckReport rep;
  rep.check_name = "check_simplicity_evidence";
  rep.seed = o.seed;
  auto roster = detail::resolve_roster(o);
  for (const auto& [name, w] : roster) rep.roster.push_back(name);
  Sampler s(o.seed);
  std::size_t budget_seen = 0;
  std::size_t nmax = std::min<std::size_t>(o.nmax, 2);
  for (bool alpha : detail::alphas(o)) {
    for (const auto& [name, w] : roster) {
      if (w.dim() > 4 || w.dim() == 0) continue;
      std::size_t max_apex = 0;
      auto family = detail::budgeted_endo_family(w, alpha, s, &max_apex);
      budget_seen = std::max(budget_seen, max_apex);
      for (std::size_t n = 1; n <= nmax; ++n) {
        CheckRow row;
        row.object = name;
        row.add("alpha", alpha);
        row.add("n", n);
        auto l = l_functor(alpha, n);
        std::size_t dim = l->value(w).dim;
        row.add("dim_L", dim);
        row.add("family_size", family.size());
        row.add("budget_apex", max_apex);
        if (dim == 0) {
          row.add("vectors_checked", 0);
          row.require("all_generate", true);
          rep.rows.push_back(row);
          continue;
        }
        std::vector<F2Matrix> mats;
        mats.reserve(family.size());
        for (const auto& t : family) mats.push_back(l->matrix(t));
        std::vector<F2Vector> vectors;
        std::uint64_t total = (std::uint64_t{1} << dim) - 1;
        bool exhaustive = total <= 200;
        if (exhaustive) {
          for (std::uint64_t i = 1; i <= total; ++i)
            vectors.push_back(F2Vector::from_index(dim, i));
        } else {
          nlohmann::ordered_json jv = nlohmann::ordered_json::array();
          for (int i = 0; i < 200; ++i) {
            F2Vector v(dim);
            while (v.is_zero())
              for (std::size_t t = 0; t < dim; ++t) v.set(t, s.bit());
            vectors.push_back(v);
            jv.push_back(v.str());
          }
          rep.samples["vectors:" + name + ":a=" + std::to_string(alpha) +
                      ",n=" + std::to_string(n)] = jv;
        }
        bool all = true;
        for (const auto& v : vectors)
          if (detail::orbit_span(mats, v).dim() != dim) {
            all = false;
            break;
          }
        row.add("vectors_checked", vectors.size());
        row.add("exhaustive", exhaustive ? 1 : 0);
        row.require("all_generate", all);
        rep.rows.push_back(row);
      }
    }
  }
  // negative control: Lambda^1 (x) iso is not simple; a vector of K^1
  // must fail to generate it
  {
    CheckRow row;
    row.object = "H0+H0";
    row.add("alpha", 1);
    QuadSpace w = parse_space("H0+H0");
    std::size_t max_apex = 0;
    auto family = detail::budgeted_endo_family(w, true, s, &max_apex);
    auto amb = tensor_functor(lambda_functor(1), iso_functor(true));
    std::vector<F2Matrix> mats;
    for (const auto& t : family) mats.push_back(amb->matrix(t));
    F2Vector v = k_functor(true, 1)->basis(w).row(0);
    std::size_t orbit = detail::orbit_span(mats, v).dim();
    row.add("ambient_dim", amb->value(w).dim);
    row.add("orbit_dim", orbit);
    row.require("negative_control_fails_to_generate", orbit < amb->value(w).dim);
    rep.rows.push_back(row);
  }
  rep.finish();
  rep.label = "evidence at apex budget " + std::to_string(budget_seen) + "; not a proof";
  rep.runtime_ms = timer.ms();
  return rep;
}

// Distinguishing data for the L family: minimal supports d(n), dimensions
// there, and witness morphisms separating the two alpha families.
inline CheckReport check_pairwise_noniso(const VerifyOptions& o) {
  detail::Stopwatch timer;
  CheckReport rep;
  rep.check_name = "check_pairwise_noniso";
  rep.seed = o.seed;
  std::size_t nmax = std::min<std::size_t>(o.nmax, 3);
  std::size_t mmax = 3;
  for (std::size_t m = 0; m <= mmax; ++m)
    rep.roster.push_back("H0^" + std::to_string(m));

  struct Entry {
    std::size_t n;
    bool alpha;
    std::size_t d;  // minimal m with L^n(H0^m) != 0
    std::vector<std::size_t> dims;
  };
  std::vector<Entry> table;
  for (std::size_t n = 1; n <= nmax; ++n) {
    for (bool alpha : {false, true}) {
      Entry e{n, alpha, mmax + 1, {}};
      for (std::size_t m = 0; m <= mmax; ++m) {
        QuadSpace w = orthogonal_power(hyperbolic(false), m);
        std::size_t dim = l_functor(alpha, n)->value(w).dim;
        e.dims.push_back(dim);
        if (dim > 0 && e.d > mmax) e.d = m;
      }
      CheckRow row;
      row.object = "L:n=" + std::to_string(n) + ",a=" + std::to_string(alpha);
      row.add("d_min", e.d);
      for (std::size_t m = 0; m <= mmax; ++m)
        row.add("dim_at_H0^" + std::to_string(m), e.dims[m]);
      row.require("has_support", e.d <= mmax);
      rep.rows.push_back(row);
      table.push_back(e);
    }
  }
  // pairwise distinction
  for (std::size_t i = 0; i < table.size(); ++i) {
    for (std::size_t j = i + 1; j < table.size(); ++j) {
      const Entry& a = table[i];
      const Entry& b = table[j];
      CheckRow row;
      row.object = "L:n=" + std::to_string(a.n) + ",a=" + std::to_string(a.alpha) +
                   " vs L:n=" + std::to_string(b.n) + ",a=" + std::to_string(b.alpha);
      int method = 0;
      if (a.d != b.d)
        method = 1;  // minimal supports differ
      else if (a.dims[a.d] != b.dims[b.d])
        method = 2;  // dimensions at the minimal support differ
      // a witness morphism with L(a) nonzero and L(b) zero separates the
      // two alpha families regardless of the table; demonstrate it whenever
      // the degrees agree and alpha differs, and fall back to it otherwise
      bool want_witness = a.alpha != b.alpha && (method == 0 || a.n == b.n);
      if (want_witness) {
        std::size_t m = std::max({a.d, b.d, std::size_t{1}});
        if (2 * m <= 4) {
          QuadSpace w = orthogonal_power(hyperbolic(false), m);
          Sampler s(o.seed);
          std::size_t dummy = 0;
          auto family = detail::budgeted_endo_family(w, a.alpha, s, &dummy);
          bool found = false;
          for (const auto& t : family) {
            if (t.apex().dim() <= w.dim()) continue;  // want the retraction shapes
            if (!l_functor(a.alpha, a.n)->matrix(t).is_zero() &&
                l_functor(b.alpha, b.n)->matrix(t).is_zero()) {
              found = true;
              break;
            }
          }
          row.require("witness_morphism", found);
          if (method == 0 && found) method = 3;
        }
      }
      row.add("method", method);
      row.require("distinguished", method != 0);
      rep.rows.push_back(row);
    }
  }
  rep.finish();
  rep.runtime_ms = timer.ms();
  return rep;
}

// Operational soundness of the category layer: unit laws, functoriality,
// associativity of evaluation, relation-move invariance, epsilon laws and
// the exhaustive Witt extension check in dimension <= 4.
inline CheckReport check_category_laws(const VerifyOptions& o) {
  detail::Stopwatch timer;
  CheckReport rep;
  rep.check_name = "check_category_laws";
  rep.seed = o.seed;
  auto roster = detail::resolve_roster(o);
  for (const auto& [name, w] : roster) rep.roster.push_back(name);
  std::vector<QuadSpace> objs;
  for (const auto& [name, w] : roster)
    if (w.dim() >= 2 && w.dim() <= 4) objs.push_back(w);
  if (objs.empty()) objs.push_back(hyperbolic(false));
  Sampler s(o.seed);
  std::vector<FunctorPtr> fs = {iso_functor(false),      iso_functor(true),
                                mix_functor(false, true), mix_functor(true, true),
                                m_functor(true),          lambda_functor(2)};

  nlohmann::ordered_json sampled_units = nlohmann::ordered_json::array();
  nlohmann::ordered_json sampled_pairs = nlohmann::ordered_json::array();

  CheckRow units;
  units.object = "(seeded morphisms)";
  std::size_t unit_checked = 0;
  bool unit_ok = true;
  for (std::size_t i = 0; i < std::max<std::size_t>(o.samples / 2, 50); ++i) {
    const QuadSpace& v = objs[s.index(objs.size())];
    const QuadSpace& w = objs[s.index(objs.size())];
    TqMorphism t = random_cospan(v, w, s);
    sampled_units.push_back(detail::morphism_sample_json(t));
    TqMorphism l = compose_tq(tq_identity(v), t);
    TqMorphism r = compose_tq(t, tq_identity(w));
    for (const auto& f : fs) {
      F2Matrix ref = f->matrix(t);
      if (!(f->matrix(l) == ref) || !(f->matrix(r) == ref)) unit_ok = false;
    }
    ++unit_checked;
  }
  units.add("count", unit_checked);
  units.require("unit_laws", unit_ok);
  rep.rows.push_back(units);

  CheckRow funct;
  funct.object = "(seeded pairs)";
  bool funct_ok = true;
  bool eps_ok = true;
  std::size_t pairs_checked = 0;
  for (std::size_t i = 0; i < o.samples; ++i) {
    const QuadSpace& v = objs[s.index(objs.size())];
    const QuadSpace& w = objs[s.index(objs.size())];
    const QuadSpace& z = objs[s.index(objs.size())];
    TqMorphism t1 = random_cospan(v, w, s);
    TqMorphism t2 = random_cospan(w, z, s);
    nlohmann::ordered_json jp;
    jp["first"] = detail::morphism_sample_json(t1);
    jp["second"] = detail::morphism_sample_json(t2);
    sampled_pairs.push_back(jp);
    TqMorphism c = compose_tq(t1, t2);
    if (!(epsilon(c) == epsilon(t2) * epsilon(t1))) eps_ok = false;
    for (const auto& f : fs)
      if (!(f->matrix(c) == f->matrix(t2) * f->matrix(t1))) funct_ok = false;
    ++pairs_checked;
  }
  funct.add("count", pairs_checked);
  funct.require("functoriality", funct_ok);
  funct.require("epsilon_functorial", eps_ok);
  rep.rows.push_back(funct);

  CheckRow assoc;
  assoc.object = "(seeded triples)";
  bool assoc_ok = true;
  for (std::size_t i = 0; i < std::max<std::size_t>(o.samples / 5, 10); ++i) {
    const QuadSpace& v = objs[s.index(objs.size())];
    const QuadSpace& w = objs[s.index(objs.size())];
    const QuadSpace& z = objs[s.index(objs.size())];
    const QuadSpace& u = objs[s.index(objs.size())];
    TqMorphism t1 = random_cospan(v, w, s);
    TqMorphism t2 = random_cospan(w, z, s);
    TqMorphism t3 = random_cospan(z, u, s);
    TqMorphism left = compose_tq(compose_tq(t1, t2), t3);
    TqMorphism right = compose_tq(t1, compose_tq(t2, t3));
    for (const auto& f : fs)
      if (!(f->matrix(left) == f->matrix(right))) assoc_ok = false;
  }
  assoc.require("associative_evaluation", assoc_ok);
  rep.rows.push_back(assoc);

  CheckRow moves;
  moves.object = "(relation moves)";
  bool moves_ok = true;
  for (std::size_t i = 0; i < std::max<std::size_t>(o.samples / 4, 20); ++i) {
    const QuadSpace& v = objs[s.index(objs.size())];
    const QuadSpace& w = objs[s.index(objs.size())];
    TqMorphism t = random_cospan(v, w, s);
    QuadSpace bigger = orthogonal_sum(t.apex(), hyperbolic(false));
    TqMorphism enlarged = apply_relation_move(t, inclusion_block(t.apex(), bigger, 0));
    TqMorphism twisted = apply_relation_move(t, random_orthogonal(t.apex(), s));
    for (const auto& f : fs) {
      F2Matrix ref = f->matrix(t);
      if (!(f->matrix(enlarged) == ref) || !(f->matrix(twisted) == ref)) moves_ok = false;
    }
  }
  moves.require("relation_move_invariance", moves_ok);
  rep.rows.push_back(moves);

  CheckRow lifts;
  lifts.object = "(epsilon lifts)";
  bool lifts_ok = true;
  for (std::size_t i = 0; i < std::max<std::size_t>(o.samples / 4, 20); ++i) {
    const QuadSpace& v = objs[s.index(objs.size())];
    const QuadSpace& w = objs[s.index(objs.size())];
    F2Matrix f = random_matrix(w.dim(), v.dim(), s);
    if (!(epsilon(lift_linear(f, v, w)) == f)) lifts_ok = false;
    if (!(epsilon(compact_lift_linear(f, v, w)) == f)) lifts_ok = false;
  }
  lifts.require("epsilon_of_lift", lifts_ok);
  rep.rows.push_back(lifts);

  // exhaustive Witt extension over all isometric subspace pairs, dim <= 4
  for (const QuadSpace& v :
       {hyperbolic(false), hyperbolic(true), orthogonal_sum(hyperbolic(false), hyperbolic(false)),
        orthogonal_sum(hyperbolic(false), hyperbolic(true))}) {
    CheckRow row;
    row.object = "witt dim " + std::to_string(v.dim()) + " arf " +
                 std::to_string(arf_invariant(v) ? 1 : 0);
    std::size_t triples = 0, successes = 0;
    for (std::size_t k = 0; k <= v.dim(); ++k) {
      for (const auto& dsub : enumerate_subspaces(v.dim(), k)) {
        QuadSpace dform = induced_subspace_form(v, dsub.basis);
        for (const auto& dpsub : enumerate_subspaces(v.dim(), k)) {
          QuadSpace dpform = induced_subspace_form(v, dpsub.basis);
          for (const auto& fbar : enumerate_embeddings(dform, dpform)) {
            ++triples;
            F2Matrix img = (dpsub.basis.transposed() * fbar.matrix()).transposed();
            IsoMap g = witt_extend(v, dsub.basis, img);
            bool match = true;
            for (std::size_t i = 0; i < k; ++i)
              if (!(g.apply(dsub.basis.row(i)) == img.row(i))) match = false;
            if (match) ++successes;
          }
        }
      }
    }
    row.add("triples", triples);
    row.add("successes", successes);
    row.require("witt_exhaustive", triples == successes);
    rep.rows.push_back(row);
  }

  rep.samples["unit_morphisms"] = sampled_units;
  rep.samples["composition_pairs"] = sampled_pairs;
  rep.finish();
  rep.runtime_ms = timer.ms();
  return rep;
}

inline CheckReport run_check(const std::string& name, const VerifyOptions& o) {
  if (name == "check_decomposition") return check_decomposition(o);
  if (name == "check_s2_ses") return check_s2_ses(o);
  if (name == "check_mu_complex") return check_mu_complex(o);
  if (name == "check_KL_ses") return check_KL_ses(o);
  if (name == "check_layers") return check_layers(o);
  if (name == "check_simplicity_evidence") return check_simplicity_evidence(o);
  if (name == "check_pairwise_noniso") return check_pairwise_noniso(o);
  if (name == "check_category_laws") return check_category_laws(o);
  throw std::invalid_argument("unknown check '" + name + "'");
}

inline std::vector<CheckReport> run_checks(const std::vector<std::string>& names,
                                           const VerifyOptions& o) {
  std::vector<CheckReport> out;
  for (const auto& n : names) out.push_back(run_check(n, o));
  return out;
}

}  // namespace fquad
