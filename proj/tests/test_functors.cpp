#include <catch2/catch_amalgamated.hpp>

#include <map>

#include "fquad/functors.hpp"
#include "fquad/sampling.hpp"

using namespace fquad;

namespace {

const QuadSpace H0 = hyperbolic(false);
const QuadSpace H1 = hyperbolic(true);
const QuadSpace HH = orthogonal_sum(H0, H0);
const QuadSpace HX = orthogonal_sum(H0, H1);

std::vector<TqMorphism> small_family(Sampler& s) {
  std::vector<TqMorphism> ts;
  for (const auto& v : {H0, H1}) {
    auto fam = generating_morphisms(v, v, s, 2);
    ts.insert(ts.end(), fam.begin(), fam.end());
  }
  for (const auto& t : generating_morphisms(H0, HH, s, 1)) ts.push_back(t);
  for (const auto& t : generating_morphisms(HH, H0, s, 1)) ts.push_back(t);
  return ts;
}

}  // namespace

TEST_CASE("iso functor dimensions") {
  CHECK(iso_functor(true)->value(H0).dim == 1);
  CHECK(iso_functor(false)->value(H1).dim == 0);
  CHECK(iso_functor(false)->value(HH).dim == 9);
  CHECK(iso_functor(false)->value(H0).dim == 2);
  CHECK(iso_functor(true)->value(H1).dim == 3);
  CHECK(iso_functor(true)->value(HH).dim == 6);
}

TEST_CASE("iso functor action: identity, inclusion, crossing blocks") {
  auto iso = iso_functor(true);
  CHECK(iso->matrix(tq_identity(H0)) == F2Matrix::identity(1));
  // the crossing cospan sends everything to zero
  TqMorphism cross = make_tq(inclusion_block(H0, HH, 0), inclusion_block(H0, HH, 2));
  CHECK(iso->matrix(cross).is_zero());
  // the inclusion morphism is injective on basis labels
  TqMorphism inc = tq_inclusion(H0, H0);
  F2Matrix m = iso->matrix(inc);
  CHECK(m.rows() == 6);
  CHECK(m.cols() == 1);
  CHECK(!m.is_zero());
}

TEST_CASE("pf functor") {
  auto pf = pf_functor();
  auto v = pf->value(H0);
  REQUIRE(v.dim == 4);
  CHECK(v.labels[0] == "v:00");
  CHECK(v.labels[3] == "v:11");
  // P_F of the zero space is the single label [0]
  CHECK(pf->value(zero_space()).dim == 1);
  // action through epsilon permutes vector labels
  F2Matrix t = pf->matrix(tq_from_isometry(IsoMap(H0, H0, F2Matrix::from_bits({{0, 1}, {1, 0}}))));
  CHECK(t.get(0, 0));
  CHECK(t.get(2, 1));  // a |-> b
  CHECK(t.get(1, 2));
  CHECK(t.get(3, 3));
}

TEST_CASE("lambda functor") {
  CHECK(lambda_functor(2)->value(H0).dim == 1);
  CHECK(lambda_functor(0)->value(HH).dim == 1);
  CHECK(lambda_functor(2)->value(HH).dim == 6);
  CHECK(lambda_functor(5)->value(HH).dim == 0);
  // exterior square of a rank-1 epsilon is zero
  TqMorphism cross = make_tq(inclusion_block(H0, HH, 0), inclusion_block(H0, HH, 2));
  CHECK(lambda_functor(2)->matrix(cross).is_zero());
}

TEST_CASE("tensor functor") {
  auto t = tensor_functor(lambda_functor(1), iso_functor(true));
  CHECK(t->value(H0).dim == 2);
  auto t2 = tensor_functor(pf_functor(), iso_functor(true));
  CHECK(t2->value(H0).dim == 4);
  // tensoring with a zero value gives the zero value
  auto z = tensor_functor(lambda_functor(1), iso_functor(false));
  CHECK(z->value(H1).dim == 0);
}

TEST_CASE("general mixed functor and the eta-decomposition") {
  QuadSpace d1 = point_space(true);
  auto mix1 = mix_general_functor(1, d1, F2Vector::from_bits({1}));
  auto mix0 = mix_general_functor(1, d1, F2Vector::from_bits({0}));
  CHECK(mix1->value(H0).dim == 2);
  CHECK(mix0->value(H0).dim == 2);
  // Sum over eta of dim Mix equals dim (P_F (x) iso_D)
  auto amb = tensor_functor(pf_functor(), iso_functor_for(d1));
  CHECK(mix1->value(H0).dim + mix0->value(H0).dim == amb->value(H0).dim);
  // empty target space
  CHECK(mix1->value(zero_space()).dim == 0);

  // a dim-2 multiplicity space: sum over all four eta of dims matches
  std::size_t total = 0;
  for (int bits = 0; bits < 4; ++bits) {
    F2Vector eta(2);
    eta.set(0, bits & 1);
    eta.set(1, (bits >> 1) & 1);
    total += mix_general_functor(2, d1, eta)->value(H0).dim;
  }
  CHECK(total == pf_functor(2)->value(H0).dim * iso_functor_for(d1)->value(H0).dim);
}

TEST_CASE("pair-coordinate mixed functor") {
  auto mix11 = mix_functor(true, true);
  auto v = mix11->value(H0);
  REQUIRE(v.dim == 2);
  CHECK(v.labels[0] == "(10,01)");
  CHECK(v.labels[1] == "(01,10)");

  auto mix01 = mix_functor(false, true);
  auto v01 = mix01->value(H0);
  REQUIRE(v01.dim == 4);
  // the four pairs with q(w1+w2)=0, B=1
  for (const auto& [a, b] : mix01->pairs(H0)) {
    CHECK(H0.b(a, b));
    CHECK_FALSE(H0.q(a ^ b));
    CHECK(!(a == b));
  }
  // labels of Mix_{alpha,1} are always independent pairs
  for (bool alpha : {false, true})
    for (const auto& [a, b] : mix_functor(alpha, true)->pairs(HH))
      CHECK(rank(F2Matrix::from_rows({a, b}, 4)) == 2);
}

TEST_CASE("relabeling bijection between the two mix descriptions") {
  Sampler s(101);
  auto ts = small_family(s);
  for (bool alpha : {false, true}) {
    for (bool beta : {false, true}) {
      auto gen = mix_general_functor(1, point_space(alpha), F2Vector::from_bits({beta ? 1 : 0}));
      auto ab = mix_functor(alpha, beta);
      // the relabeling (f,h) |-> (f(a)+h(x), f(a)) as a permutation matrix
      auto relabel = [&](const QuadSpace& w) {
        const auto& gens = gen->generators(w);
        F2Matrix p(ab->value(w).dim, gens.size());
        for (std::size_t j = 0; j < gens.size(); ++j) {
          F2Vector fa = gens[j].f.col(0);
          F2Vector hx = gens[j].h.matrix().col(0);
          std::size_t i = ab->pair_index(w, fa ^ hx, fa);
          REQUIRE(i != IsoFunctor::npos);
          p.set(i, j, true);
        }
        return p;
      };
      for (const auto& w : {H0, H1, HH}) {
        REQUIRE(gen->value(w).dim == ab->value(w).dim);
        CHECK(rank(relabel(w)) == ab->value(w).dim);
      }
      for (const auto& t : ts)
        CHECK(relabel(t.target()) * gen->matrix(t) == ab->matrix(t) * relabel(t.source()));
    }
  }
}

TEST_CASE("tau is a natural free involution for beta=1") {
  auto mix = mix_functor(true, true);
  F2Matrix tau = mix->tau(H0);
  // swaps the two labels
  CHECK(tau.get(1, 0));
  CHECK(tau.get(0, 1));
  CHECK(tau * tau == F2Matrix::identity(2));
  // no fixed labels anywhere on the roster
  for (bool alpha : {false, true})
    for (const auto& w : {H0, H1, HH, HX}) {
      auto mx = mix_functor(alpha, true);
      for (const auto& [a, b] : mx->pairs(w)) CHECK(!(a == b));
    }
  Sampler s(55);
  auto ts = small_family(s);
  for (bool alpha : {false, true}) CHECK(natural_check(nat_tau(alpha, true), ts));
}

TEST_CASE("sigma and m") {
  auto m11 = m_functor(true);
  auto v = m11->value(H0);
  REQUIRE(v.dim == 1);
  CHECK(v.labels[0] == "{10,01}");

  auto sig = sigma_functor(true, true);
  REQUIRE(sig->value(H0).dim == 1);
  // the invariant vector is [(a,b)] + [(b,a)]
  CHECK(sig->basis(H0).row(0) == F2Vector::from_bits({1, 1}));

  // dim Mix = 2 dim m on the roster
  for (bool alpha : {false, true})
    for (const auto& w : {H0, H1, HH, HX}) {
      CHECK(mix_functor(alpha, true)->value(w).dim == 2 * m_functor(alpha)->value(w).dim);
      CHECK(sigma_functor(alpha, true)->value(w).dim == m_functor(alpha)->value(w).dim);
    }
}

TEST_CASE("the S2 short exact sequence 0 -> m -> Mix -> m -> 0") {
  Sampler s(77);
  auto ts = small_family(s);
  for (bool alpha : {false, true}) {
    auto mix = mix_functor(alpha, true);
    auto m = m_functor(alpha);
    NaturalMap inc = nat_m_to_mix(alpha);
    NaturalMap pi = nat_mix_to_m(alpha);
    CHECK(natural_check(inc, ts));
    CHECK(natural_check(pi, ts));
    for (const auto& w : {H0, H1, HH}) {
      F2Matrix i = inc.at(w), p = pi.at(w);
      // norm = 1 + tau has rank dim m
      F2Matrix norm = mat_xor(mix->tau(w), F2Matrix::identity(mix->value(w).dim));
      CHECK(rank(norm) == m->value(w).dim);
      // exactness in the middle
      CHECK((p * i).is_zero());
      CHECK(rank(i) + rank(p) == mix->value(w).dim);
    }
  }
}

TEST_CASE("polynomial filtration of P_F") {
  auto k1 = kd_pf_functor(1);
  auto b = k1->basis(H0);
  REQUIRE(b.rows() == 1);
  CHECK(b.row(0) == F2Vector::from_bits({1, 1, 1, 1}));
  CHECK(kd_pf_functor(0)->value(H0).dim == 3);  // sums over lines
  CHECK(kd_pf_functor(2)->value(H0).dim == 0);  // no 3-dim subspace of dim 2
  CHECK(qd_pf_functor(1)->value(H0).dim == 3);
  CHECK(qd_pf_functor(0)->value(H0).dim == 1);
  // filtration is decreasing: k_{d+1} inside k_d
  for (const auto& w : {H0, HH}) {
    for (std::size_t d = 0; d + 1 <= 3; ++d) {
      const F2Matrix& big = kd_pf_functor(d)->basis(w);
      const F2Matrix& small = kd_pf_functor(d + 1)->basis(w);
      for (std::size_t r = 0; r < small.rows(); ++r)
        CHECK(express_in_rref(big, small.row(r)).has_value());
    }
  }
  CHECK(kd_pf_functor(4)->value(HH).dim == 0);
}

TEST_CASE("k_d m filtration") {
  // k_0 m = m
  for (bool alpha : {false, true})
    for (const auto& w : {H0, H1, HH})
      CHECK(kd_m_functor(alpha, 0)->value(w).dim == m_functor(alpha)->value(w).dim);
  // the hand-computed collapse: k_1 m_{1,1}(H0) = 0
  CHECK(kd_m_functor(true, 1)->value(H0).dim == 0);
  // vanishing for d >= dim W
  CHECK(kd_m_functor(true, 2)->value(H0).dim == 0);
  CHECK(kd_m_functor(false, 4)->value(HH).dim == 0);
  // decreasing
  for (bool alpha : {false, true})
    for (std::size_t d = 0; d <= 2; ++d) {
      const F2Matrix& big = kd_m_functor(alpha, d)->basis(HH);
      const F2Matrix& small = kd_m_functor(alpha, d + 1)->basis(HH);
      for (std::size_t r = 0; r < small.rows(); ++r)
        CHECK(express_in_rref(big, small.row(r)).has_value());
    }
}

TEST_CASE("g_d and f_d are natural and g_d is onto") {
  CHECK(rank(nat_g_d(0).at(H0)) == 2);  // onto Lambda^1
  CHECK(rank(nat_g_d(1).at(HH)) == lambda_functor(2)->value(HH).dim);
  Sampler s(13);
  auto ts = small_family(s);
  CHECK(natural_check(nat_g_d(0), ts));
  CHECK(natural_check(nat_g_d(1), ts));
  CHECK(natural_check(nat_f_d(0), ts));
  CHECK(natural_check(nat_f_d(1), ts));
}

TEST_CASE("mu and nu on the plane") {
  NaturalMap mu = nat_mu(true);
  F2Matrix m = mu.at(H0);
  // [h] |-> (a+b) (x) [h]: both Lambda^1 coordinates set
  REQUIRE(m.rows() == 2);
  REQUIRE(m.cols() == 1);
  CHECK(m.get(0, 0));
  CHECK(m.get(1, 0));
  CHECK(rank(m) == 1);

  NaturalMap nu = nat_nu(true);
  F2Matrix n = nu.at(H0);
  CHECK(rank(n) == 1);
  // nu . mu = 0 since B(h(x), h(x)) = 0
  CHECK((n * m).is_zero());

  // mu mono and nu epi wherever iso is nonzero
  for (bool alpha : {false, true})
    for (const auto& w : {H0, H1, HH, HX}) {
      std::size_t nh = iso_functor(alpha)->value(w).dim;
      CHECK(rank(nat_mu(alpha).at(w)) == nh);
      CHECK(rank(nat_nu(alpha).at(w)) == nh);
    }

  Sampler s(21);
  auto ts = small_family(s);
  for (bool alpha : {false, true}) {
    CHECK(natural_check(nat_mu(alpha), ts));
    CHECK(natural_check(nat_nu(alpha), ts));
  }
}

TEST_CASE("corrupting a component breaks naturality") {
  Sampler s(22);
  auto ts = small_family(s);
  NaturalMap mu = nat_mu(true);
  NaturalMap bad{"bad_mu", mu.source, mu.target, [&mu](const QuadSpace& w) {
                   F2Matrix m = mu.component(w);
                   if (w.dim() == 2 && m.rows() > 0) m.set(0, 0, !m.get(0, 0));
                   return m;
                 }};
  CHECK_FALSE(natural_check(bad, ts));
}

TEST_CASE("mu_n and nu_n formulas") {
  // mu_1 on H0, alpha=1: a (x) [h] |-> a ^ (a+b) (x) [h] = a^b (x) [h]
  F2Matrix mu1 = nat_mu_n(true, 1).at(H0);
  REQUIRE(mu1.cols() == 2);  // Lambda^1 (x) iso has dim 2
  REQUIRE(mu1.rows() == 1);  // Lambda^2 (x) iso has dim 1
  CHECK(mu1.get(0, 0));      // a wedge (a+b) = a^b
  CHECK(mu1.get(0, 1));      // b wedge (a+b) = a^b

  // mu_{n+1} . mu_n = 0
  for (bool alpha : {false, true})
    for (const auto& w : {H0, HH, HX})
      for (std::size_t n = 0; n + 1 <= 3; ++n)
        CHECK((nat_mu_n(alpha, n + 1).at(w) * nat_mu_n(alpha, n).at(w)).is_zero());

  // nu_1(a ^ b (x) [h]) with h(x)=a+b is a (x) [h] + b (x) [h]
  F2Matrix nu1 = nat_nu_n(true, 1).at(H0);
  REQUIRE(nu1.rows() == 2);
  REQUIRE(nu1.cols() == 1);
  CHECK(nu1.get(0, 0));
  CHECK(nu1.get(1, 0));

  // nu_n . nu_{n+1} = 0
  for (bool alpha : {false, true})
    for (const auto& w : {H0, HH, HX})
      for (std::size_t n = 0; n + 1 <= 3; ++n)
        CHECK((nat_nu_n(alpha, n).at(w) * nat_nu_n(alpha, n + 1).at(w)).is_zero());

  Sampler s(31);
  auto ts = small_family(s);
  CHECK(natural_check(nat_mu_n(true, 1), ts));
  CHECK(natural_check(nat_nu_n(true, 1), ts));
  CHECK(natural_check(nat_mu_n(false, 2), ts));
  CHECK(natural_check(nat_nu_n(false, 2), ts));
}

TEST_CASE("exactness of the mu complex") {
  for (bool alpha : {false, true})
    for (const auto& w : {H0, H1, HH, HX})
      for (std::size_t n = 0; n <= 3; ++n)
        CHECK(rank(nat_mu_n(alpha, n).at(w)) ==
              kernel_basis(nat_mu_n(alpha, n + 1).at(w)).dim());
}

TEST_CASE("K functors") {
  CHECK(k_functor(true, 1)->value(H0).dim == 1);
  CHECK(k_functor(true, 1)->value(H0).dim == iso_functor(true)->value(H0).dim);
  // dual computation: kernel route equals spanning route
  for (bool alpha : {false, true})
    for (const auto& w : {H0, H1, HH, HX})
      for (std::size_t n = 1; n <= 3; ++n)
        CHECK(k_functor(alpha, n)->basis(w) == k_span_basis(alpha, n, w));
  // K is a subfunctor: restricted action exists on sampled morphisms
  Sampler s(41);
  auto ts = small_family(s);
  for (const auto& t : ts) CHECK_NOTHROW(k_functor(true, 2)->matrix(t));
}

TEST_CASE("L functors") {
  CHECK(l_functor(true, 1)->basis(H0) == k_functor(true, 1)->basis(H0));
  CHECK(l_functor(true, 2)->value(H0).dim == 0);  // hand computation
  for (bool alpha : {false, true})
    for (const auto& w : {H0, H1, HH, HX})
      for (std::size_t n = 2; n <= 3; ++n)
        CHECK(l_functor(alpha, n)->basis(w) == l_span_basis(alpha, n, w));
  // short exact sequence dims: dim K^{n+1} = dim L^{n+1} + dim L^n
  for (bool alpha : {false, true})
    for (const auto& w : {H0, H1, HH, HX})
      for (std::size_t n = 1; n <= 3; ++n)
        CHECK(k_functor(alpha, n + 1)->value(w).dim ==
              l_functor(alpha, n + 1)->value(w).dim + l_functor(alpha, n)->value(w).dim);
}

TEST_CASE("sigma identifies K^1 with iso") {
  Sampler s(51);
  auto ts = small_family(s);
  for (bool alpha : {false, true}) {
    NaturalMap sig = nat_sigma_iso(alpha);
    for (const auto& w : {H0, H1, HH, HX}) {
      F2Matrix m = sig.at(w);
      CHECK(m.rows() == m.cols());
      CHECK(rank(m) == m.rows());
    }
    CHECK(natural_check(sig, ts));
  }
}

TEST_CASE("nu_tilde: surjective factorization with kernel L^{n+1}") {
  for (bool alpha : {false, true})
    for (const auto& w : {H0, HH, HX})
      for (std::size_t n = 1; n <= 2; ++n) {
        F2Matrix nt = nat_nu_tilde(alpha, n).at(w);
        CHECK(rank(nt) == l_functor(alpha, n)->value(w).dim);
        CHECK(kernel_basis(nt).dim() == l_functor(alpha, n + 1)->value(w).dim);
        // composing with the inclusion L^n -> K^n recovers nu_n^K
        F2Matrix nuk = nat_nu_k(alpha, n).at(w);
        const F2Matrix& lb = l_functor(alpha, n)->basis(w);
        const F2Matrix& kb = k_functor(alpha, n)->basis(w);
        F2Matrix inc(kb.rows(), lb.rows());
        for (std::size_t r = 0; r < lb.rows(); ++r) {
          auto c = express_in_rref(kb, lb.row(r));
          REQUIRE(c.has_value());
          inc.set_col(r, *c);
        }
        CHECK(inc * nt == nuk);
      }
  // the n=1 instance on H0: K^2 -> K^1 is onto
  F2Matrix nt = nat_nu_tilde(true, 1).at(H0);
  CHECK(rank(nt) == 1);
  CHECK(k_functor(true, 1)->value(H0).dim == 1);
}

TEST_CASE("i_d embeds k_d m into the filtration stage") {
  Sampler s(61);
  auto ts = small_family(s);
  for (bool alpha : {false, true}) {
    for (std::size_t d = 0; d <= 2; ++d) {
      NaturalMap id_ = nat_i_d(alpha, d);
      for (const auto& w : {H0, H1, HH, HX})
        CHECK(rank(id_.at(w)) == kd_m_functor(alpha, d)->value(w).dim);
      CHECK(natural_check(id_, ts));
    }
  }
}

TEST_CASE("the composite f_d . (inclusion of k_d m) vanishes") {
  for (bool alpha : {false, true}) {
    auto m = m_functor(alpha);
    auto iso = iso_functor(alpha);
    for (const auto& w : {H0, HH, HX}) {
      const auto& labels = m->upairs(w);
      const auto& embs = iso->embeddings(w);
      std::size_t nh = embs.size(), np = std::size_t{1} << w.dim();
      std::map<std::uint64_t, std::size_t> emb_by_vec;
      for (std::size_t ih = 0; ih < nh; ++ih)
        emb_by_vec[embs[ih].matrix().col(0).to_index()] = ih;
      // ambient map j: m -> P_F (x) iso on labels
      F2Matrix j(np * nh, labels.size());
      for (std::size_t t = 0; t < labels.size(); ++t) {
        std::size_t ih = emb_by_vec.at((labels[t].first ^ labels[t].second).to_index());
        j.set(labels[t].first.to_index() * nh + ih, t, true);
        j.set(labels[t].second.to_index() * nh + ih, t, true);
      }
      for (std::size_t d = 0; d <= 2; ++d) {
        F2Matrix fd = qd_pf_functor(d)->projection_matrix(w);
        F2Matrix fdi = fd.kron(F2Matrix::identity(nh));
        const F2Matrix& kb = kd_m_functor(alpha, d)->basis(w);
        for (std::size_t r = 0; r < kb.rows(); ++r)
          CHECK(fdi.apply(j.apply(kb.row(r))).is_zero());
      }
    }
  }
}

TEST_CASE("the explicit layer witness on H0 _|_ H0") {
  // { y, y' } = { a0, b0 } in the first block, v1 = a0 of the second block:
  // (g_1 (x) iso) . i_1 maps the translated sum to v1 ^ (y+y') (x) [h]
  bool alpha = true;
  std::size_t d = 1;
  auto m = m_functor(alpha);
  auto kdm = kd_m_functor(alpha, d);
  const QuadSpace& w = HH;

  F2Vector y = F2Vector::from_bits({1, 0, 0, 0});
  F2Vector yp = F2Vector::from_bits({0, 1, 0, 0});
  F2Vector v1 = F2Vector::from_bits({0, 0, 1, 0});

  // x = [{y,y'}] + [{y+v1, y'+v1}] in m coordinates
  F2Vector xm(m->value(w).dim);
  xm.set(m->upair_index(w, y, yp), true);
  xm.set(m->upair_index(w, y ^ v1, yp ^ v1), true);

  auto coeff = express_in_rref(kdm->basis(w), xm);
  REQUIRE(coeff.has_value());  // the witness lies in k_1 m

  std::size_t nh = iso_functor(alpha)->value(w).dim;
  F2Matrix composite = nat_g_d(d).at(w).kron(F2Matrix::identity(nh)) * nat_i_d(alpha, d).at(w);
  F2Vector got = composite.apply(*coeff);

  // expected: v1 ^ (y+y') (x) [h] with h(x) = y+y'
  F2Vector wedge = wedge_coordinates({v1, y ^ yp}, 4);
  std::size_t ih = IsoFunctor::npos;
  const auto& embs = iso_functor(alpha)->embeddings(w);
  for (std::size_t i = 0; i < embs.size(); ++i)
    if (embs[i].matrix().col(0) == (y ^ yp)) ih = i;
  REQUIRE(ih != IsoFunctor::npos);
  F2Vector expect(wedge.dim() * nh);
  for (std::size_t t = 0; t < wedge.dim(); ++t)
    if (wedge.get(t)) expect.set(t * nh + ih, true);
  CHECK(got == expect);
  CHECK_FALSE(got.is_zero());
}

TEST_CASE("sigma_layer is defined and injective on layers") {
  for (bool alpha : {false, true})
    for (std::size_t d = 0; d <= 1; ++d) {
      NaturalMap sl = nat_sigma_layer(alpha, d);
      for (const auto& w : {H0, HH, HX})
        CHECK(rank(sl.at(w)) == layer_functor(alpha, d)->value(w).dim);
    }
}

TEST_CASE("functoriality under composition for sampled cospans") {
  Sampler s(71);
  std::vector<FunctorPtr> fs = {iso_functor(true),
                                iso_functor(false),
                                mix_functor(true, true),
                                mix_functor(false, true),
                                m_functor(true),
                                lambda_functor(2),
                                pf_functor(),
                                k_functor(true, 2),
                                tensor_functor(lambda_functor(1), iso_functor(true))};
  std::vector<QuadSpace> objs = {H0, H1, HH};
  for (int i = 0; i < 12; ++i) {
    const QuadSpace& v = objs[s.index(objs.size())];
    const QuadSpace& w = objs[s.index(objs.size())];
    const QuadSpace& z = objs[s.index(objs.size())];
    TqMorphism t1 = random_cospan(v, w, s);
    TqMorphism t2 = random_cospan(w, z, s);
    TqMorphism c = compose_tq(t1, t2);
    for (const auto& f : fs) CHECK(f->matrix(c) == f->matrix(t2) * f->matrix(t1));
  }
}

TEST_CASE("relation moves leave functor matrices unchanged") {
  Sampler s(81);
  std::vector<FunctorPtr> fs = {iso_functor(true), mix_functor(false, true), m_functor(false),
                                lambda_functor(2), k_functor(false, 2)};
  for (int i = 0; i < 8; ++i) {
    TqMorphism t = random_cospan(H0, HH, s);
    QuadSpace bigger = orthogonal_sum(t.apex(), H0);
    TqMorphism moved = apply_relation_move(t, inclusion_block(t.apex(), bigger, 0));
    TqMorphism twisted = apply_relation_move(t, random_orthogonal(t.apex(), s));
    for (const auto& f : fs) {
      CHECK(f->matrix(moved) == f->matrix(t));
      CHECK(f->matrix(twisted) == f->matrix(t));
    }
  }
}

TEST_CASE("functor parser round trips the grammar") {
  CHECK(parse_functor("iso:x1")->name() == "iso:x1");
  CHECK(parse_functor("mix:a=0,b=1")->name() == "mix:a=0,b=1");
  CHECK(parse_functor("m:a=1")->name() == "m:a=1");
  CHECK(parse_functor("kd_m:a=1,d=2")->name() == "kd_m:a=1,d=2");
  CHECK(parse_functor("K:a=1,n=2")->name() == "K:a=1,n=2");
  CHECK(parse_functor("L:a=0,n=3")->name() == "L:a=0,n=3");
  CHECK(parse_functor("lambda:n=2(x)iso:x1")->name() == "lambda:n=2(x)iso:x1");
  CHECK(parse_functor("pf")->name() == "pf");
  CHECK(parse_functor("qd_pf:d=1")->name() == "qd_pf:d=1");
  CHECK_THROWS_WITH(parse_functor("bogus:x=1"), Catch::Matchers::ContainsSubstring("grammar"));
  CHECK_THROWS_AS(parse_functor("K:a=1,n=0"), std::invalid_argument);
  // the same instance is returned for the same name
  CHECK(parse_functor("iso:x1").get() == parse_functor("iso:x1").get());
}

TEST_CASE("identity morphisms act as identity matrices") {
  std::vector<FunctorPtr> fs = {iso_functor(true),    mix_functor(true, true),
                                m_functor(true),      lambda_functor(2),
                                kd_pf_functor(1),     qd_pf_functor(1),
                                kd_m_functor(true, 1), k_functor(true, 2),
                                l_functor(true, 2),   sigma_functor(true, true)};
  for (const auto& f : fs)
    for (const auto& w : {H0, HH}) {
      F2Matrix m = f->matrix(tq_identity(w));
      CHECK(m == F2Matrix::identity(f->value(w).dim));
    }
}
