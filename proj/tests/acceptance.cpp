// Acceptance suite: one pass/fail line per criterion. Every expected value
// is produced by an independent route (brute-force counts, hand-frozen
// dimensions, spanning-set constructions) before being compared with the
// main implementation. All assertions are exact integer equalities; the
// per-criterion wall-clock budgets are enforced.

#include <chrono>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "fquad/verify.hpp"

using namespace fquad;

namespace {

std::size_t brute_alpha_count(const QuadSpace& w, bool alpha) {
  std::size_t n = 0;
  for (std::uint64_t i = 1; i < (std::uint64_t{1} << w.dim()); ++i)
    if (w.q(F2Vector::from_index(w.dim(), i)) == alpha) ++n;
  return n;
}

bool rows_ok(const CheckReport& rep, const std::function<bool(const CheckRow&)>& pick,
             std::string& detail, std::size_t* matched = nullptr) {
  bool ok = true;
  std::size_t count = 0;
  for (const auto& row : rep.rows) {
    if (!pick(row)) continue;
    ++count;
    if (!row.ok) {
      ok = false;
      detail += " [" + row.object + "]";
    }
  }
  if (matched) *matched = count;
  return ok && count > 0;
}

std::int64_t quantity(const CheckRow& row, const std::string& key, std::int64_t fallback = -1) {
  for (const auto& [k, v] : row.quantities)
    if (k == key) return v;
  return fallback;
}

struct Criterion {
  int id;
  std::string description;
  std::int64_t limit_ms;
  std::function<bool(std::string&)> run;
};

}  // namespace

int main() {
  VerifyOptions options;  // default roster, seed, nmax=3, dmax=2, samples=100

  // shared check runs (each criterion reads its own rows)
  CheckReport layers_rep, laws_rep, kl_rep;

  std::vector<Criterion> criteria;

  criteria.push_back({1, "embedding counts match brute force on the roster", 1000,
                      [&](std::string& detail) {
                        struct Fixed {
                          const char* space;
                          bool alpha;
                          std::size_t dim;
                        };
                        // frozen from the brute counts above
                        const Fixed fixed[] = {{"H0", true, 1},    {"H0", false, 2},
                                               {"H1", true, 3},    {"H1", false, 0},
                                               {"H0+H0", false, 9}, {"H0+H0", true, 6}};
                        for (const auto& f : fixed) {
                          QuadSpace w = parse_space(f.space);
                          if (iso_functor(f.alpha)->value(w).dim != f.dim) {
                            detail = std::string("frozen value mismatch at ") + f.space;
                            return false;
                          }
                        }
                        for (const auto& name : default_roster_names()) {
                          QuadSpace w = parse_space(name);
                          for (bool alpha : {false, true})
                            if (iso_functor(alpha)->value(w).dim != brute_alpha_count(w, alpha)) {
                              detail = "brute count mismatch at " + name;
                              return false;
                            }
                        }
                        return true;
                      }});

  criteria.push_back({2, "eta-decomposition of P_F (x) iso_D on the roster", 5000,
                      [&](std::string& detail) {
                        auto rep = check_decomposition(options);
                        // the hand instance 4 = 2 + 2 at H0 with D = (x,1)
                        bool hand = false;
                        for (const auto& row : rep.rows)
                          if (row.object == "H0" && quantity(row, "D_alpha") == 1)
                            hand = quantity(row, "dim_tensor") == 4 &&
                                   quantity(row, "dim_mix_eta0") == 2 &&
                                   quantity(row, "dim_mix_eta1") == 2;
                        if (!hand) detail = "hand instance 4=2+2 missing";
                        return rep.passed && hand;
                      }});

  criteria.push_back({3, "S2 sequence: free swap action and dim Mix = 2 dim m", 5000,
                      [&](std::string& detail) {
                        auto rep = check_s2_ses(options);
                        if (!rep.passed) detail = "check_s2_ses failed";
                        return rep.passed;
                      }});

  criteria.push_back({4, "exactness of the mu complex for n <= 3, both alpha", 60000,
                      [&](std::string& detail) {
                        auto rep = check_mu_complex(options);
                        if (!rep.passed) detail = "check_mu_complex failed";
                        return rep.passed;
                      }});

  criteria.push_back({5, "sigma: K^1 -> iso bijective per object and natural", 30000,
                      [&](std::string& detail) {
                        kl_rep = check_KL_ses(options);
                        return rows_ok(
                            kl_rep,
                            [](const CheckRow& r) {
                              return quantity(r, "sigma_bijective", -1) != -1 ||
                                     quantity(r, "sigma_natural", -1) != -1;
                            },
                            detail);
                      }});

  criteria.push_back({6, "K/L short exact sequences, nu_tilde onto, dual routes agree", 120000,
                      [&](std::string& detail) {
                        return rows_ok(
                            kl_rep, [](const CheckRow& r) { return quantity(r, "n", -1) != -1; },
                            detail);
                      }});

  criteria.push_back(
      {7, "layers of the filtration of m are the L functors; head is iso", 120000,
       [&](std::string& detail) {
         layers_rep = check_layers(options);
         bool ok = rows_ok(
             layers_rep, [](const CheckRow& r) { return r.object.rfind("H0^", 0) != 0; }, detail);
         // hand instance: k_1 m_{1,1}(H0) = 0, L^2_1(H0) = 0, head dim 1
         bool hand = false;
         for (const auto& row : layers_rep.rows)
           if (row.object == "H0" && quantity(row, "alpha") == 1 && quantity(row, "d") == 0)
             hand = quantity(row, "dim_kd1_m") == 0 && quantity(row, "head_dim") == 1;
         hand = hand && l_functor(true, 2)->value(parse_space("H0")).dim == 0;
         if (!hand) detail += " hand instance failed";
         return ok && hand;
       }});

  criteria.push_back({8, "nonvanishing of k_d m on H0^(d+1) via the explicit witness", 60000,
                      [&](std::string& detail) {
                        return rows_ok(
                            layers_rep,
                            [](const CheckRow& r) { return r.object.rfind("H0^", 0) == 0; },
                            detail);
                      }});

  criteria.push_back({9, "Witt extension succeeds for all subspace pairs, dim <= 4", 120000,
                      [&](std::string& detail) {
                        laws_rep = check_category_laws(options);
                        std::size_t matched = 0;
                        bool ok = rows_ok(
                            laws_rep,
                            [](const CheckRow& r) { return r.object.rfind("witt", 0) == 0; },
                            detail, &matched);
                        if (matched != 4) {
                          detail += " expected 4 witt rows";
                          return false;
                        }
                        return ok;
                      }});

  criteria.push_back({10, "category soundness on seeded morphisms (units, composites, moves)",
                      120000, [&](std::string& detail) {
                        return rows_ok(
                            laws_rep,
                            [](const CheckRow& r) { return r.object.rfind("witt", 0) != 0; },
                            detail);
                      }});

  criteria.push_back({11, "generation evidence for the simplicity of L^n (n <= 2, dim <= 4)",
                      300000, [&](std::string& detail) {
                        auto rep = check_simplicity_evidence(options);
                        if (!rep.passed) detail = "generation evidence failed";
                        detail += " [" + rep.label + "]";
                        return rep.passed;
                      }});

  int failures = 0;
  auto total_start = std::chrono::steady_clock::now();
  for (const auto& c : criteria) {
    std::string detail;
    auto start = std::chrono::steady_clock::now();
    bool ok = false;
    try {
      ok = c.run(detail);
    } catch (const std::exception& e) {
      detail = std::string("exception: ") + e.what();
    }
    auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                  std::chrono::steady_clock::now() - start)
                  .count();
    bool in_budget = ms <= c.limit_ms;
    if (!ok || !in_budget) ++failures;
    std::printf("[%2d/11] %s  %-66s (%lld ms, budget %lld ms)%s%s\n", c.id,
                ok && in_budget ? "PASS" : "FAIL", c.description.c_str(),
                static_cast<long long>(ms), static_cast<long long>(c.limit_ms),
                detail.empty() ? "" : " --", detail.c_str());
  }
  auto total_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                      std::chrono::steady_clock::now() - total_start)
                      .count();
  std::printf("ACCEPTANCE: %d/11 criteria passed in %lld ms\n", 11 - failures,
              static_cast<long long>(total_ms));
  return failures == 0 ? 0 : 1;
}
