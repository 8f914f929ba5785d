#pragma once

#include <optional>
#include <set>

#include "fixtures.hpp"
#include "hecke/cartan.hpp"

// Deliberately naive computations used to check the engine: everything is
// done by looping over K_m modulo a deeper congruence subgroup.
namespace fx {

// K_m modulo K_{level}: matrices over O/π^level congruent to 1 mod π^M with
// the determinant condition, lifted into G's ring.
inline std::vector<GroupElem> kernel_lifts(const GroupModel& G, int level) {
  TruncatedRing small(G.spec().field, level);
  const int M = G.congruence_level();
  std::vector<RingElem> deep;
  for (const auto& x : small.elements())
    if (small.valuation(x) >= M) deep.push_back(x);
  const int n = G.n();
  const auto& R = G.ring();
  std::vector<GroupElem> out;
  std::vector<std::size_t> idx(n * n, 0);
  for (;;) {
    Matrix X = mat_identity(small, n);
    for (int k = 0; k < n * n; ++k) X.a[k] = small.add(X.a[k], deep[idx[k]]);
    if (G.satisfies_det(small, X)) {
      Matrix L = mat_lift(R, X, small);
      if (is_special_linear(G.spec().family)) {
        RingElem di = R.invert_unit(mat_det(R, L));
        for (int i = 0; i < n; ++i) L(i, n - 1) = R.mul(L(i, n - 1), di);
      }
      out.push_back(GroupElem{0, L, R.level()});
    }
    int k = 0;
    while (k < n * n && ++idx[k] == deep.size()) idx[k++] = 0;
    if (k == n * n) break;
  }
  return out;
}

// Γ_λ by the set-image test: (a, b) ∈ Γ_λ iff π_λ^{-1}·k·a·π_λ lies in K for
// some k ∈ K_m, and then b is its reduction.
inline std::set<std::pair<std::uint32_t, std::uint32_t>> gamma_oracle(const GroupSpec& s, int m, const Cocharacter& lambda,
                                                               const LevelQuotient& Q) {
  const int spread = lambda.spread();
  const int W = (s.ext_e * m + 2 * spread + s.ext_e) / s.ext_e + 1;
  GroupModel G(s, m, W);
  auto ks = kernel_lifts(G, G.congruence_level() + spread);
  GroupElem pl = G.pi_lambda(lambda), pli = G.ginv(pl);
  std::set<std::pair<std::uint32_t, std::uint32_t>> out;
  for (std::uint32_t a = 0; a < Q.size(); ++a) {
    GroupElem la = G.lift_quotient(Q.element(a));
    for (const auto& k : ks) {
      GroupElem x = G.gmul(G.gmul(pli, G.gmul(k, la)), pl);
      if (!G.in_K(x)) continue;
      out.emplace(a, static_cast<std::uint32_t>(Q.index(G.reduce_to_quotient(x))));
    }
  }
  return out;
}

inline GroupElem random_Km(const GroupModel& G, std::mt19937_64& rng) {
  const auto& R = G.ring();
  Matrix X = random_matrix(R, G.n(), rng);
  for (auto& x : X.a) x = R.mul_pi(x, G.congruence_level());
  X = mat_add(R, mat_identity(R, G.n()), X);
  if (is_special_linear(G.spec().family)) {
    RingElem di = R.invert_unit(mat_det(R, X));
    for (int i = 0; i < G.n(); ++i) X(i, 0) = R.mul(X(i, 0), di);
  }
  return GroupElem{0, X, R.level()};
}


// [K_m : K_m ∩ π_λ K_m π_λ^{-1}] counted on K_m/K_{m+s}.
inline std::uint64_t brute_force_volume(const GroupSpec& s, int m, const Cocharacter& lambda) {
  const int spread = lambda.spread();
  GroupModel G(s, m, (s.ext_e * m + 2 * spread + s.ext_e) / s.ext_e + 1);
  auto ks = kernel_lifts(G, G.congruence_level() + spread);
  auto pl = G.pi_lambda(lambda), pli = G.ginv(pl);
  std::uint64_t fixed = 0;
  for (const auto& k : ks)
    if (G.in_Km(G.gmul(G.gmul(pli, k), pl), m)) ++fixed;
  if (fixed == 0 || ks.size() % fixed != 0) return 0;
  return ks.size() / fixed;
}

// Right K_m-cosets of K_m x K_m found as distinct k·x, k over `ks`.
inline std::vector<GroupElem> brute_right_cosets(const GroupModel& G, const std::vector<GroupElem>& ks,
                                                 const GroupElem& x) {
  std::vector<GroupElem> reps, invs;
  for (const auto& k : ks) {
    GroupElem c = G.gmul(k, x);
    bool fresh = true;
    for (const auto& ri : invs)
      if (G.in_Km(G.gmul(ri, c), G.m())) {
        fresh = false;
        break;
      }
    if (fresh) {
      reps.push_back(c);
      invs.push_back(G.ginv(c));
    }
  }
  return reps;
}

// g ∈ K_m z K_m, by searching k with k^{-1}·g ∈ z·K_m.
inline bool naive_member(const GroupModel& G, const std::vector<GroupElem>& ks, const GroupElem& g,
                         const GroupElem& z) {
  GroupElem zi = G.ginv(z);
  for (const auto& k : ks)
    if (G.in_Km(G.gmul(zi, G.gmul(G.ginv(k), g)), G.m())) return true;
  return false;
}

inline std::vector<FieldDescriptor> backends() {
  return {Q2(), Q3(), F2t(), F3t(), Q2root4(), FieldDescriptor::mixed_char(2, {-2, 1}, 2),
          FieldDescriptor::equal_char(2, 2), FieldDescriptor::mixed_char(3, {-3, 0, 1})};
}

// Elementary divisors from gcds of k×k minors: μ_k = d_k - d_{k-1}.
inline std::optional<std::vector<int>> determinantal_divisors(const TruncatedRing& R, const Matrix& M) {
  const int n = M.n;
  std::vector<int> d(n + 1, 0);
  for (int k = 1; k <= n; ++k) {
    int best = R.level();
    // All k-subsets of rows and of columns.
    std::vector<std::vector<int>> subsets;
    for (int mask = 0; mask < (1 << n); ++mask)
      if (__builtin_popcount(mask) == k) {
        std::vector<int> s;
        for (int i = 0; i < n; ++i)
          if (mask >> i & 1) s.push_back(i);
        subsets.push_back(s);
      }
    for (const auto& rs : subsets)
      for (const auto& cs : subsets) {
        Matrix sub = mat_zero(R, k);
        for (int i = 0; i < k; ++i)
          for (int j = 0; j < k; ++j) sub(i, j) = M(rs[i], cs[j]);
        best = std::min(best, R.valuation(mat_det(R, sub)));
      }
    if (best >= R.level()) return std::nullopt;
    d[k] = best;
  }
  std::vector<int> mu;
  for (int k = 1; k <= n; ++k) mu.push_back(d[k] - d[k - 1]);
  return mu;
}

}  // namespace fx
