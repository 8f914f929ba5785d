#pragma once

#include <map>
#include <mutex>
#include <string>
#include <utility>
#include <vector>

#include "hecke/cartan.hpp"

namespace hecke {

// Sparse Σ c_x t_x with vol(K_m) = 1, so t_x is the indicator of K_m x K_m.
struct HeckeElem {
  int level = 0;
  std::map<DoubleCosetId, Rational> terms;  // no zero coefficients

  void add(const DoubleCosetId& id, const Rational& c);
  Rational coeff(const DoubleCosetId& id) const;
  bool empty() const { return terms.empty(); }

  friend HeckeElem operator+(const HeckeElem& a, const HeckeElem& b);
  friend HeckeElem operator*(const Rational& c, const HeckeElem& a);
  friend bool operator==(const HeckeElem&, const HeckeElem&) = default;
};

// ∏ over positive roots of q_{L_a}^{|⟨a,λ⟩|·e_a}, times q_{L_{2a}}^{|⟨2a,λ⟩|·e_{2a}}
// when 2a is a root; q_{L_a} = q^{f_a}. `ext_e` converts λ to units of F.
std::uint64_t volume_closed_form(const std::vector<RelativeRoot>& positive_roots, int ext_e, int q,
                                 const Cocharacter& lambda);
std::uint64_t volume_closed_form(const BasedRootDatum& datum, int q, const Cocharacter& lambda);

struct Factorization {
  DoubleCosetId id;
  std::vector<DoubleCosetId> factors;  // empty for the unit
  bool verified = false;
};

class HeckeAlgebra {
 public:
  explicit HeckeAlgebra(const CosetEngine& engine, unsigned threads = 1);

  const CosetEngine& engine() const { return E_; }
  int level() const { return E_.m(); }

  HeckeElem unit() const;
  HeckeElem basis(const GroupElem& g) const;
  HeckeElem basis(const DoubleCosetId& id) const;
  std::uint64_t volume(const DoubleCosetId& id) const { return E_.volume(id.lambda); }

  // t_x * t_y: c_z = #{(i,j) : x_i·y_j ∈ K_m z K_m} / vol(z) over right
  // coset representatives. Cached.
  HeckeElem basis_product(const DoubleCosetId& x, const DoubleCosetId& y) const;
  HeckeElem convolve(const HeckeElem& f, const HeckeElem& g) const;

  // h(k·π_λ·k') against h(k)*h(π_λ)*h(k'); throws ConsistencyError when
  // they differ. k, k' are quotient indices.
  HeckeElem conjugate_sandwich(std::uint32_t k, const Cocharacter& lambda, std::uint32_t k2) const;

  // t_id = h(a) * Π h(π_c) * h(b^{-1}) with c from the semigroup generators.
  Factorization factor(const DoubleCosetId& id) const;
  std::vector<Factorization> generator_certificate(const std::vector<DoubleCosetId>& ids) const;

 private:
  const CosetEngine& E_;
  unsigned threads_;
  mutable std::mutex mu_;
  mutable std::map<std::pair<DoubleCosetId, DoubleCosetId>, HeckeElem> cache_;
};

}  // namespace hecke
