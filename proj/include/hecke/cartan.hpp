#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "hecke/group.hpp"
#include "hecke/level_quotient.hpp"

namespace hecke {

inline constexpr std::uint64_t kCosetQuotientGuard = 10000;
inline constexpr std::uint64_t kVolumeGuard = 1000000;

// K_m·a·π_λ·b^{-1}·K_m with a, b indices into the level-m quotient table.
struct DoubleCosetId {
  Cocharacter lambda;
  std::uint32_t a = 0;
  std::uint32_t b = 0;

  std::string to_string() const;
  friend bool operator==(const DoubleCosetId&, const DoubleCosetId&) = default;
  friend auto operator<=>(const DoubleCosetId&, const DoubleCosetId&) = default;
};

// g = a·π_λ·b with a, b in K.
struct CartanDecomposition {
  GroupElem a;
  Cocharacter lambda;
  GroupElem b;
  // SL families: b was rescaled by diag(δ,1,..,1) to land in SL; this is
  // v(δ - 1), so the recomposition is exact only modulo K at that level.
  int det_defect = kInfiniteValuation;
};

// Γ_λ ⊂ (K/K_m)^2, sorted, with the fibres over each first coordinate.
struct StabilizerTable {
  Cocharacter lambda;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> elements;
  std::vector<std::uint32_t> firsts;
  std::vector<std::vector<std::uint32_t>> fibres;  // parallel to firsts

  std::size_t size() const { return elements.size(); }
  bool contains(std::uint32_t a, std::uint32_t b) const;
};

Cocharacter cartan_invariant(const GroupModel& G, const GroupElem& g);
CartanDecomposition cartan_decompose(const GroupModel& G, const GroupElem& g);

// m + max |⟨a,λ⟩|·e_a over the window and the roots, in units of F.
int precision_bound(const BasedRootDatum& datum, const std::vector<Cocharacter>& window, int m);

// Working level (units of F) that keeps a product of cosets with spreads
// s_left, s_right canonicalizable: m_E + s_left + 2·s_right digits of E.
int working_level_for(const GroupSpec& spec, int m, int spread_left, int spread_right);

class CosetEngine;

// Root and torus elements 1 + π^k·y^j generating K_depth modulo the model's
// ring level; depth in ring units.
std::vector<GroupElem> congruence_generators(const GroupModel& G, int depth);

// Number of right K_m-cosets in K_m π_λ K_m, by walking the K_m-orbit of
// π_λ K_m. Independent of the Iwahori count behind CosetEngine::volume.
std::uint64_t orbit_volume(const GroupSpec& spec, int m, const Cocharacter& lambda,
                           std::uint64_t guard = kCosetQuotientGuard);

// Checks g·x·g^{-1} ∈ K_m for every right coset representative g of every
// id over the window and every generator x of K_{n_C}. Returns the number
// of conjugations checked; throws ConsistencyError on the first failure.
std::size_t certify_precision_bound(const CosetEngine& engine, const std::vector<Cocharacter>& window, int n_C);

class CosetEngine {
 public:
  CosetEngine(const GroupSpec& spec, int m, int working_level);
  CosetEngine(LevelQuotient quotient, int m, int working_level);

  const GroupModel& model() const { return G_; }
  const LevelQuotient& quotient() const { return Q_; }
  const BasedRootDatum& datum() const { return G_.datum(); }
  int m() const { return G_.m(); }
  std::string cache_version() const { return Q_.version(); }

  std::shared_ptr<const StabilizerTable> stabilizer(const Cocharacter& lambda) const;
  std::pair<std::uint32_t, std::uint32_t> canonical_pair(const Cocharacter& lambda, std::uint32_t a,
                                                         std::uint32_t b) const;
  DoubleCosetId canonicalize(const DoubleCosetId& id) const;
  DoubleCosetId canonical_id(const GroupElem& g) const;
  DoubleCosetId id_of_pi(const Cocharacter& lambda) const;
  // λ = 0 coset of k ∈ K given by its quotient index.
  DoubleCosetId id_of_k(std::uint32_t k) const;

  GroupElem lift(std::uint32_t index) const;
  GroupElem representative(const DoubleCosetId& id) const;
  std::vector<GroupElem> right_coset_reps(const DoubleCosetId& id) const;
  // Number of right K_m-cosets in the double coset (vol(K_m) = 1).
  std::uint64_t volume(const Cocharacter& lambda) const;

  // All ids over λ in lexicographic (a, b) order.
  std::vector<DoubleCosetId> enumerate_ids(const Cocharacter& lambda) const;

 private:
  void check_lambda(const Cocharacter& lambda) const;
  std::shared_ptr<const std::vector<GroupElem>> local_reps(const Cocharacter& lambda) const;

  GroupModel G_;
  LevelQuotient Q_;
  mutable std::mutex mu_;
  mutable std::map<Cocharacter, std::shared_ptr<const StabilizerTable>> stabilizers_;
  mutable std::map<Cocharacter, std::shared_ptr<const std::vector<GroupElem>>> reps_;
};

}  // namespace hecke
