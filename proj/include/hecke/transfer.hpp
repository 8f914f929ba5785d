#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "hecke/hecke_algebra.hpp"

namespace hecke {

// Pairs audited exhaustively up to this many group products, sampled above.
inline constexpr std::uint64_t kHomAuditExhaustive = 1000000;
inline constexpr std::size_t kHomAuditSamples = 10000;

// Antidominant λ reachable by one product of two window elements: sup norm
// and spread both at most twice the window's.
std::vector<Cocharacter> product_closure(const BasedRootDatum& datum, const std::vector<Cocharacter>& window);

struct TransferAudit {
  std::uint64_t hom_pairs = 0;
  bool hom_exhaustive = false;
  std::map<Cocharacter, std::size_t> stabilizer_sizes;
};

// Both engines at the same m with the same root datum and residue size;
// ψ is a ring isomorphism whose level (in units of the model ring) is at
// least the congruence level. p_{m,*} reduces ψ entrywise to level m.
class TransferPlan {
 public:
  TransferPlan(const CosetEngine& source, const CosetEngine& target, TruncIso psi, std::vector<Cocharacter> window,
               std::uint64_t seed = 0);

  const CosetEngine& source() const { return F_; }
  const CosetEngine& target() const { return Fp_; }
  const TruncIso& psi() const { return psi_; }
  int l() const { return psi_.level(); }
  int m() const { return F_.m(); }
  const std::vector<Cocharacter>& window() const { return window_; }
  const std::vector<Cocharacter>& closure() const { return closure_; }
  const TransferAudit& audit() const { return audit_; }

  // p_{m,*} on quotient indices.
  std::uint32_t p(std::uint32_t k) const { return perm_[k]; }
  Matrix p_matrix(const Matrix& M) const;

  // Image of a source id (any representative pair) on the target side.
  DoubleCosetId map_id(const DoubleCosetId& id) const;
  const std::map<DoubleCosetId, DoubleCosetId>& bijection() const { return table_; }

  // Coefficient-preserving pushforward; throws std::out_of_range for ids
  // over λ outside the closure.
  HeckeElem kazhdan_map(const HeckeElem& f) const;

 private:
  void build_permutation(std::uint64_t seed);
  void audit_stabilizers();
  void build_bijection();

  const CosetEngine& F_;
  const CosetEngine& Fp_;
  TruncIso psi_;
  std::vector<Cocharacter> window_;
  std::vector<Cocharacter> closure_;
  std::vector<std::uint32_t> perm_;
  std::map<DoubleCosetId, DoubleCosetId> table_;
  TransferAudit audit_;
};

struct Mismatch {
  DoubleCosetId x, y, z;  // z on the target side
  Rational c_source, c_target;
};

struct TransferReport {
  std::uint64_t pairs_checked = 0;
  std::vector<Mismatch> mismatches;
  int l = 0;  // units of F
  int m = 0;
  std::string source_backend, target_backend;
  int precision_bound = 0;
  bool theorem_applicable = false;
};

// For every (x, y) over the window: push t_x * t_y forward and compare with
// t_{x'} * t_{y'} on the target side. Mismatches are collected, not thrown.
TransferReport compare_structure_constants(const TransferPlan& plan, const HeckeAlgebra& source,
                                           const HeckeAlgebra& target, const std::vector<DoubleCosetId>& ids,
                                           unsigned threads = 1);

}  // namespace hecke
