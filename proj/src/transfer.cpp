#include "hecke/transfer.hpp"

#include <algorithm>
#include <random>
#include <set>
#include <stdexcept>

#include "hecke/util.hpp"

namespace hecke {

std::vector<Cocharacter> product_closure(const BasedRootDatum& datum, const std::vector<Cocharacter>& window) {
  int norm = 0, spread = 0;
  for (const auto& l : window) {
    norm = std::max(norm, l.norm());
    spread = std::max(spread, l.spread());
  }
  if (window.empty()) return {};
  return datum.antidominant_window(2 * norm, 2 * spread);
}

TransferPlan::TransferPlan(const CosetEngine& source, const CosetEngine& target, TruncIso psi,
                           std::vector<Cocharacter> window, std::uint64_t seed)
    : F_(source), Fp_(target), psi_(std::move(psi)), window_(std::move(window)) {
  const auto& s = F_.model().spec();
  const auto& t = Fp_.model().spec();
  if (s.family != t.family || s.n != t.n || s.ext_e != t.ext_e || s.ext_f != t.ext_f)
    throw std::invalid_argument("transfer needs the same group family on both sides");
  if (s.base_q() != t.base_q()) throw std::invalid_argument("transfer needs equal residue fields");
  if (F_.m() != Fp_.m()) throw std::invalid_argument("transfer needs the same level m on both sides");
  if (!(psi_.source().descriptor() == s.field) || !(psi_.target().descriptor() == t.field))
    throw std::invalid_argument("ψ does not connect the two backends");
  if (psi_.level() < F_.model().congruence_level())
    throw TransferError("fields not close enough at level " + std::to_string(l()) + ": ψ is coarser than K_m");
  closure_ = product_closure(F_.datum(), window_);
  build_permutation(seed);
  audit_stabilizers();
  build_bijection();
}

Matrix TransferPlan::p_matrix(const Matrix& M) const {
  const auto& q = F_.model().quotient_ring();
  const auto& qp = Fp_.model().quotient_ring();
  Matrix out;
  out.n = M.n;
  for (const auto& x : M.a) out.a.push_back(psi_.target().reduce(psi_.apply(psi_.source().lift(x, q)), qp));
  return out;
}

void TransferPlan::build_permutation(std::uint64_t seed) {
  const auto& Q = F_.quotient();
  const auto& Qp = Fp_.quotient();
  if (Q.size() != Qp.size())
    throw TransferError("fields not close enough at level " + std::to_string(l()) + ": |K/K_m| differs");
  perm_.resize(Q.size());
  std::vector<char> hit(Q.size(), 0);
  for (std::size_t i = 0; i < Q.size(); ++i) {
    auto j = Qp.find(p_matrix(Q.element(i)));
    if (!j || hit[*j]) throw AuditError("p_{m,*} is not a bijection K/K_m -> K'/K_m");
    hit[*j] = 1;
    perm_[i] = static_cast<std::uint32_t>(*j);
  }
  const std::uint64_t n = Q.size();
  auto check = [&](std::size_t i, std::size_t j) {
    if (perm_[Q.mul(i, j)] != Qp.mul(perm_[i], perm_[j])) throw AuditError("p_{m,*} does not respect products");
  };
  if (n * n <= kHomAuditExhaustive) {
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) check(i, j);
    audit_.hom_pairs = n * n;
    audit_.hom_exhaustive = true;
  } else {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::size_t> pick(0, n - 1);
    for (std::size_t t = 0; t < kHomAuditSamples; ++t) check(pick(rng), pick(rng));
    audit_.hom_pairs = kHomAuditSamples;
  }
}

void TransferPlan::audit_stabilizers() {
  for (const auto& lam : closure_) {
    auto G = F_.stabilizer(lam);
    auto Gp = Fp_.stabilizer(lam);
    bool ok = G->size() == Gp->size();
    for (std::size_t i = 0; ok && i < G->elements.size(); ++i) {
      const auto [a, b] = G->elements[i];
      ok = Gp->contains(perm_[a], perm_[b]);
    }
    if (!ok)
      throw TransferError("fields not close enough at level " + std::to_string(l()) + ": Γ_λ not matched at λ = " +
                          lam.to_string());
    audit_.stabilizer_sizes[lam] = G->size();
  }
}

DoubleCosetId TransferPlan::map_id(const DoubleCosetId& id) const {
  return Fp_.canonicalize(DoubleCosetId{id.lambda, perm_[id.a], perm_[id.b]});
}

void TransferPlan::build_bijection() {
  std::set<DoubleCosetId> images;
  for (const auto& lam : closure_) {
    if (F_.volume(lam) != Fp_.volume(lam))
      throw TransferError("volume differs across backends at λ = " + lam.to_string());
    for (const auto& id : F_.enumerate_ids(lam)) {
      auto img = map_id(id);
      if (!images.insert(img).second) throw TransferError("basis map not injective at " + id.to_string());
      table_.emplace(id, img);
    }
  }
}

HeckeElem TransferPlan::kazhdan_map(const HeckeElem& f) const {
  HeckeElem out;
  out.level = f.level;
  for (const auto& [id, c] : f.terms) {
    auto it = table_.find(F_.canonicalize(id));
    if (it == table_.end()) throw std::out_of_range("id " + id.to_string() + " outside the transfer window");
    out.add(it->second, c);
  }
  return out;
}

TransferReport compare_structure_constants(const TransferPlan& plan, const HeckeAlgebra& source,
                                           const HeckeAlgebra& target, const std::vector<DoubleCosetId>& ids,
                                           unsigned threads) {
  TransferReport r;
  const int ext_e = plan.source().model().spec().ext_e;
  r.l = plan.l() / ext_e;
  r.m = plan.m();
  r.source_backend = plan.source().model().spec().describe();
  r.target_backend = plan.target().model().spec().describe();
  std::vector<Cocharacter> lams;
  for (const auto& id : ids) lams.push_back(id.lambda);
  r.precision_bound = precision_bound(plan.source().datum(), lams, plan.m());
  r.theorem_applicable = plan.l() >= r.precision_bound * ext_e;

  std::vector<std::vector<Mismatch>> found(ids.size());
  parallel_for(ids.size(), threads, [&](std::size_t i) {
    const auto& x = ids[i];
    const auto xp = plan.map_id(x);
    for (const auto& y : ids) {
      const auto pushed = plan.kazhdan_map(source.basis_product(x, y));
      const auto direct = target.basis_product(xp, plan.map_id(y));
      if (pushed == direct) continue;
      std::set<DoubleCosetId> zs;
      for (const auto& [z, c] : pushed.terms) zs.insert(z);
      for (const auto& [z, c] : direct.terms) zs.insert(z);
      for (const auto& z : zs)
        if (pushed.coeff(z) != direct.coeff(z)) found[i].push_back({x, y, z, pushed.coeff(z), direct.coeff(z)});
    }
  });
  r.pairs_checked = ids.size() * ids.size();
  for (auto& v : found) r.mismatches.insert(r.mismatches.end(), v.begin(), v.end());
  return r;
}

}  // namespace hecke
