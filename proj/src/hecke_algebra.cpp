#include "hecke/hecke_algebra.hpp"

#include "hecke/util.hpp"

namespace hecke {

void HeckeElem::add(const DoubleCosetId& id, const Rational& c) {
  if (c.numerator() == 0) return;
  auto [it, fresh] = terms.emplace(id, c);
  if (fresh) return;
  it->second += c;
  if (it->second.numerator() == 0) terms.erase(it);
}

Rational HeckeElem::coeff(const DoubleCosetId& id) const {
  auto it = terms.find(id);
  return it == terms.end() ? Rational(0) : it->second;
}

HeckeElem operator+(const HeckeElem& a, const HeckeElem& b) {
  if (!a.empty() && !b.empty() && a.level != b.level) throw std::invalid_argument("Hecke elements of different levels");
  HeckeElem r = a;
  if (r.empty()) r.level = b.level;
  for (const auto& [id, c] : b.terms) r.add(id, c);
  return r;
}

HeckeElem operator*(const Rational& c, const HeckeElem& a) {
  HeckeElem r;
  r.level = a.level;
  for (const auto& [id, x] : a.terms) r.add(id, c * x);
  return r;
}

namespace {

std::uint64_t checked_pow(std::uint64_t q, std::int64_t k) {
  std::uint64_t v = 1;
  for (std::int64_t i = 0; i < k; ++i) {
    v *= q;
    if (v > kVolumeGuard) throw GuardError("size guard exceeded: closed-form volume");
  }
  return v;
}

}  // namespace

std::uint64_t volume_closed_form(const std::vector<RelativeRoot>& positive_roots, int ext_e, int q,
                                 const Cocharacter& lambda) {
  std::uint64_t vol = 1;
  for (const auto& a : positive_roots) {
    Rational pairing(lambda[a.i] - lambda[a.j], ext_e);
    Rational exp = pairing * Rational(a.e * a.f);
    if (exp.denominator() != 1) throw std::logic_error("non-integral volume exponent");
    vol *= checked_pow(q, std::abs(exp.numerator()));
    if (a.double_is_root) {
      Rational exp2 = Rational(2) * pairing * Rational(a.e2 * a.f2);
      if (exp2.denominator() != 1) throw std::logic_error("non-integral volume exponent");
      vol *= checked_pow(q, std::abs(exp2.numerator()));
    }
    if (vol > kVolumeGuard) throw GuardError("size guard exceeded: closed-form volume");
  }
  return vol;
}

std::uint64_t volume_closed_form(const BasedRootDatum& datum, int q, const Cocharacter& lambda) {
  return volume_closed_form(datum.positive_roots(), datum.ext_e(), q, lambda);
}

HeckeAlgebra::HeckeAlgebra(const CosetEngine& engine, unsigned threads) : E_(engine), threads_(threads) {}

HeckeElem HeckeAlgebra::basis(const DoubleCosetId& id) const {
  HeckeElem h;
  h.level = level();
  h.add(E_.canonicalize(id), Rational(1));
  return h;
}

HeckeElem HeckeAlgebra::basis(const GroupElem& g) const { return basis(E_.canonical_id(g)); }

HeckeElem HeckeAlgebra::unit() const { return basis(E_.id_of_pi(Cocharacter(std::vector<int>(E_.model().n(), 0)))); }

HeckeElem HeckeAlgebra::basis_product(const DoubleCosetId& x, const DoubleCosetId& y) const {
  const auto key = std::make_pair(x, y);
  {
    std::lock_guard lk(mu_);
    if (auto it = cache_.find(key); it != cache_.end()) return it->second;
  }
  const auto& G = E_.model();
  auto xs = E_.right_coset_reps(x);
  auto ys = E_.right_coset_reps(y);
  std::map<DoubleCosetId, std::uint64_t> counts;
  std::mutex merge;
  parallel_for(xs.size(), threads_, [&](std::size_t i) {
    std::map<DoubleCosetId, std::uint64_t> local;
    for (const auto& yj : ys) ++local[E_.canonical_id(G.gmul(xs[i], yj))];
    std::lock_guard lk(merge);
    for (const auto& [z, c] : local) counts[z] += c;
  });
  HeckeElem out;
  out.level = level();
  for (const auto& [z, c] : counts) {
    const std::uint64_t vz = E_.volume(z.lambda);
    if (c % vz != 0)
      throw ConsistencyError("coset count " + std::to_string(c) + " for " + z.to_string() +
                             " is not a multiple of its volume " + std::to_string(vz));
    out.add(z, Rational(static_cast<std::int64_t>(c / vz)));
  }
  std::lock_guard lk(mu_);
  cache_.emplace(key, out);
  return out;
}

HeckeElem HeckeAlgebra::convolve(const HeckeElem& f, const HeckeElem& g) const {
  HeckeElem out;
  out.level = level();
  for (const auto& [x, cx] : f.terms)
    for (const auto& [y, cy] : g.terms) {
      const Rational c = cx * cy;
      for (const auto& [z, cz] : basis_product(x, y).terms) out.add(z, c * cz);
    }
  return out;
}

HeckeElem HeckeAlgebra::conjugate_sandwich(std::uint32_t k, const Cocharacter& lambda, std::uint32_t k2) const {
  const auto& G = E_.model();
  GroupElem g = G.gmul(G.gmul(E_.lift(k), G.pi_lambda(lambda)), E_.lift(k2));
  HeckeElem lhs = basis(g);
  HeckeElem rhs = convolve(convolve(basis(E_.id_of_k(k)), basis(E_.id_of_pi(lambda))), basis(E_.id_of_k(k2)));
  if (!(lhs == rhs))
    throw ConsistencyError("h(k·π_λ·k') differs from h(k)*h(π_λ)*h(k') at λ = " + lambda.to_string());
  return lhs;
}

Factorization HeckeAlgebra::factor(const DoubleCosetId& raw) const {
  const auto& Q = E_.quotient();
  Factorization out{E_.canonicalize(raw), {}, false};
  const DoubleCosetId& id = out.id;
  const auto e = static_cast<std::uint32_t>(Q.identity_index());
  const auto binv = static_cast<std::uint32_t>(Q.inv(id.b));
  if (id.lambda.norm() == 0) {
    auto k = static_cast<std::uint32_t>(Q.mul(id.a, binv));
    if (k != e) out.factors.push_back(E_.id_of_k(k));
  } else {
    auto parts = E_.datum().decompose(id.lambda);
    if (!parts) return out;
    if (id.a != e) out.factors.push_back(E_.id_of_k(id.a));
    for (const auto& c : *parts) out.factors.push_back(E_.id_of_pi(c));
    if (binv != e) out.factors.push_back(E_.id_of_k(binv));
  }
  HeckeElem prod = unit();
  for (const auto& f : out.factors) prod = convolve(prod, basis(f));
  out.verified = prod == basis(id);
  return out;
}

std::vector<Factorization> HeckeAlgebra::generator_certificate(const std::vector<DoubleCosetId>& ids) const {
  std::vector<Factorization> out;
  for (const auto& id : ids) out.push_back(factor(id));
  return out;
}

}  // namespace hecke
