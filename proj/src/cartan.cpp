#include "hecke/cartan.hpp"

#include <algorithm>
#include <deque>
#include <sstream>

namespace hecke {

std::string DoubleCosetId::to_string() const {
  std::ostringstream os;
  os << lambda.to_string() << "[" << a << "," << b << "]";
  return os.str();
}

bool StabilizerTable::contains(std::uint32_t a, std::uint32_t b) const {
  return std::binary_search(elements.begin(), elements.end(), std::make_pair(a, b));
}

namespace {

Matrix scale_row(const TruncatedRing& R, Matrix M, int row, const RingElem& c) {
  for (int j = 0; j < M.n; ++j) M(row, j) = R.mul(c, M(row, j));
  return M;
}

Matrix scale_col(const TruncatedRing& R, Matrix M, int col, const RingElem& c) {
  for (int i = 0; i < M.n; ++i) M(i, col) = R.mul(M(i, col), c);
  return M;
}

}  // namespace

CartanDecomposition cartan_decompose(const GroupModel& G, const GroupElem& g) {
  const auto& R = G.ring();
  SmithForm s = smith_form(R, g.mat, g.prec);
  std::vector<int> lam;
  for (int v : s.mu) lam.push_back(v - g.shift);
  CartanDecomposition out{GroupElem{0, s.A, g.prec}, Cocharacter(lam), GroupElem{0, s.B, g.prec}};
  if (is_special_linear(G.spec().family)) {
    // Diagonal rescalings commute with π_λ.
    RingElem dA = mat_det(R, s.A);
    out.a.mat = scale_col(R, s.A, 0, R.invert_unit(dA));
    Matrix b = scale_row(R, s.B, 0, dA);
    RingElem db = mat_det(R, b);
    out.det_defect = R.valuation(R.sub(db, R.one()));
    out.b.mat = scale_row(R, b, 0, R.invert_unit(db));
  }
  return out;
}

Cocharacter cartan_invariant(const GroupModel& G, const GroupElem& g) {
  SmithForm s = smith_form(G.ring(), g.mat, g.prec);
  std::vector<int> lam;
  for (int v : s.mu) lam.push_back(v - g.shift);
  return Cocharacter(lam);
}

int precision_bound(const BasedRootDatum& datum, const std::vector<Cocharacter>& window, int m) {
  std::int64_t worst = 0;
  for (const auto& l : window)
    for (const auto& a : datum.roots()) worst = std::max(worst, std::abs(datum.weighted_pairing(a, l)));
  return m + static_cast<int>(worst);
}

int working_level_for(const GroupSpec& spec, int m, int spread_left, int spread_right) {
  const int digits = spec.ext_e * m + spread_left + 2 * spread_right;
  return std::max(m, (digits + spec.ext_e - 1) / spec.ext_e);
}

CosetEngine::CosetEngine(const GroupSpec& spec, int m, int working_level)
    : CosetEngine(LevelQuotient::enumerate(spec, m, kCosetQuotientGuard), m, working_level) {}

CosetEngine::CosetEngine(LevelQuotient quotient, int m, int working_level)
    : G_(quotient.spec(), m, working_level), Q_(std::move(quotient)) {
  if (Q_.level() != m) throw std::invalid_argument("quotient table is for another level");
  if (Q_.size() > kCosetQuotientGuard)
    throw GuardError("size guard exceeded: |K/K_m| = " + std::to_string(Q_.size()));
}

void CosetEngine::check_lambda(const Cocharacter& lambda) const {
  if (!datum().in_lattice(lambda)) throw std::invalid_argument("λ = " + lambda.to_string() + " is not in the lattice");
  if (!datum().is_antidominant(lambda)) throw std::invalid_argument("λ = " + lambda.to_string() + " is not antidominant");
}

GroupElem CosetEngine::lift(std::uint32_t index) const { return G_.lift_quotient(Q_.element(index)); }

std::shared_ptr<const StabilizerTable> CosetEngine::stabilizer(const Cocharacter& lambda) const {
  check_lambda(lambda);
  std::lock_guard lk(mu_);
  if (auto it = stabilizers_.find(lambda); it != stabilizers_.end()) return it->second;

  const TruncatedRing& Rq = Q_.ring();
  const int n = G_.n();
  const std::size_t N = Q_.size();
  std::vector<std::pair<std::uint32_t, std::uint32_t>> gens;
  auto idx = [&](const Matrix& M) { return static_cast<std::uint32_t>(Q_.index(M)); };
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      const int s = std::abs(lambda[i] - lambda[j]);
      for (std::size_t c = 0; c < Rq.coord_count(); ++c) {
        RingElem beta = Rq.basis_element(c);
        RingElem shifted = Rq.mul_pi(beta, s);
        // x_ij(β)·π_λ = π_λ·x_ij(π^s β) above the diagonal, mirrored below.
        if (i < j)
          gens.emplace_back(idx(mat_elementary(Rq, n, i, j, beta)), idx(mat_elementary(Rq, n, i, j, shifted)));
        else
          gens.emplace_back(idx(mat_elementary(Rq, n, i, j, shifted)), idx(mat_elementary(Rq, n, i, j, beta)));
      }
    }
  for (const auto& u : Rq.elements()) {
    if (!Rq.is_unit(u) || u == Rq.one()) continue;
    for (int i = 0; i < n; ++i) {
      std::vector<RingElem> d(n, Rq.one());
      if (is_special_linear(G_.spec().family)) {
        if (i + 1 == n) break;
        d[i] = u;
        d[i + 1] = Rq.invert_unit(u);
      } else {
        d[i] = u;
      }
      auto t = idx(mat_diag(Rq, d));
      gens.emplace_back(t, t);
    }
  }

  std::vector<bool> seen(N * N, false);
  const auto e = static_cast<std::uint32_t>(Q_.identity_index());
  std::vector<std::pair<std::uint32_t, std::uint32_t>> elems{{e, e}};
  seen[e * N + e] = true;
  for (std::size_t head = 0; head < elems.size(); ++head) {
    auto [x, y] = elems[head];
    for (auto [g1, g2] : gens) {
      auto nx = static_cast<std::uint32_t>(Q_.mul(x, g1));
      auto ny = static_cast<std::uint32_t>(Q_.mul(y, g2));
      if (!seen[nx * N + ny]) {
        seen[nx * N + ny] = true;
        elems.emplace_back(nx, ny);
      }
    }
  }
  std::sort(elems.begin(), elems.end());
  if ((N * N) % elems.size() != 0)
    throw AuditError("stabilizer order does not divide |K/K_m|^2");

  auto table = std::make_shared<StabilizerTable>();
  table->lambda = lambda;
  table->elements = std::move(elems);
  for (auto [x, y] : table->elements) {
    if (table->firsts.empty() || table->firsts.back() != x) {
      table->firsts.push_back(x);
      table->fibres.emplace_back();
    }
    table->fibres.back().push_back(y);
  }
  stabilizers_[lambda] = table;
  return table;
}

std::pair<std::uint32_t, std::uint32_t> CosetEngine::canonical_pair(const Cocharacter& lambda, std::uint32_t a,
                                                                    std::uint32_t b) const {
  auto st = stabilizer(lambda);
  std::size_t best_k = 0;
  std::size_t best_a = SIZE_MAX;
  for (std::size_t k = 0; k < st->firsts.size(); ++k) {
    auto v = Q_.mul(a, st->firsts[k]);
    if (v < best_a) {
      best_a = v;
      best_k = k;
    }
  }
  std::size_t best_b = SIZE_MAX;
  for (auto g2 : st->fibres[best_k]) best_b = std::min(best_b, Q_.mul(b, g2));
  return {static_cast<std::uint32_t>(best_a), static_cast<std::uint32_t>(best_b)};
}

DoubleCosetId CosetEngine::canonicalize(const DoubleCosetId& id) const {
  auto [a, b] = canonical_pair(id.lambda, id.a, id.b);
  return DoubleCosetId{id.lambda, a, b};
}

DoubleCosetId CosetEngine::canonical_id(const GroupElem& g) const {
  auto dec = cartan_decompose(G_, g);
  const int need = G_.congruence_level() + dec.lambda.spread();
  if (g.prec < need)
    throw PrecisionError("precision exhausted: canonical id of λ = " + dec.lambda.to_string() + " needs " +
                         std::to_string(need) + " digits, have " + std::to_string(g.prec));
  if (dec.det_defect < G_.congruence_level())
    throw PrecisionError("precision exhausted: determinant not certified modulo K_m");
  const auto& Rq = Q_.ring();
  auto a = static_cast<std::uint32_t>(Q_.index(mat_reduce(G_.ring(), dec.a.mat, Rq)));
  auto b = static_cast<std::uint32_t>(Q_.inv(Q_.index(mat_reduce(G_.ring(), dec.b.mat, Rq))));
  return canonicalize(DoubleCosetId{dec.lambda, a, b});
}

DoubleCosetId CosetEngine::id_of_pi(const Cocharacter& lambda) const {
  auto e = static_cast<std::uint32_t>(Q_.identity_index());
  return canonicalize(DoubleCosetId{lambda, e, e});
}

DoubleCosetId CosetEngine::id_of_k(std::uint32_t k) const {
  auto e = static_cast<std::uint32_t>(Q_.identity_index());
  return canonicalize(DoubleCosetId{Cocharacter(std::vector<int>(G_.n(), 0)), k, e});
}

GroupElem CosetEngine::representative(const DoubleCosetId& id) const {
  check_lambda(id.lambda);
  return G_.gmul(G_.gmul(lift(id.a), G_.pi_lambda(id.lambda)), lift(static_cast<std::uint32_t>(Q_.inv(id.b))));
}

std::uint64_t CosetEngine::volume(const Cocharacter& lambda) const {
  check_lambda(lambda);
  const std::uint64_t q = static_cast<std::uint64_t>(G_.spec().field.q());
  std::uint64_t v = 1;
  for (int i = 0; i < G_.n(); ++i)
    for (int j = 0; j < i; ++j)
      for (int k = 0; k < lambda[i] - lambda[j]; ++k) {
        v *= q;
        if (v > kVolumeGuard) throw GuardError("size guard exceeded: coset volume of " + lambda.to_string());
      }
  return v;
}

std::shared_ptr<const std::vector<GroupElem>> CosetEngine::local_reps(const Cocharacter& lambda) const {
  check_lambda(lambda);
  const std::uint64_t count = volume(lambda);
  {
    std::lock_guard lk(mu_);
    if (auto it = reps_.find(lambda); it != reps_.end()) return it->second;
  }
  // K_m π_λ K_m / K_m ↔ lower unitriangular 1 + π^m·r with r_ij ∈ O/π^{λ_i-λ_j}.
  const auto& R = G_.ring();
  const int n = G_.n();
  const int M = G_.congruence_level();
  std::vector<std::pair<int, int>> slots;
  std::vector<std::vector<RingElem>> choices;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < i; ++j) {
      const int s = lambda[i] - lambda[j];
      if (s == 0) continue;
      if (M + s > R.level()) throw PrecisionError("precision exhausted: coset representatives of " + lambda.to_string());
      TruncatedRing Rs(G_.spec().field, s);
      std::vector<RingElem> opts;
      for (const auto& r : Rs.elements()) opts.push_back(R.mul_pi(R.lift(r, Rs), M));
      slots.emplace_back(i, j);
      choices.push_back(std::move(opts));
    }
  auto out = std::make_shared<std::vector<GroupElem>>();
  out->reserve(count);
  const GroupElem pl = G_.pi_lambda(lambda);
  std::vector<std::size_t> pos(slots.size(), 0);
  for (;;) {
    Matrix u = mat_identity(R, n);
    for (std::size_t k = 0; k < slots.size(); ++k) u(slots[k].first, slots[k].second) = choices[k][pos[k]];
    out->push_back(G_.gmul(GroupElem{0, u, R.level()}, pl));
    std::size_t k = 0;
    while (k < slots.size() && ++pos[k] == choices[k].size()) pos[k++] = 0;
    if (k == slots.size()) break;
  }
  if (out->size() != count) throw ConsistencyError("right coset count differs from the volume");
  std::lock_guard lk(mu_);
  reps_.emplace(lambda, out);
  return out;
}

std::vector<GroupElem> CosetEngine::right_coset_reps(const DoubleCosetId& id) const {
  auto base = local_reps(id.lambda);
  GroupElem a = lift(id.a);
  GroupElem binv = lift(static_cast<std::uint32_t>(Q_.inv(id.b)));
  std::vector<GroupElem> out;
  out.reserve(base->size());
  for (const auto& x : *base) out.push_back(G_.gmul(G_.gmul(a, x), binv));
  return out;
}

std::vector<DoubleCosetId> CosetEngine::enumerate_ids(const Cocharacter& lambda) const {
  auto st = stabilizer(lambda);
  const std::size_t N = Q_.size();
  std::vector<bool> seen(N * N, false);
  std::vector<DoubleCosetId> out;
  for (std::size_t a = 0; a < N; ++a)
    for (std::size_t b = 0; b < N; ++b) {
      if (seen[a * N + b]) continue;
      out.push_back(DoubleCosetId{lambda, static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(b)});
      for (auto [g1, g2] : st->elements) seen[Q_.mul(a, g1) * N + Q_.mul(b, g2)] = true;
    }
  return out;
}

std::vector<GroupElem> congruence_generators(const GroupModel& G, int depth) {
  const auto& R = G.ring();
  const int n = G.n();
  std::vector<GroupElem> gens;
  RingElem y = R.residue_generator();
  for (int k = depth; k < R.level(); ++k)
    for (int j = 0; j < G.spec().field.f; ++j) {
      RingElem x = R.mul_pi(R.pow(y, j), k);
      for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c)
          if (r != c) gens.push_back(GroupElem{0, mat_elementary(R, n, r, c, x), R.level()});
      RingElem t = R.add(R.one(), x);
      for (int i = 0; i < n; ++i) {
        std::vector<RingElem> d(n, R.one());
        if (is_special_linear(G.spec().family)) {
          if (i + 1 == n) break;
          d[i + 1] = R.invert_unit(t);
        }
        d[i] = t;
        gens.push_back(GroupElem{0, mat_diag(R, d), R.level()});
      }
    }
  return gens;
}

std::uint64_t orbit_volume(const GroupSpec& spec, int m, const Cocharacter& lambda, std::uint64_t guard) {
  const int s = lambda.spread();
  GroupModel G(spec, m, working_level_for(spec, m, s, s));
  const auto gens = congruence_generators(G, G.congruence_level());
  std::vector<GroupElem> orbit{G.pi_lambda(lambda)}, invs{G.ginv(orbit[0])};
  for (std::size_t i = 0; i < orbit.size(); ++i)
    for (const auto& x : gens) {
      GroupElem c = G.gmul(x, orbit[i]);
      bool fresh = true;
      for (const auto& ri : invs)
        if (G.in_Km(G.gmul(ri, c), m)) {
          fresh = false;
          break;
        }
      if (!fresh) continue;
      if (orbit.size() >= guard) throw GuardError("size guard exceeded: coset orbit of " + lambda.to_string());
      invs.push_back(G.ginv(c));
      orbit.push_back(std::move(c));
    }
  return orbit.size();
}

std::size_t certify_precision_bound(const CosetEngine& engine, const std::vector<Cocharacter>& window, int n_C) {
  const GroupModel& G = engine.model();
  // K_{n_C} modulo the working level: root elements and torus elements
  // 1 + π^k·y^j for every depth k >= n_C.
  const auto gens = congruence_generators(G, G.spec().ext_e * n_C);
  std::size_t checked = 0;
  for (const auto& lambda : window)
    for (const auto& id : engine.enumerate_ids(lambda))
      for (const auto& g : engine.right_coset_reps(id)) {
        GroupElem gi = G.ginv(g);
        for (const auto& x : gens) {
          if (!G.in_Km(G.gmul(G.gmul(g, x), gi), G.m()))
            throw ConsistencyError("g·K_n·g^-1 escapes K_m for g in " + id.to_string());
          ++checked;
        }
      }
  return checked;
}

}  // namespace hecke
