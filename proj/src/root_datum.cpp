#include "hecke/root_datum.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>

namespace hecke {

std::string family_name(GroupFamily f) {
  switch (f) {
    case GroupFamily::GL: return "GL";
    case GroupFamily::SL: return "SL";
    case GroupFamily::ResGL: return "ResGL";
    case GroupFamily::ResSL: return "ResSL";
  }
  return "?";
}

bool is_special_linear(GroupFamily f) { return f == GroupFamily::SL || f == GroupFamily::ResSL; }
bool is_restriction(GroupFamily f) { return f == GroupFamily::ResGL || f == GroupFamily::ResSL; }

int Cocharacter::norm() const {
  int m = 0;
  for (int x : v) m = std::max(m, std::abs(x));
  return m;
}

int Cocharacter::spread() const {
  if (v.empty()) return 0;
  auto [lo, hi] = std::minmax_element(v.begin(), v.end());
  return *hi - *lo;
}

std::string Cocharacter::to_string() const {
  std::ostringstream os;
  os << "(";
  for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
  os << ")";
  return os.str();
}

Cocharacter operator+(const Cocharacter& a, const Cocharacter& b) {
  if (a.size() != b.size()) throw std::invalid_argument("cocharacter rank mismatch");
  Cocharacter r = a;
  for (std::size_t i = 0; i < a.size(); ++i) r.v[i] += b.v[i];
  return r;
}

Cocharacter operator-(const Cocharacter& a) {
  Cocharacter r = a;
  for (auto& x : r.v) x = -x;
  return r;
}

Cocharacter operator-(const Cocharacter& a, const Cocharacter& b) { return a + (-b); }

BasedRootDatum BasedRootDatum::make(GroupFamily family, int n, int ext_e, int ext_f) {
  if (n < 1 || n > 4) throw std::invalid_argument("rank out of range");
  if (ext_e < 1 || ext_f < 1) throw std::invalid_argument("extension decorations must be positive");
  if (!is_restriction(family) && (ext_e != 1 || ext_f != 1))
    throw std::invalid_argument("split families carry no extension decorations");
  BasedRootDatum d;
  d.family_ = family;
  d.n_ = n;
  d.ext_e_ = ext_e;
  d.ext_f_ = ext_f;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i != j) d.roots_.push_back(RelativeRoot{i, j, ext_e, ext_f});

  WeylElement id(n);
  std::iota(id.begin(), id.end(), 0);
  std::set<WeylElement> seen{id};
  std::vector<WeylElement> frontier{id};
  auto gens = d.simple_reflections();
  while (!frontier.empty()) {
    std::vector<WeylElement> next;
    for (const auto& w : frontier)
      for (const auto& s : gens) {
        auto ws = d.compose(s, w);
        if (seen.insert(ws).second) next.push_back(ws);
      }
    frontier = std::move(next);
  }
  d.weyl_.assign(seen.begin(), seen.end());

  // Generators: the fundamental pieces for GL, the Hilbert basis of the
  // antidominant cone for SL (found by enumeration; rank <= 4 keeps it tiny).
  d.generators_.push_back(Cocharacter(std::vector<int>(n, 0)));
  if (!is_special_linear(family)) {
    for (int k = 1; k < n; ++k) {
      std::vector<int> w(n, 0);
      for (int i = n - k; i < n; ++i) w[i] = 1;
      d.generators_.emplace_back(w);
    }
    d.generators_.emplace_back(std::vector<int>(n, 1));
    d.generators_.emplace_back(std::vector<int>(n, -1));
  } else if (n > 1) {
    auto window = d.antidominant_window(n);
    std::set<Cocharacter> nonzero;
    for (const auto& l : window)
      if (l.norm() > 0) nonzero.insert(l);
    for (const auto& l : nonzero) {
      bool reducible = false;
      for (const auto& a : nonzero) {
        auto b = l - a;
        if (b.norm() > 0 && d.is_antidominant(b) && d.in_lattice(b)) {
          reducible = true;
          break;
        }
      }
      if (!reducible) d.generators_.push_back(l);
    }
  }
  return d;
}

std::vector<RelativeRoot> BasedRootDatum::positive_roots() const {
  std::vector<RelativeRoot> out;
  for (const auto& a : roots_)
    if (a.i < a.j) out.push_back(a);
  return out;
}

std::vector<RelativeRoot> BasedRootDatum::simple_roots() const {
  std::vector<RelativeRoot> out;
  for (const auto& a : roots_)
    if (a.j == a.i + 1) out.push_back(a);
  return out;
}

Cocharacter BasedRootDatum::coroot(const RelativeRoot& a) const {
  Cocharacter c(std::vector<int>(n_, 0));
  c.v[a.i] = ext_e_;
  c.v[a.j] = -ext_e_;
  return c;
}

RelativeRoot BasedRootDatum::negate(const RelativeRoot& a) const {
  RelativeRoot r = a;
  std::swap(r.i, r.j);
  return r;
}

bool BasedRootDatum::in_lattice(const Cocharacter& lambda) const {
  if (static_cast<int>(lambda.size()) != n_) return false;
  if (!is_special_linear(family_)) return true;
  return std::accumulate(lambda.v.begin(), lambda.v.end(), 0) == 0;
}

Rational BasedRootDatum::pairing(const RelativeRoot& a, const Cocharacter& lambda) const {
  return Rational(lambda[a.i] - lambda[a.j], ext_e_);
}

std::int64_t BasedRootDatum::weighted_pairing(const RelativeRoot& a, const Cocharacter& lambda) const {
  Rational r = pairing(a, lambda) * Rational(a.e);
  if (r.denominator() != 1) throw std::logic_error("weighted pairing is not integral");
  return r.numerator();
}

std::vector<WeylElement> BasedRootDatum::simple_reflections() const {
  std::vector<WeylElement> out;
  for (int i = 0; i + 1 < n_; ++i) {
    WeylElement s(n_);
    std::iota(s.begin(), s.end(), 0);
    std::swap(s[i], s[i + 1]);
    out.push_back(s);
  }
  return out;
}

WeylElement BasedRootDatum::compose(const WeylElement& a, const WeylElement& b) const {
  // (a∘b)[i] = a[b[i]]: apply b first.
  WeylElement r(n_);
  for (int i = 0; i < n_; ++i) r[i] = a[b[i]];
  return r;
}

Cocharacter BasedRootDatum::act(const WeylElement& w, const Cocharacter& lambda) const {
  Cocharacter r(std::vector<int>(n_, 0));
  for (int i = 0; i < n_; ++i) r.v[w[i]] = lambda[i];
  return r;
}

RelativeRoot BasedRootDatum::act(const WeylElement& w, const RelativeRoot& a) const {
  RelativeRoot r = a;
  r.i = w[a.i];
  r.j = w[a.j];
  return r;
}

std::vector<std::vector<int>> BasedRootDatum::weyl_matrix(const WeylElement& w) const {
  std::vector<std::vector<int>> m(n_, std::vector<int>(n_, 0));
  for (int i = 0; i < n_; ++i) m[w[i]][i] = 1;
  return m;
}

bool BasedRootDatum::is_antidominant(const Cocharacter& lambda) const {
  for (const auto& a : simple_roots())
    if (pairing(a, lambda).numerator() > 0) return false;
  return true;
}

std::pair<Cocharacter, WeylElement> BasedRootDatum::antidominant_rep(const Cocharacter& lambda) const {
  if (static_cast<int>(lambda.size()) != n_) throw std::invalid_argument("cocharacter rank mismatch");
  std::vector<int> order(n_);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return lambda[a] < lambda[b]; });
  WeylElement w(n_);
  for (int pos = 0; pos < n_; ++pos) w[order[pos]] = pos;
  return {act(w, lambda), w};
}

std::vector<Cocharacter> BasedRootDatum::semigroup_generators() const { return generators_; }

std::optional<std::vector<Cocharacter>> BasedRootDatum::decompose(const Cocharacter& lambda) const {
  if (!in_lattice(lambda) || !is_antidominant(lambda)) return std::nullopt;
  std::vector<Cocharacter> out;
  Cocharacter rest = lambda;
  if (!is_special_linear(family_)) {
    // Peel off the central part so the remainder has first coordinate 0.
    const int c = lambda[0];
    for (int k = 0; k < std::abs(c); ++k) out.emplace_back(std::vector<int>(n_, c > 0 ? 1 : -1));
    for (auto& x : rest.v) x -= c;
  }
  std::vector<Cocharacter> gens;
  for (const auto& g : generators_)
    if (g.norm() > 0 && (is_special_linear(family_) || g[0] == 0)) gens.push_back(g);
  std::map<Cocharacter, std::optional<std::vector<Cocharacter>>> memo;
  std::function<std::optional<std::vector<Cocharacter>>(const Cocharacter&)> search =
      [&](const Cocharacter& l) -> std::optional<std::vector<Cocharacter>> {
    if (l.norm() == 0) return std::vector<Cocharacter>{};
    if (auto it = memo.find(l); it != memo.end()) return it->second;
    std::optional<std::vector<Cocharacter>> found;
    for (const auto& g : gens) {
      auto r = l - g;
      if (!is_antidominant(r) || !in_lattice(r)) continue;
      if (!is_special_linear(family_) && r[0] != 0) continue;
      if (auto sub = search(r)) {
        sub->push_back(g);
        found = sub;
        break;
      }
    }
    memo[l] = found;
    return found;
  };
  auto tail = search(rest);
  if (!tail) return std::nullopt;
  out.insert(out.end(), tail->begin(), tail->end());
  return out;
}

std::vector<Cocharacter> BasedRootDatum::antidominant_window(int radius, int max_spread) const {
  std::vector<Cocharacter> out;
  std::vector<int> cur(n_, -radius);
  std::function<void(int)> rec = [&](int pos) {
    if (pos == n_) {
      Cocharacter l(cur);
      if (in_lattice(l) && (max_spread < 0 || l.spread() <= max_spread)) out.push_back(l);
      return;
    }
    for (int x = pos ? cur[pos - 1] : -radius; x <= radius; ++x) {
      cur[pos] = x;
      rec(pos + 1);
    }
  };
  rec(0);
  return out;
}

}  // namespace hecke
