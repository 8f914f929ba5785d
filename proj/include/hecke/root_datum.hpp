#pragma once

#include <boost/rational.hpp>
#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace hecke {

using Rational = boost::rational<std::int64_t>;

enum class GroupFamily { GL, SL, ResGL, ResSL };

std::string family_name(GroupFamily f);
bool is_special_linear(GroupFamily f);
bool is_restriction(GroupFamily f);

// Integer vector in the cocharacter lattice. For restriction families the
// coordinates are valuations in the extension E, so X_*(A) sits inside as
// e(E/F)·Z^n.
struct Cocharacter {
  std::vector<int> v;

  Cocharacter() = default;
  explicit Cocharacter(std::vector<int> c) : v(std::move(c)) {}
  Cocharacter(std::initializer_list<int> c) : v(c) {}

  std::size_t size() const { return v.size(); }
  int operator[](std::size_t i) const { return v[i]; }
  int norm() const;    // sup norm
  int spread() const;  // max - min
  std::string to_string() const;

  friend Cocharacter operator+(const Cocharacter& a, const Cocharacter& b);
  friend Cocharacter operator-(const Cocharacter& a, const Cocharacter& b);
  friend Cocharacter operator-(const Cocharacter& a);
  friend bool operator==(const Cocharacter&, const Cocharacter&) = default;
  friend auto operator<=>(const Cocharacter&, const Cocharacter&) = default;
};

struct RelativeRoot {
  int i = 0, j = 0;  // the character e_i - e_j
  int e = 1;         // ramification index of L_a / F
  int f = 1;         // residue degree of L_a / F
  bool double_is_root = false;
  int e2 = 1, f2 = 1;  // decorations of 2a when it is a root

  friend bool operator==(const RelativeRoot&, const RelativeRoot&) = default;
};

// Permutation w of coordinates: (w·λ)[w[i]] = λ[i].
using WeylElement = std::vector<int>;

class BasedRootDatum {
 public:
  static BasedRootDatum make(GroupFamily family, int n, int ext_e = 1, int ext_f = 1);

  GroupFamily family() const { return family_; }
  int rank() const { return n_; }
  int ext_e() const { return ext_e_; }
  int ext_f() const { return ext_f_; }

  const std::vector<RelativeRoot>& roots() const { return roots_; }
  std::vector<RelativeRoot> positive_roots() const;
  std::vector<RelativeRoot> simple_roots() const;
  Cocharacter coroot(const RelativeRoot& a) const;
  RelativeRoot negate(const RelativeRoot& a) const;

  bool in_lattice(const Cocharacter& lambda) const;
  Rational pairing(const RelativeRoot& a, const Cocharacter& lambda) const;
  // ⟨a, λ⟩·e_a; an integer for every implemented family.
  std::int64_t weighted_pairing(const RelativeRoot& a, const Cocharacter& lambda) const;

  const std::vector<WeylElement>& weyl_group() const { return weyl_; }
  std::vector<WeylElement> simple_reflections() const;
  Cocharacter act(const WeylElement& w, const Cocharacter& lambda) const;
  RelativeRoot act(const WeylElement& w, const RelativeRoot& a) const;
  std::vector<std::vector<int>> weyl_matrix(const WeylElement& w) const;
  WeylElement compose(const WeylElement& a, const WeylElement& b) const;

  bool is_antidominant(const Cocharacter& lambda) const;
  std::pair<Cocharacter, WeylElement> antidominant_rep(const Cocharacter& lambda) const;

  std::vector<Cocharacter> semigroup_generators() const;
  // Nonzero generators summing to λ (λ antidominant); nullopt if none found.
  std::optional<std::vector<Cocharacter>> decompose(const Cocharacter& lambda) const;

  // Antidominant lattice points with sup norm <= radius (and spread <= max_spread if given).
  std::vector<Cocharacter> antidominant_window(int radius, int max_spread = -1) const;

 private:
  GroupFamily family_ = GroupFamily::GL;
  int n_ = 1;
  int ext_e_ = 1;
  int ext_f_ = 1;
  std::vector<RelativeRoot> roots_;
  std::vector<WeylElement> weyl_;
  std::vector<Cocharacter> generators_;
};

}  // namespace hecke
