#pragma once

#include <array>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hecke/errors.hpp"

namespace hecke {

enum class FieldKind { mixed, equal };

// Element of the unramified base W(F_q), as a polynomial in y of degree < f.
using WittCoeff = std::array<std::int64_t, 3>;

inline constexpr int kMaxResidueDegree = 3;
inline constexpr std::size_t kMaxCoords = 32;
inline constexpr int kInfiniteValuation = std::numeric_limits<int>::max();

// Irreducible g(y) with F_q = F_p[y]/(g), little-endian, monic of degree f.
std::vector<std::int64_t> residue_modulus(int p, int f);

struct FieldDescriptor {
  FieldKind kind = FieldKind::equal;
  int p = 2;
  int f = 1;
  // Mixed kind only: monic Eisenstein polynomial over W(F_q), little-endian.
  std::vector<WittCoeff> eisenstein;

  static FieldDescriptor equal_char(int p, int f = 1);
  // Coefficients over Z (f = 1 style), e.g. {-2, 0, 1} for x^2 - 2.
  static FieldDescriptor mixed_char(int p, std::vector<std::int64_t> poly, int f = 1);

  int q() const;
  // Absolute ramification index; 0 for equal characteristic (no relation).
  int ramification() const;
  std::string describe() const;
  void validate() const;

  friend bool operator==(const FieldDescriptor&, const FieldDescriptor&) = default;
};

class RingElem {
 public:
  RingElem() = default;

  std::uint32_t tag() const { return tag_; }
  std::size_t size() const { return n_; }
  std::int64_t operator[](std::size_t i) const { return c_[i]; }
  std::span<const std::int32_t> coords() const { return {c_.data(), n_}; }

  friend bool operator==(const RingElem&, const RingElem&) = default;

 private:
  friend class TruncatedRing;
  std::array<std::int32_t, kMaxCoords> c_{};
  std::uint32_t tag_ = 0;
  std::uint32_t n_ = 0;
};

// O_F / p_F^n. Coordinates are (π-digit i, y-power j) pairs, digit-major.
// Mixed kind: digit i lives in (Z/p^{k_i})[y]/(G) with k_i = ceil((n-i)/e),
// for i < min(e, n). Equal kind: digit i in F_q for i < n.
class TruncatedRing {
 public:
  TruncatedRing(FieldDescriptor desc, int level);

  const FieldDescriptor& descriptor() const { return desc_; }
  int level() const { return level_; }
  int p() const { return desc_.p; }
  int f() const { return desc_.f; }
  int q() const { return q_; }
  std::uint32_t tag() const { return tag_; }
  std::size_t digits() const { return digits_; }
  std::size_t coord_count() const { return digits_ * desc_.f; }
  std::int64_t radix(std::size_t coord) const { return digit_mod_[coord / desc_.f]; }
  // q^level; throws GuardError when it does not fit in 64 bits.
  std::uint64_t size() const;

  RingElem zero() const;
  RingElem one() const;
  RingElem pi() const;
  RingElem residue_generator() const;
  RingElem from_int(std::int64_t v) const;
  RingElem from_coords(std::span<const std::int64_t> coords) const;
  // Σ c_i π^i with c_i in W(F_q); reduces by the Eisenstein relation.
  RingElem from_poly(std::span<const WittCoeff> coeffs) const;
  RingElem basis_element(std::size_t coord) const;

  RingElem add(const RingElem& x, const RingElem& y) const;
  RingElem sub(const RingElem& x, const RingElem& y) const;
  RingElem neg(const RingElem& x) const;
  RingElem mul(const RingElem& x, const RingElem& y) const;
  RingElem scale(const RingElem& x, std::int64_t c) const;
  RingElem pow(const RingElem& x, unsigned k) const;

  bool is_zero(const RingElem& x) const;
  // kInfiniteValuation for zero, which doubles as the ">= n" marker.
  int valuation(const RingElem& x) const;
  bool is_unit(const RingElem& x) const { return valuation(x) == 0; }
  RingElem invert_unit(const RingElem& x) const;
  // y with π^k·y = x; y is only meaningful modulo π^{n-k}.
  RingElem div_pi(const RingElem& x, int k) const;
  RingElem mul_pi(const RingElem& x, int k) const;
  // Zero every coordinate that lies in π^k O (keeps x modulo π^k).
  RingElem truncate(const RingElem& x, int k) const;

  // Canonical surjection onto `target` (same field, lower level).
  RingElem reduce(const RingElem& x, const TruncatedRing& target) const;
  // Zero-padding section from a lower level `source` into this ring.
  RingElem lift(const RingElem& x, const TruncatedRing& source) const;

  // Mixed-radix code, coordinate 0 most significant; order = lex order.
  std::uint64_t code(const RingElem& x) const;
  RingElem from_code(std::uint64_t code) const;
  std::vector<RingElem> elements() const;

  std::string to_string(const RingElem& x) const;
  void check(const RingElem& x) const;

  friend bool operator==(const TruncatedRing& a, const TruncatedRing& b) {
    return a.tag_ == b.tag_ && a.level_ == b.level_ && a.desc_ == b.desc_;
  }

 private:
  WittCoeff coeff_mul(const WittCoeff& a, const WittCoeff& b) const;
  WittCoeff digit(const RingElem& x, std::size_t i) const;
  RingElem pack(std::span<const WittCoeff> digits) const;
  void reduce_relation(std::vector<WittCoeff>& poly) const;
  RingElem residue_inverse(const RingElem& x) const;

  FieldDescriptor desc_;
  int level_;
  int e_;  // 0 for equal characteristic
  int q_;
  std::size_t digits_;
  std::int64_t modulus_;  // p^{k_0}: working modulus for digit products
  std::vector<std::int64_t> digit_mod_;
  std::vector<std::int64_t> g_;
  std::vector<WittCoeff> relation_;  // a_i with π^e = -Σ a_i π^i
  RingElem p_over_pi_;
  std::uint32_t tag_;
};

std::string format_valuation(int v);

// Ring isomorphism O/p^l -> O'/p'^l fixed by the images of π and y,
// audited at construction.
class TruncIso {
 public:
  TruncIso(TruncatedRing source, TruncatedRing target, RingElem pi_image,
           RingElem generator_image, bool require_aligned = true);

  // π ↦ π', y ↦ y'.
  static TruncIso canonical(const TruncatedRing& source, const TruncatedRing& target);
  static TruncIso identity(const TruncatedRing& ring);

  const TruncatedRing& source() const { return source_; }
  const TruncatedRing& target() const { return target_; }
  int level() const { return source_.level(); }
  bool aligned() const { return aligned_; }
  const RingElem& pi_image() const { return pi_image_; }
  const RingElem& generator_image() const { return gen_image_; }

  RingElem apply(const RingElem& x) const;

 private:
  void audit() const;

  TruncatedRing source_;
  TruncatedRing target_;
  RingElem pi_image_;
  RingElem gen_image_;
  bool aligned_ = true;
  std::vector<RingElem> basis_images_;
};

// (O/p^m, p/p^{m+1}, ε). Module elements are stored at level m+1 with
// valuation >= 1; their ε-images live in O/p^m with valuation >= 1.
class DeligneTriplet {
 public:
  DeligneTriplet(const FieldDescriptor& desc, int m);

  int level() const { return ring_.level(); }
  const TruncatedRing& ring() const { return ring_; }
  const TruncatedRing& module_ring() const { return module_ring_; }
  RingElem generator() const { return module_ring_.pi(); }
  bool in_module(const RingElem& x) const;
  std::vector<RingElem> module_elements() const;
  RingElem epsilon(const RingElem& x) const;
  RingElem act(const RingElem& r, const RingElem& x) const;

 private:
  TruncatedRing ring_;
  TruncatedRing module_ring_;
};

// x^d + π Σ a_i x^i with a_i in O/p^m.
struct EisensteinPoly {
  TruncatedRing ring;
  std::vector<RingElem> cofactors;

  int degree() const { return static_cast<int>(cofactors.size()); }
  // Coefficients π·a_i as elements of O/p^{m+1}.
  std::vector<RingElem> coefficients() const;
  std::string to_string() const;
};

EisensteinPoly make_eisenstein(const TruncatedRing& ring, std::vector<RingElem> cofactors);
EisensteinPoly eisenstein_transfer(const EisensteinPoly& poly, const TruncIso& psi);

}  // namespace hecke
