#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hecke/residue.hpp"
#include "hecke/root_datum.hpp"

namespace hecke {

struct Matrix {
  int n = 0;
  std::vector<RingElem> a;  // row-major

  RingElem& operator()(int i, int j) { return a[static_cast<std::size_t>(i * n + j)]; }
  const RingElem& operator()(int i, int j) const { return a[static_cast<std::size_t>(i * n + j)]; }
  friend bool operator==(const Matrix&, const Matrix&) = default;
};

Matrix mat_identity(const TruncatedRing& R, int n);
Matrix mat_zero(const TruncatedRing& R, int n);
Matrix mat_diag(const TruncatedRing& R, const std::vector<RingElem>& d);
// 1 + x·E_ij
Matrix mat_elementary(const TruncatedRing& R, int n, int i, int j, const RingElem& x);
Matrix mat_mul(const TruncatedRing& R, const Matrix& A, const Matrix& B);
Matrix mat_add(const TruncatedRing& R, const Matrix& A, const Matrix& B);
Matrix mat_sub(const TruncatedRing& R, const Matrix& A, const Matrix& B);
RingElem mat_det(const TruncatedRing& R, const Matrix& A);
Matrix mat_adjugate(const TruncatedRing& R, const Matrix& A);
Matrix mat_inverse(const TruncatedRing& R, const Matrix& A);
Matrix mat_reduce(const TruncatedRing& R, const Matrix& A, const TruncatedRing& target);
Matrix mat_lift(const TruncatedRing& R, const Matrix& A, const TruncatedRing& source);
Matrix mat_truncate(const TruncatedRing& R, const Matrix& A, int k);
Matrix mat_div_pi(const TruncatedRing& R, const Matrix& A, int k);
// Minimum entry valuation, capped at `cap`.
int mat_valuation(const TruncatedRing& R, const Matrix& A, int cap);
std::string mat_to_string(const TruncatedRing& R, const Matrix& A);

// M ≡ A·diag(π^mu)·B (mod π^prec), A and B invertible, mu ascending.
struct SmithForm {
  Matrix A, B;
  std::vector<int> mu;
};

// Pivot rule: minimal valuation, ties broken by the row-major first position.
SmithForm smith_form(const TruncatedRing& R, const Matrix& M, int prec);

// Group family plus the field that carries matrix entries. For restriction
// families `field` describes E and (ext_e, ext_f) = (e(E/F), f(E/F)).
struct GroupSpec {
  GroupFamily family = GroupFamily::SL;
  int n = 2;
  FieldDescriptor field;
  int ext_e = 1;
  int ext_f = 1;

  BasedRootDatum datum() const;
  // Residue size of the base field F.
  int base_q() const;
  std::string describe() const;
  void validate() const;
};

// g = π^{-shift}·mat with mat integral, some entry a unit, and known
// modulo π^prec (ring units).
struct GroupElem {
  int shift = 0;
  Matrix mat;
  int prec = 0;

  friend bool operator==(const GroupElem&, const GroupElem&) = default;
};

struct IwahoriFactors {
  GroupElem u_plus, torus, u_minus;
};

// Working model of G(F) at ring level ext_e·working_level with K_m at ring
// level ext_e·m. Levels given to the constructor are in units of F.
class GroupModel {
 public:
  GroupModel(GroupSpec spec, int m, int working_level);

  const GroupSpec& spec() const { return spec_; }
  const BasedRootDatum& datum() const { return datum_; }
  int n() const { return spec_.n; }
  int m() const { return m_; }
  int working_level() const { return working_level_; }
  const TruncatedRing& ring() const { return ring_; }
  const TruncatedRing& quotient_ring() const { return qring_; }
  int ring_level() const { return ring_.level(); }
  int congruence_level() const { return qring_.level(); }

  GroupElem identity() const;
  GroupElem from_integral(const Matrix& M) const;
  GroupElem canonicalize(GroupElem g) const;
  GroupElem gmul(const GroupElem& g, const GroupElem& h) const;
  GroupElem ginv(const GroupElem& g) const;
  GroupElem pi_lambda(const Cocharacter& lambda) const;

  bool in_K(const GroupElem& g) const;
  // m in units of F.
  bool in_Km(const GroupElem& g, int m) const;
  IwahoriFactors iwahori_factor(const GroupElem& g) const;

  bool satisfies_det(const TruncatedRing& R, const Matrix& M) const;
  // Section K/K_m -> K: zero padding, then the determinant fixed in the last column.
  GroupElem lift_quotient(const Matrix& q) const;
  Matrix reduce_to_quotient(const GroupElem& k) const;
  // Elementary and diagonal generators of K/K_m.
  std::vector<Matrix> quotient_generators() const;

  std::string to_string(const GroupElem& g) const;

 private:
  void check(const GroupElem& g) const;

  GroupSpec spec_;
  BasedRootDatum datum_;
  int m_;
  int working_level_;
  TruncatedRing ring_;
  TruncatedRing qring_;
};

}  // namespace hecke
