#pragma once

#include <random>

#include "hecke/group.hpp"

namespace fx {

using namespace hecke;

inline FieldDescriptor Q2() { return FieldDescriptor::mixed_char(2, {-2, 1}); }
inline FieldDescriptor Q3() { return FieldDescriptor::mixed_char(3, {-3, 1}); }
inline FieldDescriptor F2t() { return FieldDescriptor::equal_char(2); }
inline FieldDescriptor F3t() { return FieldDescriptor::equal_char(3); }
// Q_2(2^{1/4})
inline FieldDescriptor Q2root4() { return FieldDescriptor::mixed_char(2, {-2, 0, 0, 0, 1}); }

inline GroupSpec spec(GroupFamily fam, int n, FieldDescriptor f, int e = 1, int ef = 1) {
  GroupSpec s;
  s.family = fam;
  s.n = n;
  s.field = std::move(f);
  s.ext_e = e;
  s.ext_f = ef;
  return s;
}

inline RingElem random_elem(const TruncatedRing& R, std::mt19937_64& rng) {
  return R.from_code(std::uniform_int_distribution<std::uint64_t>(0, R.size() - 1)(rng));
}

inline Matrix random_matrix(const TruncatedRing& R, int n, std::mt19937_64& rng) {
  Matrix M = mat_zero(R, n);
  for (auto& x : M.a) x = random_elem(R, rng);
  return M;
}

// Random element of G(O) at the model's working level: a random matrix with
// unit determinant, rescaled to det 1 for SL families.
inline Matrix random_K(const GroupModel& G, std::mt19937_64& rng) {
  const auto& R = G.ring();
  for (;;) {
    Matrix M = random_matrix(R, G.n(), rng);
    RingElem d = mat_det(R, M);
    if (!R.is_unit(d)) continue;
    if (is_special_linear(G.spec().family)) {
      RingElem di = R.invert_unit(d);
      for (int i = 0; i < G.n(); ++i) M(i, 0) = R.mul(M(i, 0), di);
    }
    return M;
  }
}

}  // namespace fx
