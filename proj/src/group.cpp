#include "hecke/group.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace hecke {

Matrix mat_zero(const TruncatedRing& R, int n) {
  return Matrix{n, std::vector<RingElem>(static_cast<std::size_t>(n * n), R.zero())};
}

Matrix mat_identity(const TruncatedRing& R, int n) {
  Matrix M = mat_zero(R, n);
  for (int i = 0; i < n; ++i) M(i, i) = R.one();
  return M;
}

Matrix mat_diag(const TruncatedRing& R, const std::vector<RingElem>& d) {
  Matrix M = mat_zero(R, static_cast<int>(d.size()));
  for (int i = 0; i < M.n; ++i) M(i, i) = d[i];
  return M;
}

Matrix mat_elementary(const TruncatedRing& R, int n, int i, int j, const RingElem& x) {
  Matrix M = mat_identity(R, n);
  M(i, j) = R.add(M(i, j), x);
  return M;
}

Matrix mat_mul(const TruncatedRing& R, const Matrix& A, const Matrix& B) {
  const int n = A.n;
  Matrix C = mat_zero(R, n);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) {
      if (R.is_zero(A(i, k))) continue;
      for (int j = 0; j < n; ++j) C(i, j) = R.add(C(i, j), R.mul(A(i, k), B(k, j)));
    }
  return C;
}

Matrix mat_add(const TruncatedRing& R, const Matrix& A, const Matrix& B) {
  Matrix C = A;
  for (std::size_t i = 0; i < C.a.size(); ++i) C.a[i] = R.add(A.a[i], B.a[i]);
  return C;
}

Matrix mat_sub(const TruncatedRing& R, const Matrix& A, const Matrix& B) {
  Matrix C = A;
  for (std::size_t i = 0; i < C.a.size(); ++i) C.a[i] = R.sub(A.a[i], B.a[i]);
  return C;
}

RingElem mat_det(const TruncatedRing& R, const Matrix& A) {
  // Leibniz expansion; n <= 4 here.
  const int n = A.n;
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  RingElem det = R.zero();
  do {
    int inversions = 0;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        if (perm[i] > perm[j]) ++inversions;
    RingElem term = R.one();
    for (int i = 0; i < n && !R.is_zero(term); ++i) term = R.mul(term, A(i, perm[i]));
    det = inversions % 2 ? R.sub(det, term) : R.add(det, term);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return det;
}

Matrix mat_adjugate(const TruncatedRing& R, const Matrix& A) {
  const int n = A.n;
  Matrix adj = mat_zero(R, n);
  if (n == 1) {
    adj(0, 0) = R.one();
    return adj;
  }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      Matrix minor = mat_zero(R, n - 1);
      for (int r = 0, rr = 0; r < n; ++r) {
        if (r == i) continue;
        for (int c = 0, cc = 0; c < n; ++c) {
          if (c == j) continue;
          minor(rr, cc++) = A(r, c);
        }
        ++rr;
      }
      RingElem d = mat_det(R, minor);
      adj(j, i) = (i + j) % 2 ? R.neg(d) : d;
    }
  return adj;
}

Matrix mat_inverse(const TruncatedRing& R, const Matrix& A) {
  RingElem dinv = R.invert_unit(mat_det(R, A));
  Matrix adj = mat_adjugate(R, A);
  for (auto& x : adj.a) x = R.mul(x, dinv);
  return adj;
}

Matrix mat_reduce(const TruncatedRing& R, const Matrix& A, const TruncatedRing& target) {
  Matrix B{A.n, {}};
  for (const auto& x : A.a) B.a.push_back(R.reduce(x, target));
  return B;
}

Matrix mat_lift(const TruncatedRing& R, const Matrix& A, const TruncatedRing& source) {
  Matrix B{A.n, {}};
  for (const auto& x : A.a) B.a.push_back(R.lift(x, source));
  return B;
}

Matrix mat_truncate(const TruncatedRing& R, const Matrix& A, int k) {
  Matrix B = A;
  for (auto& x : B.a) x = R.truncate(x, k);
  return B;
}

Matrix mat_div_pi(const TruncatedRing& R, const Matrix& A, int k) {
  Matrix B = A;
  for (auto& x : B.a) x = R.div_pi(x, k);
  return B;
}

int mat_valuation(const TruncatedRing& R, const Matrix& A, int cap) {
  int v = cap;
  for (const auto& x : A.a) v = std::min(v, R.valuation(x));
  return v;
}

std::string mat_to_string(const TruncatedRing& R, const Matrix& A) {
  std::ostringstream os;
  os << "[";
  for (int i = 0; i < A.n; ++i) {
    os << (i ? ", [" : "[");
    for (int j = 0; j < A.n; ++j) os << (j ? ", " : "") << R.to_string(A(i, j));
    os << "]";
  }
  os << "]";
  return os.str();
}

namespace {

void swap_rows(Matrix& M, int a, int b) {
  for (int j = 0; j < M.n; ++j) std::swap(M(a, j), M(b, j));
}

void swap_cols(Matrix& M, int a, int b) {
  for (int i = 0; i < M.n; ++i) std::swap(M(i, a), M(i, b));
}

}  // namespace

SmithForm smith_form(const TruncatedRing& R, const Matrix& M, int prec) {
  const int n = M.n;
  Matrix W = mat_truncate(R, M, prec);
  Matrix A = mat_identity(R, n);
  Matrix B = mat_identity(R, n);
  std::vector<int> mu;
  // Invariant: M ≡ A·W·B.
  for (int k = 0; k < n; ++k) {
    int best = prec, bi = -1, bj = -1;
    for (int i = k; i < n; ++i)
      for (int j = k; j < n; ++j) {
        int v = std::min(R.valuation(W(i, j)), prec);
        if (v < best) {
          best = v;
          bi = i;
          bj = j;
        }
      }
    if (bi < 0) throw PrecisionError("precision exhausted: elementary divisor not certified at level " + std::to_string(prec));
    if (bi != k) {
      swap_rows(W, k, bi);
      swap_cols(A, k, bi);
    }
    if (bj != k) {
      swap_cols(W, k, bj);
      swap_rows(B, k, bj);
    }
    const int v = best;
    RingElem u = R.div_pi(W(k, k), v);
    RingElem uinv = R.invert_unit(u);
    for (int i = k + 1; i < n; ++i) {
      if (R.is_zero(W(i, k))) continue;
      RingElem f = R.mul(R.div_pi(W(i, k), v), uinv);
      for (int j = k; j < n; ++j) W(i, j) = R.sub(W(i, j), R.mul(f, W(k, j)));
      for (int r = 0; r < n; ++r) A(r, k) = R.add(A(r, k), R.mul(A(r, i), f));
    }
    for (int j = k + 1; j < n; ++j) {
      if (R.is_zero(W(k, j))) continue;
      RingElem f = R.mul(R.div_pi(W(k, j), v), uinv);
      for (int i = k; i < n; ++i) W(i, j) = R.sub(W(i, j), R.mul(W(i, k), f));
      for (int c = 0; c < n; ++c) B(k, c) = R.add(B(k, c), R.mul(f, B(j, c)));
    }
    // W(k,k) = π^v·u: move u into B.
    W(k, k) = R.mul_pi(R.one(), v);
    for (int c = 0; c < n; ++c) B(k, c) = R.mul(u, B(k, c));
    mu.push_back(v);
  }
  return SmithForm{A, B, mu};
}

BasedRootDatum GroupSpec::datum() const { return BasedRootDatum::make(family, n, ext_e, ext_f); }

int GroupSpec::base_q() const {
  int q = 1;
  for (int i = 0; i < field.f / ext_f; ++i) q *= field.p;
  return q;
}

std::string GroupSpec::describe() const {
  std::ostringstream os;
  os << family_name(family) << n << "/" << field.describe();
  if (is_restriction(family)) os << "/ext(e=" << ext_e << ",f=" << ext_f << ")";
  return os.str();
}

void GroupSpec::validate() const {
  field.validate();
  if (n < 1 || n > 4) throw std::invalid_argument("matrix size out of range");
  if (!is_restriction(family)) {
    if (ext_e != 1 || ext_f != 1) throw std::invalid_argument("split families take no extension data");
    return;
  }
  if (ext_e < 1 || ext_f < 1 || ext_e * ext_f < 2) throw std::invalid_argument("restriction needs a proper extension");
  if (field.f % ext_f != 0) throw std::invalid_argument("residue degree of E not divisible by f(E/F)");
  if (field.kind == FieldKind::mixed && field.ramification() % ext_e != 0)
    throw std::invalid_argument("ramification of E not divisible by e(E/F)");
}

GroupModel::GroupModel(GroupSpec spec, int m, int working_level)
    : spec_(std::move(spec)),
      datum_(spec_.datum()),
      m_(m),
      working_level_(working_level),
      ring_(spec_.field, spec_.ext_e * working_level),
      qring_(spec_.field, spec_.ext_e * m) {
  spec_.validate();
  if (m < 1 || working_level < m) throw std::invalid_argument("need 1 <= m <= working level");
}

void GroupModel::check(const GroupElem& g) const {
  if (g.mat.n != spec_.n) throw RingError("ring mismatch");
  for (const auto& x : g.mat.a) ring_.check(x);
}

GroupElem GroupModel::identity() const { return GroupElem{0, mat_identity(ring_, spec_.n), ring_level()}; }

GroupElem GroupModel::from_integral(const Matrix& M) const {
  return canonicalize(GroupElem{0, M, ring_level()});
}

GroupElem GroupModel::canonicalize(GroupElem g) const {
  check(g);
  if (g.prec <= 0) throw PrecisionError("precision exhausted");
  const int v = mat_valuation(ring_, g.mat, g.prec);
  if (v >= g.prec) throw PrecisionError("precision exhausted: matrix vanishes at level " + std::to_string(g.prec));
  if (v > 0) {
    g.mat = mat_div_pi(ring_, g.mat, v);
    g.shift -= v;
    g.prec -= v;
  }
  g.mat = mat_truncate(ring_, g.mat, g.prec);
  return g;
}

GroupElem GroupModel::gmul(const GroupElem& g, const GroupElem& h) const {
  check(g);
  check(h);
  return canonicalize(GroupElem{g.shift + h.shift, mat_mul(ring_, g.mat, h.mat), std::min(g.prec, h.prec)});
}

GroupElem GroupModel::ginv(const GroupElem& g) const {
  check(g);
  SmithForm s = smith_form(ring_, g.mat, g.prec);
  const int top = s.mu.back();
  std::vector<RingElem> d;
  for (int x : s.mu) d.push_back(ring_.mul_pi(ring_.one(), top - x));
  Matrix inv = mat_mul(ring_, mat_mul(ring_, mat_inverse(ring_, s.B), mat_diag(ring_, d)), mat_inverse(ring_, s.A));
  return canonicalize(GroupElem{top - g.shift, inv, g.prec - top});
}

GroupElem GroupModel::pi_lambda(const Cocharacter& lambda) const {
  if (!datum_.in_lattice(lambda)) throw std::invalid_argument("cocharacter " + lambda.to_string() + " not in the lattice");
  const int lo = *std::min_element(lambda.v.begin(), lambda.v.end());
  std::vector<RingElem> d;
  for (int x : lambda.v) {
    if (x - lo >= ring_level()) throw PrecisionError("precision exhausted: π_λ needs level > " + std::to_string(x - lo));
    d.push_back(ring_.mul_pi(ring_.one(), x - lo));
  }
  return GroupElem{-lo, mat_diag(ring_, d), ring_level()};
}

bool GroupModel::satisfies_det(const TruncatedRing& R, const Matrix& M) const {
  RingElem d = mat_det(R, M);
  return is_special_linear(spec_.family) ? d == R.one() : R.is_unit(d);
}

bool GroupModel::in_K(const GroupElem& g) const {
  check(g);
  if (g.shift != 0) return false;
  RingElem d = ring_.truncate(mat_det(ring_, g.mat), g.prec);
  if (is_special_linear(spec_.family)) return d == ring_.truncate(ring_.one(), g.prec);
  return ring_.is_unit(d);
}

bool GroupModel::in_Km(const GroupElem& g, int m) const {
  const int level = spec_.ext_e * m;
  if (!in_K(g)) return false;
  if (g.prec < level) throw PrecisionError("precision exhausted: cannot test congruence level " + std::to_string(m));
  Matrix diff = mat_sub(ring_, g.mat, mat_identity(ring_, spec_.n));
  return mat_valuation(ring_, diff, level) >= level;
}

IwahoriFactors GroupModel::iwahori_factor(const GroupElem& g) const {
  if (!in_Km(g, m_)) throw std::invalid_argument("iwahori_factor needs an element of K_m");
  const int n = spec_.n;
  // LDU of JgJ with J the antidiagonal permutation gives UDL of g.
  Matrix h = mat_zero(ring_, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) h(i, j) = g.mat(n - 1 - i, n - 1 - j);
  Matrix L = mat_identity(ring_, n), U = mat_identity(ring_, n);
  std::vector<RingElem> D;
  for (int k = 0; k < n; ++k) {
    RingElem piv = h(k, k);
    RingElem pinv = ring_.invert_unit(piv);
    D.push_back(piv);
    for (int i = k + 1; i < n; ++i) L(i, k) = ring_.mul(h(i, k), pinv);
    for (int j = k + 1; j < n; ++j) U(k, j) = ring_.mul(pinv, h(k, j));
    for (int i = k + 1; i < n; ++i)
      for (int j = k + 1; j < n; ++j) h(i, j) = ring_.sub(h(i, j), ring_.mul(L(i, k), h(k, j)));
  }
  auto flip = [&](const Matrix& X) {
    Matrix Y = mat_zero(ring_, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) Y(i, j) = X(n - 1 - i, n - 1 - j);
    return Y;
  };
  std::vector<RingElem> Dr(D.rbegin(), D.rend());
  auto wrap = [&](const Matrix& X) { return GroupElem{0, mat_truncate(ring_, X, g.prec), g.prec}; };
  return IwahoriFactors{wrap(flip(L)), wrap(mat_diag(ring_, Dr)), wrap(flip(U))};
}

GroupElem GroupModel::lift_quotient(const Matrix& q) const {
  Matrix M = mat_lift(ring_, q, qring_);
  if (is_special_linear(spec_.family)) {
    RingElem dinv = ring_.invert_unit(mat_det(ring_, M));
    for (int i = 0; i < spec_.n; ++i) M(i, spec_.n - 1) = ring_.mul(M(i, spec_.n - 1), dinv);
  }
  return GroupElem{0, M, ring_level()};
}

Matrix GroupModel::reduce_to_quotient(const GroupElem& k) const {
  check(k);
  if (k.shift != 0) throw std::invalid_argument("element is not integral");
  if (k.prec < congruence_level()) throw PrecisionError("precision exhausted: cannot reduce to level m");
  return mat_reduce(ring_, k.mat, qring_);
}

std::vector<Matrix> GroupModel::quotient_generators() const {
  const int n = spec_.n;
  std::vector<Matrix> gens;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      for (std::size_t c = 0; c < qring_.coord_count(); ++c)
        gens.push_back(mat_elementary(qring_, n, i, j, qring_.basis_element(c)));
    }
  for (const auto& u : qring_.elements()) {
    if (!qring_.is_unit(u) || u == qring_.one()) continue;
    if (is_special_linear(spec_.family)) {
      for (int i = 0; i + 1 < n; ++i) {
        std::vector<RingElem> d(n, qring_.one());
        d[i] = u;
        d[i + 1] = qring_.invert_unit(u);
        gens.push_back(mat_diag(qring_, d));
      }
    } else {
      std::vector<RingElem> d(n, qring_.one());
      d[0] = u;
      gens.push_back(mat_diag(qring_, d));
    }
  }
  return gens;
}

std::string GroupModel::to_string(const GroupElem& g) const {
  std::ostringstream os;
  os << "pi^" << -g.shift << "*" << mat_to_string(ring_, g.mat) << " (mod pi^" << g.prec << ")";
  return os.str();
}

}  // namespace hecke
