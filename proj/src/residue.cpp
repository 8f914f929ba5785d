#include "hecke/residue.hpp"

#include <algorithm>
#include <sstream>
#include <unordered_set>

#include "hecke/util.hpp"

namespace hecke {

namespace {

std::int64_t norm_mod(std::int64_t v, std::int64_t m) {
  v %= m;
  return v < 0 ? v + m : v;
}

std::int64_t ipow(std::int64_t b, int k) {
  std::int64_t r = 1;
  for (int i = 0; i < k; ++i) r *= b;
  return r;
}

int vp(std::int64_t v, int p) {
  int k = 0;
  while (v != 0 && v % p == 0) {
    v /= p;
    ++k;
  }
  return k;
}

bool coeff_is_zero(const WittCoeff& c) { return c[0] == 0 && c[1] == 0 && c[2] == 0; }

std::string coeff_string(const WittCoeff& c, int f) {
  std::vector<std::string> terms;
  for (int j = 0; j < f; ++j) {
    if (c[j] == 0) continue;
    std::string t;
    if (j == 0) {
      t = std::to_string(c[j]);
    } else {
      t = (c[j] == 1 ? "" : std::to_string(c[j]) + "*") + "y" + (j > 1 ? "^" + std::to_string(j) : "");
    }
    terms.push_back(t);
  }
  if (terms.empty()) return "0";
  std::string s = terms[0];
  for (std::size_t i = 1; i < terms.size(); ++i) s += "+" + terms[i];
  return terms.size() > 1 ? "(" + s + ")" : s;
}

}  // namespace

std::vector<std::int64_t> residue_modulus(int p, int f) {
  if (f == 1) return {0, 1};
  if (p == 2 && f == 2) return {1, 1, 1};
  if (p == 2 && f == 3) return {1, 1, 0, 1};
  if (p == 3 && f == 2) return {1, 0, 1};
  throw RingError("no residue field table entry for p=" + std::to_string(p) + ", f=" + std::to_string(f));
}

FieldDescriptor FieldDescriptor::equal_char(int p, int f) {
  FieldDescriptor d;
  d.kind = FieldKind::equal;
  d.p = p;
  d.f = f;
  d.validate();
  return d;
}

FieldDescriptor FieldDescriptor::mixed_char(int p, std::vector<std::int64_t> poly, int f) {
  FieldDescriptor d;
  d.kind = FieldKind::mixed;
  d.p = p;
  d.f = f;
  for (auto c : poly) d.eisenstein.push_back({c, 0, 0});
  d.validate();
  return d;
}

int FieldDescriptor::q() const { return static_cast<int>(ipow(p, f)); }

int FieldDescriptor::ramification() const {
  return kind == FieldKind::mixed ? static_cast<int>(eisenstein.size()) - 1 : 0;
}

std::string FieldDescriptor::describe() const {
  std::ostringstream os;
  if (kind == FieldKind::equal) {
    os << "equal(p=" << p << ",f=" << f << ")";
    return os.str();
  }
  os << "mixed(p=" << p << ",f=" << f << ",";
  bool first = true;
  for (int i = static_cast<int>(eisenstein.size()) - 1; i >= 0; --i) {
    if (coeff_is_zero(eisenstein[i])) continue;
    if (!first) os << "+";
    first = false;
    os << coeff_string(eisenstein[i], f);
    if (i > 0) os << "*x^" << i;
  }
  os << ")";
  return os.str();
}

void FieldDescriptor::validate() const {
  if (p < 2 || p > 7) throw RingError("residue prime out of range: " + std::to_string(p));
  for (int d = 2; d * d <= p; ++d)
    if (p % d == 0) throw RingError("residue characteristic is not prime: " + std::to_string(p));
  if (f < 1 || f > kMaxResidueDegree) throw RingError("residue degree out of range");
  auto g = residue_modulus(p, f);
  // No roots in F_p suffices for irreducibility in degree <= 3.
  if (f > 1) {
    for (int r = 0; r < p; ++r) {
      std::int64_t v = 0;
      for (int i = f; i >= 0; --i) v = (v * r + g[i]) % p;
      if (v == 0) throw RingError("residue modulus is reducible");
    }
  }
  if (kind == FieldKind::equal) {
    if (!eisenstein.empty()) throw RingError("equal characteristic field takes no Eisenstein polynomial");
    return;
  }
  if (eisenstein.size() < 2) throw RingError("Eisenstein polynomial must have degree >= 1");
  const auto& lead = eisenstein.back();
  if (lead[0] != 1 || lead[1] != 0 || lead[2] != 0) throw RingError("Eisenstein polynomial must be monic");
  for (std::size_t i = 0; i + 1 < eisenstein.size(); ++i) {
    for (int j = 0; j < kMaxResidueDegree; ++j) {
      if (j >= f && eisenstein[i][j] != 0) throw RingError("coefficient exceeds residue degree");
      if (eisenstein[i][j] % p != 0) throw RingError("not Eisenstein: coefficient not divisible by p");
    }
  }
  bool unit = false;
  for (int j = 0; j < f; ++j) unit = unit || ((eisenstein[0][j] / p) % p != 0);
  if (!unit) throw RingError("not Eisenstein: constant term has valuation > 1");
}

TruncatedRing::TruncatedRing(FieldDescriptor desc, int level) : desc_(std::move(desc)), level_(level) {
  desc_.validate();
  if (level_ < 1) throw RingError("ring level must be positive");
  e_ = desc_.ramification();
  q_ = desc_.q();
  digits_ = e_ == 0 ? level_ : std::min(e_, level_);
  if (digits_ * desc_.f > kMaxCoords)
    throw GuardError("ring level " + std::to_string(level_) + " exceeds coordinate capacity");
  for (std::size_t i = 0; i < digits_; ++i) {
    int k = e_ == 0 ? 1 : (level_ - static_cast<int>(i) + e_ - 1) / e_;
    if (k > 30 || ipow(desc_.p, k) >= (std::int64_t{1} << 31))
      throw GuardError("digit modulus exceeds 31 bits");
    digit_mod_.push_back(ipow(desc_.p, k));
  }
  modulus_ = digit_mod_[0];
  g_ = residue_modulus(desc_.p, desc_.f);
  for (int i = 0; i < e_; ++i) {
    WittCoeff c{};
    for (int j = 0; j < desc_.f; ++j) c[j] = norm_mod(desc_.eisenstein[i][j], modulus_);
    relation_.push_back(c);
  }
  tag_ = static_cast<std::uint32_t>(fnv1a64(desc_.describe() + "@" + std::to_string(level_)));
  if (e_ > 0) {
    // p/π = -π^{e-1} U^{-1} where π^e = -p·U, U = Σ (a_i/p) π^i.
    std::vector<WittCoeff> u(e_);
    for (int i = 0; i < e_; ++i)
      for (int j = 0; j < desc_.f; ++j) u[i][j] = norm_mod(desc_.eisenstein[i][j] / desc_.p, modulus_);
    std::vector<WittCoeff> lead(e_);
    lead[e_ - 1][0] = 1;
    p_over_pi_ = neg(mul(from_poly(lead), invert_unit(from_poly(u))));
  }
}

std::uint64_t TruncatedRing::size() const {
  std::uint64_t s = 1;
  for (std::size_t c = 0; c < coord_count(); ++c) {
    auto r = static_cast<std::uint64_t>(radix(c));
    if (s > std::numeric_limits<std::uint64_t>::max() / r) throw GuardError("ring too large to index");
    s *= r;
  }
  return s;
}

void TruncatedRing::check(const RingElem& x) const {
  if (x.tag_ != tag_ || x.n_ != coord_count()) throw RingError("ring mismatch");
}

WittCoeff TruncatedRing::digit(const RingElem& x, std::size_t i) const {
  WittCoeff c{};
  for (int j = 0; j < desc_.f; ++j) c[j] = x.c_[i * desc_.f + j];
  return c;
}

WittCoeff TruncatedRing::coeff_mul(const WittCoeff& a, const WittCoeff& b) const {
  const int f = desc_.f;
  const std::int64_t P = modulus_;
  std::array<std::int64_t, 2 * kMaxResidueDegree> t{};
  for (int i = 0; i < f; ++i)
    for (int j = 0; j < f; ++j) t[i + j] = (t[i + j] + a[i] * b[j]) % P;
  for (int d = 2 * f - 2; d >= f; --d) {
    std::int64_t c = t[d];
    if (c == 0) continue;
    for (int i = 0; i < f; ++i) t[d - f + i] = (t[d - f + i] - c * g_[i]) % P;
    t[d] = 0;
  }
  WittCoeff r{};
  for (int i = 0; i < f; ++i) r[i] = norm_mod(t[i], P);
  return r;
}

void TruncatedRing::reduce_relation(std::vector<WittCoeff>& poly) const {
  if (e_ == 0) return;
  for (int d = static_cast<int>(poly.size()) - 1; d >= e_; --d) {
    if (coeff_is_zero(poly[d])) continue;
    for (int i = 0; i < e_; ++i) {
      WittCoeff t = coeff_mul(poly[d], relation_[i]);
      for (int j = 0; j < desc_.f; ++j) poly[d - e_ + i][j] = norm_mod(poly[d - e_ + i][j] - t[j], modulus_);
    }
    poly[d] = WittCoeff{};
  }
}

RingElem TruncatedRing::pack(std::span<const WittCoeff> digits) const {
  RingElem r;
  r.tag_ = tag_;
  r.n_ = static_cast<std::uint32_t>(coord_count());
  const std::size_t n = std::min(digits.size(), digits_);
  for (std::size_t i = 0; i < n; ++i)
    for (int j = 0; j < desc_.f; ++j)
      r.c_[i * desc_.f + j] = static_cast<std::int32_t>(norm_mod(digits[i][j], digit_mod_[i]));
  return r;
}

RingElem TruncatedRing::zero() const {
  RingElem r;
  r.tag_ = tag_;
  r.n_ = static_cast<std::uint32_t>(coord_count());
  return r;
}

RingElem TruncatedRing::one() const { return from_int(1); }

RingElem TruncatedRing::from_int(std::int64_t v) const {
  RingElem r = zero();
  r.c_[0] = static_cast<std::int32_t>(norm_mod(v, digit_mod_[0]));
  return r;
}

RingElem TruncatedRing::from_coords(std::span<const std::int64_t> coords) const {
  if (coords.size() != coord_count()) throw RingError("coordinate vector has wrong length");
  RingElem r = zero();
  for (std::size_t c = 0; c < coords.size(); ++c) r.c_[c] = static_cast<std::int32_t>(norm_mod(coords[c], radix(c)));
  return r;
}

RingElem TruncatedRing::basis_element(std::size_t coord) const {
  RingElem r = zero();
  r.c_[coord] = 1;
  return r;
}

RingElem TruncatedRing::from_poly(std::span<const WittCoeff> coeffs) const {
  std::vector<WittCoeff> poly(coeffs.begin(), coeffs.end());
  for (auto& c : poly)
    for (int j = 0; j < desc_.f; ++j) c[j] = norm_mod(c[j], modulus_);
  reduce_relation(poly);
  return pack(poly);
}

RingElem TruncatedRing::pi() const {
  std::vector<WittCoeff> poly(2);
  poly[1][0] = 1;
  return from_poly(poly);
}

RingElem TruncatedRing::residue_generator() const {
  if (desc_.f == 1) return one();
  RingElem r = zero();
  r.c_[1] = 1;
  return r;
}

RingElem TruncatedRing::add(const RingElem& x, const RingElem& y) const {
  check(x);
  check(y);
  RingElem r = x;
  for (std::size_t c = 0; c < coord_count(); ++c) {
    std::int64_t v = std::int64_t{x.c_[c]} + y.c_[c];
    if (v >= radix(c)) v -= radix(c);
    r.c_[c] = static_cast<std::int32_t>(v);
  }
  return r;
}

RingElem TruncatedRing::neg(const RingElem& x) const {
  check(x);
  RingElem r = x;
  for (std::size_t c = 0; c < coord_count(); ++c) r.c_[c] = x.c_[c] == 0 ? 0 : static_cast<std::int32_t>(radix(c) - x.c_[c]);
  return r;
}

RingElem TruncatedRing::sub(const RingElem& x, const RingElem& y) const { return add(x, neg(y)); }

RingElem TruncatedRing::scale(const RingElem& x, std::int64_t k) const {
  check(x);
  RingElem r = x;
  for (std::size_t c = 0; c < coord_count(); ++c) {
    const std::int64_t m = radix(c);
    r.c_[c] = static_cast<std::int32_t>(norm_mod(norm_mod(k, m) * x.c_[c], m));
  }
  return r;
}

RingElem TruncatedRing::mul(const RingElem& x, const RingElem& y) const {
  check(x);
  check(y);
  const std::size_t D = digits_;
  std::vector<WittCoeff> prod(2 * D - 1);
  for (std::size_t i = 0; i < D; ++i) {
    WittCoeff a = digit(x, i);
    if (coeff_is_zero(a)) continue;
    for (std::size_t j = 0; j < D; ++j) {
      // Equal characteristic: products past t^{n-1} vanish.
      if (e_ == 0 && i + j >= D) break;
      WittCoeff b = digit(y, j);
      if (coeff_is_zero(b)) continue;
      WittCoeff t = coeff_mul(a, b);
      for (int k = 0; k < desc_.f; ++k) prod[i + j][k] = (prod[i + j][k] + t[k]) % modulus_;
    }
  }
  reduce_relation(prod);
  return pack(prod);
}

RingElem TruncatedRing::pow(const RingElem& x, unsigned k) const {
  RingElem r = one();
  RingElem b = x;
  while (k) {
    if (k & 1u) r = mul(r, b);
    b = mul(b, b);
    k >>= 1;
  }
  return r;
}

bool TruncatedRing::is_zero(const RingElem& x) const {
  check(x);
  for (std::size_t c = 0; c < coord_count(); ++c)
    if (x.c_[c] != 0) return false;
  return true;
}

int TruncatedRing::valuation(const RingElem& x) const {
  check(x);
  int best = kInfiniteValuation;
  for (std::size_t i = 0; i < digits_; ++i) {
    WittCoeff c = digit(x, i);
    if (coeff_is_zero(c)) continue;
    if (e_ == 0) return static_cast<int>(i);
    int v = std::numeric_limits<int>::max();
    for (int j = 0; j < desc_.f; ++j)
      if (c[j] != 0) v = std::min(v, vp(c[j], desc_.p));
    best = std::min(best, e_ * v + static_cast<int>(i));
  }
  return best;
}

RingElem TruncatedRing::residue_inverse(const RingElem& x) const {
  WittCoeff a = digit(x, 0);
  for (int j = 0; j < desc_.f; ++j) a[j] %= desc_.p;
  for (int code = 1; code < q_; ++code) {
    WittCoeff z{};
    int c = code;
    for (int j = 0; j < desc_.f; ++j) {
      z[j] = c % desc_.p;
      c /= desc_.p;
    }
    WittCoeff t = coeff_mul(a, z);
    bool is_one = t[0] % desc_.p == 1;
    for (int j = 1; j < desc_.f; ++j) is_one = is_one && t[j] % desc_.p == 0;
    if (is_one) {
      RingElem r = zero();
      for (int j = 0; j < desc_.f; ++j) r.c_[j] = static_cast<std::int32_t>(z[j]);
      return r;
    }
  }
  throw RingError("not a unit");
}

RingElem TruncatedRing::invert_unit(const RingElem& x) const {
  if (valuation(x) != 0) throw RingError("not a unit");
  RingElem y = residue_inverse(x);
  const RingElem two = from_int(2);
  const RingElem e1 = one();
  for (int it = 0; it < 64; ++it) {
    RingElem xy = mul(x, y);
    if (xy == e1) return y;
    y = mul(y, sub(two, xy));
  }
  throw RingError("unit inversion did not converge");
}

RingElem TruncatedRing::div_pi(const RingElem& x, int k) const {
  int v = valuation(x);
  if (v == kInfiniteValuation) return zero();
  if (v < k) throw RingError("element not divisible by π^" + std::to_string(k));
  RingElem y = x;
  for (int step = 0; step < k; ++step) {
    std::vector<WittCoeff> shifted(digits_);
    for (std::size_t i = 1; i < digits_; ++i) shifted[i - 1] = digit(y, i);
    RingElem r = pack(shifted);
    if (e_ > 0) {
      WittCoeff c0 = digit(y, 0);
      for (int j = 0; j < desc_.f; ++j) c0[j] /= desc_.p;
      r = add(r, mul(pack(std::span<const WittCoeff>(&c0, 1)), p_over_pi_));
    }
    y = r;
  }
  // Clear the digits that carry no information.
  return truncate(y, level_ - k);
}

RingElem TruncatedRing::truncate(const RingElem& x, int k) const {
  check(x);
  if (k >= level_) return x;
  RingElem out = zero();
  for (std::size_t c = 0; c < coord_count(); ++c) {
    const int i = static_cast<int>(c / desc_.f);
    if (k - i <= 0) continue;
    if (e_ == 0) out.c_[c] = x.c_[c];
    else out.c_[c] = static_cast<std::int32_t>(x.c_[c] % ipow(desc_.p, (k - i + e_ - 1) / e_));
  }
  return out;
}

RingElem TruncatedRing::mul_pi(const RingElem& x, int k) const {
  if (k >= level_) return zero();
  return mul(x, pow(pi(), static_cast<unsigned>(k)));
}

RingElem TruncatedRing::reduce(const RingElem& x, const TruncatedRing& target) const {
  check(x);
  if (!(target.desc_ == desc_) || target.level_ > level_) throw RingError("ring mismatch");
  RingElem r = target.zero();
  for (std::size_t c = 0; c < target.coord_count(); ++c) r.c_[c] = static_cast<std::int32_t>(x.c_[c] % target.radix(c));
  return r;
}

RingElem TruncatedRing::lift(const RingElem& x, const TruncatedRing& source) const {
  source.check(x);
  if (!(source.desc_ == desc_) || source.level_ > level_) throw RingError("ring mismatch");
  RingElem r = zero();
  for (std::size_t c = 0; c < source.coord_count(); ++c) r.c_[c] = x.c_[c];
  return r;
}

std::uint64_t TruncatedRing::code(const RingElem& x) const {
  check(x);
  std::uint64_t k = 0;
  for (std::size_t c = 0; c < coord_count(); ++c) k = k * static_cast<std::uint64_t>(radix(c)) + static_cast<std::uint64_t>(x.c_[c]);
  return k;
}

RingElem TruncatedRing::from_code(std::uint64_t k) const {
  RingElem r = zero();
  for (std::size_t c = coord_count(); c-- > 0;) {
    auto m = static_cast<std::uint64_t>(radix(c));
    r.c_[c] = static_cast<std::int32_t>(k % m);
    k /= m;
  }
  if (k != 0) throw RingError("ring element code out of range");
  return r;
}

std::vector<RingElem> TruncatedRing::elements() const {
  const std::uint64_t n = size();
  if (n > 10'000'000) throw GuardError("ring too large to enumerate");
  std::vector<RingElem> out;
  out.reserve(n);
  for (std::uint64_t k = 0; k < n; ++k) out.push_back(from_code(k));
  return out;
}

std::string TruncatedRing::to_string(const RingElem& x) const {
  check(x);
  const std::string sym = e_ == 0 ? "t" : "pi";
  std::vector<std::string> terms;
  for (std::size_t i = 0; i < digits_; ++i) {
    WittCoeff c = digit(x, i);
    if (coeff_is_zero(c)) continue;
    std::string cs = coeff_string(c, desc_.f);
    if (i == 0) {
      terms.push_back(cs);
      continue;
    }
    std::string mono = sym + (i > 1 ? "^" + std::to_string(i) : "");
    terms.push_back(cs == "1" ? mono : cs + "*" + mono);
  }
  if (terms.empty()) return "0";
  std::string s = terms[0];
  for (std::size_t i = 1; i < terms.size(); ++i) s += " + " + terms[i];
  return s;
}

std::string format_valuation(int v) { return v == kInfiniteValuation ? "inf" : std::to_string(v); }

TruncIso::TruncIso(TruncatedRing source, TruncatedRing target, RingElem pi_image, RingElem generator_image,
                   bool require_aligned)
    : source_(std::move(source)), target_(std::move(target)), pi_image_(pi_image), gen_image_(generator_image) {
  if (source_.level() != target_.level() || source_.q() != target_.q() || source_.f() != target_.f())
    throw AuditError("not an isomorphism: rings differ in level or residue field");
  target_.check(pi_image_);
  target_.check(gen_image_);
  aligned_ = pi_image_ == target_.pi();
  if (require_aligned && !aligned_) throw AuditError("not an isomorphism: π must map to the target uniformizer");
  const int f = source_.f();
  for (std::size_t c = 0; c < source_.coord_count(); ++c) {
    const auto i = static_cast<unsigned>(c / f);
    const auto j = static_cast<unsigned>(c % f);
    basis_images_.push_back(target_.mul(target_.pow(pi_image_, i), target_.pow(gen_image_, j)));
  }
  audit();
}

TruncIso TruncIso::canonical(const TruncatedRing& source, const TruncatedRing& target) {
  return TruncIso(source, target, target.pi(), target.residue_generator());
}

TruncIso TruncIso::identity(const TruncatedRing& ring) { return canonical(ring, ring); }

RingElem TruncIso::apply(const RingElem& x) const {
  source_.check(x);
  RingElem r = target_.zero();
  for (std::size_t c = 0; c < source_.coord_count(); ++c)
    if (x[c] != 0) r = target_.add(r, target_.scale(basis_images_[c], x[c]));
  return r;
}

void TruncIso::audit() const {
  const std::string fail = "not an isomorphism";
  if (apply(source_.one()) != target_.one()) throw AuditError(fail + ": 1 not preserved");
  const std::size_t n = source_.coord_count();
  for (std::size_t c = 0; c < n; ++c)
    if (!target_.is_zero(target_.scale(basis_images_[c], source_.radix(c))))
      throw AuditError(fail + ": not additive");
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      if (apply(source_.mul(source_.basis_element(a), source_.basis_element(b))) !=
          target_.mul(basis_images_[a], basis_images_[b]))
        throw AuditError(fail + ": not multiplicative");
  const std::uint64_t size = source_.size();
  if (size > 1'000'000) throw GuardError("ring too large for the isomorphism audit");
  std::vector<bool> hit(size, false);
  for (std::uint64_t k = 0; k < size; ++k) {
    auto img = target_.code(apply(source_.from_code(k)));
    if (hit[img]) throw AuditError(fail + ": not injective");
    hit[img] = true;
  }
  if (size <= 256) {
    auto all = source_.elements();
    for (const auto& x : all)
      for (const auto& y : all) {
        if (apply(source_.add(x, y)) != target_.add(apply(x), apply(y))) throw AuditError(fail + ": not additive");
        if (apply(source_.mul(x, y)) != target_.mul(apply(x), apply(y))) throw AuditError(fail + ": not multiplicative");
      }
  }
}

DeligneTriplet::DeligneTriplet(const FieldDescriptor& desc, int m) : ring_(desc, m), module_ring_(desc, m + 1) {}

bool DeligneTriplet::in_module(const RingElem& x) const {
  return x.tag() == module_ring_.tag() && module_ring_.valuation(x) >= 1;
}

std::vector<RingElem> DeligneTriplet::module_elements() const {
  std::vector<RingElem> out;
  for (const auto& x : module_ring_.elements())
    if (module_ring_.valuation(x) >= 1) out.push_back(x);
  return out;
}

RingElem DeligneTriplet::epsilon(const RingElem& x) const {
  if (!in_module(x)) throw RingError("ring mismatch");
  return module_ring_.reduce(x, ring_);
}

RingElem DeligneTriplet::act(const RingElem& r, const RingElem& x) const {
  if (!in_module(x)) throw RingError("ring mismatch");
  return module_ring_.mul(module_ring_.lift(r, ring_), x);
}

std::vector<RingElem> EisensteinPoly::coefficients() const {
  TruncatedRing up(ring.descriptor(), ring.level() + 1);
  std::vector<RingElem> out;
  for (const auto& a : cofactors) out.push_back(up.mul(up.pi(), up.lift(a, ring)));
  return out;
}

std::string EisensteinPoly::to_string() const {
  TruncatedRing up(ring.descriptor(), ring.level() + 1);
  auto coeffs = coefficients();
  std::string s = "x^" + std::to_string(degree());
  for (int i = degree() - 1; i >= 0; --i) {
    if (up.is_zero(coeffs[i])) continue;
    std::string c = up.to_string(coeffs[i]);
    if (c.find(" + ") != std::string::npos && i > 0) c = "(" + c + ")";
    s += " + ";
    if (i == 0) s += c;
    else s += (c == "1" ? "" : c + "*") + (i == 1 ? std::string("x") : "x^" + std::to_string(i));
  }
  return s;
}

EisensteinPoly make_eisenstein(const TruncatedRing& ring, std::vector<RingElem> cofactors) {
  if (cofactors.empty()) throw RingError("not Eisenstein: degree must be positive");
  for (const auto& a : cofactors) ring.check(a);
  if (!ring.is_unit(cofactors[0])) throw RingError("not Eisenstein: constant term has valuation > 1");
  return EisensteinPoly{ring, std::move(cofactors)};
}

EisensteinPoly eisenstein_transfer(const EisensteinPoly& poly, const TruncIso& psi) {
  if (!(psi.source().descriptor() == poly.ring.descriptor()))
    throw RingError("ring mismatch");
  if (psi.level() < poly.ring.level()) throw RingError("isomorphism level below polynomial level");
  if (!psi.aligned()) throw RingError("transfer needs a uniformizer-aligned isomorphism");
  TruncatedRing out(psi.target().descriptor(), poly.ring.level());
  std::vector<RingElem> image;
  for (const auto& a : poly.cofactors)
    image.push_back(psi.target().reduce(psi.apply(psi.source().lift(a, poly.ring)), out));
  return make_eisenstein(out, std::move(image));
}

}  // namespace hecke
