#include "hecke/level_quotient.hpp"

#include <algorithm>
#include <cstdio>
#include <cstring>
#include <deque>
#include <fstream>
#include <unordered_set>

#include "hecke/util.hpp"

namespace hecke {

namespace {

constexpr char kMagic[4] = {'H', 'K', 'L', 'Q'};
constexpr std::size_t kTableLimit = 2048;

std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b) {
  if (b != 0 && a > UINT64_MAX / b) throw GuardError("size guard exceeded: group order overflows 64 bits");
  return a * b;
}

std::uint64_t codes_checksum(const std::vector<std::uint64_t>& codes) {
  std::uint64_t h = fnv1a64("");
  for (auto c : codes) h = fnv1a64(std::string_view(reinterpret_cast<const char*>(&c), sizeof c), h);
  return h;
}

std::uint64_t fingerprint(const GroupSpec& spec, int level) {
  return fnv1a64(spec.describe() + "@" + std::to_string(level));
}

template <class T>
void put(std::ostream& os, T v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof v);
}

template <class T>
T get(std::istream& is) {
  T v{};
  is.read(reinterpret_cast<char*>(&v), sizeof v);
  if (!is) throw AuditError("cache corrupted: truncated file");
  return v;
}

}  // namespace

std::uint64_t closed_form_order(const GroupSpec& spec, int ring_level) {
  const std::uint64_t q = static_cast<std::uint64_t>(spec.field.q());
  const int n = spec.n;
  std::uint64_t order = 1;
  for (int k = 0; k < (ring_level - 1) * n * n; ++k) order = checked_mul(order, q);
  std::uint64_t qn = 1;
  for (int k = 0; k < n; ++k) qn = checked_mul(qn, q);
  std::uint64_t qi = 1;
  for (int i = 0; i < n; ++i) {
    order = checked_mul(order, qn - qi);
    qi *= q;
  }
  if (is_special_linear(spec.family)) {
    std::uint64_t det_group = q - 1;
    for (int k = 0; k < ring_level - 1; ++k) det_group *= q;
    order /= det_group;
  }
  return order;
}

LevelQuotient::LevelQuotient(const GroupSpec& spec, int level)
    : spec_(spec), level_(level), ring_(spec.field, spec.ext_e * level) {
  spec_.validate();
  std::uint64_t span = 1;
  for (int k = 0; k < spec_.n * spec_.n; ++k) span = checked_mul(span, ring_.size());
}

LevelQuotient LevelQuotient::enumerate(const GroupSpec& spec, int level, std::uint64_t guard) {
  LevelQuotient Q(spec, level);
  const std::uint64_t expected = closed_form_order(spec, Q.ring_.level());
  if (expected > guard)
    throw GuardError("size guard exceeded: |K/K_m| = " + std::to_string(expected) + " > " + std::to_string(guard));
  GroupModel G(spec, level, level);
  const auto gens = G.quotient_generators();
  const TruncatedRing& R = Q.ring_;
  Matrix id = mat_identity(R, spec.n);
  std::unordered_set<std::uint64_t> seen{Q.code(id)};
  std::deque<Matrix> frontier{id};
  while (!frontier.empty()) {
    Matrix x = std::move(frontier.front());
    frontier.pop_front();
    for (const auto& g : gens) {
      Matrix y = mat_mul(R, x, g);
      if (seen.insert(Q.code(y)).second) frontier.push_back(std::move(y));
    }
    if (seen.size() > guard) throw GuardError("size guard exceeded during enumeration");
  }
  Q.codes_.assign(seen.begin(), seen.end());
  std::sort(Q.codes_.begin(), Q.codes_.end());
  if (Q.codes_.size() != expected)
    throw AuditError("enumeration found " + std::to_string(Q.codes_.size()) + " elements, closed form says " +
                     std::to_string(expected));
  Q.finish();
  return Q;
}

void LevelQuotient::finish() {
  checksum_ = codes_checksum(codes_);
  identity_ = index(mat_identity(ring_, spec_.n));
  inverse_.resize(codes_.size());
  for (std::size_t i = 0; i < codes_.size(); ++i)
    inverse_[i] = static_cast<std::uint32_t>(index(mat_inverse(ring_, element(i))));
  if (codes_.size() <= kTableLimit) {
    const std::size_t N = codes_.size();
    std::vector<Matrix> els;
    els.reserve(N);
    for (std::size_t i = 0; i < N; ++i) els.push_back(element(i));
    table_.resize(N * N);
    for (std::size_t i = 0; i < N; ++i)
      for (std::size_t j = 0; j < N; ++j)
        table_[i * N + j] = static_cast<std::uint32_t>(index(mat_mul(ring_, els[i], els[j])));
  }
}

std::uint64_t LevelQuotient::code(const Matrix& M) const {
  const std::uint64_t radix = ring_.size();
  std::uint64_t c = 0;
  for (const auto& x : M.a) c = c * radix + ring_.code(x);
  return c;
}

Matrix LevelQuotient::decode(std::uint64_t c) const {
  const std::uint64_t radix = ring_.size();
  Matrix M = mat_zero(ring_, spec_.n);
  for (std::size_t k = M.a.size(); k-- > 0;) {
    M.a[k] = ring_.from_code(c % radix);
    c /= radix;
  }
  return M;
}

Matrix LevelQuotient::element(std::size_t i) const { return decode(codes_.at(i)); }

std::optional<std::size_t> LevelQuotient::find(const Matrix& M) const {
  auto c = code(M);
  auto it = std::lower_bound(codes_.begin(), codes_.end(), c);
  if (it == codes_.end() || *it != c) return std::nullopt;
  return static_cast<std::size_t>(it - codes_.begin());
}

std::size_t LevelQuotient::index(const Matrix& M) const {
  if (auto i = find(M)) return *i;
  throw AuditError("matrix " + mat_to_string(ring_, M) + " is not in K/K_m");
}

std::size_t LevelQuotient::mul(std::size_t i, std::size_t j) const {
  if (!table_.empty()) return table_[i * codes_.size() + j];
  return index(mat_mul(ring_, element(i), element(j)));
}

std::string LevelQuotient::version() const {
  char buf[32];
  std::snprintf(buf, sizeof buf, "v%u:%016llx", kCacheFormat,
                static_cast<unsigned long long>(fnv1a64(std::to_string(checksum_), fingerprint(spec_, level_))));
  return buf;
}

void LevelQuotient::save(const std::string& path) const {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw std::runtime_error("cannot write cache " + path);
  os.write(kMagic, 4);
  put<std::uint32_t>(os, kCacheFormat);
  put<std::uint64_t>(os, fingerprint(spec_, level_));
  put<std::uint32_t>(os, static_cast<std::uint32_t>(spec_.n));
  put<std::uint32_t>(os, static_cast<std::uint32_t>(ring_.level()));
  put<std::uint64_t>(os, codes_.size());
  put<std::uint64_t>(os, checksum_);
  for (auto c : codes_) put<std::uint64_t>(os, c);
  if (!os) throw std::runtime_error("short write on cache " + path);
}

LevelQuotient LevelQuotient::load(const GroupSpec& spec, int level, const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw AuditError("cannot open cache " + path);
  char magic[4];
  is.read(magic, 4);
  if (!is || std::memcmp(magic, kMagic, 4) != 0) throw AuditError("cache corrupted: bad magic");
  if (get<std::uint32_t>(is) != kCacheFormat) throw AuditError("cache version mismatch");
  LevelQuotient Q(spec, level);
  if (get<std::uint64_t>(is) != fingerprint(spec, level)) throw AuditError("cache version mismatch: built for another group or level");
  if (get<std::uint32_t>(is) != static_cast<std::uint32_t>(spec.n) ||
      get<std::uint32_t>(is) != static_cast<std::uint32_t>(Q.ring_.level()))
    throw AuditError("cache version mismatch: shape");
  const auto count = get<std::uint64_t>(is);
  const auto sum = get<std::uint64_t>(is);
  const std::uint64_t expected = closed_form_order(spec, Q.ring_.level());
  if (count != expected) throw AuditError("cache corrupted: wrong element count");
  Q.codes_.resize(count);
  for (auto& c : Q.codes_) c = get<std::uint64_t>(is);
  if (is.peek() != std::char_traits<char>::eof()) throw AuditError("cache corrupted: trailing bytes");
  if (codes_checksum(Q.codes_) != sum) throw AuditError("cache corrupted: checksum mismatch");
  if (!std::is_sorted(Q.codes_.begin(), Q.codes_.end()) ||
      std::adjacent_find(Q.codes_.begin(), Q.codes_.end()) != Q.codes_.end())
    throw AuditError("cache corrupted: codes not strictly sorted");
  GroupModel G(spec, level, level);
  for (auto c : Q.codes_)
    if (!G.satisfies_det(Q.ring_, Q.decode(c))) throw AuditError("cache corrupted: element outside the group");
  Q.finish();
  return Q;
}

}  // namespace hecke
