#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hecke/group.hpp"

namespace hecke {

inline constexpr std::uint64_t kQuotientGuard = 1000000;
inline constexpr std::uint32_t kCacheFormat = 1;

// |G(O/π^level)| for the family, from the closed formula over the ring that
// carries the entries (O_E for restriction families).
std::uint64_t closed_form_order(const GroupSpec& spec, int ring_level);

// K/K_m = G(O/p_F^m) as a sorted table of matrix codes.
class LevelQuotient {
 public:
  // `level` in units of F.
  static LevelQuotient enumerate(const GroupSpec& spec, int level, std::uint64_t guard = kQuotientGuard);
  static LevelQuotient load(const GroupSpec& spec, int level, const std::string& path);
  void save(const std::string& path) const;

  const GroupSpec& spec() const { return spec_; }
  int level() const { return level_; }
  const TruncatedRing& ring() const { return ring_; }
  std::size_t size() const { return codes_.size(); }
  int n() const { return spec_.n; }

  std::uint64_t code(const Matrix& M) const;
  Matrix element(std::size_t i) const;
  std::optional<std::size_t> find(const Matrix& M) const;
  std::size_t index(const Matrix& M) const;  // throws if M is not in the group
  std::size_t identity_index() const { return identity_; }

  std::size_t mul(std::size_t i, std::size_t j) const;
  std::size_t inv(std::size_t i) const { return inverse_[i]; }
  bool has_table() const { return !table_.empty(); }

  // "v1:<hex>" tied to the family, field, level and element list.
  std::string version() const;
  std::uint64_t checksum() const { return checksum_; }

 private:
  LevelQuotient(const GroupSpec& spec, int level);
  void finish();
  Matrix decode(std::uint64_t code) const;

  GroupSpec spec_;
  int level_;
  TruncatedRing ring_;
  std::vector<std::uint64_t> codes_;
  std::vector<std::uint32_t> inverse_;
  std::vector<std::uint32_t> table_;
  std::size_t identity_ = 0;
  std::uint64_t checksum_ = 0;
};

}  // namespace hecke
