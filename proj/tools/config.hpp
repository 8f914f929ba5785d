#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hecke/serialize.hpp"

namespace cli {

using hecke::json;

inline constexpr int kMaxLevel = 8;
inline constexpr unsigned kMaxThreads = 64;
inline constexpr int kMaxTriples = 10000;

struct RunConfig {
  hecke::GroupSpec spec;
  std::optional<hecke::FieldDescriptor> target_field;
  int m = 1;
  int l = 0;  // 0: not given
  std::vector<hecke::Cocharacter> window;
  std::uint64_t quotient_guard = hecke::kQuotientGuard;
  std::string cache_dir;
  std::string out_dir = ".";
  unsigned threads = 1;
  std::uint64_t seed = 0;
  int triples = 50;
  std::vector<std::int64_t> eisenstein;  // cofactors a_i of x^d + π Σ a_i x^i
  std::string convolve_f, convolve_g;    // optional HeckeElem JSON inputs
  // Target coordinates of ψ(π) for transfer; empty means π ↦ π'.
  std::vector<std::int64_t> psi_pi_image;

  void validate() const;
};

hecke::FieldDescriptor field_from_json(const json& j);

// "2" (sup-norm radius) or "-1,1;0,0" (explicit cocharacters).
std::vector<hecke::Cocharacter> parse_window(const std::string& spec, const hecke::BasedRootDatum& datum,
                                             int max_spread = -1);

// Defaults: SL_2 over Q_2, m = 1, window of radius 1.
RunConfig default_config();
RunConfig config_from_json(const json& j);
RunConfig load_config(const std::string& path);

}  // namespace cli
