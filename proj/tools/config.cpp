#include "config.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

namespace cli {

using namespace hecke;

void RunConfig::validate() const {
  spec.validate();
  if (m < 1 || m > kMaxLevel) throw std::invalid_argument("m must lie in 1.." + std::to_string(kMaxLevel));
  if (l != 0 && (l < 1 || l > kMaxLevel)) throw std::invalid_argument("l must lie in 1.." + std::to_string(kMaxLevel));
  if (quotient_guard < 1 || quotient_guard > kQuotientGuard)
    throw std::invalid_argument("quotient guard must lie in 1.." + std::to_string(kQuotientGuard));
  if (threads < 1 || threads > kMaxThreads) throw std::invalid_argument("threads must lie in 1.." + std::to_string(kMaxThreads));
  if (triples < 0 || triples > kMaxTriples) throw std::invalid_argument("triples must lie in 0.." + std::to_string(kMaxTriples));
  if (target_field) target_field->validate();
  auto datum = spec.datum();
  for (const auto& lam : window)
    if (!datum.in_lattice(lam)) throw std::invalid_argument("window entry " + lam.to_string() + " is not a cocharacter");
}

FieldDescriptor field_from_json(const json& j) {
  const int p = j.at("p").get<int>();
  const int f = j.value("f", 1);
  const auto kind = j.value("kind", std::string("equal"));
  if (kind == "equal") return FieldDescriptor::equal_char(p, f);
  if (kind == "mixed") return FieldDescriptor::mixed_char(p, j.at("poly").get<std::vector<std::int64_t>>(), f);
  throw std::invalid_argument("field kind must be 'mixed' or 'equal'");
}

namespace {

std::vector<Cocharacter> normalize(std::vector<Cocharacter> raw, const BasedRootDatum& datum) {
  std::set<Cocharacter> out;
  for (auto& l : raw) {
    if (l.size() != static_cast<std::size_t>(datum.rank()))
      throw std::invalid_argument("window entry " + l.to_string() + " has the wrong length");
    if (!datum.in_lattice(l)) throw std::invalid_argument("window entry " + l.to_string() + " is not a cocharacter");
    out.insert(datum.antidominant_rep(l).first);
  }
  return {out.begin(), out.end()};
}

GroupFamily family_from_string(const std::string& s) {
  for (auto f : {GroupFamily::GL, GroupFamily::SL, GroupFamily::ResGL, GroupFamily::ResSL})
    if (family_name(f) == s) return f;
  throw std::invalid_argument("unknown family '" + s + "'");
}

}  // namespace

std::vector<Cocharacter> parse_window(const std::string& text, const BasedRootDatum& datum, int max_spread) {
  if (text.find_first_of(",;") == std::string::npos) {
    std::size_t used = 0;
    int r = std::stoi(text, &used);
    if (used != text.size() || r < 0) throw std::invalid_argument("bad window radius '" + text + "'");
    return datum.antidominant_window(r, max_spread);
  }
  std::vector<Cocharacter> raw;
  std::stringstream entries(text);
  std::string entry;
  while (std::getline(entries, entry, ';')) {
    std::vector<int> c;
    std::stringstream parts(entry);
    std::string x;
    while (std::getline(parts, x, ',')) c.push_back(std::stoi(x));
    raw.emplace_back(std::move(c));
  }
  return normalize(std::move(raw), datum);
}

RunConfig default_config() {
  RunConfig c;
  c.spec.family = GroupFamily::SL;
  c.spec.n = 2;
  c.spec.field = FieldDescriptor::mixed_char(2, {-2, 1});
  c.window = c.spec.datum().antidominant_window(1);
  return c;
}

RunConfig config_from_json(const json& j) {
  RunConfig c = default_config();
  if (j.contains("family")) c.spec.family = family_from_string(j["family"].get<std::string>());
  c.spec.n = j.value("n", c.spec.n);
  if (j.contains("field")) c.spec.field = field_from_json(j["field"]);
  c.spec.ext_e = j.value("ext_e", 1);
  c.spec.ext_f = j.value("ext_f", 1);
  if (j.contains("target_field")) c.target_field = field_from_json(j["target_field"]);
  c.m = j.value("m", c.m);
  c.l = j.value("l", 0);
  c.spec.validate();
  const auto datum = c.spec.datum();
  const int max_spread = j.value("max_spread", -1);
  if (!j.contains("window")) {
    c.window = datum.antidominant_window(1, max_spread);
  } else if (j["window"].is_number_integer()) {
    c.window = datum.antidominant_window(j["window"].get<int>(), max_spread);
  } else if (j["window"].is_string()) {
    c.window = parse_window(j["window"].get<std::string>(), datum, max_spread);
  } else {
    std::vector<Cocharacter> raw;
    for (const auto& e : j["window"]) raw.emplace_back(e.get<std::vector<int>>());
    c.window = normalize(std::move(raw), datum);
  }
  if (j.contains("guards")) c.quotient_guard = j["guards"].value("quotient", c.quotient_guard);
  c.cache_dir = j.value("cache_dir", std::string());
  c.threads = j.value("threads", 1u);
  c.seed = j.value("seed", std::uint64_t{0});
  c.triples = j.value("triples", c.triples);
  if (j.contains("eisenstein")) c.eisenstein = j["eisenstein"].get<std::vector<std::int64_t>>();
  if (j.contains("psi_pi_image")) c.psi_pi_image = j["psi_pi_image"].get<std::vector<std::int64_t>>();
  if (j.contains("convolve")) {
    c.convolve_f = j["convolve"].at("f").get<std::string>();
    c.convolve_g = j["convolve"].at("g").get<std::string>();
  }
  c.validate();
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot read config " + path);
  return config_from_json(json::parse(in));
}

}  // namespace cli
