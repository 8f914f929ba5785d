#include "hecke/serialize.hpp"

#include <ostream>
#include <sstream>

namespace hecke {

std::string rational_to_string(const Rational& r) {
  return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

Rational rational_from_string(const std::string& s) {
  const auto slash = s.find('/');
  try {
    std::size_t used = 0;
    const auto num = std::stoll(s.substr(0, slash), &used);
    if (used != s.substr(0, slash).size()) throw std::invalid_argument(s);
    if (slash == std::string::npos) return Rational(num);
    const auto den = std::stoll(s.substr(slash + 1), &used);
    if (used != s.size() - slash - 1 || den == 0) throw std::invalid_argument(s);
    return Rational(num, den);
  } catch (const std::logic_error&) {
    throw std::invalid_argument("bad rational '" + s + "'");
  }
}

json to_json(const Cocharacter& l) { return json(l.v); }

json to_json(const DoubleCosetId& id) { return json{{"lambda", to_json(id.lambda)}, {"a", id.a}, {"b", id.b}}; }

DoubleCosetId id_from_json(const json& j) {
  return DoubleCosetId{Cocharacter(j.at("lambda").get<std::vector<int>>()), j.at("a").get<std::uint32_t>(),
                       j.at("b").get<std::uint32_t>()};
}

json to_json(const HeckeElem& h, const std::string& cache_version) {
  json terms = json::array();
  for (const auto& [id, c] : h.terms) terms.push_back(json{{"id", to_json(id)}, {"coeff", rational_to_string(c)}});
  return json{{"level", h.level}, {"cache_version", cache_version}, {"terms", terms}};
}

HeckeElem hecke_from_json(const json& j, const std::string& expected_version) {
  const auto v = j.at("cache_version").get<std::string>();
  if (v != expected_version) throw AuditError("cache version mismatch: element built on " + v + ", cache is " + expected_version);
  HeckeElem h;
  h.level = j.at("level").get<int>();
  for (const auto& t : j.at("terms")) h.add(id_from_json(t.at("id")), rational_from_string(t.at("coeff").get<std::string>()));
  return h;
}

json to_json(const TransferReport& r) {
  json mism = json::array();
  for (const auto& x : r.mismatches)
    mism.push_back(json{{"x", to_json(x.x)},
                        {"y", to_json(x.y)},
                        {"z", to_json(x.z)},
                        {"c_F", rational_to_string(x.c_source)},
                        {"c_F'", rational_to_string(x.c_target)}});
  return json{{"pairs_checked", r.pairs_checked},
              {"mismatches", mism},
              {"l", r.l},
              {"m", r.m},
              {"backends", json::array({r.source_backend, r.target_backend})},
              {"precision_bound", r.precision_bound},
              {"theorem_applicable", r.theorem_applicable}};
}

std::string to_text(const TransferReport& r) {
  std::ostringstream os;
  os << r.source_backend << "  ->  " << r.target_backend << "\n";
  os << "m = " << r.m << ", l = " << r.l << ", precision bound = " << r.precision_bound << " ("
     << (r.theorem_applicable ? "theorem-applicable" : "probe") << ")\n";
  os << "pairs checked: " << r.pairs_checked << ", mismatches: " << r.mismatches.size() << "\n";
  for (const auto& x : r.mismatches)
    os << "  " << x.x.to_string() << " * " << x.y.to_string() << " at " << x.z.to_string() << ": "
       << rational_to_string(x.c_source) << " vs " << rational_to_string(x.c_target) << "\n";
  return os.str();
}

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

void write_structure_csv(std::ostream& os, const std::vector<ProductRow>& rows) {
  os << "x_id,y_id,z_id,c\n";
  for (const auto& [x, y, prod] : rows)
    for (const auto& [z, c] : prod.terms)
      os << csv_field(x.to_string()) << ',' << csv_field(y.to_string()) << ',' << csv_field(z.to_string()) << ','
         << rational_to_string(c) << '\n';
}

}  // namespace hecke
