#pragma once

#include <iosfwd>
#include <string>
#include <tuple>
#include <vector>

#include <json.hpp>

#include "hecke/transfer.hpp"

namespace hecke {

using json = nlohmann::ordered_json;

std::string rational_to_string(const Rational& r);  // "num/den"
Rational rational_from_string(const std::string& s);

json to_json(const Cocharacter& l);
json to_json(const DoubleCosetId& id);
DoubleCosetId id_from_json(const json& j);

// {"level", "cache_version", "terms": [{"id", "coeff"}]}
json to_json(const HeckeElem& h, const std::string& cache_version);
// Throws AuditError when the recorded cache version differs from `expected`.
HeckeElem hecke_from_json(const json& j, const std::string& expected_version);

json to_json(const TransferReport& r);
std::string to_text(const TransferReport& r);

// Rows (x_id, y_id, z_id, c), one per nonzero c_z of t_x * t_y.
using ProductRow = std::tuple<DoubleCosetId, DoubleCosetId, HeckeElem>;
void write_structure_csv(std::ostream& os, const std::vector<ProductRow>& rows);

}  // namespace hecke
