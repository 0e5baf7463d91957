#pragma once

#include "json.hpp"

#include <string>
#include <string_view>

#include "condgreedy/bases.hpp"
#include "condgreedy/witness.hpp"

namespace condgreedy {

/// {"label", "space", "size", "ambient_dim", "columns": [[...], ...]},
/// one inner array per basis vector.
nlohmann::json basis_to_json(const BasisTruncation& basis);

/// Inverse of basis_to_json. This is also the entry point for bases built
/// outside the library. Throws std::invalid_argument on a malformed document.
BasisTruncation basis_from_json(const nlohmann::json& doc);

/// {"coeffs", "A", "ratio", "kind", "method"} plus "B" for almost-greedy.
nlohmann::json witness_to_json(const Witness& w);
Witness witness_from_json(const nlohmann::json& doc);

/// parse_basis, or for "@path" the JSON basis document stored at path.
BasisTruncation load_basis(std::string_view spec);

}  // namespace condgreedy
