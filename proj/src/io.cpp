#include "condgreedy/io.hpp"

#include <fstream>
#include <stdexcept>

#include "condgreedy/basis_spec.hpp"

namespace condgreedy {

using nlohmann::json;

json basis_to_json(const BasisTruncation& basis) {
  json cols = json::array();
  for (Index j = 0; j < basis.size(); ++j) {
    json col = json::array();
    for (Index r = 0; r < basis.ambient_dim(); ++r) col.push_back(basis.columns()(r, j));
    cols.push_back(std::move(col));
  }
  return json{{"label", basis.label()},
              {"space", to_string(basis.space())},
              {"size", basis.size()},
              {"ambient_dim", basis.ambient_dim()},
              {"columns", std::move(cols)}};
}

BasisTruncation basis_from_json(const json& doc) {
  try {
    const auto& cols = doc.at("columns");
    if (!cols.is_array() || cols.empty()) throw std::invalid_argument("basis document has no columns");
    const Index d = static_cast<Index>(cols.size());
    const Index n = static_cast<Index>(cols.at(0).size());
    if (doc.contains("size") && doc.at("size").get<Index>() != d)
      throw std::invalid_argument("basis document: size does not match the column count");
    if (doc.contains("ambient_dim") && doc.at("ambient_dim").get<Index>() != n)
      throw std::invalid_argument("basis document: ambient_dim does not match the column length");
    Eigen::MatrixXd x(n, d);
    for (Index j = 0; j < d; ++j) {
      const auto& col = cols.at(static_cast<std::size_t>(j));
      if (static_cast<Index>(col.size()) != n) throw std::invalid_argument("basis document: ragged columns");
      for (Index r = 0; r < n; ++r) x(r, j) = col.at(static_cast<std::size_t>(r)).get<double>();
    }
    return BasisTruncation(doc.value("label", std::string("external")), parse_space(doc.at("space").get<std::string>()),
                           std::move(x));
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("malformed basis document: ") + e.what());
  }
}

json witness_to_json(const Witness& w) {
  json doc{{"coeffs", std::vector<double>(w.coeffs.data(), w.coeffs.data() + w.coeffs.size())},
           {"A", w.subset},
           {"ratio", w.ratio},
           {"kind", to_string(w.kind)},
           {"method", to_string(w.method)}};
  if (w.kind == WitnessKind::AlmostGreedy) doc["B"] = w.reference;
  return doc;
}

Witness witness_from_json(const json& doc) {
  try {
    Witness w;
    const auto coeffs = doc.at("coeffs").get<std::vector<double>>();
    w.coeffs = Eigen::Map<const Eigen::VectorXd>(coeffs.data(), static_cast<Index>(coeffs.size()));
    w.subset = doc.at("A").get<IndexSet>();
    w.ratio = doc.at("ratio").is_null() ? std::numeric_limits<double>::infinity() : doc.at("ratio").get<double>();
    w.kind = parse_witness_kind(doc.value("kind", std::string("conditionality")));
    w.method = parse_method(doc.value("method", std::string("random")));
    if (doc.contains("B")) w.reference = doc.at("B").get<IndexSet>();
    return w;
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("malformed witness: ") + e.what());
  }
}

BasisTruncation load_basis(std::string_view spec) {
  if (!spec.empty() && spec.front() == '@') {
    const std::string path(spec.substr(1));
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open basis document " + path);
    json doc;
    try {
      in >> doc;
    } catch (const json::exception& e) {
      throw std::invalid_argument("basis document " + path + " is not JSON: " + e.what());
    }
    return basis_from_json(doc);
  }
  return parse_basis(spec);
}

}  // namespace condgreedy
