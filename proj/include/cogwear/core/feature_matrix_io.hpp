#pragma once

#include <istream>
#include <ostream>
#include <span>
#include <string>

#include <nlohmann/json.hpp>

#include "cogwear/core/csv.hpp"
#include "cogwear/core/feature_matrix.hpp"

namespace cogwear {

inline constexpr int kFeatureSchemaVersion = 1;

/// CSV body: header `participant_id,<column names>`, missing cells empty.
inline void write_feature_csv(std::ostream& os, const FeatureMatrix& m) {
  os << "participant_id";
  for (const auto& c : m.columns()) os << ',' << c.name;
  os << '\n';
  for (std::size_t r = 0; r < m.rows(); ++r) {
    os << m.row_ids()[r];
    for (std::size_t c = 0; c < m.cols(); ++c) os << ',' << csv::format_double(m.at(r, c));
    os << '\n';
  }
}

inline nlohmann::json columns_to_json(std::span<const Column> columns) {
  nlohmann::json cols = nlohmann::json::array();
  for (const auto& c : columns) {
    nlohmann::json jc{{"name", c.name}, {"kind", to_string(c.kind)}};
    if (c.kind == ColumnKind::nominal) {
      nlohmann::json cats = nlohmann::json::array();
      for (const auto& cat : c.categories) cats.push_back({{"code", cat.code}, {"label", cat.label}});
      jc["categories"] = cats;
    }
    cols.push_back(jc);
  }
  return cols;
}

inline std::vector<Column> columns_from_json(const nlohmann::json& j) {
  std::vector<Column> cols;
  for (const auto& jc : j) {
    Column c{jc.at("name").get<std::string>(), column_kind_from_string(jc.at("kind").get<std::string>()), {}};
    if (jc.contains("categories"))
      for (const auto& cat : jc["categories"]) c.categories.push_back({cat.at("code").get<int>(), cat.at("label").get<std::string>()});
    cols.push_back(std::move(c));
  }
  return cols;
}

/// Sidecar describing column kinds and category dictionaries.
inline nlohmann::json feature_schema_json(const FeatureMatrix& m) {
  return {{"schema_version", kFeatureSchemaVersion}, {"missing_token", ""}, {"columns", columns_to_json(m.columns())}};
}

inline std::vector<Column> columns_from_schema(const nlohmann::json& j) {
  if (j.value("schema_version", 0) != kFeatureSchemaVersion) throw SchemaError("unsupported feature schema version");
  return columns_from_json(j.at("columns"));
}

inline FeatureMatrix read_feature_csv(std::istream& is, const nlohmann::json& schema) {
  auto cols = columns_from_schema(schema);
  std::string line;
  if (!std::getline(is, line)) throw SchemaError("feature CSV is empty");
  auto header = csv::split(csv::trim_cr(line));
  if (header.size() != cols.size() + 1 || header[0] != "participant_id")
    throw SchemaError("feature CSV header does not match its schema sidecar");
  for (std::size_t c = 0; c < cols.size(); ++c)
    if (header[c + 1] != cols[c].name) throw SchemaError("feature CSV column '" + std::string(header[c + 1]) + "' does not match schema");
  std::vector<std::string> ids;
  std::vector<std::vector<double>> rows;
  while (std::getline(is, line)) {
    auto sv = csv::trim_cr(line);
    if (sv.empty()) continue;
    auto f = csv::split(sv);
    if (f.size() != cols.size() + 1) throw SchemaError("feature CSV row has wrong field count");
    ids.emplace_back(f[0]);
    std::vector<double> row(cols.size(), kMissing);
    for (std::size_t c = 0; c < cols.size(); ++c) {
      if (f[c + 1].empty()) continue;
      auto v = csv::parse_double(f[c + 1]);
      if (!v) throw SchemaError("unparseable feature value '" + std::string(f[c + 1]) + "'");
      row[c] = *v;
    }
    rows.push_back(std::move(row));
  }
  FeatureMatrix m(std::move(ids), std::move(cols));
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (std::size_t c = 0; c < m.cols(); ++c) m.at(r, c) = rows[r][c];
  return m;
}

}  // namespace cogwear
