#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "cogwear/core/error.hpp"

namespace cogwear {

enum class ColumnKind { numeric, ordinal, nominal };

inline const char* to_string(ColumnKind k) {
  switch (k) {
    case ColumnKind::numeric: return "numeric";
    case ColumnKind::ordinal: return "ordinal";
    case ColumnKind::nominal: return "nominal";
  }
  return "numeric";
}

inline ColumnKind column_kind_from_string(const std::string& s) {
  if (s == "numeric") return ColumnKind::numeric;
  if (s == "ordinal") return ColumnKind::ordinal;
  if (s == "nominal") return ColumnKind::nominal;
  throw SchemaError("unknown column kind '" + s + "'");
}

/// One category of a nominal column: the stored numeric code and its label.
struct Category {
  int code = 0;
  std::string label;
  bool operator==(const Category&) const = default;
};

struct Column {
  std::string name;
  ColumnKind kind = ColumnKind::numeric;
  std::vector<Category> categories;  // nominal only

  bool operator==(const Column&) const = default;
};

/// Participants x named columns, row-major, NaN = missing.
class FeatureMatrix {
 public:
  FeatureMatrix() = default;

  FeatureMatrix(std::vector<std::string> row_ids, std::vector<Column> columns)
      : row_ids_(std::move(row_ids)), columns_(std::move(columns)),
        values_(row_ids_.size() * columns_.size(), kMissing) {
    reindex();
  }

  std::size_t rows() const noexcept { return row_ids_.size(); }
  std::size_t cols() const noexcept { return columns_.size(); }

  const std::vector<std::string>& row_ids() const noexcept { return row_ids_; }
  const std::vector<Column>& columns() const noexcept { return columns_; }
  const Column& column(std::size_t c) const { return columns_.at(c); }

  std::vector<std::string> column_names() const {
    std::vector<std::string> out;
    out.reserve(columns_.size());
    for (const auto& c : columns_) out.push_back(c.name);
    return out;
  }

  double at(std::size_t r, std::size_t c) const noexcept { return values_[r * columns_.size() + c]; }
  double& at(std::size_t r, std::size_t c) noexcept { return values_[r * columns_.size() + c]; }

  std::span<const double> row(std::size_t r) const {
    return {values_.data() + r * columns_.size(), columns_.size()};
  }

  bool missing(std::size_t r, std::size_t c) const noexcept { return is_missing(at(r, c)); }

  std::size_t missing_count() const noexcept {
    return static_cast<std::size_t>(std::count_if(values_.begin(), values_.end(), is_missing));
  }

  std::optional<std::size_t> find_column(const std::string& name) const {
    auto it = index_.find(name);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  std::size_t column_index(const std::string& name) const {
    auto c = find_column(name);
    if (!c) throw Error("no column named '" + name + "'");
    return *c;
  }

  std::vector<double> column_values(std::size_t c) const {
    std::vector<double> out(rows());
    for (std::size_t r = 0; r < rows(); ++r) out[r] = at(r, c);
    return out;
  }

  FeatureMatrix select_columns(std::span<const std::string> names) const {
    std::vector<std::size_t> idx;
    std::vector<Column> cols;
    for (const auto& n : names) {
      idx.push_back(column_index(n));
      cols.push_back(columns_[idx.back()]);
    }
    FeatureMatrix out(row_ids_, std::move(cols));
    for (std::size_t r = 0; r < rows(); ++r)
      for (std::size_t j = 0; j < idx.size(); ++j) out.at(r, j) = at(r, idx[j]);
    return out;
  }

  FeatureMatrix select_rows(std::span<const std::size_t> rows_idx) const {
    std::vector<std::string> ids;
    ids.reserve(rows_idx.size());
    for (auto r : rows_idx) ids.push_back(row_ids_.at(r));
    FeatureMatrix out(std::move(ids), columns_);
    for (std::size_t i = 0; i < rows_idx.size(); ++i)
      std::copy_n(values_.begin() + static_cast<std::ptrdiff_t>(rows_idx[i] * cols()), cols(),
                  out.values_.begin() + static_cast<std::ptrdiff_t>(i * cols()));
    return out;
  }

  bool operator==(const FeatureMatrix& o) const {
    if (row_ids_ != o.row_ids_ || columns_ != o.columns_) return false;
    for (std::size_t i = 0; i < values_.size(); ++i) {
      const double a = values_[i], b = o.values_[i];
      if (!(a == b || (is_missing(a) && is_missing(b)))) return false;
    }
    return true;
  }

 private:
  void reindex() {
    index_.clear();
    for (std::size_t c = 0; c < columns_.size(); ++c) {
      if (!index_.emplace(columns_[c].name, c).second)
        throw Error("duplicate column name '" + columns_[c].name + "'");
      if (columns_[c].kind == ColumnKind::nominal && columns_[c].categories.empty())
        throw Error("nominal column '" + columns_[c].name + "' has no category dictionary");
    }
  }

  std::vector<std::string> row_ids_;
  std::vector<Column> columns_;
  std::vector<double> values_;
  std::unordered_map<std::string, std::size_t> index_;
};

/// Replaces each nominal column by indicator columns `name=code` for every
/// category except the first (reference) one. Missing stays missing.
inline FeatureMatrix expand_nominal(const FeatureMatrix& m) {
  std::vector<Column> cols;
  struct Source {
    std::size_t col;
    std::optional<int> code;
  };
  std::vector<Source> src;
  for (std::size_t c = 0; c < m.cols(); ++c) {
    const auto& col = m.column(c);
    if (col.kind != ColumnKind::nominal) {
      cols.push_back(col);
      src.push_back({c, std::nullopt});
      continue;
    }
    for (std::size_t k = 1; k < col.categories.size(); ++k) {
      cols.push_back({col.name + "=" + std::to_string(col.categories[k].code), ColumnKind::numeric, {}});
      src.push_back({c, col.categories[k].code});
    }
  }
  FeatureMatrix out(m.row_ids(), std::move(cols));
  for (std::size_t r = 0; r < m.rows(); ++r) {
    for (std::size_t j = 0; j < src.size(); ++j) {
      const double v = m.at(r, src[j].col);
      if (!src[j].code || is_missing(v))
        out.at(r, j) = v;
      else
        out.at(r, j) = (static_cast<int>(v) == *src[j].code) ? 1.0 : 0.0;
    }
  }
  return out;
}

}  // namespace cogwear
