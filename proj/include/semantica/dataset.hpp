#pragma once

// Labeled item/feature dataset and the correlation convention used across the
// whole library:
//
//   Sigma^yx = (1/P) Y X^T          (N3 x N1 input-output correlations)
//   Sigma^x  = X X^T                (identity for one-hot inputs)
//   Sigma^y  = (Sigma^yx)^T Sigma^yx
//
// The container file is a UTF-8 JSON document with row-major nested arrays;
// numbers are serialized losslessly (shortest round-trip representation).

#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "semantica/matrix.hpp"

namespace semantica {

struct Dataset {
  std::string name;
  std::vector<std::string> item_labels;     // length P
  std::vector<std::string> feature_labels;  // length N3
  Matrix x;                                 // N1 x P
  Matrix y;                                 // N3 x P

  std::size_t items() const { return x.cols(); }
  std::size_t input_dim() const { return x.rows(); }
  std::size_t features() const { return y.rows(); }

  Matrix sigma_yx() const {
    Matrix s = mul_bt(y, x);
    s *= 1.0 / static_cast<double>(items());
    return s;
  }

  Matrix sigma_x() const { return mul_bt(x, x); }

  Matrix sigma_y() const {
    const Matrix syx = sigma_yx();
    return at_mul(syx, syx);
  }

  void validate() const {
    if (items() == 0) throw std::invalid_argument("Dataset: no items");
    if (y.cols() != x.cols())
      throw std::invalid_argument("Dataset: x and y disagree on item count");
    if (item_labels.size() != items())
      throw std::invalid_argument("Dataset: item label count mismatch");
    if (feature_labels.size() != features())
      throw std::invalid_argument("Dataset: feature label count mismatch");
    if (!x.all_finite() || !y.all_finite())
      throw std::invalid_argument("Dataset: non-finite entries");
  }
};

namespace detail {

inline nlohmann::json matrix_to_json(const Matrix& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

inline Matrix matrix_from_json(const nlohmann::json& rows) {
  if (!rows.is_array() || rows.empty())
    throw std::invalid_argument("dataset json: matrix must be a non-empty array");
  const std::size_t r = rows.size();
  const std::size_t c = rows[0].size();
  Matrix m(r, c);
  for (std::size_t i = 0; i < r; ++i) {
    if (rows[i].size() != c)
      throw std::invalid_argument("dataset json: ragged matrix rows");
    for (std::size_t j = 0; j < c; ++j) m(i, j) = rows[i][j].get<double>();
  }
  return m;
}

}  // namespace detail

inline nlohmann::json dataset_to_json(const Dataset& d) {
  return nlohmann::json{{"name", d.name},
                        {"layout", "row-major"},
                        {"item_labels", d.item_labels},
                        {"feature_labels", d.feature_labels},
                        {"x", detail::matrix_to_json(d.x)},
                        {"y", detail::matrix_to_json(d.y)}};
}

inline Dataset dataset_from_json(const nlohmann::json& j) {
  Dataset d;
  d.name = j.at("name").get<std::string>();
  if (j.contains("layout") && j.at("layout") != "row-major")
    throw std::invalid_argument("dataset json: unsupported layout");
  d.item_labels = j.at("item_labels").get<std::vector<std::string>>();
  d.feature_labels = j.at("feature_labels").get<std::vector<std::string>>();
  d.x = detail::matrix_from_json(j.at("x"));
  d.y = detail::matrix_from_json(j.at("y"));
  d.validate();
  return d;
}

inline void save_dataset(const Dataset& d, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << dataset_to_json(d).dump(1) << "\n";
}

inline Dataset load_dataset(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open dataset: " + path);
  nlohmann::json j;
  in >> j;
  return dataset_from_json(j);
}

}  // namespace semantica
