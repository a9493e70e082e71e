#pragma once

#include "k3pic/integer.hpp"

#include <json.hpp>

#include <limits>
#include <string>

namespace k3pic {

using Json = nlohmann::ordered_json;

inline Json json_of(const Integer& v) {
  if (v.fits_slong_p()) return Json(v.get_si());
  return Json(v.get_str());
}

inline Integer integer_from_json(const Json& j) {
  if (j.is_number_integer()) return Integer(static_cast<long>(j.get<std::int64_t>()));
  if (j.is_string()) {
    Integer v;
    if (v.set_str(j.get<std::string>(), 10) != 0) throw UsageError("bad integer in JSON: " + j.get<std::string>());
    return v;
  }
  throw UsageError("expected an integer in JSON");
}

inline Json json_of(const IntMatrix& A) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < A.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index j = 0; j < A.cols(); ++j) row.push_back(json_of(A(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

inline Json json_of(const IntVector& v) {
  Json r = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) r.push_back(json_of(v(i)));
  return r;
}

inline IntMatrix matrix_from_json(const Json& j) {
  if (!j.is_array()) throw UsageError("expected a matrix in JSON");
  const auto rows = static_cast<Eigen::Index>(j.size());
  const auto cols = rows == 0 ? Eigen::Index{0} : static_cast<Eigen::Index>(j[0].size());
  IntMatrix A(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const auto& row = j[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols) throw UsageError("ragged matrix in JSON");
    for (Eigen::Index c = 0; c < cols; ++c) A(i, c) = integer_from_json(row[static_cast<std::size_t>(c)]);
  }
  return A;
}

inline IntVector vector_from_json(const Json& j) {
  if (!j.is_array()) throw UsageError("expected a vector in JSON");
  IntVector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Eigen::Index>(i)) = integer_from_json(j[i]);
  return v;
}

}  // namespace k3pic
