#pragma once

// JSON interchange.
//
//   matrix file:      {"rows": r, "cols": c, "data": [[re, im], ...]}   (row-major)
//   encoding file:    matrix file + {"ancillas": a, "system_dim": d}
//   polynomial file:  {"coefficients": [[re, im], ...]}                (a_0 first)
//
// Objects are emitted with a fixed key order; numbers use the shortest
// representation that round-trips to the same double.

#include <cmath>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "qet/encoding.hpp"
#include "qet/errors.hpp"
#include "qet/gqsp.hpp"
#include "qet/linalg.hpp"

namespace qet::io {

using Json = nlohmann::ordered_json;

inline Json complex_to_json(Complex z) { return Json::array({z.real(), z.imag()}); }

inline Complex complex_from_json(const Json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    throw DimensionError("expected a complex number as [re, im], got " + j.dump());
  }
  const Complex z{j[0].get<double>(), j[1].get<double>()};
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
    throw DimensionError("non-finite complex value " + j.dump());
  }
  return z;
}

inline Json matrix_to_json(const ComplexMatrix& m) {
  Json data = Json::array();
  for (const Complex& z : m.entries()) data.push_back(complex_to_json(z));
  Json j;
  j["rows"] = m.rows();
  j["cols"] = m.cols();
  j["data"] = std::move(data);
  return j;
}

inline ComplexMatrix matrix_from_json(const Json& j) {
  if (!j.is_object()) throw DimensionError("matrix file: top level must be an object");
  for (const char* key : {"rows", "cols", "data"}) {
    if (!j.contains(key)) throw DimensionError(std::string("matrix file: missing field '") + key + "'");
  }
  if (!j["rows"].is_number_unsigned() || !j["cols"].is_number_unsigned()) {
    throw DimensionError("matrix file: rows and cols must be positive integers");
  }
  const auto rows = j["rows"].get<std::size_t>();
  const auto cols = j["cols"].get<std::size_t>();
  if (rows == 0 || cols == 0) throw DimensionError("matrix file: rows and cols must be positive");
  const Json& data = j["data"];
  if (!data.is_array() || data.size() != rows * cols) {
    throw DimensionError("matrix file: data must hold rows*cols = " + std::to_string(rows * cols) +
                         " entries");
  }
  std::vector<Complex> entries;
  entries.reserve(data.size());
  for (const Json& e : data) entries.push_back(complex_from_json(e));
  return ComplexMatrix(rows, cols, std::move(entries));
}

inline Json encoding_to_json(const BlockEncoding& be) {
  Json j = matrix_to_json(be.unitary());
  j["ancillas"] = be.ancilla_qubits();
  j["system_dim"] = be.system_dim();
  return j;
}

inline Json polynomial_to_json(const PolynomialSpec& p) {
  Json c = Json::array();
  for (const Complex& z : p.coefficients()) c.push_back(complex_to_json(z));
  Json j;
  j["coefficients"] = std::move(c);
  return j;
}

inline PolynomialSpec polynomial_from_json(const Json& j) {
  const Json* list = &j;
  if (j.is_object()) {
    if (!j.contains("coefficients")) {
      throw DimensionError("polynomial file: missing field 'coefficients'");
    }
    list = &j["coefficients"];
  }
  if (!list->is_array() || list->empty()) {
    throw DimensionError("polynomial file: coefficients must be a non-empty array");
  }
  std::vector<Complex> c;
  for (const Json& e : *list) c.push_back(complex_from_json(e));
  return PolynomialSpec(std::move(c));
}

inline Json sequence_to_json(const gqsp::GqspSequence& seq) {
  Json rots = Json::array();
  for (const auto& r : seq.rotations) rots.push_back(matrix_to_json(r));
  Json j;
  j["degree"] = seq.degree();
  j["rotations"] = std::move(rots);
  return j;
}

inline Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DimensionError("cannot open '" + path + "'");
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw DimensionError("'" + path + "' is not valid JSON: " + e.what());
  }
}

inline void write_json_file(const std::string& path, const Json& j) {
  std::ofstream out(path);
  if (!out) throw DimensionError("cannot write '" + path + "'");
  out << j.dump(2) << '\n';
}

inline ComplexMatrix read_matrix_file(const std::string& path) {
  return matrix_from_json(read_json_file(path));
}

}  // namespace qet::io
