#pragma once

// JSON documents describing a bi-graded complex. Complex scalars are [re, im]
// pairs; d[j] has dims[j+1] rows of dims[j] entries, dstar[j] has dims[j]
// rows of dims[j+1] entries.

#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "torsionlab/bicomplex.hpp"

namespace torsionlab {

using Json = nlohmann::ordered_json;

struct ComplexDocument {
  int top_degree = 0;
  std::vector<Index> dims;
  std::vector<CMatrix> d;
  std::optional<std::vector<CMatrix>> dstar;
  std::optional<std::vector<CMatrix>> weight;
  std::map<std::string, std::string> metadata;
};

namespace detail {

inline bool same_matrices(const std::vector<CMatrix>& a, const std::vector<CMatrix>& b) {
  if (a.size() != b.size()) return false;
  for (size_t i = 0; i < a.size(); ++i) {
    if (a[i].rows() != b[i].rows() || a[i].cols() != b[i].cols()) return false;
    if (a[i].size() && a[i] != b[i]) return false;
  }
  return true;
}

}  // namespace detail

/// Exact (bitwise on values) equality.
inline bool operator==(const ComplexDocument& a, const ComplexDocument& b) {
  auto opt = [](const auto& x, const auto& y) {
    return x.has_value() == y.has_value() && (!x || detail::same_matrices(*x, *y));
  };
  return a.top_degree == b.top_degree && a.dims == b.dims && detail::same_matrices(a.d, b.d) &&
         opt(a.dstar, b.dstar) && opt(a.weight, b.weight) && a.metadata == b.metadata;
}

namespace detail {

inline Json matrix_to_json(const CMatrix& m) {
  Json rows = Json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Index k = 0; k < m.cols(); ++k) row.push_back({m(i, k).real(), m(i, k).imag()});
    rows.push_back(std::move(row));
  }
  return rows;
}

inline CMatrix matrix_from_json(const Json& j, Index rows, Index cols, const std::string& where) {
  if (!j.is_array() || Index(j.size()) != rows) {
    throw InputError(where + ": expected " + std::to_string(rows) + " rows");
  }
  CMatrix m(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    const Json& row = j[i];
    if (!row.is_array() || Index(row.size()) != cols) {
      throw InputError(where + ": row " + std::to_string(i) + " should have " +
                       std::to_string(cols) + " entries");
    }
    for (Index k = 0; k < cols; ++k) {
      const Json& z = row[k];
      if (!z.is_array() || z.size() != 2 || !z[0].is_number() || !z[1].is_number()) {
        throw InputError(where + ": entry (" + std::to_string(i) + ", " + std::to_string(k) +
                         ") is not a [re, im] pair");
      }
      m(i, k) = Complex(z[0].get<double>(), z[1].get<double>());
    }
  }
  require_finite(m, where.c_str());
  return m;
}

inline std::vector<CMatrix> matrix_list(const Json& doc, const char* key,
                                        const std::vector<Index>& dims, bool down) {
  const Json& list = doc.at(key);
  const bool weight = std::string(key) == "weight";
  const size_t want = weight ? dims.size() : dims.size() - 1;
  if (!list.is_array() || list.size() != want) {
    throw InputError(std::string(key) + ": expected " + std::to_string(want) + " matrices");
  }
  std::vector<CMatrix> out;
  for (size_t j = 0; j < want; ++j) {
    const std::string where = std::string(key) + "[" + std::to_string(j) + "]";
    if (weight) {
      out.push_back(matrix_from_json(list[j], dims[j], dims[j], where));
    } else if (down) {
      out.push_back(matrix_from_json(list[j], dims[j], dims[j + 1], where));
    } else {
      out.push_back(matrix_from_json(list[j], dims[j + 1], dims[j], where));
    }
  }
  return out;
}

inline std::pair<size_t, size_t> line_column(const std::string& text, size_t byte) {
  size_t line = 1, col = 1;
  for (size_t i = 0; i < text.size() && i + 1 < byte; ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

}  // namespace detail

inline ComplexDocument parse_document(const std::string& text) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    const auto [line, col] = detail::line_column(text, e.byte);
    std::string msg = e.what();
    if (const auto p = msg.find("parse error"); p != std::string::npos) msg = msg.substr(p);
    throw InputError("line " + std::to_string(line) + ", column " + std::to_string(col) + ": " +
                     msg);
  }
  if (!doc.is_object()) throw InputError("document must be a JSON object");
  for (const char* key : {"top_degree", "dims", "d"}) {
    if (!doc.contains(key)) throw InputError(std::string("missing field '") + key + "'");
  }
  static const std::set<std::string> known = {"top_degree", "dims",   "d",
                                              "dstar",      "weight", "metadata"};
  for (const auto& item : doc.items()) {
    if (!known.count(item.key())) throw InputError("unknown field '" + item.key() + "'");
  }

  ComplexDocument out;
  try {
    if (!doc["top_degree"].is_number_integer()) throw InputError("top_degree must be an integer");
    out.top_degree = doc["top_degree"].get<int>();
    if (out.top_degree < 0) throw InputError("top_degree must be nonnegative");
    const Json& dims = doc["dims"];
    if (!dims.is_array() || int(dims.size()) != out.top_degree + 1) {
      throw InputError("dims must list top_degree + 1 dimensions");
    }
    for (const auto& v : dims) {
      if (!v.is_number_integer() || v.get<long long>() < 0) {
        throw InputError("dims must be nonnegative integers");
      }
      out.dims.push_back(v.get<Index>());
    }
    out.d = detail::matrix_list(doc, "d", out.dims, false);
    if (doc.contains("dstar")) out.dstar = detail::matrix_list(doc, "dstar", out.dims, true);
    if (doc.contains("weight")) out.weight = detail::matrix_list(doc, "weight", out.dims, false);
    if (doc.contains("metadata")) {
      const Json& meta = doc["metadata"];
      if (!meta.is_object()) throw InputError("metadata must be an object of strings");
      for (const auto& [k, v] : meta.items()) {
        if (!v.is_string()) throw InputError("metadata value '" + k + "' is not a string");
        out.metadata[k] = v.get<std::string>();
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw InputError(e.what());
  }
  return out;
}

inline ComplexDocument load_document(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_document(ss.str());
}

inline Json to_json(const ComplexDocument& doc) {
  Json j;
  j["top_degree"] = doc.top_degree;
  j["dims"] = doc.dims;
  Json d = Json::array();
  for (const auto& m : doc.d) d.push_back(detail::matrix_to_json(m));
  j["d"] = std::move(d);
  if (doc.dstar) {
    Json ds = Json::array();
    for (const auto& m : *doc.dstar) ds.push_back(detail::matrix_to_json(m));
    j["dstar"] = std::move(ds);
  }
  if (doc.weight) {
    Json w = Json::array();
    for (const auto& m : *doc.weight) w.push_back(detail::matrix_to_json(m));
    j["weight"] = std::move(w);
  }
  if (!doc.metadata.empty()) j["metadata"] = doc.metadata;
  return j;
}

/// Canonical text form: two-space indentation, fields in a fixed order.
inline std::string serialize(const ComplexDocument& doc) { return to_json(doc).dump(2) + "\n"; }

/// dstar from the document, or the adjoint of d for the weight (identity if
/// none is given).
inline BiGradedComplex to_complex(const ComplexDocument& doc) {
  if (doc.dstar) return BiGradedComplex(doc.dims, doc.d, *doc.dstar);
  std::optional<HermitianWeight> w;
  if (doc.weight) w = HermitianWeight{*doc.weight};
  return with_adjoint(doc.dims, doc.d, w);
}

inline ComplexDocument from_complex(const BiGradedComplex& x) {
  ComplexDocument doc;
  doc.top_degree = x.top_degree();
  doc.dims = x.dims();
  doc.d = x.d_maps();
  doc.dstar = x.dstar_maps();
  return doc;
}

}  // namespace torsionlab
