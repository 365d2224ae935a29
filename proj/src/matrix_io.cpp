#include "nptsub/matrix_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "nptsub/errors.hpp"

namespace nptsub::io {

namespace {

Json pair_of(Complex z) {
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) throw Error("serialize: non-finite entry");
  return Json::array({z.real(), z.imag()});
}

Json vector_json(std::span<const Complex> v) {
  Json row = Json::array();
  for (const auto& z : v) row.push_back(pair_of(z));
  return row;
}

double finite_number(const Json& j, const char* where) {
  if (!j.is_number()) throw ParseError(std::string(where) + ": expected a number");
  const double x = j.get<double>();
  if (!std::isfinite(x)) throw ParseError(std::string(where) + ": non-finite value");
  return x;
}

Complex parse_pair(const Json& j) {
  if (!j.is_array() || j.size() != 2) throw ParseError("entry must be a [re, im] pair");
  return {finite_number(j[0], "entry real part"), finite_number(j[1], "entry imaginary part")};
}

CVector parse_vector(const Json& j, std::size_t length) {
  if (!j.is_array() || j.size() != length) {
    throw ParseError("expected a list of " + std::to_string(length) + " [re, im] pairs");
  }
  CVector v(length);
  for (std::size_t i = 0; i < length; ++i) v[i] = parse_pair(j[i]);
  return v;
}

Json parse_document(std::string_view text, std::string_view format) {
  Json doc;
  try {
    doc = Json::parse(text.begin(), text.end());
  } catch (const Json::exception& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ParseError("document must be a JSON object");
  if (doc.contains("format") && doc["format"] != format) {
    throw ParseError("unexpected format tag " + doc["format"].dump());
  }
  return doc;
}

BipartiteDims parse_dims(const Json& doc) {
  for (const char* key : {"m", "n"}) {
    if (!doc.contains(key) || !doc[key].is_number_integer() || doc[key].get<long long>() < 1) {
      throw ParseError(std::string("missing or invalid local dimension '") + key + "'");
    }
  }
  return {doc["m"].get<std::size_t>(), doc["n"].get<std::size_t>()};
}

Json metadata_of(const Json& doc) {
  if (!doc.contains("metadata")) return Json::object();
  if (!doc["metadata"].is_object()) throw ParseError("metadata must be an object");
  return doc["metadata"];
}

}  // namespace

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string matrix_checksum(const Json& matrix_array) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a64(matrix_array.dump())));
  return buf;
}

Json to_json(const MatrixFile& file) {
  const std::size_t dim = file.dims.total();
  if (file.matrix.rows() != dim || file.matrix.cols() != dim) {
    throw ShapeMismatch("serialize: matrix must be mn x mn");
  }
  Json rows = Json::array();
  for (std::size_t r = 0; r < dim; ++r) {
    Json row = Json::array();
    for (std::size_t c = 0; c < dim; ++c) row.push_back(pair_of(file.matrix(r, c)));
    rows.push_back(std::move(row));
  }
  return Json{{"format", kMatrixFormat},
              {"version", kFormatVersion},
              {"m", file.dims.m},
              {"n", file.dims.n},
              {"ordering", kOrdering},
              {"matrix", std::move(rows)},
              {"metadata", file.metadata.is_null() ? Json::object() : file.metadata}};
}

Json to_json(const VectorSetFile& file) {
  Json vecs = Json::array();
  for (const auto& v : file.vectors) {
    if (v.size() != file.dims.total()) throw ShapeMismatch("serialize: vector length must be mn");
    vecs.push_back(vector_json(v));
  }
  return Json{{"format", kVectorFormat},
              {"version", kFormatVersion},
              {"m", file.dims.m},
              {"n", file.dims.n},
              {"ordering", kOrdering},
              {"vectors", std::move(vecs)},
              {"metadata", file.metadata.is_null() ? Json::object() : file.metadata}};
}

std::string serialize(const MatrixFile& file) { return to_json(file).dump(2) + "\n"; }
std::string serialize(const VectorSetFile& file) { return to_json(file).dump(2) + "\n"; }

MatrixFile parse_matrix_file(std::string_view text) {
  const Json doc = parse_document(text, kMatrixFormat);
  MatrixFile out;
  out.dims = parse_dims(doc);
  out.metadata = metadata_of(doc);
  const std::size_t dim = out.dims.total();
  if (!doc.contains("matrix") || !doc["matrix"].is_array() || doc["matrix"].size() != dim) {
    throw ParseError("'matrix' must hold " + std::to_string(dim) + " rows");
  }
  const Json& rows = doc["matrix"];
  if (doc.contains("checksum")) {
    const Json& ck = doc["checksum"];
    if (!ck.is_object() || !ck.contains("algorithm") || ck["algorithm"] != "fnv1a64" || !ck.contains("value") ||
        !ck["value"].is_string()) {
      throw ParseError("checksum must be {\"algorithm\": \"fnv1a64\", \"value\": ...}");
    }
    const std::string expected = ck["value"].get<std::string>();
    const std::string actual = matrix_checksum(rows);
    if (expected != actual) throw ParseError("checksum mismatch: expected " + expected + ", got " + actual);
  }
  double denominator = 1.0;
  if (doc.contains("denominator")) {
    denominator = finite_number(doc["denominator"], "denominator");
    if (!(denominator > 0.0)) throw ParseError("denominator must be positive");
  }
  out.matrix = ComplexMatrix(dim, dim);
  for (std::size_t r = 0; r < dim; ++r) {
    const CVector row = parse_vector(rows[r], dim);
    for (std::size_t c = 0; c < dim; ++c) out.matrix(r, c) = denominator == 1.0 ? row[c] : row[c] / denominator;
  }
  return out;
}

VectorSetFile parse_vector_file(std::string_view text) {
  const Json doc = parse_document(text, kVectorFormat);
  VectorSetFile out;
  out.dims = parse_dims(doc);
  out.metadata = metadata_of(doc);
  if (!doc.contains("vectors") || !doc["vectors"].is_array()) throw ParseError("'vectors' must be a list");
  for (const auto& v : doc["vectors"]) out.vectors.push_back(parse_vector(v, out.dims.total()));
  return out;
}

MatrixFile read_matrix_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_matrix_file(buf.str());
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  out << text;
  if (!out) throw Error("write failed for " + path.string());
}

}  // namespace nptsub::io
