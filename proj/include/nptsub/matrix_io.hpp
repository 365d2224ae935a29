#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "nptsub/bipartite.hpp"
#include "nptsub/linalg.hpp"

// JSON documents for matrices and vector sets on C^m (x) C^n.
//
//   {
//     "format": "nptsub.matrix", "version": 1,
//     "m": 3, "n": 4,
//     "ordering": "...",
//     "matrix": [[[re, im], ...], ...],        (mn rows of mn pairs)
//     "denominator": 34,                       (optional, divides every entry)
//     "checksum": {"algorithm": "fnv1a64", "value": "<16 hex digits>"},  (optional)
//     "metadata": {...}
//   }
//
// A vector set uses "format": "nptsub.vectors" and "vectors": [[[re, im], ...], ...].
// Doubles are written in shortest round-trip form, so parse(serialize(x))
// reproduces every entry bit for bit.
namespace nptsub::io {

using Json = nlohmann::json;

inline constexpr std::string_view kMatrixFormat = "nptsub.matrix";
inline constexpr std::string_view kVectorFormat = "nptsub.vectors";
inline constexpr int kFormatVersion = 1;
inline constexpr std::string_view kOrdering =
    "index j*n+k holds product basis vector |j>|k> (first factor major)";

struct MatrixFile {
  BipartiteDims dims;
  ComplexMatrix matrix;
  Json metadata = Json::object();
};

struct VectorSetFile {
  BipartiteDims dims;
  std::vector<CVector> vectors;
  Json metadata = Json::object();
};

// FNV-1a, 64 bit.
std::uint64_t fnv1a64(std::string_view bytes);
// Checksum over the compact dump of a "matrix" array, as stored in files.
std::string matrix_checksum(const Json& matrix_array);

Json to_json(const MatrixFile& file);
Json to_json(const VectorSetFile& file);
std::string serialize(const MatrixFile& file);
std::string serialize(const VectorSetFile& file);

// Throw ParseError on malformed input, bad dimensions, non-finite entries
// or a checksum mismatch.
MatrixFile parse_matrix_file(std::string_view text);
VectorSetFile parse_vector_file(std::string_view text);

MatrixFile read_matrix_file(const std::filesystem::path& path);
// Throws Error if the file cannot be written.
void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace nptsub::io
