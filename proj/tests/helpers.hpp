#pragma once

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <random>

#include "nptsub/linalg.hpp"

// Test-side sampling uses std::mt19937_64 with std distributions, kept
// apart from the library's Rng so the two never share a code path.
namespace testutil {

using nptsub::Complex;
using nptsub::ComplexMatrix;

inline ComplexMatrix random_matrix(std::size_t rows, std::size_t cols, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  ComplexMatrix a(rows, cols);
  for (auto& z : a.entries()) z = Complex(g(gen), g(gen));
  return a;
}

inline ComplexMatrix random_hermitian(std::size_t n, std::uint64_t seed) {
  return random_matrix(n, n, seed).hermitian_part();
}

inline double max_diff(const ComplexMatrix& a, const ComplexMatrix& b) { return (a - b).max_abs(); }

inline std::filesystem::path fixture(const char* name) { return std::filesystem::path(NPTSUB_FIXTURE_DIR) / name; }

}  // namespace testutil
