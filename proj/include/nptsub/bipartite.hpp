#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <string_view>
#include <vector>

#include "nptsub/linalg.hpp"

namespace nptsub {

// Local dimensions of C^m (x) C^n. Product basis |j>|k> sits at index j*n + k.
struct BipartiteDims {
  std::size_t m = 1;
  std::size_t n = 1;

  BipartiteDims() = default;
  BipartiteDims(std::size_t m_, std::size_t n_);

  std::size_t total() const { return m * n; }
  std::size_t index(std::size_t j, std::size_t k) const { return j * n + k; }
  // (m-1)(n-1)
  std::size_t max_negative_count() const { return (m - 1) * (n - 1); }

  friend bool operator==(const BipartiteDims&, const BipartiteDims&) = default;
};

// A validated state: Hermitian, unit trace, positive semidefinite.
class DensityMatrix {
 public:
  static constexpr double kTraceTolerance = 1e-10;
  static constexpr double kPsdTolerance = 1e-10;

  // The 1 x 1 state [1].
  DensityMatrix() : mat_(ComplexMatrix::identity(1)) {}

  // Throws InvalidState if any invariant fails, ShapeMismatch on size.
  DensityMatrix(BipartiteDims dims, ComplexMatrix mat);

  // Projects onto the PSD cone and renormalizes the trace first.
  static DensityMatrix rounded(BipartiteDims dims, const ComplexMatrix& mat);

  const BipartiteDims& dims() const { return dims_; }
  const ComplexMatrix& matrix() const { return mat_; }

 private:
  BipartiteDims dims_;
  ComplexMatrix mat_;
};

// Convex mixture sum_i p_i |v_i><v_i|.
struct Ensemble {
  BipartiteDims dims;
  std::vector<double> weights;
  std::vector<CVector> vectors;

  // Throws InvalidState if weights are not a probability vector or a
  // vector is not unit length (both within 1e-12).
  void validate() const;
  ComplexMatrix to_matrix() const;
};

// Transpose on the second factor: (i*n+k, j*n+l) <- (i*n+l, j*n+k).
// Pure entry permutation. Throws ShapeMismatch.
ComplexMatrix partial_transpose(const ComplexMatrix& a, BipartiteDims dims);

struct NegativityThreshold {
  double absolute = 1e-10;
  double relative = 1e-9;

  // tau = max(absolute, relative * |lambda_max|)
  double tau(std::span<const double> ascending_eigenvalues) const;
};

struct NegativeEigenvalues {
  std::size_t count = 0;
  std::vector<double> values;  // ascending
  double threshold = 0.0;
  double min_eigenvalue = 0.0;
  double max_eigenvalue = 0.0;
};

NegativeEigenvalues count_negative_eigenvalues(const ComplexMatrix& a,
                                               const NegativityThreshold& policy = {});

bool is_ppt(const DensityMatrix& rho, const NegativityThreshold& policy = {});

// Delta(|i>|j>) = |j><i|: result is n x m with result(j, i) = v[i*n + j].
ComplexMatrix delta_realign(std::span<const Complex> v, BipartiteDims dims);
CVector delta_unrealign(const ComplexMatrix& mat, BipartiteDims dims);

// Seeded mt19937_64 with Box-Muller Gaussians built from raw 64-bit draws,
// so sample streams do not depend on the standard library's distributions.
class Rng {
 public:
  static constexpr std::string_view kAlgorithm = "mt19937_64";

  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // Uniform in (0, 1].
  double uniform_open_closed();
  // Uniform in [0, 1).
  double uniform();
  double gaussian();
  // Real and imaginary parts independent N(0, 1/2).
  Complex complex_gaussian();
  std::uint64_t next() { return engine_(); }

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

// G G^dagger / Tr(G G^dagger) with G an mn x rank complex Gaussian matrix.
// Throws BadRank unless 1 <= rank <= mn.
DensityMatrix random_density_matrix(BipartiteDims dims, std::size_t rank, std::uint64_t seed);

}  // namespace nptsub
