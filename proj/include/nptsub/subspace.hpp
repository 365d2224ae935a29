#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "nptsub/bipartite.hpp"
#include "nptsub/linalg.hpp"

namespace nptsub {

// The (m-1)(n-1)-dimensional subspace spanned by |j>|k+1> - |j+1>|k>.
struct SubspaceBasis {
  BipartiteDims dims;
  // Generator (j, k) at position j*(n-1) + k.
  std::vector<CVector> generators;
  // Modified Gram-Schmidt (with one re-orthogonalization pass) of the
  // generators, in the same order.
  std::vector<CVector> orthonormal;

  std::size_t dimension() const { return orthonormal.size(); }
};

struct Projector {
  BipartiteDims dims;
  ComplexMatrix matrix;
};

struct ProductIndex {
  std::size_t j = 0;  // first factor
  std::size_t k = 0;  // second factor

  friend bool operator==(const ProductIndex&, const ProductIndex&) = default;
};

// A 2x2 principal submatrix of rho^Gamma with negative determinant.
// alpha = (j0, k0), beta = (j1, k1) with j0 < j1 and k0 < k1.
struct WitnessCertificate {
  ProductIndex alpha;
  ProductIndex beta;
  std::size_t antidiag_index = 0;
  ComplexMatrix submatrix;  // rows/cols ordered {alpha, beta}
  double determinant = 0.0;
  Complex mixture_sum;  // sum_i p_i conj(a_i) b_i
};

SubspaceBasis build_subspace(BipartiteDims dims);

// P = sum_b |b><b| over the orthonormal basis. Zero matrix for an empty basis.
Projector projector(const SubspaceBasis& basis);

// ||(I - P) v||. Throws ShapeMismatch.
double subspace_residual(const SubspaceBasis& basis, std::span<const Complex> v);

// ||(I - P) v|| <= 1e-9 ||v||.
bool contains(const SubspaceBasis& basis, std::span<const Complex> v);

// ||(I - P) rho (I - P)||_F <= 1e-9 ||rho||_F.
bool range_in_subspace(const SubspaceBasis& basis, const ComplexMatrix& rho);
bool range_in_subspace(const SubspaceBasis& basis, const DensityMatrix& rho);

// s_t = sum_{r + c = t} M[r, c], t = 0 .. rows + cols - 2.
std::vector<Complex> antidiag_sums(const ComplexMatrix& mat);

// Locates the negative-determinant 2x2 principal submatrix of rho^Gamma for a
// mixture supported on the subspace. Throws NotInSubspace if some member
// leaves the subspace.
WitnessCertificate witness_locator(const Ensemble& ensemble, const SubspaceBasis& basis);

// Same, after decomposing rho into its eigen-ensemble.
WitnessCertificate witness_locator(const DensityMatrix& rho, const SubspaceBasis& basis);

// Eigenpairs with eigenvalue > 1e-10 * lambda_max, weights renormalized.
Ensemble spectral_ensemble(const DensityMatrix& rho);

// `rank` Gaussian-random unit vectors in the subspace with Dirichlet(1)
// weights. Throws DegenerateSubspace for an empty basis.
Ensemble random_subspace_ensemble(const SubspaceBasis& basis, std::size_t rank, Rng& rng);

}  // namespace nptsub
