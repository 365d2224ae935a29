#include "nptsub/bipartite.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <utility>

#include "nptsub/errors.hpp"

namespace nptsub {

BipartiteDims::BipartiteDims(std::size_t m_, std::size_t n_) : m(m_), n(n_) {
  if (m == 0 || n == 0) throw Error("BipartiteDims: local dimensions must be at least 1");
}

DensityMatrix::DensityMatrix(BipartiteDims dims, ComplexMatrix mat) : dims_(dims), mat_(std::move(mat)) {
  if (mat_.rows() != dims_.total() || mat_.cols() != dims_.total()) {
    throw ShapeMismatch("DensityMatrix: expected " + std::to_string(dims_.total()) + "x" +
                        std::to_string(dims_.total()) + " matrix");
  }
  if (!mat_.is_hermitian(1e-12)) throw InvalidState("DensityMatrix: matrix is not Hermitian");
  mat_ = mat_.hermitian_part();
  const double tr = mat_.trace().real();
  if (std::abs(tr - 1.0) > kTraceTolerance) {
    throw InvalidState("DensityMatrix: trace " + std::to_string(tr) + " differs from 1");
  }
  const double lmin = min_eigenvalue(mat_);
  if (lmin < -kPsdTolerance) {
    throw InvalidState("DensityMatrix: minimum eigenvalue " + std::to_string(lmin) + " is negative");
  }
}

DensityMatrix DensityMatrix::rounded(BipartiteDims dims, const ComplexMatrix& mat) {
  ComplexMatrix psd = project_psd(mat.hermitian_part());
  const double tr = psd.trace().real();
  if (!(tr > 0.0)) throw InvalidState("DensityMatrix::rounded: PSD part has zero trace");
  psd /= tr;
  return DensityMatrix(dims, std::move(psd));
}

void Ensemble::validate() const {
  if (weights.size() != vectors.size() || weights.empty()) {
    throw InvalidState("Ensemble: need one weight per vector and at least one pair");
  }
  double total = 0.0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (!(weights[i] > 0.0)) throw InvalidState("Ensemble: weights must be positive");
    if (vectors[i].size() != dims.total()) throw ShapeMismatch("Ensemble: vector length mismatch");
    if (std::abs(norm2(vectors[i]) - 1.0) > 1e-12) throw InvalidState("Ensemble: vector is not unit length");
    total += weights[i];
  }
  if (std::abs(total - 1.0) > 1e-12) throw InvalidState("Ensemble: weights do not sum to 1");
}

ComplexMatrix Ensemble::to_matrix() const {
  const std::size_t dim = dims.total();
  ComplexMatrix out(dim, dim);
  for (std::size_t i = 0; i < vectors.size(); ++i) {
    const CVector& v = vectors[i];
    for (std::size_t r = 0; r < dim; ++r) {
      const Complex vr = weights[i] * v[r];
      for (std::size_t c = 0; c < dim; ++c) out(r, c) += vr * std::conj(v[c]);
    }
  }
  return out.hermitian_part();
}

ComplexMatrix partial_transpose(const ComplexMatrix& a, BipartiteDims dims) {
  const std::size_t dim = dims.total();
  if (a.rows() != dim || a.cols() != dim) {
    throw ShapeMismatch("partial_transpose: expected " + std::to_string(dim) + "x" + std::to_string(dim));
  }
  const std::size_t m = dims.m;
  const std::size_t n = dims.n;
  ComplexMatrix out(dim, dim);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      for (std::size_t k = 0; k < n; ++k) {
        for (std::size_t l = 0; l < n; ++l) out(i * n + k, j * n + l) = a(i * n + l, j * n + k);
      }
    }
  }
  return out;
}

double NegativityThreshold::tau(std::span<const double> ascending_eigenvalues) const {
  const double top = ascending_eigenvalues.empty() ? 0.0 : std::abs(ascending_eigenvalues.back());
  return std::max(absolute, relative * top);
}

NegativeEigenvalues count_negative_eigenvalues(const ComplexMatrix& a, const NegativityThreshold& policy) {
  const std::vector<double> ev = eigvalsh(a);
  NegativeEigenvalues out;
  out.threshold = policy.tau(ev);
  if (!ev.empty()) {
    out.min_eigenvalue = ev.front();
    out.max_eigenvalue = ev.back();
  }
  for (double lambda : ev) {
    if (lambda < -out.threshold) out.values.push_back(lambda);
  }
  out.count = out.values.size();
  return out;
}

bool is_ppt(const DensityMatrix& rho, const NegativityThreshold& policy) {
  return count_negative_eigenvalues(partial_transpose(rho.matrix(), rho.dims()), policy).count == 0;
}

ComplexMatrix delta_realign(std::span<const Complex> v, BipartiteDims dims) {
  if (v.size() != dims.total()) throw ShapeMismatch("delta_realign: vector length must be m*n");
  ComplexMatrix out(dims.n, dims.m);
  for (std::size_t i = 0; i < dims.m; ++i) {
    for (std::size_t j = 0; j < dims.n; ++j) out(j, i) = v[i * dims.n + j];
  }
  return out;
}

CVector delta_unrealign(const ComplexMatrix& mat, BipartiteDims dims) {
  if (mat.rows() != dims.n || mat.cols() != dims.m) throw ShapeMismatch("delta_unrealign: expected n x m matrix");
  CVector v(dims.total());
  for (std::size_t i = 0; i < dims.m; ++i) {
    for (std::size_t j = 0; j < dims.n; ++j) v[i * dims.n + j] = mat(j, i);
  }
  return v;
}

double Rng::uniform_open_closed() {
  return static_cast<double>((engine_() >> 11) + 1) * 0x1.0p-53;
}

double Rng::uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

double Rng::gaussian() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  const double u1 = uniform_open_closed();
  const double u2 = uniform();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  spare_ = radius * std::sin(angle);
  has_spare_ = true;
  return radius * std::cos(angle);
}

Complex Rng::complex_gaussian() {
  const double re = gaussian();
  const double im = gaussian();
  return Complex{re, im} * std::numbers::sqrt2 * 0.5;
}

DensityMatrix random_density_matrix(BipartiteDims dims, std::size_t rank, std::uint64_t seed) {
  const std::size_t dim = dims.total();
  if (rank < 1 || rank > dim) {
    throw BadRank("random_density_matrix: rank " + std::to_string(rank) + " outside [1, " +
                  std::to_string(dim) + "]");
  }
  Rng rng(seed);
  ComplexMatrix g(dim, rank);
  for (auto& z : g.entries()) z = rng.complex_gaussian();
  ComplexMatrix rho = g * g.adjoint();
  rho /= rho.trace().real();
  return DensityMatrix(dims, rho.hermitian_part());
}

}  // namespace nptsub
