#include "nptsub/subspace.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

#include "nptsub/errors.hpp"

namespace nptsub {

namespace {

constexpr double kDropThreshold = 1e-10;
constexpr double kContainsTolerance = 1e-9;
constexpr double kNonzero = 1e-10;

void orthogonalize_against(CVector& v, const std::vector<CVector>& basis) {
  for (const auto& b : basis) {
    const Complex c = inner(b, v);
    for (std::size_t i = 0; i < v.size(); ++i) v[i] -= c * b[i];
  }
}

}  // namespace

SubspaceBasis build_subspace(BipartiteDims dims) {
  SubspaceBasis out;
  out.dims = dims;
  const std::size_t dim = dims.total();
  for (std::size_t j = 0; j + 1 < dims.m; ++j) {
    for (std::size_t k = 0; k + 1 < dims.n; ++k) {
      CVector g(dim);
      g[dims.index(j, k + 1)] = 1.0;
      g[dims.index(j + 1, k)] = -1.0;
      out.generators.push_back(std::move(g));
    }
  }
  for (const auto& g : out.generators) {
    CVector v = g;
    orthogonalize_against(v, out.orthonormal);
    orthogonalize_against(v, out.orthonormal);
    const double nv = norm2(v);
    if (nv <= kDropThreshold) continue;
    for (auto& z : v) z /= nv;
    out.orthonormal.push_back(std::move(v));
  }
  return out;
}

Projector projector(const SubspaceBasis& basis) {
  const std::size_t dim = basis.dims.total();
  ComplexMatrix p(dim, dim);
  for (const auto& b : basis.orthonormal) {
    for (std::size_t r = 0; r < dim; ++r) {
      for (std::size_t c = 0; c < dim; ++c) p(r, c) += b[r] * std::conj(b[c]);
    }
  }
  return {basis.dims, p.hermitian_part()};
}

double subspace_residual(const SubspaceBasis& basis, std::span<const Complex> v) {
  if (v.size() != basis.dims.total()) throw ShapeMismatch("subspace_residual: vector length must be m*n");
  CVector r(v.begin(), v.end());
  orthogonalize_against(r, basis.orthonormal);
  return norm2(r);
}

bool contains(const SubspaceBasis& basis, std::span<const Complex> v) {
  return subspace_residual(basis, v) <= kContainsTolerance * norm2(v);
}

bool range_in_subspace(const SubspaceBasis& basis, const ComplexMatrix& rho) {
  const std::size_t dim = basis.dims.total();
  if (rho.rows() != dim || rho.cols() != dim) throw ShapeMismatch("range_in_subspace: shape mismatch");
  const ComplexMatrix complement = ComplexMatrix::identity(dim) - projector(basis).matrix;
  const ComplexMatrix leak = complement * rho * complement;
  return leak.frobenius_norm() <= kContainsTolerance * rho.frobenius_norm();
}

bool range_in_subspace(const SubspaceBasis& basis, const DensityMatrix& rho) {
  return range_in_subspace(basis, rho.matrix());
}

std::vector<Complex> antidiag_sums(const ComplexMatrix& mat) {
  if (mat.rows() == 0 || mat.cols() == 0) return {};
  std::vector<Complex> sums(mat.rows() + mat.cols() - 1);
  for (std::size_t r = 0; r < mat.rows(); ++r) {
    for (std::size_t c = 0; c < mat.cols(); ++c) sums[r + c] += mat(r, c);
  }
  return sums;
}

WitnessCertificate witness_locator(const Ensemble& ensemble, const SubspaceBasis& basis) {
  ensemble.validate();
  const BipartiteDims dims = basis.dims;
  if (!(ensemble.dims == dims)) throw ShapeMismatch("witness_locator: ensemble and basis dimensions differ");
  for (std::size_t i = 0; i < ensemble.vectors.size(); ++i) {
    const double leak = subspace_residual(basis, ensemble.vectors[i]);
    if (leak > kContainsTolerance * norm2(ensemble.vectors[i])) {
      std::ostringstream msg;
      msg << "witness_locator: member " << i << " leaves the subspace (residual " << leak << ")";
      throw NotInSubspace(msg.str());
    }
  }

  const auto& p = ensemble.weights;
  const auto& vs = ensemble.vectors;
  const std::size_t m = dims.m;
  const std::size_t n = dims.n;
  auto coeff = [&](std::size_t i, std::size_t row, std::size_t col) { return vs[i][row * n + col]; };

  // Leftmost anti-diagonal (of the m x n coefficient matrices) that is
  // nonzero in some member.
  std::size_t t_star = m + n;
  for (std::size_t t = 0; t + 1 < m + n && t_star == m + n; ++t) {
    for (std::size_t row = 0; row <= std::min(t, m - 1); ++row) {
      const std::size_t col = t - row;
      if (col >= n) continue;
      for (std::size_t i = 0; i < vs.size(); ++i) {
        if (std::abs(coeff(i, row, col)) > kNonzero) {
          t_star = t;
          break;
        }
      }
      if (t_star != m + n) break;
    }
  }
  if (t_star == m + n) throw NoWitness("witness_locator: every member is numerically zero");

  // Entries d_1..d_L of the anti-diagonal, from the largest row down.
  const std::size_t row_hi = std::min(t_star, m - 1);
  const std::size_t row_lo = t_star >= n ? t_star - (n - 1) : 0;
  const std::size_t length = row_hi - row_lo + 1;
  auto row_at = [&](std::size_t pos) { return row_hi - pos; };

  std::size_t j0 = length;
  for (std::size_t pos = 0; pos < length && j0 == length; ++pos) {
    for (std::size_t i = 0; i < vs.size(); ++i) {
      if (std::abs(coeff(i, row_at(pos), t_star - row_at(pos))) > kNonzero) {
        j0 = pos;
        break;
      }
    }
  }

  const std::size_t row_a = row_at(j0);
  const std::size_t col_a = t_star - row_a;
  std::size_t j1 = length;
  Complex mixture{0.0, 0.0};
  for (std::size_t pos = j0 + 1; pos < length; ++pos) {
    const std::size_t row = row_at(pos);
    Complex s{0.0, 0.0};
    for (std::size_t i = 0; i < vs.size(); ++i) {
      s += p[i] * std::conj(coeff(i, row_a, col_a)) * coeff(i, row, t_star - row);
    }
    if (std::abs(s) > kNonzero) {
      j1 = pos;
      mixture = s;
      break;
    }
  }
  if (j1 == length) {
    std::ostringstream msg;
    msg << "witness_locator: no partner entry on anti-diagonal " << t_star << " (j0 = " << j0
        << ", length " << length << ")";
    throw NoWitness(msg.str());
  }
  const std::size_t row_b = row_at(j1);
  const std::size_t col_b = t_star - row_b;

  WitnessCertificate cert;
  cert.antidiag_index = t_star;
  cert.alpha = {row_b, col_a};
  cert.beta = {row_a, col_b};
  cert.mixture_sum = mixture;

  const ComplexMatrix gamma = partial_transpose(ensemble.to_matrix(), dims);
  const std::size_t ia = dims.index(cert.alpha.j, cert.alpha.k);
  const std::size_t ib = dims.index(cert.beta.j, cert.beta.k);
  cert.submatrix = ComplexMatrix{{gamma(ia, ia), gamma(ia, ib)}, {gamma(ib, ia), gamma(ib, ib)}};
  cert.determinant = (gamma(ia, ia) * gamma(ib, ib) - gamma(ia, ib) * gamma(ib, ia)).real();
  return cert;
}

Ensemble spectral_ensemble(const DensityMatrix& rho) {
  const Spectrum s = eigh(rho.matrix());
  Ensemble out;
  out.dims = rho.dims();
  const double top = s.eigenvalues.empty() ? 0.0 : s.eigenvalues.back();
  double total = 0.0;
  for (std::size_t k = 0; k < s.eigenvalues.size(); ++k) {
    if (s.eigenvalues[k] > kNonzero * top) {
      out.weights.push_back(s.eigenvalues[k]);
      out.vectors.push_back(normalized(s.eigenvectors.column(k)));
      total += s.eigenvalues[k];
    }
  }
  for (auto& w : out.weights) w /= total;
  return out;
}

WitnessCertificate witness_locator(const DensityMatrix& rho, const SubspaceBasis& basis) {
  if (!(rho.dims() == basis.dims)) throw ShapeMismatch("witness_locator: state and basis dimensions differ");
  return witness_locator(spectral_ensemble(rho), basis);
}

Ensemble random_subspace_ensemble(const SubspaceBasis& basis, std::size_t rank, Rng& rng) {
  if (basis.dimension() == 0) throw DegenerateSubspace("random_subspace_ensemble: subspace is empty");
  if (rank == 0) throw BadRank("random_subspace_ensemble: rank must be positive");
  Ensemble out;
  out.dims = basis.dims;
  const std::size_t dim = basis.dims.total();
  double total = 0.0;
  for (std::size_t r = 0; r < rank; ++r) {
    CVector v(dim);
    for (const auto& b : basis.orthonormal) {
      const Complex g = rng.complex_gaussian();
      for (std::size_t i = 0; i < dim; ++i) v[i] += g * b[i];
    }
    out.vectors.push_back(normalized(v));
    const double w = -std::log(rng.uniform_open_closed()) + 1e-300;
    out.weights.push_back(w);
    total += w;
  }
  for (auto& w : out.weights) w /= total;
  return out;
}

}  // namespace nptsub
