#pragma once

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace nptsub {

using Complex = std::complex<double>;
using CVector = std::vector<Complex>;

// Dense complex matrix, row-major.
class ComplexMatrix {
 public:
  ComplexMatrix() = default;
  ComplexMatrix(std::size_t rows, std::size_t cols);
  ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> entries);
  ComplexMatrix(std::initializer_list<std::initializer_list<Complex>> rows);

  static ComplexMatrix zeros(std::size_t rows, std::size_t cols) { return {rows, cols}; }
  static ComplexMatrix identity(std::size_t dim);
  static ComplexMatrix diagonal(std::span<const double> values);
  // |v><v|
  static ComplexMatrix outer(std::span<const Complex> v);
  // |u><v|
  static ComplexMatrix outer(std::span<const Complex> u, std::span<const Complex> v);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool is_square() const { return rows_ == cols_; }
  std::size_t size() const { return data_.size(); }

  Complex& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const Complex& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<Complex> entries() { return data_; }
  std::span<const Complex> entries() const { return data_; }

  CVector column(std::size_t c) const;
  void set_column(std::size_t c, std::span<const Complex> v);

  ComplexMatrix adjoint() const;
  ComplexMatrix transpose() const;
  Complex trace() const;
  double frobenius_norm() const;
  double max_abs() const;
  // (A + A^dagger) / 2
  ComplexMatrix hermitian_part() const;

  // max |A[i,j] - conj(A[j,i])| <= tol * max(1, maxabs(A)).
  bool is_hermitian(double tol = 1e-12) const;

  ComplexMatrix& operator+=(const ComplexMatrix& other);
  ComplexMatrix& operator-=(const ComplexMatrix& other);
  ComplexMatrix& operator*=(Complex s);
  ComplexMatrix& operator*=(double s);
  ComplexMatrix& operator/=(double s);

  friend bool operator==(const ComplexMatrix&, const ComplexMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Complex> data_;
};

ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b);
ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b);
ComplexMatrix operator-(ComplexMatrix a);
ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix operator*(ComplexMatrix a, double s);
ComplexMatrix operator*(double s, ComplexMatrix a);
ComplexMatrix operator*(ComplexMatrix a, Complex s);
ComplexMatrix operator*(Complex s, ComplexMatrix a);
ComplexMatrix operator/(ComplexMatrix a, double s);
CVector operator*(const ComplexMatrix& a, std::span<const Complex> v);

// Vector helpers.
Complex inner(std::span<const Complex> u, std::span<const Complex> v);  // <u|v>
double norm2(std::span<const Complex> v);
CVector normalized(std::span<const Complex> v);
CVector basis_vector(std::size_t dim, std::size_t index);

struct Spectrum {
  std::vector<double> eigenvalues;  // ascending
  ComplexMatrix eigenvectors;       // column k pairs with eigenvalues[k]
};

// Hermitian eigendecomposition: Householder reduction to a real symmetric
// tridiagonal matrix followed by implicit-shift QL. Each eigenvector is
// phased so its largest-magnitude component is real and positive (first
// such index on ties).
// Throws NotHermitian, ShapeMismatch, NoConvergence.
Spectrum eigh(const ComplexMatrix& a);

// Eigenvalues only, ascending. Same algorithm without vector accumulation.
std::vector<double> eigvalsh(const ComplexMatrix& a);

double min_eigenvalue(const ComplexMatrix& a);
double max_eigenvalue(const ComplexMatrix& a);

// Frobenius-nearest positive semidefinite matrix: V max(L, 0) V^dagger.
ComplexMatrix project_psd(const ComplexMatrix& a);

// (A (x) B)[i*rB + k, j*cB + l] = A[i,j] * B[k,l]; first factor major.
ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);
CVector kron(std::span<const Complex> a, std::span<const Complex> b);

// Re Tr(A^dagger B). Throws ShapeMismatch.
double frob_inner(const ComplexMatrix& a, const ComplexMatrix& b);

// Lower-triangular L with A = L L^dagger for Hermitian positive definite A.
// Returns false (leaving `out` unspecified) if a non-positive pivot occurs.
bool cholesky(const ComplexMatrix& a, ComplexMatrix& out);

// Inverse of a Hermitian positive definite matrix. Throws Error if the
// Cholesky factorization fails.
ComplexMatrix hpd_inverse(const ComplexMatrix& a);

}  // namespace nptsub
