#include "nptsub/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "nptsub/errors.hpp"

namespace nptsub {

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols, Complex{0.0, 0.0}) {}

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> entries)
    : rows_(rows), cols_(cols), data_(std::move(entries)) {
  if (data_.size() != rows_ * cols_) {
    throw ShapeMismatch("ComplexMatrix: entry count " + std::to_string(data_.size()) +
                        " does not match " + std::to_string(rows_) + "x" + std::to_string(cols_));
  }
}

ComplexMatrix::ComplexMatrix(std::initializer_list<std::initializer_list<Complex>> rows) {
  rows_ = rows.size();
  cols_ = rows_ == 0 ? 0 : rows.begin()->size();
  data_.reserve(rows_ * cols_);
  for (const auto& row : rows) {
    if (row.size() != cols_) throw ShapeMismatch("ComplexMatrix: ragged initializer");
    data_.insert(data_.end(), row.begin(), row.end());
  }
}

ComplexMatrix ComplexMatrix::identity(std::size_t dim) {
  ComplexMatrix out(dim, dim);
  for (std::size_t i = 0; i < dim; ++i) out(i, i) = 1.0;
  return out;
}

ComplexMatrix ComplexMatrix::diagonal(std::span<const double> values) {
  ComplexMatrix out(values.size(), values.size());
  for (std::size_t i = 0; i < values.size(); ++i) out(i, i) = values[i];
  return out;
}

ComplexMatrix ComplexMatrix::outer(std::span<const Complex> v) { return outer(v, v); }

ComplexMatrix ComplexMatrix::outer(std::span<const Complex> u, std::span<const Complex> v) {
  ComplexMatrix out(u.size(), v.size());
  for (std::size_t i = 0; i < u.size(); ++i) {
    for (std::size_t j = 0; j < v.size(); ++j) out(i, j) = u[i] * std::conj(v[j]);
  }
  return out;
}

CVector ComplexMatrix::column(std::size_t c) const {
  CVector v(rows_);
  for (std::size_t r = 0; r < rows_; ++r) v[r] = (*this)(r, c);
  return v;
}

void ComplexMatrix::set_column(std::size_t c, std::span<const Complex> v) {
  if (v.size() != rows_) throw ShapeMismatch("set_column: length mismatch");
  for (std::size_t r = 0; r < rows_; ++r) (*this)(r, c) = v[r];
}

ComplexMatrix ComplexMatrix::adjoint() const {
  ComplexMatrix out(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r) {
    for (std::size_t c = 0; c < cols_; ++c) out(c, r) = std::conj((*this)(r, c));
  }
  return out;
}

ComplexMatrix ComplexMatrix::transpose() const {
  ComplexMatrix out(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r) {
    for (std::size_t c = 0; c < cols_; ++c) out(c, r) = (*this)(r, c);
  }
  return out;
}

Complex ComplexMatrix::trace() const {
  if (!is_square()) throw ShapeMismatch("trace: matrix is not square");
  Complex t{0.0, 0.0};
  for (std::size_t i = 0; i < rows_; ++i) t += (*this)(i, i);
  return t;
}

double ComplexMatrix::frobenius_norm() const {
  double s = 0.0;
  for (const auto& z : data_) s += std::norm(z);
  return std::sqrt(s);
}

double ComplexMatrix::max_abs() const {
  double m = 0.0;
  for (const auto& z : data_) m = std::max(m, std::abs(z));
  return m;
}

ComplexMatrix ComplexMatrix::hermitian_part() const {
  if (!is_square()) throw ShapeMismatch("hermitian_part: matrix is not square");
  ComplexMatrix out(rows_, cols_);
  for (std::size_t r = 0; r < rows_; ++r) {
    out(r, r) = (*this)(r, r).real();
    for (std::size_t c = r + 1; c < cols_; ++c) {
      const Complex z = 0.5 * ((*this)(r, c) + std::conj((*this)(c, r)));
      out(r, c) = z;
      out(c, r) = std::conj(z);
    }
  }
  return out;
}

bool ComplexMatrix::is_hermitian(double tol) const {
  if (!is_square()) return false;
  const double bound = tol * std::max(1.0, max_abs());
  for (std::size_t r = 0; r < rows_; ++r) {
    for (std::size_t c = r; c < cols_; ++c) {
      if (std::abs((*this)(r, c) - std::conj((*this)(c, r))) > bound) return false;
    }
  }
  return true;
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& other) {
  if (rows_ != other.rows_ || cols_ != other.cols_) throw ShapeMismatch("operator+: shape mismatch");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += other.data_[i];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& other) {
  if (rows_ != other.rows_ || cols_ != other.cols_) throw ShapeMismatch("operator-: shape mismatch");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= other.data_[i];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(Complex s) {
  for (auto& z : data_) z *= s;
  return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(double s) {
  for (auto& z : data_) z *= s;
  return *this;
}

ComplexMatrix& ComplexMatrix::operator/=(double s) {
  for (auto& z : data_) z /= s;
  return *this;
}

ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
ComplexMatrix operator-(ComplexMatrix a) { return a *= -1.0; }
ComplexMatrix operator*(ComplexMatrix a, double s) { return a *= s; }
ComplexMatrix operator*(double s, ComplexMatrix a) { return a *= s; }
ComplexMatrix operator*(ComplexMatrix a, Complex s) { return a *= s; }
ComplexMatrix operator*(Complex s, ComplexMatrix a) { return a *= s; }
ComplexMatrix operator/(ComplexMatrix a, double s) { return a /= s; }

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.cols() != b.rows()) throw ShapeMismatch("operator*: inner dimensions differ");
  ComplexMatrix out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const Complex aik = a(i, k);
      if (aik == Complex{0.0, 0.0}) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) out(i, j) += aik * b(k, j);
    }
  }
  return out;
}

CVector operator*(const ComplexMatrix& a, std::span<const Complex> v) {
  if (a.cols() != v.size()) throw ShapeMismatch("matrix-vector product: length mismatch");
  CVector out(a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    Complex s{0.0, 0.0};
    for (std::size_t k = 0; k < a.cols(); ++k) s += a(i, k) * v[k];
    out[i] = s;
  }
  return out;
}

Complex inner(std::span<const Complex> u, std::span<const Complex> v) {
  if (u.size() != v.size()) throw ShapeMismatch("inner: length mismatch");
  Complex s{0.0, 0.0};
  for (std::size_t i = 0; i < u.size(); ++i) s += std::conj(u[i]) * v[i];
  return s;
}

double norm2(std::span<const Complex> v) {
  double s = 0.0;
  for (const auto& z : v) s += std::norm(z);
  return std::sqrt(s);
}

CVector normalized(std::span<const Complex> v) {
  const double nv = norm2(v);
  if (nv == 0.0) throw Error("normalized: zero vector");
  CVector out(v.begin(), v.end());
  for (auto& z : out) z /= nv;
  return out;
}

CVector basis_vector(std::size_t dim, std::size_t index) {
  CVector v(dim);
  v.at(index) = 1.0;
  return v;
}

namespace {

struct Tridiagonal {
  std::vector<double> diag;
  std::vector<double> off;  // off[i] couples i and i+1; off[n-1] = 0
  // Rows are the basis vectors (transposed storage keeps QL rotations
  // contiguous). Empty when vectors were not requested.
  std::vector<CVector> basis_rows;
};

ComplexMatrix checked_hermitian(const ComplexMatrix& a) {
  if (!a.is_square()) throw ShapeMismatch("eigh: matrix is not square");
  if (!a.is_hermitian(1e-12)) throw NotHermitian("eigh: matrix is not Hermitian within tolerance");
  return a.hermitian_part();
}

// Unitary reduction A = U T U^dagger with T real symmetric tridiagonal.
Tridiagonal reduce_to_tridiagonal(ComplexMatrix a, bool want_vectors) {
  const std::size_t n = a.rows();
  ComplexMatrix q = want_vectors ? ComplexMatrix::identity(n) : ComplexMatrix{};
  CVector w(n), p(n), qw(n);

  for (std::size_t k = 0; k + 2 < n; ++k) {
    const std::size_t len = n - k - 1;
    double tail = 0.0;
    for (std::size_t i = 1; i < len; ++i) tail += std::norm(a(k + 1 + i, k));
    if (tail == 0.0) continue;

    const Complex x0 = a(k + 1, k);
    const double alpha = std::sqrt(std::norm(x0) + tail);
    const double ax0 = std::abs(x0);
    const Complex phase = ax0 == 0.0 ? Complex{1.0, 0.0} : x0 / ax0;

    // u = x + phase*alpha*e1, w = sqrt(2) u / |u| so that H = I - w w^dagger.
    const double unorm = std::sqrt(2.0 * alpha * (alpha + ax0));
    const double scale = std::sqrt(2.0) / unorm;
    w[0] = (x0 + phase * alpha) * scale;
    for (std::size_t i = 1; i < len; ++i) w[i] = a(k + 1 + i, k) * scale;

    // Trailing block B <- H B H = B - w q^dagger - q w^dagger.
    double gamma = 0.0;
    for (std::size_t i = 0; i < len; ++i) {
      Complex s{0.0, 0.0};
      for (std::size_t j = 0; j < len; ++j) s += a(k + 1 + i, k + 1 + j) * w[j];
      p[i] = s;
      gamma += (std::conj(w[i]) * s).real();
    }
    for (std::size_t i = 0; i < len; ++i) p[i] -= 0.5 * gamma * w[i];
    for (std::size_t i = 0; i < len; ++i) {
      for (std::size_t j = 0; j < len; ++j) {
        a(k + 1 + i, k + 1 + j) -= w[i] * std::conj(p[j]) + p[i] * std::conj(w[j]);
      }
    }

    const Complex beta = -phase * alpha;
    a(k + 1, k) = beta;
    a(k, k + 1) = std::conj(beta);
    for (std::size_t i = 1; i < len; ++i) {
      a(k + 1 + i, k) = 0.0;
      a(k, k + 1 + i) = 0.0;
    }

    if (want_vectors) {
      for (std::size_t r = 0; r < n; ++r) {
        Complex s{0.0, 0.0};
        for (std::size_t j = 0; j < len; ++j) s += q(r, k + 1 + j) * w[j];
        qw[r] = s;
      }
      for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t j = 0; j < len; ++j) q(r, k + 1 + j) -= qw[r] * std::conj(w[j]);
      }
    }
  }

  Tridiagonal t;
  t.diag.resize(n);
  t.off.assign(n, 0.0);
  std::vector<Complex> phases(n, Complex{1.0, 0.0});
  for (std::size_t i = 0; i < n; ++i) t.diag[i] = a(i, i).real();
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const Complex e = a(i + 1, i);
    const double ae = std::abs(e);
    t.off[i] = ae;
    phases[i + 1] = ae == 0.0 ? phases[i] : phases[i] * (e / ae);
  }
  if (want_vectors) {
    t.basis_rows.assign(n, CVector(n));
    for (std::size_t c = 0; c < n; ++c) {
      for (std::size_t r = 0; r < n; ++r) t.basis_rows[c][r] = q(r, c) * phases[c];
    }
  }
  return t;
}

// Implicit-shift QL on the tridiagonal form; eigenvalues land in t.diag.
void tridiagonal_ql(Tridiagonal& t) {
  const std::size_t n = t.diag.size();
  if (n == 0) return;
  auto& d = t.diag;
  auto& e = t.off;
  auto& v = t.basis_rows;
  const bool vectors = !v.empty();
  const double eps = std::ldexp(1.0, -52);
  const std::size_t budget = 30 * n;
  std::size_t iterations = 0;

  double f = 0.0;
  double tst1 = 0.0;
  for (std::size_t l = 0; l < n; ++l) {
    tst1 = std::max(tst1, std::abs(d[l]) + std::abs(e[l]));
    std::size_t m = l;
    while (m < n - 1) {
      if (std::abs(e[m]) <= eps * tst1) break;
      ++m;
    }
    if (m > l) {
      do {
        if (++iterations > budget) {
          throw NoConvergence("eigh: QL iteration budget of " + std::to_string(budget) + " exhausted");
        }
        double g = d[l];
        double p = (d[l + 1] - g) / (2.0 * e[l]);
        double r = std::hypot(p, 1.0);
        if (p < 0) r = -r;
        d[l] = e[l] / (p + r);
        d[l + 1] = e[l] * (p + r);
        const double dl1 = d[l + 1];
        double h = g - d[l];
        for (std::size_t i = l + 2; i < n; ++i) d[i] -= h;
        f += h;

        p = d[m];
        double c = 1.0, c2 = 1.0, c3 = 1.0;
        const double el1 = e[l + 1];
        double s = 0.0, s2 = 0.0;
        for (std::size_t ii = m; ii-- > l;) {
          c3 = c2;
          c2 = c;
          s2 = s;
          g = c * e[ii];
          h = c * p;
          r = std::hypot(p, e[ii]);
          e[ii + 1] = s * r;
          s = e[ii] / r;
          c = p / r;
          p = c * d[ii] - s * g;
          d[ii + 1] = h + s * (c * g + s * d[ii]);
          if (vectors) {
            auto& lo = v[ii];
            auto& hi = v[ii + 1];
            for (std::size_t k = 0; k < n; ++k) {
              const Complex hk = hi[k];
              hi[k] = s * lo[k] + c * hk;
              lo[k] = c * lo[k] - s * hk;
            }
          }
        }
        p = -s * s2 * c3 * el1 * e[l] / dl1;
        e[l] = s * p;
        d[l] = c * p;
      } while (std::abs(e[l]) > eps * tst1);
    }
    d[l] += f;
    e[l] = 0.0;
  }
}

}  // namespace

Spectrum eigh(const ComplexMatrix& a) {
  const ComplexMatrix h = checked_hermitian(a);
  const std::size_t n = h.rows();
  Tridiagonal t = reduce_to_tridiagonal(h, true);
  tridiagonal_ql(t);

  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return t.diag[x] < t.diag[y]; });

  Spectrum out;
  out.eigenvalues.resize(n);
  out.eigenvectors = ComplexMatrix(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    const CVector& vec = t.basis_rows[order[k]];
    out.eigenvalues[k] = t.diag[order[k]];

    std::size_t pivot = 0;
    double best = -1.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double mag = std::abs(vec[i]);
      if (mag > best) {
        best = mag;
        pivot = i;
      }
    }
    const Complex fix = best > 0.0 ? std::conj(vec[pivot]) / best : Complex{1.0, 0.0};
    for (std::size_t i = 0; i < n; ++i) out.eigenvectors(i, k) = vec[i] * fix;
    out.eigenvectors(pivot, k) = best;
  }
  return out;
}

std::vector<double> eigvalsh(const ComplexMatrix& a) {
  const ComplexMatrix h = checked_hermitian(a);
  Tridiagonal t = reduce_to_tridiagonal(h, false);
  tridiagonal_ql(t);
  std::sort(t.diag.begin(), t.diag.end());
  return t.diag;
}

double min_eigenvalue(const ComplexMatrix& a) {
  const auto ev = eigvalsh(a);
  if (ev.empty()) throw ShapeMismatch("min_eigenvalue: empty matrix");
  return ev.front();
}

double max_eigenvalue(const ComplexMatrix& a) {
  const auto ev = eigvalsh(a);
  if (ev.empty()) throw ShapeMismatch("max_eigenvalue: empty matrix");
  return ev.back();
}

ComplexMatrix project_psd(const ComplexMatrix& a) {
  const Spectrum s = eigh(a);
  const std::size_t n = a.rows();
  ComplexMatrix out(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    const double lambda = s.eigenvalues[k];
    if (lambda <= 0.0) continue;
    for (std::size_t i = 0; i < n; ++i) {
      const Complex vi = s.eigenvectors(i, k) * lambda;
      for (std::size_t j = 0; j < n; ++j) out(i, j) += vi * std::conj(s.eigenvectors(j, k));
    }
  }
  return out.hermitian_part();
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  const std::size_t rb = b.rows();
  const std::size_t cb = b.cols();
  ComplexMatrix out(a.rows() * rb, a.cols() * cb);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) {
      const Complex aij = a(i, j);
      for (std::size_t k = 0; k < rb; ++k) {
        for (std::size_t l = 0; l < cb; ++l) out(i * rb + k, j * cb + l) = aij * b(k, l);
      }
    }
  }
  return out;
}

CVector kron(std::span<const Complex> a, std::span<const Complex> b) {
  CVector out(a.size() * b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t k = 0; k < b.size(); ++k) out[i * b.size() + k] = a[i] * b[k];
  }
  return out;
}

double frob_inner(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw ShapeMismatch("frob_inner: shape mismatch");
  double s = 0.0;
  const auto ea = a.entries();
  const auto eb = b.entries();
  for (std::size_t i = 0; i < ea.size(); ++i) {
    s += ea[i].real() * eb[i].real() + ea[i].imag() * eb[i].imag();
  }
  return s;
}

bool cholesky(const ComplexMatrix& a, ComplexMatrix& out) {
  if (!a.is_square()) throw ShapeMismatch("cholesky: matrix is not square");
  const std::size_t n = a.rows();
  out = ComplexMatrix(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    double diag = a(j, j).real();
    for (std::size_t k = 0; k < j; ++k) diag -= std::norm(out(j, k));
    if (!(diag > 0.0)) return false;
    const double ljj = std::sqrt(diag);
    out(j, j) = ljj;
    for (std::size_t i = j + 1; i < n; ++i) {
      Complex s = a(i, j);
      for (std::size_t k = 0; k < j; ++k) s -= out(i, k) * std::conj(out(j, k));
      out(i, j) = s / ljj;
    }
  }
  return true;
}

ComplexMatrix hpd_inverse(const ComplexMatrix& a) {
  ComplexMatrix l;
  if (!cholesky(a, l)) throw Error("hpd_inverse: matrix is not positive definite");
  const std::size_t n = a.rows();
  // Forward substitution for L^{-1}.
  ComplexMatrix linv(n, n);
  for (std::size_t c = 0; c < n; ++c) {
    linv(c, c) = 1.0 / l(c, c);
    for (std::size_t r = c + 1; r < n; ++r) {
      Complex s{0.0, 0.0};
      for (std::size_t k = c; k < r; ++k) s += l(r, k) * linv(k, c);
      linv(r, c) = -s / l(r, r);
    }
  }
  return (linv.adjoint() * linv).hermitian_part();
}

}  // namespace nptsub
