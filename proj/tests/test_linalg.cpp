#include <catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>

#include "helpers.hpp"
#include "oracle.hpp"
#include "nptsub/errors.hpp"
#include "nptsub/linalg.hpp"
#include "nptsub/matrix_io.hpp"

using namespace nptsub;
using testutil::max_diff;
using testutil::random_hermitian;

namespace {

double residual(const ComplexMatrix& a, const Spectrum& s) {
  double worst = 0.0;
  for (std::size_t k = 0; k < s.eigenvalues.size(); ++k) {
    const CVector v = s.eigenvectors.column(k);
    CVector r = a * v;
    for (std::size_t i = 0; i < v.size(); ++i) r[i] -= s.eigenvalues[k] * v[i];
    worst = std::max(worst, norm2(r));
  }
  return worst;
}

double orthonormality(const Spectrum& s) {
  const ComplexMatrix v = s.eigenvectors;
  return (v.adjoint() * v - ComplexMatrix::identity(v.cols())).frobenius_norm();
}

ComplexMatrix psd_oracle(const ComplexMatrix& a) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(oracle::to_eigen(a));
  Eigen::VectorXd lam = es.eigenvalues().cwiseMax(0.0);
  return oracle::from_eigen(es.eigenvectors() * lam.asDiagonal() * es.eigenvectors().adjoint());
}

}  // namespace

TEST_CASE("eigh on small closed forms", "[linalg]") {
  const Spectrum id = eigh(ComplexMatrix::identity(2));
  CHECK(id.eigenvalues == std::vector<double>{1.0, 1.0});

  const Spectrum flip = eigh(ComplexMatrix{{0, 1}, {1, 0}});
  CHECK(flip.eigenvalues[0] == Catch::Approx(-1.0).margin(1e-15));
  CHECK(flip.eigenvalues[1] == Catch::Approx(1.0).margin(1e-15));

  const ComplexMatrix one{{Complex(-3.5, 0)}};
  CHECK(eigh(one).eigenvalues[0] == -3.5);
  CHECK(eigh(one).eigenvectors(0, 0) == Complex(1.0, 0.0));

  // Pauli y: eigenvalues -1, 1 with complex eigenvectors
  const ComplexMatrix y{{0, Complex(0, -1)}, {Complex(0, 1), 0}};
  const Spectrum sy = eigh(y);
  CHECK(sy.eigenvalues[0] == Catch::Approx(-1.0));
  CHECK(residual(y, sy) < 1e-14);
}

TEST_CASE("eigh agrees with Eigen on random Hermitian matrices", "[linalg]") {
  for (std::size_t n : {1u, 2u, 3u, 5u, 8u, 13u, 24u, 40u, 64u}) {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      const ComplexMatrix a = random_hermitian(n, 1000 * n + seed);
      const Spectrum s = eigh(a);
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(oracle::to_eigen(a), Eigen::EigenvaluesOnly);
      const double scale = std::max(1.0, a.frobenius_norm());
      for (std::size_t k = 0; k < n; ++k) {
        CHECK(std::abs(s.eigenvalues[k] - es.eigenvalues()(k)) <= 1e-11 * scale);
      }
      CHECK(std::is_sorted(s.eigenvalues.begin(), s.eigenvalues.end()));
      CHECK(residual(a, s) <= 1e-11 * scale);
      CHECK(orthonormality(s) <= 1e-10);
    }
  }
}

TEST_CASE("eigh residual bound holds up to 169 x 169", "[linalg][slow]") {
  for (std::size_t n : {100u, 144u, 169u}) {
    const ComplexMatrix a = random_hermitian(n, 77 + n);
    const Spectrum s = eigh(a);
    CHECK(residual(a, s) <= 1e-11 * std::max(1.0, a.frobenius_norm()));
    CHECK(orthonormality(s) <= 1e-10);
  }
}

TEST_CASE("eigh handles degenerate and clustered spectra", "[linalg]") {
  // U diag(1,1,1,2,2,-3) U^dagger with a random unitary U from Eigen's QR
  const ComplexMatrix g = testutil::random_matrix(6, 6, 5);
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(oracle::to_eigen(g));
  const ComplexMatrix u = oracle::from_eigen(qr.householderQ() * Eigen::MatrixXcd::Identity(6, 6));
  const std::vector<double> lam{1, 1, 1, 2, 2, -3};
  const ComplexMatrix a = (u * ComplexMatrix::diagonal(lam) * u.adjoint()).hermitian_part();
  const Spectrum s = eigh(a);
  const std::vector<double> want{-3, 1, 1, 1, 2, 2};
  for (std::size_t k = 0; k < 6; ++k) CHECK(s.eigenvalues[k] == Catch::Approx(want[k]).margin(1e-12));
  CHECK(residual(a, s) < 1e-12);
  CHECK(orthonormality(s) < 1e-12);

  const Spectrum z = eigh(ComplexMatrix::zeros(4, 4));
  CHECK(z.eigenvalues == std::vector<double>(4, 0.0));
  CHECK(max_diff(z.eigenvectors, ComplexMatrix::identity(4)) == 0.0);
}

TEST_CASE("eigh phase convention and determinism", "[linalg]") {
  const ComplexMatrix a = random_hermitian(9, 3);
  const Spectrum s = eigh(a);
  for (std::size_t k = 0; k < 9; ++k) {
    const CVector v = s.eigenvectors.column(k);
    std::size_t big = 0;
    for (std::size_t i = 1; i < v.size(); ++i)
      if (std::abs(v[i]) > std::abs(v[big]) + 1e-14) big = i;
    CHECK(v[big].real() > 0.0);
    CHECK(std::abs(v[big].imag()) <= 1e-15);
  }
  const Spectrum again = eigh(a);
  CHECK(again.eigenvalues == s.eigenvalues);
  CHECK(again.eigenvectors == s.eigenvectors);
  CHECK(eigvalsh(a) == s.eigenvalues);
}

TEST_CASE("eigh rejects bad input", "[linalg]") {
  CHECK_THROWS_AS(eigh(ComplexMatrix{{0, 1}, {2, 0}}), NotHermitian);
  CHECK_THROWS_AS(eigh(ComplexMatrix(2, 3)), ShapeMismatch);
  // just outside the relative tolerance
  ComplexMatrix a = ComplexMatrix::identity(3);
  a(0, 1) = 2e-12;
  CHECK_THROWS_AS(eigh(a), NotHermitian);
  a(0, 1) = 5e-13;
  CHECK_NOTHROW(eigh(a));
}

TEST_CASE("fixture state has no eigenvalue below -1e-10", "[linalg]") {
  const io::MatrixFile f = io::read_matrix_file(testutil::fixture("paper_3x4.json"));
  const std::vector<double> ev = eigvalsh(f.matrix);
  CHECK(ev.front() >= -1e-10);
}

TEST_CASE("project_psd", "[linalg]") {
  const ComplexMatrix psd = testutil::random_matrix(5, 3, 11) * testutil::random_matrix(5, 3, 11).adjoint();
  CHECK((project_psd(psd) - psd).frobenius_norm() <= 1e-10 * std::max(1.0, psd.frobenius_norm()));

  const ComplexMatrix clamp = project_psd(ComplexMatrix{{-1, 0}, {0, 2}});
  CHECK(max_diff(clamp, ComplexMatrix{{0, 0}, {0, 2}}) < 1e-15);

  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const std::size_t n = 2 + seed % 9;
    const ComplexMatrix a = random_hermitian(n, 500 + seed);
    const ComplexMatrix p = project_psd(a);
    // oracle: Eigen spectral clamp
    CHECK(max_diff(p, psd_oracle(a)) < 1e-10);
    CHECK(min_eigenvalue(p) >= -1e-10);
    CHECK(max_eigenvalue(a - p) <= 1e-10);
    CHECK(max_diff(project_psd(p), p) < 1e-10);
    // nearest: no random PSD matrix is closer
    const ComplexMatrix b = testutil::random_matrix(n, n, 900 + seed);
    const ComplexMatrix q = b * b.adjoint() / static_cast<double>(n);
    CHECK((a - p).frobenius_norm() <= (a - q).frobenius_norm() + 1e-12);
  }
}

TEST_CASE("kron ordering", "[linalg]") {
  CHECK(kron(ComplexMatrix::identity(2), ComplexMatrix::identity(2)) == ComplexMatrix::identity(4));

  const ComplexMatrix p0{{1, 0}, {0, 0}};
  const ComplexMatrix x{{0, 1}, {1, 0}};
  const ComplexMatrix k = kron(p0, x);
  ComplexMatrix want(4, 4);
  want(0, 1) = 1;
  want(1, 0) = 1;
  CHECK(k == want);

  for (std::size_t m : {2u, 3u})
    for (std::size_t n : {2u, 4u})
      for (std::size_t j = 0; j < m; ++j)
        for (std::size_t l = 0; l < n; ++l) {
          const ComplexMatrix e = kron(ComplexMatrix::outer(basis_vector(m, j)), ComplexMatrix::outer(basis_vector(n, l)));
          for (std::size_t r = 0; r < m * n; ++r)
            for (std::size_t c = 0; c < m * n; ++c)
              CHECK(e(r, c) == (r == j * n + l && c == j * n + l ? Complex(1) : Complex(0)));
          CHECK(kron(basis_vector(m, j), basis_vector(n, l)) == basis_vector(m * n, j * n + l));
        }

  // rectangular factors
  const ComplexMatrix a = testutil::random_matrix(2, 3, 1);
  const ComplexMatrix b = testutil::random_matrix(3, 2, 2);
  const ComplexMatrix ab = kron(a, b);
  REQUIRE(ab.rows() == 6);
  REQUIRE(ab.cols() == 6);
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 3; ++j)
      for (std::size_t r = 0; r < 3; ++r)
        for (std::size_t c = 0; c < 2; ++c) CHECK(ab(i * 3 + r, j * 2 + c) == a(i, j) * b(r, c));
}

TEST_CASE("kron is associative entry for entry", "[linalg]") {
  const ComplexMatrix a = testutil::random_matrix(2, 2, 3);
  const ComplexMatrix b = testutil::random_matrix(3, 1, 4);
  const ComplexMatrix c = testutil::random_matrix(2, 3, 5);
  const ComplexMatrix left = kron(kron(a, b), c);
  const ComplexMatrix right = kron(a, kron(b, c));
  // products associate differently, so allow the last bit
  CHECK(max_diff(left, right) <= 4 * std::numeric_limits<double>::epsilon() * left.max_abs());
}

TEST_CASE("frob_inner", "[linalg]") {
  for (std::size_t k : {1u, 4u, 7u}) {
    CHECK(frob_inner(ComplexMatrix::identity(k), ComplexMatrix::identity(k)) == static_cast<double>(k));
  }
  const double s = 1.0 / std::sqrt(2.0);
  const CVector singlet{0, s, -s, 0};
  const ComplexMatrix ps = ComplexMatrix::outer(singlet);
  CHECK(frob_inner(ps, ps) == Catch::Approx(1.0).epsilon(1e-15));

  const ComplexMatrix a = random_hermitian(6, 1);
  const ComplexMatrix b = random_hermitian(6, 2);
  const ComplexMatrix c = random_hermitian(6, 3);
  const double scale = a.frobenius_norm() * (b.frobenius_norm() + c.frobenius_norm());
  CHECK(std::abs(frob_inner(a, b + c) - frob_inner(a, b) - frob_inner(a, c)) <= 1e-12 * scale);
  // imaginary part of Tr(A^dagger B) vanishes for Hermitian inputs
  CHECK(std::abs((a.adjoint() * b).trace().imag()) <= 1e-12 * a.frobenius_norm() * b.frobenius_norm());

  // projector against a state lies in [0, 1]
  const ComplexMatrix g = testutil::random_matrix(6, 6, 9);
  ComplexMatrix rho = g * g.adjoint();
  rho /= rho.trace().real();
  const ComplexMatrix p = ComplexMatrix::outer(normalized(g.column(0)));
  const double overlap = frob_inner(p, rho);
  CHECK(overlap >= 0.0);
  CHECK(overlap <= 1.0);

  CHECK_THROWS_AS(frob_inner(ComplexMatrix::identity(2), ComplexMatrix::identity(3)), ShapeMismatch);
}

TEST_CASE("cholesky and hpd_inverse", "[linalg]") {
  const ComplexMatrix g = testutil::random_matrix(5, 5, 21);
  const ComplexMatrix a = g * g.adjoint() + ComplexMatrix::identity(5);
  ComplexMatrix l;
  REQUIRE(cholesky(a, l));
  CHECK(max_diff(l * l.adjoint(), a) < 1e-12 * a.max_abs());
  CHECK(max_diff(hpd_inverse(a) * a, ComplexMatrix::identity(5)) < 1e-12);
  CHECK_FALSE(cholesky(ComplexMatrix{{1, 0}, {0, -1}}, l));
}
