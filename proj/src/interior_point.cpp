#include "nptsub/interior_point.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "nptsub/errors.hpp"

namespace nptsub::ipm {

namespace {

using Blocks = std::vector<ComplexMatrix>;

double block_inner(const Blocks& a, const Blocks& b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += frob_inner(a[k], b[k]);
  return s;
}

double blocks_norm(const Blocks& a) { return std::sqrt(block_inner(a, a)); }

// Re Tr(A_i M) for every constraint; M need not be Hermitian.
std::vector<double> apply_map(const Problem& problem, const Blocks& mats) {
  std::vector<double> out(problem.a.size(), 0.0);
  for (std::size_t i = 0; i < problem.a.size(); ++i) {
    double s = 0.0;
    for (const auto& e : problem.a[i]) s += (e.value * mats[e.block](e.col, e.row)).real();
    out[i] = s;
  }
  return out;
}

// Solves M x = rhs in place for symmetric positive definite M (row-major,
// dim x dim). Adds growing diagonal shifts if the factorization breaks down.
class SchurFactor {
 public:
  explicit SchurFactor(std::vector<double> m, std::size_t dim) : dim_(dim), l_(std::move(m)) {
    std::vector<double> original = l_;
    double max_diag = 0.0;
    for (std::size_t i = 0; i < dim_; ++i) max_diag = std::max(max_diag, std::abs(original[i * dim_ + i]));
    double shift = 0.0;
    for (int attempt = 0; attempt < 12; ++attempt) {
      if (factor()) return;
      shift = shift == 0.0 ? 1e-14 * std::max(1.0, max_diag) : shift * 100.0;
      l_ = original;
      for (std::size_t i = 0; i < dim_; ++i) l_[i * dim_ + i] += shift;
    }
    throw NoConvergence("interior point: Schur complement is not positive definite");
  }

  std::vector<double> solve(std::vector<double> rhs) const {
    for (std::size_t i = 0; i < dim_; ++i) {
      double s = rhs[i];
      for (std::size_t k = 0; k < i; ++k) s -= l_[i * dim_ + k] * rhs[k];
      rhs[i] = s / l_[i * dim_ + i];
    }
    for (std::size_t ii = dim_; ii-- > 0;) {
      double s = rhs[ii];
      for (std::size_t k = ii + 1; k < dim_; ++k) s -= l_[k * dim_ + ii] * rhs[k];
      rhs[ii] = s / l_[ii * dim_ + ii];
    }
    return rhs;
  }

 private:
  bool factor() {
    for (std::size_t j = 0; j < dim_; ++j) {
      double d = l_[j * dim_ + j];
      for (std::size_t k = 0; k < j; ++k) d -= l_[j * dim_ + k] * l_[j * dim_ + k];
      if (!(d > 0.0)) return false;
      const double ljj = std::sqrt(d);
      l_[j * dim_ + j] = ljj;
      for (std::size_t i = j + 1; i < dim_; ++i) {
        double s = l_[i * dim_ + j];
        for (std::size_t k = 0; k < j; ++k) s -= l_[i * dim_ + k] * l_[j * dim_ + k];
        l_[i * dim_ + j] = s / ljj;
      }
    }
    return true;
  }

  std::size_t dim_;
  std::vector<double> l_;
};

// Largest alpha with X + alpha*dX >= 0 (infinity if dX >= 0).
double max_step(const ComplexMatrix& x, const ComplexMatrix& dx) {
  const std::size_t n = x.rows();
  ComplexMatrix l;
  if (!cholesky(x, l)) return 0.0;
  // S = L^{-1} dX L^{-dagger}: forward-solve columns, then rows.
  ComplexMatrix t = dx;
  for (std::size_t c = 0; c < n; ++c) {
    for (std::size_t r = 0; r < n; ++r) {
      Complex s = t(r, c);
      for (std::size_t k = 0; k < r; ++k) s -= l(r, k) * t(k, c);
      t(r, c) = s / l(r, r);
    }
  }
  // t = L^{-1} dX; now S = t L^{-dagger} = (L^{-1} t^dagger)^dagger.
  ComplexMatrix u = t.adjoint();
  for (std::size_t c = 0; c < n; ++c) {
    for (std::size_t r = 0; r < n; ++r) {
      Complex s = u(r, c);
      for (std::size_t k = 0; k < r; ++k) s -= l(r, k) * u(k, c);
      u(r, c) = s / l(r, r);
    }
  }
  const double lmin = min_eigenvalue(u.adjoint().hermitian_part());
  return lmin < 0.0 ? -1.0 / lmin : std::numeric_limits<double>::infinity();
}

struct Direction {
  std::vector<double> dy;
  Blocks dx;
  Blocks dz;
};

class Solver {
 public:
  Solver(const Problem& problem, const Options& options) : p_(problem), opt_(options) {
    if (p_.c.size() != p_.block_sizes.size()) throw ShapeMismatch("interior point: one C per block required");
    if (p_.a.size() != p_.b.size()) throw ShapeMismatch("interior point: one b_i per constraint required");
    for (std::size_t k = 0; k < p_.c.size(); ++k) {
      if (p_.c[k].rows() != p_.block_sizes[k] || p_.c[k].cols() != p_.block_sizes[k]) {
        throw ShapeMismatch("interior point: C block has wrong size");
      }
    }
    touching_.assign(p_.block_sizes.size(), {});
    for (std::size_t i = 0; i < p_.a.size(); ++i) {
      std::vector<bool> seen(p_.block_sizes.size(), false);
      for (const auto& e : p_.a[i]) {
        if (e.block >= p_.block_sizes.size() || e.row >= p_.block_sizes[e.block] ||
            e.col >= p_.block_sizes[e.block]) {
          throw ShapeMismatch("interior point: constraint entry out of range");
        }
        if (!seen[e.block]) {
          seen[e.block] = true;
          touching_[e.block].push_back(i);
        }
      }
    }
    for (std::size_t k = 0; k < p_.block_sizes.size(); ++k) total_dim_ += p_.block_sizes[k];
  }

  Result run() {
    const std::size_t m = p_.a.size();
    Result res;
    init(res);
    const double b_norm = norm(p_.b);
    const double c_norm = blocks_norm(p_.c);
    // Near the optimum rounding can push the iterates away again; keep the
    // best one seen and stop once it has not improved for a while.
    Result best;
    double best_merit = std::numeric_limits<double>::infinity();
    std::size_t since_best = 0;

    for (std::size_t iter = 0;; ++iter) {
      const std::vector<double> ay = apply_map(p_, res.x);
      std::vector<double> rp(m);
      for (std::size_t i = 0; i < m; ++i) rp[i] = p_.b[i] - ay[i];
      Blocks rd = adjoint_map(p_, res.y);
      for (std::size_t k = 0; k < rd.size(); ++k) rd[k] = p_.c[k] - rd[k] - res.z[k];

      res.primal_objective = block_inner(p_.c, res.x);
      res.dual_objective = dot(p_.b, res.y);
      res.primal_infeasibility = norm(rp) / (1.0 + b_norm);
      res.dual_infeasibility = blocks_norm(rd) / (1.0 + c_norm);
      res.relative_gap = std::abs(res.primal_objective - res.dual_objective) /
                         (1.0 + std::abs(res.primal_objective) + std::abs(res.dual_objective));
      res.iterations = iter;
      if (res.primal_infeasibility <= opt_.tolerance && res.dual_infeasibility <= opt_.tolerance &&
          res.relative_gap <= opt_.tolerance) {
        res.converged = true;
        return res;
      }
      const double merit = std::max({res.primal_infeasibility, res.dual_infeasibility, res.relative_gap});
      if (merit < best_merit) {
        best_merit = merit;
        best = res;
        since_best = 0;
      } else if (++since_best >= kStallLimit) {
        return best;
      }
      if (iter >= opt_.max_iterations) return best;

      const double mu = block_inner(res.x, res.z) / static_cast<double>(total_dim_);
      Blocks zinv(res.z.size());
      for (std::size_t k = 0; k < res.z.size(); ++k) zinv[k] = hpd_inverse(res.z[k]);
      const SchurFactor schur(schur_matrix(res.x, zinv), m);

      // Predictor.
      Blocks target(res.x.size());
      for (std::size_t k = 0; k < target.size(); ++k) target[k] = -(res.x[k] * res.z[k]);
      const Direction pred = direction(schur, res, zinv, rp, rd, target);
      const double ap = std::min(1.0, step_length(res.x, pred.dx));
      const double ad = std::min(1.0, step_length(res.z, pred.dz));
      double mu_aff = 0.0;
      for (std::size_t k = 0; k < res.x.size(); ++k) {
        mu_aff += frob_inner(res.x[k] + ap * pred.dx[k], res.z[k] + ad * pred.dz[k]);
      }
      mu_aff /= static_cast<double>(total_dim_);
      const double sigma = std::clamp(std::pow(std::max(mu_aff, 0.0) / mu, 3.0), 0.0, 1.0);

      // Corrector.
      for (std::size_t k = 0; k < target.size(); ++k) {
        target[k] = ComplexMatrix::identity(p_.block_sizes[k]) * (sigma * mu) - res.x[k] * res.z[k] -
                    pred.dx[k] * pred.dz[k];
      }
      const Direction corr = direction(schur, res, zinv, rp, rd, target);
      const double alpha_p = std::min(1.0, opt_.step_fraction * step_length(res.x, corr.dx));
      const double alpha_d = std::min(1.0, opt_.step_fraction * step_length(res.z, corr.dz));
      if (alpha_p < 1e-12 && alpha_d < 1e-12) return best;

      for (std::size_t k = 0; k < res.x.size(); ++k) {
        res.x[k] += alpha_p * corr.dx[k];
        res.z[k] += alpha_d * corr.dz[k];
        res.x[k] = res.x[k].hermitian_part();
        res.z[k] = res.z[k].hermitian_part();
      }
      for (std::size_t i = 0; i < m; ++i) res.y[i] += alpha_d * corr.dy[i];
    }
  }

 private:
  static double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
  }
  static double norm(const std::vector<double>& a) { return std::sqrt(dot(a, a)); }

  void init(Result& res) const {
    const std::size_t m = p_.a.size();
    std::vector<double> a_norm(m, 0.0);
    for (std::size_t i = 0; i < m; ++i) {
      double s = 0.0;
      for (const auto& e : p_.a[i]) s += std::norm(e.value);
      a_norm[i] = std::sqrt(s);
    }
    res.y.assign(m, 0.0);
    res.x.clear();
    res.z.clear();
    for (std::size_t k = 0; k < p_.block_sizes.size(); ++k) {
      const auto n = static_cast<double>(p_.block_sizes[k]);
      double xi = std::max(10.0, std::sqrt(n));
      double eta = std::max({10.0, std::sqrt(n), p_.c[k].frobenius_norm()});
      for (std::size_t i = 0; i < m; ++i) {
        xi = std::max(xi, n * (1.0 + std::abs(p_.b[i])) / (1.0 + a_norm[i]));
        eta = std::max(eta, a_norm[i]);
      }
      res.x.push_back(ComplexMatrix::identity(p_.block_sizes[k]) * xi);
      res.z.push_back(ComplexMatrix::identity(p_.block_sizes[k]) * eta);
    }
  }

  // M_ij = Re Tr(A_i X A_j Z^{-1}), summed over blocks.
  std::vector<double> schur_matrix(const Blocks& x, const Blocks& zinv) const {
    const std::size_t m = p_.a.size();
    std::vector<double> mat(m * m, 0.0);
    for (std::size_t k = 0; k < p_.block_sizes.size(); ++k) {
      const std::size_t n = p_.block_sizes[k];
      ComplexMatrix ax(n, n);
      ComplexMatrix t(n, n);
      std::vector<bool> used(n);
      for (std::size_t i : touching_[k]) {
        // t = Z^{-1} A_i X, built from the sparse rows of A_i X.
        std::fill(ax.entries().begin(), ax.entries().end(), Complex{0.0, 0.0});
        std::fill(used.begin(), used.end(), false);
        for (const auto& e : p_.a[i]) {
          if (e.block != k) continue;
          used[e.row] = true;
          for (std::size_t c = 0; c < n; ++c) ax(e.row, c) += e.value * x[k](e.col, c);
        }
        std::fill(t.entries().begin(), t.entries().end(), Complex{0.0, 0.0});
        for (std::size_t r = 0; r < n; ++r) {
          if (!used[r]) continue;
          for (std::size_t a = 0; a < n; ++a) {
            const Complex zar = zinv[k](a, r);
            for (std::size_t c = 0; c < n; ++c) t(a, c) += zar * ax(r, c);
          }
        }
        for (std::size_t j : touching_[k]) {
          if (j < i) continue;
          double s = 0.0;
          for (const auto& e : p_.a[j]) {
            if (e.block == k) s += (e.value * t(e.col, e.row)).real();
          }
          mat[i * m + j] += s;
          if (j != i) mat[j * m + i] += s;
        }
      }
    }
    return mat;
  }

  // Solves the HKM system with complementarity target R:
  //   dX Z + X dZ = R,  A(dX) = rp,  A*(dy) + dZ = rd.
  Direction direction(const SchurFactor& schur, const Result& res, const Blocks& zinv,
                      const std::vector<double>& rp, const Blocks& rd, const Blocks& target) const {
    const std::size_t m = p_.a.size();
    Blocks tmp(res.x.size());
    for (std::size_t k = 0; k < tmp.size(); ++k) tmp[k] = (target[k] - res.x[k] * rd[k]) * zinv[k];
    const std::vector<double> a_tmp = apply_map(p_, tmp);
    std::vector<double> rhs(m);
    for (std::size_t i = 0; i < m; ++i) rhs[i] = rp[i] - a_tmp[i];

    Direction d;
    d.dy = schur.solve(std::move(rhs));
    const Blocks ady = adjoint_map(p_, d.dy);
    d.dz.resize(res.x.size());
    d.dx.resize(res.x.size());
    for (std::size_t k = 0; k < res.x.size(); ++k) {
      d.dz[k] = (rd[k] - ady[k]).hermitian_part();
      d.dx[k] = ((target[k] - res.x[k] * d.dz[k]) * zinv[k]).hermitian_part();
    }
    return d;
  }

  static double step_length(const Blocks& x, const Blocks& dx) {
    double alpha = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < x.size(); ++k) alpha = std::min(alpha, max_step(x[k], dx[k]));
    return alpha;
  }

  static constexpr std::size_t kStallLimit = 8;

  const Problem& p_;
  Options opt_;
  std::vector<std::vector<std::size_t>> touching_;
  std::size_t total_dim_ = 0;
};

}  // namespace

std::vector<ComplexMatrix> adjoint_map(const Problem& problem, const std::vector<double>& y) {
  std::vector<ComplexMatrix> out;
  out.reserve(problem.block_sizes.size());
  for (std::size_t n : problem.block_sizes) out.emplace_back(n, n);
  for (std::size_t i = 0; i < problem.a.size(); ++i) {
    if (y[i] == 0.0) continue;
    for (const auto& e : problem.a[i]) out[e.block](e.row, e.col) += y[i] * e.value;
  }
  return out;
}

Result solve(const Problem& problem, const Options& options) {
  Solver solver(problem, options);
  return solver.run();
}

}  // namespace nptsub::ipm
