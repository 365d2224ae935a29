#include "nptsub/sdp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "nptsub/errors.hpp"
#include "nptsub/interior_point.hpp"

namespace nptsub {

namespace {

struct Entry {
  std::size_t row;
  std::size_t col;
  Complex value;
};

using SparseMatrix = std::vector<Entry>;

// Traceless Hermitian basis of dimension dim^2 - 1: E_aa - E_{N-1,N-1},
// E_ab + E_ba and i E_ab - i E_ba.
std::vector<SparseMatrix> traceless_basis(std::size_t dim) {
  std::vector<SparseMatrix> out;
  if (dim < 2) return out;
  out.reserve(dim * dim - 1);
  for (std::size_t a = 0; a + 1 < dim; ++a) out.push_back({{a, a, 1.0}, {dim - 1, dim - 1, -1.0}});
  for (std::size_t a = 0; a < dim; ++a) {
    for (std::size_t b = a + 1; b < dim; ++b) {
      out.push_back({{a, b, 1.0}, {b, a, 1.0}});
      out.push_back({{a, b, Complex{0.0, 1.0}}, {b, a, Complex{0.0, -1.0}}});
    }
  }
  return out;
}

// Gamma moves entry (i n + l, j n + k) to (i n + k, j n + l).
SparseMatrix partial_transpose(const SparseMatrix& mat, BipartiteDims dims) {
  SparseMatrix out;
  out.reserve(mat.size());
  const std::size_t n = dims.n;
  for (const auto& e : mat) {
    const std::size_t r1 = e.row / n, r2 = e.row % n;
    const std::size_t c1 = e.col / n, c2 = e.col % n;
    out.push_back({r1 * n + c2, c1 * n + r2, e.value});
  }
  return out;
}

SparseMatrix sparse_from(const ComplexMatrix& mat) {
  SparseMatrix out;
  for (std::size_t r = 0; r < mat.rows(); ++r) {
    for (std::size_t c = 0; c < mat.cols(); ++c) {
      if (mat(r, c) != Complex{0.0, 0.0}) out.push_back({r, c, mat(r, c)});
    }
  }
  return out;
}

void append(ipm::SparseHermitian& dst, const SparseMatrix& src, std::size_t block, double scale) {
  for (const auto& e : src) dst.push_back({block, e.row, e.col, scale * e.value});
}

ComplexMatrix dense_state(const std::vector<SparseMatrix>& basis, const std::vector<double>& y, std::size_t offset,
                          std::size_t dim) {
  ComplexMatrix rho = ComplexMatrix::identity(dim) / static_cast<double>(dim);
  for (std::size_t i = 0; i < basis.size(); ++i) {
    for (const auto& e : basis[i]) rho(e.row, e.col) += y[offset + i] * e.value;
  }
  return rho.hermitian_part();
}

ipm::Options solver_options(const SdpTolerances& tol) {
  ipm::Options opt;
  opt.tolerance = tol.solver_tolerance;
  opt.max_iterations = tol.max_iterations;
  return opt;
}

// max <W, sigma> over PPT states, with the raw solver blocks kept.
struct RawPptMax {
  double lower = 0.0;
  double upper = 0.0;
  double sigma_psd_gap = 0.0;
  double sigma_pt_psd_gap = 0.0;
  DensityMatrix sigma;
  ComplexMatrix y1;
  ComplexMatrix y2;
  std::size_t iterations = 0;
};

RawPptMax ppt_max(BipartiteDims dims, const ComplexMatrix& w, const SdpTolerances& tol) {
  const std::size_t dim = dims.total();
  if (w.rows() != dim || w.cols() != dim) throw ShapeMismatch("optimize_over_ppt: W must be mn x mn");
  if (!w.is_hermitian(1e-12)) throw NotHermitian("optimize_over_ppt: W is not Hermitian");
  const ComplexMatrix wh = w.hermitian_part();

  RawPptMax out;
  if (dim == 1) {
    out.lower = out.upper = wh(0, 0).real();
    out.y1 = out.y2 = ComplexMatrix(1, 1);
    return out;
  }

  const auto basis = traceless_basis(dim);
  ipm::Problem prob;
  prob.block_sizes = {dim, dim};
  const ComplexMatrix center = ComplexMatrix::identity(dim) / static_cast<double>(dim);
  prob.c = {center, center};
  for (const auto& bi : basis) {
    ipm::SparseHermitian a;
    append(a, bi, 0, -1.0);
    append(a, partial_transpose(bi, dims), 1, -1.0);
    prob.a.push_back(std::move(a));
    double b = 0.0;
    for (const auto& e : bi) b += (e.value * wh(e.col, e.row)).real();
    prob.b.push_back(b);
  }

  const ipm::Result res = ipm::solve(prob, solver_options(tol));
  out.iterations = res.iterations;
  const ComplexMatrix raw = dense_state(basis, res.y, 0, dim);
  out.sigma = DensityMatrix::rounded(dims, raw);
  const ComplexMatrix& sigma = out.sigma.matrix();
  out.sigma_psd_gap = std::max(0.0, -min_eigenvalue(raw));
  out.sigma_pt_psd_gap = std::max(0.0, -min_eigenvalue(nptsub::partial_transpose(sigma, dims)));
  out.y1 = res.x[0];
  out.y2 = res.x[1];
  out.lower = frob_inner(wh, sigma);
  const ComplexMatrix y2_psd = project_psd(out.y2);
  out.upper = max_eigenvalue(wh + nptsub::partial_transpose(y2_psd, dims));
  return out;
}

std::string describe(const char* what, double value, double bound) {
  std::ostringstream msg;
  msg << what << " " << value << " exceeds " << bound;
  return msg.str();
}

}  // namespace

double pt_constraint_gap(const ComplexMatrix& rho, BipartiteDims dims, const ComplexMatrix& p, double d) {
  const std::size_t dim = dims.total();
  const ComplexMatrix lhs = nptsub::partial_transpose(rho, dims) + d * p - ComplexMatrix::identity(dim);
  return std::max(0.0, max_eigenvalue(lhs));
}

double certify_d(const ComplexMatrix& rho, BipartiteDims dims, const ComplexMatrix& p, double d_hint,
                 double target) {
  const ComplexMatrix base = nptsub::partial_transpose(rho, dims) - ComplexMatrix::identity(dims.total());
  auto violation = [&](double d) { return max_eigenvalue(base + d * p); };
  if (violation(d_hint) <= target) return d_hint;
  double lo = d_hint - 1.0;
  if (violation(lo) > target) return lo;
  double hi = d_hint;
  for (int it = 0; it < 80 && hi - lo > 1e-15 * std::max(1.0, std::abs(hi)); ++it) {
    const double mid = 0.5 * (lo + hi);
    (violation(mid) <= target ? lo : hi) = mid;
  }
  return lo;
}

SdpSolution solve_construction_sdp(BipartiteDims dims, const Projector& p, const SdpTolerances& tol) {
  const std::size_t dim = dims.total();
  if (p.matrix.rows() != dim || p.matrix.cols() != dim) throw ShapeMismatch("solve_construction_sdp: P must be mn x mn");
  if (!p.matrix.is_hermitian(1e-12)) throw NotHermitian("solve_construction_sdp: P is not Hermitian");

  SdpSolution sol;
  if (p.matrix.frobenius_norm() == 0.0) {
    // rho^Gamma <= I holds for every state once P = 0.
    sol.rho = DensityMatrix(dims, ComplexMatrix::identity(dim) / static_cast<double>(dim));
    sol.d = tol.d_max;
    sol.d_upper_bound = std::numeric_limits<double>::infinity();
    sol.residuals.pt_constraint_gap = pt_constraint_gap(sol.rho.matrix(), dims, p.matrix, 0.0);
    sol.clamped = true;
    sol.converged = true;
    return sol;
  }

  const auto basis = traceless_basis(dim);
  ipm::Problem prob;
  prob.block_sizes = {dim, dim};
  const ComplexMatrix center = ComplexMatrix::identity(dim) / static_cast<double>(dim);
  prob.c = {center, ComplexMatrix::identity(dim) - center};
  {
    ipm::SparseHermitian a;
    append(a, sparse_from(p.matrix.hermitian_part()), 1, 1.0);
    prob.a.push_back(std::move(a));
    prob.b.push_back(1.0);
  }
  for (const auto& bi : basis) {
    ipm::SparseHermitian a;
    append(a, bi, 0, -1.0);
    append(a, partial_transpose(bi, dims), 1, 1.0);
    prob.a.push_back(std::move(a));
    prob.b.push_back(0.0);
  }

  const ipm::Result res = ipm::solve(prob, solver_options(tol));
  sol.iterations = res.iterations;
  sol.rho = DensityMatrix::rounded(dims, dense_state(basis, res.y, 1, dim));
  const ComplexMatrix& rho = sol.rho.matrix();
  sol.d = certify_d(rho, dims, p.matrix, res.y[0]);

  // Weak duality: for W >= 0 with <W, P> = 1, d <= Tr W - lambda_min(W^Gamma).
  const ComplexMatrix w = project_psd(res.x[1]);
  const double overlap = frob_inner(w, p.matrix);
  sol.d_upper_bound = overlap > 0.0
                          ? (w.trace().real() - min_eigenvalue(nptsub::partial_transpose(w, dims))) / overlap
                          : std::numeric_limits<double>::infinity();

  sol.residuals.psd_gap = std::max(0.0, -min_eigenvalue(rho));
  sol.residuals.pt_constraint_gap = pt_constraint_gap(rho, dims, p.matrix, sol.d);
  sol.residuals.trace_gap = std::abs(rho.trace().real() - 1.0);
  const bool feasible = sol.residuals.pt_constraint_gap <= tol.feasibility;
  const bool tight = sol.d_upper_bound - sol.d <= tol.gap;
  sol.converged = feasible && tight;
  if (!sol.converged && !tol.allow_partial) {
    throw NoConvergence(!feasible ? describe("solve_construction_sdp: constraint violation",
                                             sol.residuals.pt_constraint_gap, tol.feasibility)
                                  : describe("solve_construction_sdp: certified gap",
                                             sol.d_upper_bound - sol.d, tol.gap));
  }
  return sol;
}

PptOptimum optimize_over_ppt(BipartiteDims dims, const ComplexMatrix& w, Sense sense, const SdpTolerances& tol) {
  const bool maximize = sense == Sense::Maximize;
  const RawPptMax raw = ppt_max(dims, maximize ? w : -w, tol);

  PptOptimum out;
  out.sigma = raw.sigma;
  out.value = frob_inner(w.hermitian_part(), raw.sigma.matrix());
  out.lower_bound = maximize ? raw.lower : -raw.upper;
  out.upper_bound = maximize ? raw.upper : -raw.lower;
  out.dual_y1 = raw.y1;
  out.dual_y2 = raw.y2;
  out.iterations = raw.iterations;
  const bool feasible = raw.sigma_psd_gap <= tol.state_psd && raw.sigma_pt_psd_gap <= tol.state_psd;
  const bool tight = raw.upper - raw.lower <= tol.value;
  out.converged = feasible && tight;
  if (!out.converged && !tol.allow_partial) {
    throw NoConvergence(!feasible ? describe("optimize_over_ppt: PSD residual",
                                             std::max(raw.sigma_psd_gap, raw.sigma_pt_psd_gap), tol.state_psd)
                                  : describe("optimize_over_ppt: certified gap", raw.upper - raw.lower, tol.value));
  }
  return out;
}

double decomposition_residual(const ComplexMatrix& x, const DualConeSplit& split, BipartiteDims dims) {
  return (split.x1 + nptsub::partial_transpose(split.x2, dims) - x).frobenius_norm();
}

DualConeSplit decompose_dual_cone(const ComplexMatrix& x, BipartiteDims dims, const SdpTolerances& tol) {
  const std::size_t dim = dims.total();
  if (x.rows() != dim || x.cols() != dim) throw ShapeMismatch("decompose_dual_cone: X must be mn x mn");
  if (!x.is_hermitian(1e-12)) throw NotHermitian("decompose_dual_cone: X is not Hermitian");
  const ComplexMatrix xh = x.hermitian_part();

  // Rank-deficient PSD inputs land a rounding error below zero.
  const double floor = -1e-12 * std::max(1.0, xh.frobenius_norm());
  DualConeSplit split;
  if (min_eigenvalue(xh) >= floor) {
    split.x1 = xh;
    split.x2 = ComplexMatrix(dim, dim);
  } else if (const ComplexMatrix xg = nptsub::partial_transpose(xh, dims); min_eigenvalue(xg) >= floor) {
    split.x1 = ComplexMatrix(dim, dim);
    split.x2 = xg;
  } else {
    // max <-X, sigma> = t; the dual pair gives Y1 + Y2^Gamma = t I + X.
    SdpTolerances inner = tol;
    inner.allow_partial = true;
    const RawPptMax raw = ppt_max(dims, -xh, inner);
    split.x2 = project_psd(raw.y2);
    split.x1 = project_psd(xh - nptsub::partial_transpose(split.x2, dims));
    split.residual = decomposition_residual(xh, split, dims);
    if (split.residual > tol.residual) {
      if (-raw.lower < -tol.dual_cone_slack && raw.sigma_pt_psd_gap <= tol.state_psd) {
        throw NotInDualCone(describe("decompose_dual_cone: PPT state overlap", raw.lower, tol.dual_cone_slack));
      }
      if (!tol.allow_partial) {
        throw NoConvergence(describe("decompose_dual_cone: residual", split.residual, tol.residual));
      }
    }
    return split;
  }
  split.residual = decomposition_residual(xh, split, dims);
  return split;
}

ConeDecomposition construct_via_dual_cone(BipartiteDims dims, const Projector& p, const SdpTolerances& tol) {
  const std::size_t dim = dims.total();
  if (p.matrix.rows() != dim || p.matrix.cols() != dim) throw ShapeMismatch("construct_via_dual_cone: P must be mn x mn");
  if (p.matrix.frobenius_norm() == 0.0) throw DegenerateSubspace("construct_via_dual_cone: (m-1)(n-1) = 0");

  const PptOptimum opt = optimize_over_ppt(dims, p.matrix, Sense::Maximize, tol);
  ConeDecomposition out;
  out.iterations = opt.iterations;
  out.c = opt.upper_bound;
  if (!(out.c > 0.0 && out.c < 1.0)) {
    std::ostringstream msg;
    msg << "construct_via_dual_cone: overlap bound c = " << out.c << " outside (0, 1)";
    throw NoConvergence(msg.str());
  }
  out.x = (ComplexMatrix::identity(dim) - p.matrix / out.c).hermitian_part();
  const DualConeSplit split = decompose_dual_cone(out.x, dims, tol);
  out.x1 = split.x1;
  out.x2 = split.x2;
  out.residual = split.residual;
  const double tr = out.x2.trace().real();
  if (!(tr > 0.0)) throw NoConvergence("construct_via_dual_cone: X2 has zero trace");
  out.rho = DensityMatrix(dims, out.x2 / tr);
  return out;
}

}  // namespace nptsub
