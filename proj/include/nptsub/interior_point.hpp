#pragma once

#include <cstddef>
#include <vector>

#include "nptsub/linalg.hpp"

// Primal-dual interior-point method for small dense block SDPs over complex
// Hermitian matrices, with real inner product <A, B> = Re Tr(A B):
//
//   (P)  minimize  sum_k <C_k, X_k>    s.t. <A_i, X> = b_i,  X_k >= 0
//   (D)  maximize  b^T y               s.t. Z_k = C_k - sum_i y_i A_{i,k} >= 0
//
// Infeasible start, HKM search direction, Mehrotra predictor-corrector.
// The Schur complement is assembled from sparse constraint matrices, which
// keeps problems with mn <= 25 well below a second per solve.
namespace nptsub::ipm {

struct SparseEntry {
  std::size_t block = 0;
  std::size_t row = 0;
  std::size_t col = 0;
  Complex value;
};

// One constraint matrix A_i, listed entry by entry (both triangles).
using SparseHermitian = std::vector<SparseEntry>;

struct Problem {
  std::vector<std::size_t> block_sizes;
  std::vector<ComplexMatrix> c;
  std::vector<SparseHermitian> a;
  std::vector<double> b;
};

struct Options {
  double tolerance = 1e-10;
  std::size_t max_iterations = 100;
  double step_fraction = 0.95;
};

struct Result {
  std::vector<double> y;
  std::vector<ComplexMatrix> x;
  std::vector<ComplexMatrix> z;
  double primal_objective = 0.0;  // <C, X>
  double dual_objective = 0.0;    // b^T y
  double primal_infeasibility = 0.0;
  double dual_infeasibility = 0.0;
  double relative_gap = 0.0;
  std::size_t iterations = 0;
  bool converged = false;
};

Result solve(const Problem& problem, const Options& options = {});

// sum_i y_i A_i, block by block.
std::vector<ComplexMatrix> adjoint_map(const Problem& problem, const std::vector<double>& y);

}  // namespace nptsub::ipm
