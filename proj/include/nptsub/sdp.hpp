#pragma once

#include <cstddef>

#include "nptsub/bipartite.hpp"
#include "nptsub/linalg.hpp"
#include "nptsub/subspace.hpp"

namespace nptsub {

struct SdpTolerances {
  // lambda_max(rho^Gamma + dP - I) bound for the reported d.
  double feasibility = 1e-7;
  // Certified distance of the reported d from the optimum.
  double gap = 1e-4;
  // Certified distance of an overlap value from the optimum.
  double value = 1e-5;
  // ||X1 + X2^Gamma - X||_F bound for dual-cone decompositions.
  double residual = 1e-7;
  // PSD residual allowed for sigma and sigma^Gamma in overlap optimization.
  double state_psd = 1e-8;
  // Overlap below -dual_cone_slack certifies X is outside the dual cone.
  double dual_cone_slack = 1e-8;
  // Interior-point stopping tolerance and iteration budget.
  double solver_tolerance = 1e-10;
  std::size_t max_iterations = 100;
  // Reported d when P = 0 leaves the objective unbounded.
  double d_max = 1e6;
  // Return unconverged results (converged = false) instead of throwing.
  bool allow_partial = false;
};

struct SdpResiduals {
  double psd_gap = 0.0;            // max(0, -lambda_min(rho))
  double pt_constraint_gap = 0.0;  // max(0, lambda_max(rho^Gamma - I + dP))
  double trace_gap = 0.0;          // |Tr rho - 1|
};

// maximize d  s.t.  rho^Gamma <= I - dP,  Tr rho = 1,  rho >= 0
struct SdpSolution {
  double d = 0.0;
  double d_upper_bound = 0.0;  // certified from a dual-feasible point
  DensityMatrix rho;
  SdpResiduals residuals;
  std::size_t iterations = 0;
  bool converged = false;
  bool clamped = false;  // P = 0: d set to d_max
};

SdpSolution solve_construction_sdp(BipartiteDims dims, const Projector& p, const SdpTolerances& tol = {});

// Largest d <= d_hint (searched down to d_hint - 1) with
// lambda_max(rho^Gamma + dP - I) <= target. Returns d_hint - 1 if none.
double certify_d(const ComplexMatrix& rho, BipartiteDims dims, const ComplexMatrix& p, double d_hint,
                 double target = 1e-9);

// max(0, lambda_max(rho^Gamma + dP - I))
double pt_constraint_gap(const ComplexMatrix& rho, BipartiteDims dims, const ComplexMatrix& p, double d);

enum class Sense { Maximize, Minimize };

// Optimum of <W, sigma> over PPT states sigma.
struct PptOptimum {
  double value = 0.0;        // <W, sigma> at the returned sigma
  double lower_bound = 0.0;  // certified
  double upper_bound = 0.0;  // certified
  DensityMatrix sigma;
  // PSD pair with dual_y1 + dual_y2^Gamma = t I - s W, where s = +1 when
  // maximizing and -1 when minimizing.
  ComplexMatrix dual_y1;
  ComplexMatrix dual_y2;
  std::size_t iterations = 0;
  bool converged = false;
};

PptOptimum optimize_over_ppt(BipartiteDims dims, const ComplexMatrix& w, Sense sense,
                             const SdpTolerances& tol = {});

struct DualConeSplit {
  ComplexMatrix x1;
  ComplexMatrix x2;
  double residual = 0.0;  // ||X1 + X2^Gamma - X||_F
};

// PSD X1, X2 with X1 + X2^Gamma = X for X in the dual cone of PPT states.
// Throws NotInDualCone when some PPT state has overlap below
// -dual_cone_slack with X, NoConvergence if the residual target is missed.
DualConeSplit decompose_dual_cone(const ComplexMatrix& x, BipartiteDims dims, const SdpTolerances& tol = {});

// ||X1 + X2^Gamma - X||_F
double decomposition_residual(const ComplexMatrix& x, const DualConeSplit& split, BipartiteDims dims);

struct ConeDecomposition {
  double c = 0.0;  // certified upper bound on Tr(P sigma) over PPT sigma
  ComplexMatrix x;
  ComplexMatrix x1;
  ComplexMatrix x2;
  DensityMatrix rho;  // X2 / Tr(X2)
  double residual = 0.0;
  std::size_t iterations = 0;
};

// c from optimize_over_ppt, X = I - P/c, X = X1 + X2^Gamma, rho = X2/Tr(X2).
// Throws DegenerateSubspace when P = 0.
ConeDecomposition construct_via_dual_cone(BipartiteDims dims, const Projector& p, const SdpTolerances& tol = {});

}  // namespace nptsub
