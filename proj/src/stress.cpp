#include "nptsub/stress.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "nptsub/errors.hpp"

namespace nptsub {

namespace {

constexpr double kIdentityTol = 1e-10;

std::size_t draw_rank(Rng& rng, std::size_t upper) { return 1 + static_cast<std::size_t>(rng.next() % upper); }

}  // namespace

NptTrial run_npt_trial(const SubspaceBasis& basis, std::uint64_t seed) {
  if (basis.dimension() == 0) throw DegenerateSubspace("npt suite: the subspace is empty");
  NptTrial t;
  t.seed = seed;
  Rng rng(seed);
  t.rank = draw_rank(rng, basis.dimension());
  const Ensemble ens = random_subspace_ensemble(basis, t.rank, rng);
  const ComplexMatrix pt = partial_transpose(ens.to_matrix(), basis.dims);
  const std::vector<double> eigs = eigvalsh(pt);
  t.min_pt_eigenvalue = eigs.front();
  t.threshold = 1e-12 * std::abs(eigs.back());
  std::ostringstream why;
  why.precision(17);
  if (!(t.min_pt_eigenvalue < -t.threshold)) {
    why << "not NPT: min eigenvalue of rho^Gamma " << t.min_pt_eigenvalue << " >= -" << t.threshold;
    t.failure = why.str();
    return t;
  }
  try {
    t.witness = witness_locator(ens, basis);
  } catch (const Error& e) {
    t.failure = std::string("witness search failed: ") + e.what();
    return t;
  }
  const WitnessCertificate& w = *t.witness;
  const std::size_t a = basis.dims.index(w.alpha.j, w.alpha.k);
  const std::size_t b = basis.dims.index(w.beta.j, w.beta.k);
  t.direct_determinant = (pt(a, a) * pt(b, b) - pt(a, b) * pt(b, a)).real();
  const double identity = -std::norm(w.mixture_sum);
  if (!(t.direct_determinant < 0.0)) {
    why << "witness determinant " << t.direct_determinant << " is not negative";
    t.failure = why.str();
  } else if (std::abs(t.direct_determinant - identity) > kIdentityTol) {
    why << "determinant " << t.direct_determinant << " differs from -|sum|^2 = " << identity;
    t.failure = why.str();
  }
  return t;
}

BoundTrial run_bound_trial(BipartiteDims dims, std::uint64_t seed) {
  BoundTrial t;
  t.seed = seed;
  Rng rng(seed);
  t.rank = draw_rank(rng, dims.total());
  const DensityMatrix rho = random_density_matrix(dims, t.rank, rng.next());
  t.negative_count = count_negative_eigenvalues(partial_transpose(rho.matrix(), dims)).count;
  if (t.negative_count > dims.max_negative_count()) {
    t.failure = std::to_string(t.negative_count) + " negative eigenvalues exceed the bound " +
                std::to_string(dims.max_negative_count());
  }
  return t;
}

StressReport run_stress(StressSuite suite, BipartiteDims dims, std::size_t trials, std::uint64_t base_seed) {
  StressReport r;
  r.suite = suite;
  r.dims = dims;
  r.trials = trials;
  const SubspaceBasis basis = suite == StressSuite::Npt ? build_subspace(dims) : SubspaceBasis{dims, {}, {}};
  for (std::size_t i = 0; i < trials; ++i) {
    const std::uint64_t seed = base_seed + i;
    std::string failure;
    if (suite == StressSuite::Npt) {
      const NptTrial t = run_npt_trial(basis, seed);
      if (t.witness) {
        r.worst_identity_error = std::max(r.worst_identity_error,
                                          std::abs(t.direct_determinant + std::norm(t.witness->mixture_sum)));
      }
      failure = t.failure;
    } else {
      const BoundTrial t = run_bound_trial(dims, seed);
      r.max_negative_count = std::max(r.max_negative_count, t.negative_count);
      failure = t.failure;
    }
    if (!failure.empty()) {
      ++r.failures;
      r.failing_seeds.push_back(seed);
      r.messages.push_back(std::move(failure));
    }
  }
  return r;
}

}  // namespace nptsub
