#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "nptsub/bipartite.hpp"
#include "nptsub/subspace.hpp"

// Seeded property suites. Trial i uses seed base + i, so any trial can be
// replayed on its own.
namespace nptsub {

enum class StressSuite {
  Npt,    // mixtures supported on S are NPT and carry a witness
  Bound,  // random states have at most (m-1)(n-1) negatives in rho^Gamma
};

struct NptTrial {
  std::uint64_t seed = 0;
  std::size_t rank = 0;
  double min_pt_eigenvalue = 0.0;
  double threshold = 0.0;  // 1e-12 * lambda_max(rho^Gamma)
  std::optional<WitnessCertificate> witness;
  double direct_determinant = 0.0;  // recomputed from rho^Gamma
  std::string failure;              // empty on success

  bool passed() const { return failure.empty(); }
};

struct BoundTrial {
  std::uint64_t seed = 0;
  std::size_t rank = 0;
  std::size_t negative_count = 0;
  std::string failure;

  bool passed() const { return failure.empty(); }
};

// Rank is drawn uniformly from 1 .. dim S. Throws DegenerateSubspace for an
// empty basis.
NptTrial run_npt_trial(const SubspaceBasis& basis, std::uint64_t seed);
// Rank is drawn uniformly from 1 .. mn.
BoundTrial run_bound_trial(BipartiteDims dims, std::uint64_t seed);

struct StressReport {
  StressSuite suite = StressSuite::Npt;
  BipartiteDims dims;
  std::size_t trials = 0;
  std::size_t failures = 0;
  std::vector<std::uint64_t> failing_seeds;
  std::vector<std::string> messages;  // one per failure
  std::size_t max_negative_count = 0;  // bound suite
  double worst_identity_error = 0.0;   // npt suite: |det + |sum|^2|
};

StressReport run_stress(StressSuite suite, BipartiteDims dims, std::size_t trials, std::uint64_t base_seed);

}  // namespace nptsub
