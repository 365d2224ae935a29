#include <catch_amalgamated.hpp>

#include "nptsub/errors.hpp"
#include "nptsub/stress.hpp"

using namespace nptsub;

TEST_CASE("trial seeds are base plus index", "[stress]") {
  const BipartiteDims d(3, 3);
  const SubspaceBasis b = build_subspace(d);
  const StressReport r = run_stress(StressSuite::Npt, d, 6, 40);
  CHECK(r.failures == 0);
  const NptTrial alone = run_npt_trial(b, 43);
  const NptTrial again = run_npt_trial(b, 43);
  CHECK(alone.passed());
  CHECK(alone.rank == again.rank);
  CHECK(alone.min_pt_eigenvalue == again.min_pt_eigenvalue);
  CHECK(alone.witness->alpha == again.witness->alpha);

  const BoundTrial t = run_bound_trial(BipartiteDims(2, 3), 5);
  CHECK(t.passed());
  CHECK(t.rank >= 1);
  CHECK(t.rank <= 6);
  CHECK(t.negative_count == run_bound_trial(BipartiteDims(2, 3), 5).negative_count);
}

TEST_CASE("suites report counts", "[stress]") {
  const StressReport npt = run_stress(StressSuite::Npt, BipartiteDims(2, 2), 20, 0);
  CHECK(npt.trials == 20);
  CHECK(npt.failures == 0);
  CHECK(npt.worst_identity_error <= 1e-10);
  const StressReport bound = run_stress(StressSuite::Bound, BipartiteDims(2, 2), 50, 0);
  CHECK(bound.failures == 0);
  CHECK(bound.max_negative_count == 1);
  CHECK_THROWS_AS(run_npt_trial(build_subspace(BipartiteDims(1, 3)), 0), DegenerateSubspace);
}
