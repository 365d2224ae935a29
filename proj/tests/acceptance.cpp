// Acceptance suite: one PASS/FAIL line per criterion, exit 1 if any fails.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "cli.hpp"
#include "helpers.hpp"
#include "nptsub/bipartite.hpp"
#include "nptsub/errors.hpp"
#include "nptsub/sdp.hpp"
#include "nptsub/stress.hpp"
#include "nptsub/subspace.hpp"

using namespace nptsub;

namespace {

using Clock = std::chrono::steady_clock;

double seconds(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Check {
  bool ok = true;
  std::ostringstream note;

  void require(bool cond, const std::string& what) {
    if (!cond) {
      if (ok) note << "first failure: " << what;
      ok = false;
    }
  }
};

const std::vector<std::pair<std::size_t, std::size_t>> kSizes{{2, 2}, {2, 3}, {3, 3}, {3, 4}, {4, 4}, {5, 5}};

std::string fmt(double x, int digits = 4) {
  std::ostringstream s;
  s.precision(digits);
  s << x;
  return s.str();
}

Check fixture_reproduction() {
  Check c;
  const auto t0 = Clock::now();
  const std::string path = testutil::fixture("paper_3x4.json").string();
  const char* argv[] = {"nptsub", "verify", "--in", path.c_str(), "--json"};
  std::ostringstream out, err;
  const int code = cli::run(5, argv, out, err);
  const double t = seconds(t0);
  c.require(code == cli::kOk, "verify exit code " + std::to_string(code));
  if (code != cli::kOk) return c;
  const auto j = nlohmann::json::parse(out.str());
  const double lmin = j["min_eigenvalue"];
  const double tr = j["trace"];
  const std::vector<double> neg = j["negative_eigenvalues"];
  c.require(lmin >= -1e-10, "lambda_min(rho) = " + fmt(lmin));
  c.require(std::abs(tr - 1.0) <= 1e-12, "trace = " + fmt(tr, 17));
  c.require(neg.size() == 6, "negative count " + std::to_string(neg.size()));
  const double want[] = {-0.0204, -0.0159, -0.0105};
  double split = 0.0, dev = 0.0;
  if (neg.size() == 6) {
    for (int p = 0; p < 3; ++p) {
      dev = std::max({dev, std::abs(neg[2 * p] - want[p]), std::abs(neg[2 * p + 1] - want[p])});
      split = std::max(split, std::abs(neg[2 * p] - neg[2 * p + 1]));
    }
  }
  c.require(dev <= 5e-4, "deviation " + fmt(dev));
  c.require(split <= 1e-6, "pair split " + fmt(split));
  c.require(t < 1.0, "runtime " + fmt(t) + " s");
  if (c.ok) {
    c.note << "6 negatives, max deviation " << fmt(dev) << ", pair split " << fmt(split) << ", " << fmt(t, 2) << " s";
  }
  return c;
}

Check direct_route(double& d22) {
  Check c;
  std::ostringstream detail;
  for (auto [m, n] : kSizes) {
    const BipartiteDims dims(m, n);
    const Projector p = projector(build_subspace(dims));
    const auto t0 = Clock::now();
    SdpSolution sol;
    try {
      sol = solve_construction_sdp(dims, p);
    } catch (const Error& e) {
      c.require(false, "(" + std::to_string(m) + "," + std::to_string(n) + ") " + e.what());
      continue;
    }
    const double t = seconds(t0);
    const std::string tag = "(" + std::to_string(m) + "," + std::to_string(n) + ") ";
    if (m == 2 && n == 2) d22 = sol.d;
    const ComplexMatrix& rho = sol.rho.matrix();
    const double feas = max_eigenvalue(partial_transpose(rho, dims) + p.matrix * sol.d -
                                       ComplexMatrix::identity(dims.total()));
    const std::size_t count = count_negative_eigenvalues(partial_transpose(rho, dims)).count;
    c.require(sol.d >= 1.0 + 1e-6, tag + "d = " + fmt(sol.d, 10));
    c.require(count == dims.max_negative_count(), tag + "count " + std::to_string(count));
    c.require(feas <= 1e-6, tag + "feasibility residual " + fmt(feas));
    c.require(min_eigenvalue(rho) >= -1e-9, tag + "rho not PSD");
    if (m == 3 && n == 4) c.require(t <= 60.0, tag + "runtime " + fmt(t));
    if (m == 5 && n == 5) c.require(t <= 600.0, tag + "runtime " + fmt(t));
    detail << tag << "d=" << fmt(sol.d, 7) << " neg=" << count << " " << fmt(t, 2) << "s; ";
  }
  if (c.ok) c.note << detail.str();
  return c;
}

Check dual_cone_route(double d22) {
  Check c;
  std::ostringstream detail;
  for (auto [m, n] : kSizes) {
    const BipartiteDims dims(m, n);
    const std::string tag = "(" + std::to_string(m) + "," + std::to_string(n) + ") ";
    ConeDecomposition dec;
    try {
      dec = construct_via_dual_cone(dims, projector(build_subspace(dims)));
    } catch (const Error& e) {
      c.require(false, tag + e.what());
      continue;
    }
    const double res = (dec.x1 + partial_transpose(dec.x2, dims) - dec.x).frobenius_norm();
    const std::size_t count = count_negative_eigenvalues(partial_transpose(dec.rho.matrix(), dims)).count;
    c.require(dec.c > 0.0 && dec.c < 1.0, tag + "c = " + fmt(dec.c, 10));
    c.require(res <= 1e-7, tag + "residual " + fmt(res));
    c.require(count == dims.max_negative_count(), tag + "count " + std::to_string(count));
    if (m == 2 && n == 2) {
      c.require(std::abs(dec.c - 0.5) <= 1e-5, "c at (2,2) = " + fmt(dec.c, 10));
      c.require(std::abs(d22 - 1.5) <= 1e-4, "d* at (2,2) = " + fmt(d22, 10));
    }
    detail << tag << "c=" << fmt(dec.c, 7) << " res=" << fmt(res, 2) << "; ";
  }
  if (c.ok) c.note << detail.str();
  return c;
}

// Criteria 4 and 5 share samples.
std::pair<Check, Check> subspace_samples() {
  Check npt, witness;
  std::size_t total = 0;
  double worst = 0.0;
  for (auto [m, n] : std::vector<std::pair<std::size_t, std::size_t>>{{2, 2}, {3, 3}, {3, 4}}) {
    const SubspaceBasis basis = build_subspace(BipartiteDims(m, n));
    for (std::uint64_t seed = 0; seed < 1000; ++seed) {
      const NptTrial t = run_npt_trial(basis, seed);
      const std::string tag = "(" + std::to_string(m) + "," + std::to_string(n) + ") seed " + std::to_string(seed);
      npt.require(t.min_pt_eigenvalue < -t.threshold, tag + " not NPT");
      witness.require(t.witness.has_value(), tag + " no certificate");
      if (t.witness) {
        const double err = std::abs(t.direct_determinant + std::norm(t.witness->mixture_sum));
        worst = std::max(worst, err);
        witness.require(t.direct_determinant < 0.0, tag + " determinant " + fmt(t.direct_determinant));
        witness.require(err <= 1e-10, tag + " identity error " + fmt(err));
      }
      ++total;
    }
  }
  if (npt.ok) npt.note << total << "/" << total << " mixtures NPT at (2,2), (3,3), (3,4)";
  if (witness.ok) witness.note << total << " certificates, worst |det + |sum|^2| = " << fmt(worst);
  return {std::move(npt), std::move(witness)};
}

Check upper_bound() {
  Check c;
  std::ostringstream detail;
  for (auto [m, n] : std::vector<std::pair<std::size_t, std::size_t>>{{2, 2}, {3, 3}, {3, 4}, {4, 5}}) {
    const BipartiteDims dims(m, n);
    const StressReport r = run_stress(StressSuite::Bound, dims, 1000, 0);
    c.require(r.failures == 0, "(" + std::to_string(m) + "," + std::to_string(n) + ") seed " +
                                   (r.failing_seeds.empty() ? std::string("?") : std::to_string(r.failing_seeds[0])));
    detail << "(" << m << "," << n << ") max " << r.max_negative_count << "/" << dims.max_negative_count() << "; ";
  }
  if (c.ok) c.note << detail.str();
  return c;
}

Check subspace_structure() {
  Check c;
  for (std::size_t m = 2; m <= 6; ++m)
    for (std::size_t n = 2; n <= 6; ++n) {
      const BipartiteDims dims(m, n);
      const std::string tag = "(" + std::to_string(m) + "," + std::to_string(n) + ") ";
      const SubspaceBasis b = build_subspace(dims);
      c.require(b.dimension() == dims.max_negative_count(), tag + "dimension");
      const ComplexMatrix p = projector(b).matrix;
      c.require((p * p - p).max_abs() <= 1e-10, tag + "P^2 != P");
      c.require((p - p.adjoint()).max_abs() <= 1e-10, tag + "P != P^dagger");
      for (const auto& g : b.generators) {
        const std::vector<Complex> sums = antidiag_sums(delta_realign(g, dims));
        c.require(sums.size() == m + n - 1, tag + "sum count");
        for (const Complex& s : sums) c.require(std::abs(s) <= 1e-12, tag + "anti-diagonal sum " + fmt(std::abs(s)));
      }
    }
  if (c.ok) c.note << "25 size pairs, dim S = (m-1)(n-1), projector and anti-diagonal checks hold";
  return c;
}

Check linear_algebra() {
  Check c;
  double worst_res = 0.0, worst_orth = 0.0;
  const std::vector<std::size_t> sizes{1, 2, 3, 4, 6, 9, 12, 16, 25, 36, 49, 64, 100, 144};
  for (std::size_t n : sizes) {
    for (std::uint64_t s = 0; s < 100; ++s) {
      const ComplexMatrix a = testutil::random_hermitian(n, n * 1000 + s);
      const Spectrum sp = eigh(a);
      double res = 0.0;
      for (std::size_t k = 0; k < n; ++k) {
        const CVector v = sp.eigenvectors.column(k);
        CVector r = a * v;
        for (std::size_t i = 0; i < n; ++i) r[i] -= sp.eigenvalues[k] * v[i];
        res = std::max(res, norm2(r));
      }
      res /= std::max(1.0, a.frobenius_norm());
      const double orth = (sp.eigenvectors.adjoint() * sp.eigenvectors - ComplexMatrix::identity(n)).frobenius_norm();
      worst_res = std::max(worst_res, res);
      worst_orth = std::max(worst_orth, orth);
    }
  }
  c.require(worst_res <= 1e-11, "relative residual " + fmt(worst_res));
  c.require(worst_orth <= 1e-10, "orthonormality " + fmt(worst_orth));
  for (auto [m, n] : kSizes) {
    const BipartiteDims dims(m, n);
    const ComplexMatrix a = testutil::random_matrix(dims.total(), dims.total(), 7 * m + n);
    c.require(partial_transpose(partial_transpose(a, dims), dims) == a, "partial transpose involution");
  }
  if (c.ok) {
    c.note << "sizes up to 144, worst relative residual " << fmt(worst_res, 3) << ", orthonormality "
           << fmt(worst_orth, 3) << ", involution exact";
  }
  return c;
}

}  // namespace

int main() {
  const char* names[] = {"",
                         "fixture reproduction",
                         "construction, direct route",
                         "construction, dual-cone route",
                         "NPT property on the subspace",
                         "witness certificates",
                         "upper bound on negative eigenvalues",
                         "subspace structure",
                         "linear algebra"};
  bool all = true;
  auto report = [&](int id, const Check& c, double t) {
    all = all && c.ok;
    std::printf("%s  criterion %d  %-36s %s (%.2f s)\n", c.ok ? "PASS" : "FAIL", id, names[id], c.note.str().c_str(), t);
    std::fflush(stdout);
  };

  auto t0 = Clock::now();
  report(1, fixture_reproduction(), seconds(t0));
  double d22 = 0.0;
  t0 = Clock::now();
  report(2, direct_route(d22), seconds(t0));
  t0 = Clock::now();
  report(3, dual_cone_route(d22), seconds(t0));
  t0 = Clock::now();
  auto [npt, witness] = subspace_samples();
  const double ts = seconds(t0);
  report(4, npt, ts);
  report(5, witness, ts);
  t0 = Clock::now();
  report(6, upper_bound(), seconds(t0));
  t0 = Clock::now();
  report(7, subspace_structure(), seconds(t0));
  t0 = Clock::now();
  report(8, linear_algebra(), seconds(t0));
  std::printf("%s\n", all ? "all criteria passed" : "some criteria FAILED");
  return all ? 0 : 1;
}
