#include "cli.hpp"

#include <chrono>
#include <filesystem>
#include <iomanip>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "nptsub/bipartite.hpp"
#include "nptsub/errors.hpp"
#include "nptsub/matrix_io.hpp"
#include "nptsub/sdp.hpp"
#include "nptsub/stress.hpp"
#include "nptsub/subspace.hpp"
#include "nptsub/verification.hpp"

namespace nptsub::cli {

namespace {

namespace fs = std::filesystem;
using io::Json;

struct SubspaceArgs {
  std::size_t m = 2;
  std::size_t n = 2;
  std::string out;
  bool projector = false;
};

struct ConstructArgs {
  std::size_t m = 2;
  std::size_t n = 2;
  std::string method = "direct";
  double tol = 1e-10;
  std::size_t max_iter = 100;
  std::string out;
};

struct VerifyArgs {
  std::string in;
  bool subspace = false;
  bool json = false;
  std::string report;
  VerificationThresholds thresholds;
};

struct WitnessArgs {
  std::string in;
  std::size_t m = 0;
  std::size_t n = 0;
  bool json = false;
};

struct StressArgs {
  std::size_t m = 2;
  std::size_t n = 2;
  std::size_t trials = 100;
  std::uint64_t seed = 0;
  std::string suite = "npt";
  bool json = false;
};

std::string human(double x) {
  std::ostringstream s;
  s << std::setprecision(6) << x;
  return s.str();
}

std::string human(Complex z) {
  std::ostringstream s;
  s << std::setprecision(6) << z.real() << (z.imag() < 0 ? " - " : " + ") << std::abs(z.imag()) << "i";
  return s.str();
}

std::string ket(ProductIndex p) { return "|" + std::to_string(p.j) + ">|" + std::to_string(p.k) + ">"; }

Json budgets_json(const SdpTolerances& tol) {
  return Json{{"solver", "primal-dual interior point"},
              {"max_iterations", tol.max_iterations},
              {"solver_tolerance", tol.solver_tolerance},
              {"feasibility", tol.feasibility},
              {"gap", tol.gap},
              {"value", tol.value},
              {"residual", tol.residual}};
}

Json negatives_json(const NegativeEigenvalues& neg) {
  return Json{{"count", neg.count}, {"values", neg.values}, {"threshold", neg.threshold}};
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

int cmd_subspace(const SubspaceArgs& a, std::ostream& out, std::ostream& err) {
  const BipartiteDims dims(a.m, a.n);
  const SubspaceBasis basis = build_subspace(dims);
  if (basis.dimension() == 0) err << "warning: m = 1 or n = 1, the subspace is {0}\n";

  std::error_code ec;
  fs::create_directories(a.out, ec);
  if (ec) {
    err << "error: cannot create " << a.out << ": " << ec.message() << "\n";
    return kUsage;
  }
  const fs::path dir(a.out);
  const Json meta{{"tool_version", kToolVersion}, {"dimension", basis.dimension()}};

  Json gmeta = meta;
  gmeta["content"] = "generators |j>|k+1> - |j+1>|k>, generator (j, k) at position j*(n-1)+k";
  io::write_text(dir / "generators.json", io::serialize(io::VectorSetFile{dims, basis.generators, gmeta}));
  Json bmeta = meta;
  bmeta["content"] = "orthonormal basis, modified Gram-Schmidt of the generators in order";
  io::write_text(dir / "basis.json", io::serialize(io::VectorSetFile{dims, basis.orthonormal, bmeta}));

  out << "subspace for m=" << a.m << " n=" << a.n << ": dimension " << basis.dimension() << "\n";
  out << "wrote " << (dir / "generators.json").string() << "\n";
  out << "wrote " << (dir / "basis.json").string() << "\n";
  if (a.projector) {
    const Projector p = projector(basis);
    Json pmeta = meta;
    pmeta["content"] = "orthogonal projector onto the subspace";
    pmeta["trace"] = p.matrix.trace().real();
    io::write_text(dir / "projector.json", io::serialize(io::MatrixFile{dims, p.matrix, pmeta}));
    out << "wrote " << (dir / "projector.json").string() << " (trace " << human(p.matrix.trace().real()) << ")\n";
  }
  return kOk;
}

int write_partial(const ConstructArgs& a, BipartiteDims dims, const SdpTolerances& tol, const std::string& why,
                  std::ostream& out, std::ostream& err) {
  const auto n = static_cast<double>(dims.total());
  Json meta{{"tool_version", kToolVersion},
            {"method", a.method},
            {"converged", false},
            {"error", why},
            {"solver_budgets", budgets_json(tol)}};
  io::write_text(a.out, io::serialize(io::MatrixFile{dims, ComplexMatrix::identity(dims.total()) / n, meta}));
  err << "error: solver did not converge: " << why << "\n";
  out << "wrote " << a.out << " (maximally mixed placeholder, converged=false)\n";
  return kNoConvergence;
}

int cmd_construct(const ConstructArgs& a, std::ostream& out, std::ostream& err) {
  if (a.m < 2 || a.n < 2) {
    err << "error: construct needs m >= 2 and n >= 2\n";
    return kUsage;
  }
  const BipartiteDims dims(a.m, a.n);
  SdpTolerances tol;
  tol.solver_tolerance = a.tol;
  tol.max_iterations = a.max_iter;
  tol.allow_partial = true;
  const auto start = std::chrono::steady_clock::now();
  const Projector p = projector(build_subspace(dims));

  Json meta{{"tool_version", kToolVersion}, {"method", a.method}, {"solver_budgets", budgets_json(tol)}};
  ComplexMatrix rho;
  bool converged = true;
  std::ostringstream summary;
  try {
    if (a.method == "direct") {
      const SdpSolution sol = solve_construction_sdp(dims, p, tol);
      rho = sol.rho.matrix();
      converged = sol.converged;
      meta["d"] = sol.d;
      meta["d_upper_bound"] = sol.d_upper_bound;
      meta["iterations"] = sol.iterations;
      meta["residuals"] = {{"psd_gap", sol.residuals.psd_gap},
                           {"pt_constraint_gap", sol.residuals.pt_constraint_gap},
                           {"trace_gap", sol.residuals.trace_gap}};
      summary << "d = " << human(sol.d) << " (upper bound " << human(sol.d_upper_bound) << ")\n";
      summary << "residuals: psd " << human(sol.residuals.psd_gap) << ", constraint "
              << human(sol.residuals.pt_constraint_gap) << ", trace " << human(sol.residuals.trace_gap) << "\n";
      summary << "iterations: " << sol.iterations << "\n";
    } else {
      const ConeDecomposition dec = construct_via_dual_cone(dims, p, tol);
      rho = dec.rho.matrix();
      meta["c"] = dec.c;
      meta["residual"] = dec.residual;
      meta["trace_x2"] = dec.x2.trace().real();
      meta["iterations"] = dec.iterations;
      summary << "c = " << human(dec.c) << "\n";
      summary << "decomposition residual ||X1 + X2^Gamma - X||_F = " << human(dec.residual) << "\n";
      summary << "Tr X2 = " << human(dec.x2.trace().real()) << "\n";
      summary << "iterations: " << dec.iterations << "\n";
    }
  } catch (const NoConvergence& e) {
    return write_partial(a, dims, tol, e.what(), out, err);
  }

  const NegativeEigenvalues neg = count_negative_eigenvalues(partial_transpose(rho, dims));
  meta["converged"] = converged;
  meta["negative_eigenvalues"] = negatives_json(neg);
  io::write_text(a.out, io::serialize(io::MatrixFile{dims, rho, meta}));

  out << "construct m=" << a.m << " n=" << a.n << " method=" << a.method << "\n" << summary.str();
  out << "negative eigenvalues of rho^Gamma: " << neg.count << " (maximum " << dims.max_negative_count() << ")\n";
  out << "converged: " << (converged ? "yes" : "no") << "\n";
  out << "time: " << human(seconds_since(start)) << " s\n";
  out << "wrote " << a.out << "\n";
  if (!converged) {
    err << "error: solver did not converge within " << a.max_iter << " iterations\n";
    return kNoConvergence;
  }
  return kOk;
}

int cmd_verify(const VerifyArgs& a, std::ostream& out, std::ostream&) {
  const io::MatrixFile file = io::read_matrix_file(a.in);
  const VerificationReport report = verify_matrix(file.dims, file.matrix, a.subspace, a.thresholds);
  Json j = report.to_json();
  j["m"] = file.dims.m;
  j["n"] = file.dims.n;
  j["valid_state"] = report.valid_state();
  if (a.json) {
    out << j.dump(2) << "\n";
  } else {
    out << "file: " << a.in << " (m=" << file.dims.m << " n=" << file.dims.n << ")\n" << report.to_text();
  }
  if (!a.report.empty()) io::write_text(a.report, j.dump(2) + "\n");
  return report.valid_state() ? kOk : kFailed;
}

int cmd_witness(const WitnessArgs& a, std::ostream& out, std::ostream& err) {
  const io::MatrixFile file = io::read_matrix_file(a.in);
  if (file.dims.m != a.m || file.dims.n != a.n) {
    err << "error: file holds m=" << file.dims.m << " n=" << file.dims.n << ", expected m=" << a.m << " n=" << a.n
        << "\n";
    return kUsage;
  }
  const BipartiteDims dims(a.m, a.n);
  const SubspaceBasis basis = build_subspace(dims);
  WitnessCertificate w;
  try {
    const DensityMatrix rho(dims, file.matrix);
    w = witness_locator(rho, basis);
  } catch (const InvalidState& e) {
    err << "error: not a density matrix: " << e.what() << "\n";
    return kFailed;
  } catch (const NotInSubspace& e) {
    const ComplexMatrix q = ComplexMatrix::identity(dims.total()) - projector(basis).matrix;
    const ComplexMatrix h = file.matrix.hermitian_part();
    err << "error: NotInSubspace: " << e.what() << "\n";
    err << "  ||(I - P) rho (I - P)||_F = " << human((q * h * q).frobenius_norm()) << ", ||rho||_F = "
        << human(h.frobenius_norm()) << ", subspace dimension " << basis.dimension() << "\n";
    return kFailed;
  }

  if (a.json) {
    Json sub = Json::array();
    for (std::size_t r = 0; r < 2; ++r) {
      Json row = Json::array();
      for (std::size_t c = 0; c < 2; ++c) row.push_back({w.submatrix(r, c).real(), w.submatrix(r, c).imag()});
      sub.push_back(row);
    }
    const Json j{{"m", a.m},
                 {"n", a.n},
                 {"alpha", {w.alpha.j, w.alpha.k}},
                 {"beta", {w.beta.j, w.beta.k}},
                 {"alpha_index", dims.index(w.alpha.j, w.alpha.k)},
                 {"beta_index", dims.index(w.beta.j, w.beta.k)},
                 {"antidiag_index", w.antidiag_index},
                 {"submatrix", sub},
                 {"determinant", w.determinant},
                 {"mixture_sum", {w.mixture_sum.real(), w.mixture_sum.imag()}}};
    out << j.dump(2) << "\n";
    return kOk;
  }
  out << "alpha:            " << ket(w.alpha) << " (index " << dims.index(w.alpha.j, w.alpha.k) << ")\n";
  out << "beta:             " << ket(w.beta) << " (index " << dims.index(w.beta.j, w.beta.k) << ")\n";
  out << "anti-diagonal:    " << w.antidiag_index << "\n";
  out << "rho^Gamma restricted to {alpha, beta}:\n";
  for (std::size_t r = 0; r < 2; ++r) {
    out << "  [" << human(w.submatrix(r, 0)) << ", " << human(w.submatrix(r, 1)) << "]\n";
  }
  out << "determinant:      " << human(w.determinant) << "\n";
  out << "mixture sum:      " << human(w.mixture_sum) << "\n";
  out << "-|mixture sum|^2: " << human(-std::norm(w.mixture_sum)) << "\n";
  return kOk;
}

int cmd_stress(const StressArgs& a, std::ostream& out, std::ostream& err) {
  const BipartiteDims dims(a.m, a.n);
  const StressSuite suite = a.suite == "npt" ? StressSuite::Npt : StressSuite::Bound;
  if (suite == StressSuite::Npt && dims.max_negative_count() == 0) {
    err << "error: the npt suite needs m >= 2 and n >= 2\n";
    return kUsage;
  }
  const StressReport r = run_stress(suite, dims, a.trials, a.seed);
  const std::size_t passed = r.trials - r.failures;
  if (a.json) {
    Json j{{"suite", a.suite},
           {"m", a.m},
           {"n", a.n},
           {"trials", r.trials},
           {"base_seed", a.seed},
           {"passed", passed},
           {"failures", r.failures},
           {"failing_seeds", r.failing_seeds},
           {"messages", r.messages}};
    if (suite == StressSuite::Npt) {
      j["worst_identity_error"] = r.worst_identity_error;
    } else {
      j["max_negative_count"] = r.max_negative_count;
      j["bound"] = dims.max_negative_count();
    }
    out << j.dump(2) << "\n";
  } else {
    out << "suite " << a.suite << " m=" << a.m << " n=" << a.n << " seeds " << a.seed << ".."
        << a.seed + a.trials - 1 << "\n";
    if (suite == StressSuite::Npt) {
      out << passed << "/" << r.trials << " NPT with a witness\n";
      out << "worst |det + |sum|^2|: " << human(r.worst_identity_error) << "\n";
    } else {
      out << passed << "/" << r.trials << " within the bound\n";
      out << "largest negative count: " << r.max_negative_count << " (bound " << dims.max_negative_count() << ")\n";
    }
  }
  for (std::size_t i = 0; i < r.failures; ++i) {
    err << "FAIL seed=" << r.failing_seeds[i] << ": " << r.messages[i] << "\n";
  }
  return r.failures == 0 ? kOk : kFailed;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Maximal NPT subspaces and states with many negative partial-transpose eigenvalues"};
  app.name("nptsub");
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kToolVersion));

  const auto positive = CLI::Range(std::size_t{1}, std::numeric_limits<std::size_t>::max());

  SubspaceArgs sa;
  auto* sub = app.add_subcommand("subspace", "write generators, orthonormal basis and optionally the projector");
  sub->add_option("--m", sa.m, "first local dimension")->required()->check(positive);
  sub->add_option("--n", sa.n, "second local dimension")->required()->check(positive);
  sub->add_option("--out", sa.out, "output directory")->required();
  sub->add_flag("--projector", sa.projector, "also write projector.json");

  ConstructArgs ca;
  auto* con = app.add_subcommand("construct", "build a state whose partial transpose has (m-1)(n-1) negatives");
  con->add_option("--m", ca.m, "first local dimension")->required()->check(positive);
  con->add_option("--n", ca.n, "second local dimension")->required()->check(positive);
  con->add_option("--method", ca.method, "direct or dual-cone")
      ->capture_default_str()
      ->check(CLI::IsMember({"direct", "dual-cone"}));
  con->add_option("--tol", ca.tol, "interior-point stopping tolerance")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  con->add_option("--max-iter", ca.max_iter, "interior-point iteration budget per solve")
      ->capture_default_str()
      ->check(positive);
  con->add_option("--out", ca.out, "output matrix file")->required();

  VerifyArgs va;
  auto* ver = app.add_subcommand("verify", "check a matrix file and count negative eigenvalues of its partial transpose");
  ver->add_option("--in", va.in, "matrix file")->required();
  ver->add_flag("--subspace", va.subspace, "also check that the range lies in the subspace");
  ver->add_flag("--json", va.json, "print the machine-readable report instead of text");
  ver->add_option("--report", va.report, "also write the machine-readable report here");
  ver->add_option("--hermitian-tol", va.thresholds.hermitian, "relative Hermiticity tolerance")
      ->capture_default_str()
      ->check(CLI::NonNegativeNumber);
  ver->add_option("--psd-tol", va.thresholds.psd, "allowed negative eigenvalue of rho")
      ->capture_default_str()
      ->check(CLI::NonNegativeNumber);
  ver->add_option("--trace-tol", va.thresholds.trace, "allowed |Tr rho - 1|")
      ->capture_default_str()
      ->check(CLI::NonNegativeNumber);
  ver->add_option("--neg-abs", va.thresholds.negativity.absolute, "absolute negativity threshold")
      ->capture_default_str()
      ->check(CLI::NonNegativeNumber);
  ver->add_option("--neg-rel", va.thresholds.negativity.relative, "threshold relative to |lambda_max|")
      ->capture_default_str()
      ->check(CLI::NonNegativeNumber);

  WitnessArgs wa;
  auto* wit = app.add_subcommand("witness", "locate a 2x2 principal submatrix of rho^Gamma with negative determinant");
  wit->add_option("--in", wa.in, "matrix file holding a state supported on the subspace")->required();
  wit->add_option("--m", wa.m, "first local dimension")->required()->check(positive);
  wit->add_option("--n", wa.n, "second local dimension")->required()->check(positive);
  wit->add_flag("--json", wa.json, "print the certificate as JSON");

  StressArgs ta;
  auto* str = app.add_subcommand("stress", "seeded property suites");
  str->add_option("--m", ta.m, "first local dimension")->required()->check(positive);
  str->add_option("--n", ta.n, "second local dimension")->required()->check(positive);
  str->add_option("--trials", ta.trials, "number of samples")->capture_default_str()->check(positive);
  str->add_option("--seed", ta.seed, "base seed; trial i uses seed + i")->capture_default_str();
  str->add_option("--suite", ta.suite, "npt or bound")->capture_default_str()->check(CLI::IsMember({"npt", "bound"}));
  str->add_flag("--json", ta.json, "print the report as JSON");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*sub) return cmd_subspace(sa, out, err);
    if (*con) return cmd_construct(ca, out, err);
    if (*ver) return cmd_verify(va, out, err);
    if (*wit) return cmd_witness(wa, out, err);
    return cmd_stress(ta, out, err);
  } catch (const ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const ShapeMismatch& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const Error& e) {
    // Unwritable output paths end up here as well.
    err << "error: " << e.what() << "\n";
    return kUsage;
  }
}

}  // namespace nptsub::cli
