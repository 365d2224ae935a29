#include "nptsub/verification.hpp"

#include <cmath>
#include <iomanip>
#include <sstream>

#include "nptsub/errors.hpp"
#include "nptsub/subspace.hpp"

namespace nptsub {

VerificationReport verify_matrix(BipartiteDims dims, const ComplexMatrix& mat, bool check_subspace,
                                 const VerificationThresholds& thresholds) {
  const std::size_t dim = dims.total();
  if (mat.rows() != dim || mat.cols() != dim) throw ShapeMismatch("verify_matrix: matrix must be mn x mn");

  VerificationReport r;
  r.thresholds = thresholds;
  r.is_hermitian = mat.is_hermitian(thresholds.hermitian);
  const ComplexMatrix h = mat.hermitian_part();
  r.trace = h.trace().real();
  r.unit_trace = std::abs(r.trace - 1.0) <= thresholds.trace;
  r.min_eigenvalue = min_eigenvalue(h);
  r.is_psd = r.min_eigenvalue >= -thresholds.psd;

  const NegativeEigenvalues neg = count_negative_eigenvalues(partial_transpose(h, dims), thresholds.negativity);
  r.negative_count = neg.count;
  r.negative_eigenvalues = neg.values;
  r.negativity_threshold = neg.threshold;
  if (check_subspace) r.range_in_subspace = range_in_subspace(build_subspace(dims), h);
  return r;
}

nlohmann::json VerificationReport::to_json() const {
  nlohmann::json j{{"is_hermitian", is_hermitian},
                   {"is_psd", is_psd},
                   {"unit_trace", unit_trace},
                   {"trace", trace},
                   {"min_eigenvalue", min_eigenvalue},
                   {"negative_count", negative_count},
                   {"negative_eigenvalues", negative_eigenvalues},
                   {"negativity_threshold", negativity_threshold},
                   {"thresholds",
                    {{"hermitian", thresholds.hermitian},
                     {"psd", thresholds.psd},
                     {"trace", thresholds.trace},
                     {"negativity_absolute", thresholds.negativity.absolute},
                     {"negativity_relative", thresholds.negativity.relative}}}};
  if (range_in_subspace) j["range_in_subspace"] = *range_in_subspace;
  return j;
}

std::string VerificationReport::to_text() const {
  std::ostringstream out;
  out << std::setprecision(6);
  out << "hermitian:          " << (is_hermitian ? "yes" : "no") << "\n";
  out << "positive semidef.:  " << (is_psd ? "yes" : "no") << " (min eigenvalue " << min_eigenvalue << ")\n";
  out << "trace:              " << trace << (unit_trace ? "" : " (not 1)") << "\n";
  out << "partial transpose:  " << negative_count << " negative eigenvalue" << (negative_count == 1 ? "" : "s")
      << " below -" << negativity_threshold << "\n";
  for (double v : negative_eigenvalues) out << "  " << v << "\n";
  if (range_in_subspace) out << "range in subspace:  " << (*range_in_subspace ? "yes" : "no") << "\n";
  out << "state:              " << (valid_state() ? "valid density matrix" : "NOT a valid density matrix")
      << ", " << (negative_count == 0 ? "PPT" : "NPT") << "\n";
  return out.str();
}

}  // namespace nptsub
