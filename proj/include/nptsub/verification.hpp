#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "nptsub/bipartite.hpp"
#include "nptsub/linalg.hpp"

namespace nptsub {

struct VerificationThresholds {
  double hermitian = 1e-12;  // relative to max(1, maxabs)
  double psd = 1e-10;        // lambda_min >= -psd
  double trace = 1e-10;      // |Tr - 1| <= trace
  NegativityThreshold negativity;
};

struct VerificationReport {
  bool is_hermitian = false;
  bool is_psd = false;
  bool unit_trace = false;
  double trace = 0.0;
  double min_eigenvalue = 0.0;
  std::size_t negative_count = 0;            // of the partial transpose
  std::vector<double> negative_eigenvalues;  // ascending
  double negativity_threshold = 0.0;         // tau actually applied
  std::optional<bool> range_in_subspace;     // set when requested
  VerificationThresholds thresholds;

  bool valid_state() const { return is_hermitian && is_psd && unit_trace; }
  nlohmann::json to_json() const;
  std::string to_text() const;
};

// Spectral quantities are computed from the Hermitian part of `mat`.
VerificationReport verify_matrix(BipartiteDims dims, const ComplexMatrix& mat, bool check_subspace,
                                 const VerificationThresholds& thresholds = {});

}  // namespace nptsub
