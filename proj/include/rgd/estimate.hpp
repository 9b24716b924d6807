#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace rgd {

enum class EstimateMethod { ClosedForm, MonteCarlo };

constexpr std::string_view to_string(EstimateMethod m) noexcept {
  return m == EstimateMethod::ClosedForm ? "closed-form" : "monte-carlo";
}

/// A scalar with its Monte Carlo standard error (zero for closed forms).
struct LimitEstimate {
  double value = 0.0;
  double std_error = 0.0;
  std::uint64_t samples = 0;
  EstimateMethod method = EstimateMethod::ClosedForm;
  std::uint64_t seed = 0;
  /// Mean standard error of the inner area estimates (nested estimators only).
  double inner_std_error = 0.0;
  std::string warning;

  static LimitEstimate exact(double v) {
    LimitEstimate e;
    e.value = v;
    return e;
  }
};

}  // namespace rgd
