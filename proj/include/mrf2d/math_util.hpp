#pragma once

#include <algorithm>
#include <cmath>

namespace mrf2d {

/// LLR planes are clamped to this magnitude before exponentiation; reliability
/// decisions are fully saturated well before it.
inline constexpr double kLlrClamp = 50.0;

inline double clamp_llr(double x) { return std::clamp(x, -kLlrClamp, kLlrClamp); }

/// log(1 + e^x) without overflow.
inline double softplus(double x) { return x > 0.0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x)); }

/// log of the logistic sigmoid, stable for any x.
inline double log_sigmoid(double x) { return -softplus(-x); }

/// 1 / (1 + e^{-x}), stable for any x.
inline double sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

}  // namespace mrf2d
