#pragma once

#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

#include "mrf2d/plane.hpp"

namespace mrf2d {

/// Finite-support 2D blurring mask h(k,l). Row-major coefficients; entries may
/// be zero (the support is the set of nonzero coefficients).
class Mask2D {
 public:
  Mask2D(int rows, int cols, std::vector<double> coefficients);

  /// The 2x2 averaging mask, h(k,l) = 1/4 for 0 <= k,l <= 1.
  static Mask2D averaging2x2();
  /// Degenerate single-coefficient mask h(0,0) = 1 (memoryless channel).
  static Mask2D identity1x1();

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  double coeff(int k, int l) const;
  /// h(k,l), with 0 returned for (k,l) outside the stored extent.
  double coeff_or_zero(int k, int l) const;
  Mask2D transposed() const;

 private:
  int rows_, cols_;
  std::vector<double> c_;
};

/// Seeded uniformly random bijection on pixel indices.
struct Permutation {
  std::vector<std::uint32_t> forward;  // output pixel i <- input pixel forward[i]
  std::uint64_t seed = 0;
  std::int64_t size() const { return static_cast<std::int64_t>(forward.size()); }
};

Permutation make_interleaver(int rows, int cols, std::uint64_t seed);

/// Output pixel i = input pixel perm.forward[i]. Applies to binary planes and
/// LLR planes alike.
template <typename T>
Plane<T> interleave(const Plane<T>& image, const Permutation& perm) {
  if (image.size() != perm.size()) throw std::invalid_argument("interleave: size mismatch");
  Plane<T> out(image.rows(), image.cols());
  for (std::int64_t i = 0; i < image.size(); ++i) out[i] = image[perm.forward[static_cast<std::size_t>(i)]];
  return out;
}

template <typename T>
Plane<T> deinterleave(const Plane<T>& image, const Permutation& perm) {
  if (image.size() != perm.size()) throw std::invalid_argument("deinterleave: size mismatch");
  Plane<T> out(image.rows(), image.cols());
  for (std::int64_t i = 0; i < image.size(); ++i) out[perm.forward[static_cast<std::size_t>(i)]] = image[i];
  return out;
}

/// {0,1} -> {-1,+1}
BipolarImage level_shift(const BinaryImage& b);
/// {-1,+1} -> {0,1} (sign decision)
BinaryImage level_unshift(const BipolarImage& x);

/// r(m,n) = sum_{(k,l)} h(k,l) * x(m-k, n-l), same-size output, samples outside
/// the input treated as 0.
RealPlane convolve2d(const RealPlane& x, const Mask2D& mask);
RealPlane convolve2d(const BipolarImage& x, const Mask2D& mask);

/// Noise std dev for a target SNR: sigma_w = sqrt(var[filtered] * 10^{-snr/10}),
/// with the variance taken empirically over the supplied plane.
double sigma_for_snr(double snr_db, const RealPlane& filtered);

RealPlane add_awgn(const RealPlane& x, double sigma, std::mt19937_64& rng);

/// Flips each bit independently with probability p.
BinaryImage bsc_corrupt(const BinaryImage& b, double p, std::mt19937_64& rng);

}  // namespace mrf2d
