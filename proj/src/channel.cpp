#include "mrf2d/channel.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "mrf2d/rng.hpp"

namespace mrf2d {

Mask2D::Mask2D(int rows, int cols, std::vector<double> coefficients)
    : rows_(rows), cols_(cols), c_(std::move(coefficients)) {
  if (rows < 1 || cols < 1 || c_.size() != static_cast<std::size_t>(rows) * cols)
    throw std::invalid_argument("Mask2D: bad dimensions");
  bool any = false;
  for (double v : c_) any = any || v != 0.0;
  if (!any) throw std::invalid_argument("Mask2D: empty support");
}

Mask2D Mask2D::averaging2x2() { return Mask2D(2, 2, {0.25, 0.25, 0.25, 0.25}); }

Mask2D Mask2D::identity1x1() { return Mask2D(1, 1, {1.0}); }

double Mask2D::coeff(int k, int l) const {
  if (k < 0 || k >= rows_ || l < 0 || l >= cols_) throw std::out_of_range("Mask2D: index out of range");
  return c_[static_cast<std::size_t>(k) * cols_ + l];
}

double Mask2D::coeff_or_zero(int k, int l) const {
  if (k < 0 || k >= rows_ || l < 0 || l >= cols_) return 0.0;
  return c_[static_cast<std::size_t>(k) * cols_ + l];
}

Mask2D Mask2D::transposed() const {
  std::vector<double> t(c_.size());
  for (int k = 0; k < rows_; ++k)
    for (int l = 0; l < cols_; ++l) t[static_cast<std::size_t>(l) * rows_ + k] = coeff(k, l);
  return Mask2D(cols_, rows_, std::move(t));
}

Permutation make_interleaver(int rows, int cols, std::uint64_t seed) {
  const std::int64_t total = static_cast<std::int64_t>(rows) * cols;
  if (total < 1) throw std::invalid_argument("make_interleaver: empty image");
  Permutation perm;
  perm.seed = seed;
  perm.forward.resize(static_cast<std::size_t>(total));
  std::iota(perm.forward.begin(), perm.forward.end(), 0u);
  std::mt19937_64 rng(detail::splitmix64(seed));
  for (std::int64_t i = total - 1; i > 0; --i) {
    std::uniform_int_distribution<std::int64_t> pick(0, i);
    std::swap(perm.forward[static_cast<std::size_t>(i)], perm.forward[static_cast<std::size_t>(pick(rng))]);
  }
  return perm;
}

BipolarImage level_shift(const BinaryImage& b) {
  BipolarImage out(b.rows(), b.cols());
  for (std::int64_t i = 0; i < b.size(); ++i) out[i] = b[i] ? 1 : -1;
  return out;
}

BinaryImage level_unshift(const BipolarImage& x) {
  BinaryImage out(x.rows(), x.cols());
  for (std::int64_t i = 0; i < x.size(); ++i) out[i] = x[i] > 0 ? 1 : 0;
  return out;
}

RealPlane convolve2d(const RealPlane& x, const Mask2D& mask) {
  const int M = x.rows(), N = x.cols();
  RealPlane r(M, N, 0.0);
  for (int m = 0; m < M; ++m) {
    for (int n = 0; n < N; ++n) {
      double acc = 0.0;
      for (int k = 0; k < mask.rows(); ++k) {
        const int mm = m - k;
        if (mm < 0) break;
        for (int l = 0; l < mask.cols(); ++l) {
          const int nn = n - l;
          if (nn < 0) break;
          acc += mask.coeff(k, l) * x(mm, nn);
        }
      }
      r(m, n) = acc;
    }
  }
  return r;
}

RealPlane convolve2d(const BipolarImage& x, const Mask2D& mask) { return convolve2d(to_real(x), mask); }

double sigma_for_snr(double snr_db, const RealPlane& filtered) {
  double mean = 0.0;
  for (std::int64_t i = 0; i < filtered.size(); ++i) mean += filtered[i];
  mean /= static_cast<double>(filtered.size());
  double var = 0.0;
  for (std::int64_t i = 0; i < filtered.size(); ++i) {
    const double d = filtered[i] - mean;
    var += d * d;
  }
  var /= static_cast<double>(filtered.size());
  if (var <= 0.0) throw std::domain_error("sigma_for_snr: zero-variance plane");
  return std::sqrt(var * std::pow(10.0, -snr_db / 10.0));
}

RealPlane add_awgn(const RealPlane& x, double sigma, std::mt19937_64& rng) {
  if (sigma < 0.0) throw std::invalid_argument("add_awgn: sigma must be nonnegative");
  RealPlane out = x;
  if (sigma == 0.0) return out;
  std::normal_distribution<double> noise(0.0, sigma);
  for (std::int64_t i = 0; i < out.size(); ++i) out[i] += noise(rng);
  return out;
}

BinaryImage bsc_corrupt(const BinaryImage& b, double p, std::mt19937_64& rng) {
  if (p < 0.0 || p > 1.0) throw std::invalid_argument("bsc_corrupt: p must be in [0,1]");
  BinaryImage out = b;
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (std::int64_t i = 0; i < out.size(); ++i) {
    if (unif(rng) < p) out[i] ^= 1;
  }
  return out;
}

}  // namespace mrf2d
