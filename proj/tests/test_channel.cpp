#include <cmath>

#include "doctest.h"
#include "mrf2d/channel.hpp"
#include "mrf2d/ising.hpp"
#include "mrf2d/rng.hpp"
#include "oracles.hpp"

using namespace mrf2d;

TEST_CASE("interleaver determinism and bijection") {
  const Permutation a = make_interleaver(8, 8, 123);
  const Permutation b = make_interleaver(8, 8, 123);
  CHECK(a.forward == b.forward);
  const Permutation c = make_interleaver(8, 8, 124);
  CHECK(a.forward != c.forward);

  std::vector<bool> seen(64, false);
  for (auto i : a.forward) {
    CHECK(!seen[i]);
    seen[i] = true;
  }

  RealPlane plane(8, 8);
  for (std::int64_t i = 0; i < plane.size(); ++i) plane[i] = static_cast<double>(i) * 0.37 - 3.0;
  CHECK(deinterleave(interleave(plane, a), a) == plane);
}

TEST_CASE("interleave hand case") {
  RealPlane plane(2, 2);
  plane[0] = 1.0;  // a
  plane[1] = 2.0;  // b
  plane[2] = 3.0;  // c
  plane[3] = 4.0;  // d
  Permutation perm;
  perm.forward = {3, 2, 1, 0};
  const RealPlane out = interleave(plane, perm);
  CHECK(out[0] == 4.0);
  CHECK(out[1] == 3.0);
  CHECK(out[2] == 2.0);
  CHECK(out[3] == 1.0);

  Permutation identity;
  identity.forward = {0, 1, 2, 3};
  CHECK(interleave(plane, identity) == plane);

  Permutation wrong;
  wrong.forward = {0, 1, 2};
  CHECK_THROWS_AS(interleave(plane, wrong), std::invalid_argument);
}

TEST_CASE("interleaving decorrelates an MRF") {
  IsingParams p = make_ising_params(0.5, -3.0);
  auto rng = make_rng(5, Stream::Source);
  const BinaryImage image = generate_mrf(64, 64, p, 200, rng);
  const Permutation perm = make_interleaver(64, 64, 17);
  const BinaryImage shuffled = interleave(image, perm);

  auto adjacent_corr = [](const BinaryImage& f) {
    double mean = 0.0;
    for (std::int64_t i = 0; i < f.size(); ++i) mean += f[i];
    mean /= static_cast<double>(f.size());
    double num = 0.0, den = 0.0;
    for (int m = 0; m < f.rows(); ++m) {
      for (int n = 0; n + 1 < f.cols(); ++n) {
        num += (f(m, n) - mean) * (f(m, n + 1) - mean);
      }
    }
    for (std::int64_t i = 0; i < f.size(); ++i) den += (f[i] - mean) * (f[i] - mean);
    return num / den;
  };
  CHECK(std::abs(adjacent_corr(image)) > 0.5);     // strongly correlated source
  CHECK(std::abs(adjacent_corr(shuffled)) < 0.05);  // i.i.d.-like after interleaving
}

TEST_CASE("level shift") {
  BinaryImage zeros(2, 2, 0);
  const BipolarImage shifted = level_shift(zeros);
  for (std::int64_t i = 0; i < shifted.size(); ++i) CHECK(shifted[i] == -1);

  BinaryImage mixed(2, 2);
  mixed(0, 0) = 1;
  mixed(1, 1) = 1;
  const BipolarImage x = level_shift(mixed);
  CHECK(x(0, 0) == 1);
  CHECK(x(0, 1) == -1);
  CHECK(x(1, 0) == -1);
  CHECK(x(1, 1) == 1);
  CHECK(level_unshift(x) == mixed);
}

TEST_CASE("convolve2d with the averaging mask") {
  const Mask2D mask = Mask2D::averaging2x2();
  BinaryImage ones(4, 4, 1);
  const RealPlane r = convolve2d(level_shift(ones), mask);
  CHECK(r(2, 2) == doctest::Approx(1.0));
  CHECK(r(0, 0) == doctest::Approx(0.25));  // only h(0,0) overlaps at the corner

  BinaryImage checker(4, 4);
  for (int m = 0; m < 4; ++m)
    for (int n = 0; n < 4; ++n) checker(m, n) = static_cast<std::uint8_t>((m + n) & 1);
  const RealPlane rc = convolve2d(level_shift(checker), mask);
  CHECK(rc(2, 2) == doctest::Approx(0.0));
}

TEST_CASE("convolve2d is linear") {
  auto rng = make_rng(3, Stream::Noise);
  std::uniform_real_distribution<double> unif(-2.0, 2.0);
  RealPlane a(6, 7), b(6, 7);
  for (std::int64_t i = 0; i < a.size(); ++i) {
    a[i] = unif(rng);
    b[i] = unif(rng);
  }
  const Mask2D mask(2, 2, {0.5, -0.25, 0.125, 0.75});
  RealPlane combo(6, 7);
  for (std::int64_t i = 0; i < combo.size(); ++i) combo[i] = 2.5 * a[i] - 1.25 * b[i];
  const RealPlane lhs = convolve2d(combo, mask);
  const RealPlane ra = convolve2d(a, mask);
  const RealPlane rb = convolve2d(b, mask);
  for (std::int64_t i = 0; i < lhs.size(); ++i)
    CHECK(std::abs(lhs[i] - (2.5 * ra[i] - 1.25 * rb[i])) < 1e-12);
}

TEST_CASE("filtered variance approaches sum of squared coefficients") {
  auto rng = make_rng(11, Stream::Source);
  std::uniform_int_distribution<int> bit(0, 1);
  BinaryImage image(256, 256);
  for (std::int64_t i = 0; i < image.size(); ++i) image[i] = static_cast<std::uint8_t>(bit(rng));
  const RealPlane filtered = convolve2d(level_shift(image), Mask2D::averaging2x2());

  double mean = 0.0;
  for (std::int64_t i = 0; i < filtered.size(); ++i) mean += filtered[i];
  mean /= static_cast<double>(filtered.size());
  double var = 0.0;
  for (std::int64_t i = 0; i < filtered.size(); ++i) var += (filtered[i] - mean) * (filtered[i] - mean);
  var /= static_cast<double>(filtered.size());
  CHECK(var == doctest::Approx(0.25).epsilon(0.02));

  CHECK(sigma_for_snr(0.0, filtered) == doctest::Approx(0.5).epsilon(0.02));
  CHECK(sigma_for_snr(10.0, filtered) == doctest::Approx(0.15811).epsilon(0.02));
  CHECK(sigma_for_snr(200.0, filtered) < 1e-9);

  const RealPlane flat(4, 4, 1.0);
  CHECK_THROWS_AS(sigma_for_snr(0.0, flat), std::domain_error);
}

TEST_CASE("add_awgn") {
  RealPlane plane(100, 100, 0.0);
  auto rng = make_rng(21, Stream::Noise);
  CHECK(add_awgn(plane, 0.0, rng) == plane);

  RealPlane big(1000, 1000, 0.0);
  const double sigma = 0.7;
  const RealPlane noisy = add_awgn(big, sigma, rng);
  double mean = 0.0;
  for (std::int64_t i = 0; i < noisy.size(); ++i) mean += noisy[i];
  mean /= static_cast<double>(noisy.size());
  CHECK(std::abs(mean) < 4.0 * sigma / 1000.0);
  double var = 0.0;
  for (std::int64_t i = 0; i < noisy.size(); ++i) var += (noisy[i] - mean) * (noisy[i] - mean);
  var /= static_cast<double>(noisy.size());
  CHECK(var == doctest::Approx(sigma * sigma).epsilon(0.01));
}

TEST_CASE("bsc_corrupt") {
  auto rng = make_rng(31, Stream::Bsc);
  BinaryImage image(64, 64, 0);
  for (std::int64_t i = 0; i < image.size(); ++i) image[i] = static_cast<std::uint8_t>(i & 1);

  CHECK(bsc_corrupt(image, 0.0, rng) == image);

  const BinaryImage complemented = bsc_corrupt(image, 1.0, rng);
  for (std::int64_t i = 0; i < image.size(); ++i) CHECK(complemented[i] == (image[i] ^ 1));

  const BinaryImage corrupted = bsc_corrupt(image, 0.05, rng);
  const std::int64_t flips = count_bit_errors(corrupted, image);
  // Binomial(4096, 0.05): mean 204.8, sigma ~ 13.9; allow 5 sigma
  CHECK(flips > 135);
  CHECK(flips < 275);
}
