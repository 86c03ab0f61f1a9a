#include "mrf2d/ising.hpp"

#include <cmath>
#include <stdexcept>

namespace mrf2d {

double alpha_from_priors(double p0, double beta) {
  if (!(p0 > 0.0 && p0 < 1.0)) throw std::domain_error("alpha_from_priors: p0 must be in (0,1)");
  return 0.25 * std::log(p0 / (1.0 - p0)) - 2.0 * beta;
}

IsingParams make_ising_params(double p0, double beta) {
  IsingParams p;
  p.p0 = p0;
  p.p1 = 1.0 - p0;
  p.beta = beta;
  p.alpha = alpha_from_priors(p0, beta);
  return p;
}

int neighbor_sum(const BinaryImage& image, int m, int n) {
  const int M = image.rows(), N = image.cols();
  if (m < 0 || m >= M || n < 0 || n >= N) throw std::out_of_range("neighbor_sum: index out of range");
  const int up = (m == 0) ? M - 1 : m - 1;
  const int down = (m == M - 1) ? 0 : m + 1;
  const int left = (n == 0) ? N - 1 : n - 1;
  const int right = (n == N - 1) ? 0 : n + 1;
  return image(m, left) + image(m, right) + image(up, n) + image(down, n);
}

double ising_energy(int f, int v, const IsingParams& params) {
  return f * (params.alpha + params.beta * v);
}

double conditional_prob_one(int v, double alpha_eff, double beta, double T) {
  if (!(T > 0.0)) throw std::domain_error("conditional_prob_one: T must be positive");
  const double x = (alpha_eff + beta * v) / T;
  // P(1) = e^{-x}/(1+e^{-x}); evaluate the bounded-exponent form.
  if (x >= 0.0) {
    const double e = std::exp(-x);
    return e / (1.0 + e);
  }
  return 1.0 / (1.0 + std::exp(x));
}

double total_energy(const BinaryImage& image, double alpha, double beta) {
  const int M = image.rows(), N = image.cols();
  double e = 0.0;
  for (int m = 0; m < M; ++m) {
    for (int n = 0; n < N; ++n) {
      const int f = image(m, n);
      const int right = (n == N - 1) ? 0 : n + 1;
      const int down = (m == M - 1) ? 0 : m + 1;
      // Each unordered pair counted once via its right/down representative.
      e += alpha * f + beta * f * (image(m, right) + image(down, n));
    }
  }
  return e;
}

namespace {

// Sum of site values over the 4 toroidal neighbor positions of (m,n),
// excluding occurrences of the position (mx,nx).
int neighbor_sum_excluding(const BinaryImage& image, int m, int n, int mx, int nx) {
  const int M = image.rows(), N = image.cols();
  const int pm[4] = {m, m, (m == 0) ? M - 1 : m - 1, (m == M - 1) ? 0 : m + 1};
  const int pn[4] = {(n == 0) ? N - 1 : n - 1, (n == N - 1) ? 0 : n + 1, n, n};
  int s = 0;
  for (int k = 0; k < 4; ++k) {
    if (pm[k] == mx && pn[k] == nx) continue;
    s += image(pm[k], pn[k]);
  }
  return s;
}

}  // namespace

double swap_energy_delta(const BinaryImage& image, int ma, int na, int mb, int nb,
                         const IsingParams& params) {
  if (ma == mb && na == nb) throw std::invalid_argument("swap_energy_delta: sites must differ");
  const int fa = image.at(ma, na);
  const int fb = image.at(mb, nb);
  if (fa == fb) return 0.0;
  // The alpha term and any (a,b) pair terms are invariant under the swap; only
  // pair terms against third-party neighbors change.
  const int sa = neighbor_sum_excluding(image, ma, na, mb, nb);
  const int sb = neighbor_sum_excluding(image, mb, nb, ma, na);
  return params.beta * (fb - fa) * (sa - sb);
}

double flip_energy_delta(const BinaryImage& image, int m, int n, double alpha_eff, double beta) {
  const int f = image.at(m, n);
  const int v = neighbor_sum(image, m, n);
  return (1 - 2 * f) * (alpha_eff + beta * v);
}

BinaryImage generate_mrf(int rows, int cols, const IsingParams& params, int sweeps,
                         std::mt19937_64& rng) {
  if (rows < 2 || cols < 2) throw std::invalid_argument("generate_mrf: dimensions must be >= 2x2");
  if (sweeps < 1) throw std::invalid_argument("generate_mrf: sweeps must be >= 1");

  const std::int64_t total = static_cast<std::int64_t>(rows) * cols;
  const std::int64_t ones = std::llround(params.p1 * static_cast<double>(total));

  // Exact ones-count initialization: partial Fisher-Yates over pixel indices.
  BinaryImage image(rows, cols, 0);
  std::vector<std::int64_t> idx(static_cast<std::size_t>(total));
  for (std::int64_t i = 0; i < total; ++i) idx[static_cast<std::size_t>(i)] = i;
  for (std::int64_t i = 0; i < ones; ++i) {
    std::uniform_int_distribution<std::int64_t> pick(i, total - 1);
    std::swap(idx[static_cast<std::size_t>(i)], idx[static_cast<std::size_t>(pick(rng))]);
    image[idx[static_cast<std::size_t>(i)]] = 1;
  }

  std::uniform_int_distribution<std::int64_t> site(0, total - 1);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const std::int64_t proposals = static_cast<std::int64_t>(sweeps) * total;
  for (std::int64_t k = 0; k < proposals; ++k) {
    const std::int64_t a = site(rng);
    std::int64_t b = site(rng);
    while (b == a) b = site(rng);
    const int ma = static_cast<int>(a / cols), na = static_cast<int>(a % cols);
    const int mb = static_cast<int>(b / cols), nb = static_cast<int>(b % cols);
    if (image(ma, na) == image(mb, nb)) continue;  // identity swap
    const double delta = swap_energy_delta(image, ma, na, mb, nb, params);
    if (delta < 0.0 || unif(rng) < std::exp(-delta)) {
      std::swap(image(ma, na), image(mb, nb));
    }
  }
  return image;
}

}  // namespace mrf2d
