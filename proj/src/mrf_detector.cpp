#include "mrf2d/mrf_detector.hpp"

#include <cmath>
#include <stdexcept>

#include "mrf2d/math_util.hpp"

namespace mrf2d {

ConditionalStats conditional_stats(const RealPlane& llr_in) {
  ConditionalStats s;
  double sum_p = 0.0, sum_m = 0.0;
  for (std::int64_t i = 0; i < llr_in.size(); ++i) {
    if (llr_in[i] > 0.0) {
      ++s.n_plus;
      sum_p += llr_in[i];
    } else {
      ++s.n_minus;
      sum_m += llr_in[i];
    }
  }
  if (s.n_plus > 0) s.mu_plus = sum_p / static_cast<double>(s.n_plus);
  if (s.n_minus > 0) s.mu_minus = sum_m / static_cast<double>(s.n_minus);
  double ss_p = 0.0, ss_m = 0.0;
  for (std::int64_t i = 0; i < llr_in.size(); ++i) {
    if (llr_in[i] > 0.0) {
      const double d = llr_in[i] - s.mu_plus;
      ss_p += d * d;
    } else {
      const double d = llr_in[i] - s.mu_minus;
      ss_m += d * d;
    }
  }
  if (s.n_plus > 0) s.var_plus = ss_p / static_cast<double>(s.n_plus);
  if (s.n_minus > 0) s.var_minus = ss_m / static_cast<double>(s.n_minus);
  // Symmetric fallback for a degenerate one-sided plane.
  if (s.n_plus == 0) {
    s.mu_plus = -s.mu_minus;
    s.var_plus = s.var_minus;
  }
  if (s.n_minus == 0) {
    s.mu_minus = -s.mu_plus;
    s.var_minus = s.var_plus;
  }
  return s;
}

NoisyImage scale_to_noisy_image(const RealPlane& llr_in, const ConditionalStats& stats) {
  const double spread = stats.mu_plus - stats.mu_minus;
  if (spread == 0.0) throw std::domain_error("scale_to_noisy_image: degenerate class means");
  NoisyImage out;
  out.g = RealPlane(llr_in.rows(), llr_in.cols());
  for (std::int64_t i = 0; i < llr_in.size(); ++i) out.g[i] = (llr_in[i] - stats.mu_minus) / spread;
  const double n_total = static_cast<double>(stats.n_plus + stats.n_minus);
  out.sigma_g2 = (static_cast<double>(stats.n_plus) * stats.var_plus +
                  static_cast<double>(stats.n_minus) * stats.var_minus) /
                 (n_total * spread * spread);
  return out;
}

double anneal_temperature(int t, const AnnealSchedule& schedule) {
  if (t < 1) throw std::domain_error("anneal_temperature: t must be >= 1");
  return schedule.C / std::log1p(static_cast<double>(t));
}

double posterior_flip_delta(const BinaryImage& estimate, const RealPlane& g, int m, int n,
                            double alpha_eff, double beta, double sigma_g2) {
  if (!(sigma_g2 > 0.0)) throw std::domain_error("posterior_flip_delta: sigma_G^2 must be positive");
  const int f = estimate.at(m, n);
  const double gv = g(m, n);
  const double df_new = gv - static_cast<double>(1 - f);
  const double df_old = gv - static_cast<double>(f);
  return flip_energy_delta(estimate, m, n, alpha_eff, beta) +
         (df_new * df_new - df_old * df_old) / (2.0 * sigma_g2);
}

BinaryImage stochastic_relaxation(const RealPlane& g, double sigma_g2, const RealPlane& llr_in,
                                  const IsingParams& params, const AnnealSchedule& schedule,
                                  std::mt19937_64& rng) {
  if (!g.same_shape(llr_in)) throw std::invalid_argument("stochastic_relaxation: plane size mismatch");
  const int M = g.rows(), N = g.cols();
  BinaryImage estimate(M, N);
  for (std::int64_t i = 0; i < g.size(); ++i) estimate[i] = g[i] > 0.5 ? 1 : 0;

  if (!(sigma_g2 > 0.0)) throw std::domain_error("stochastic_relaxation: sigma_G^2 must be positive");
  const std::int64_t total = static_cast<std::int64_t>(M) * N;
  std::uniform_int_distribution<std::int64_t> site(0, total - 1);
  std::uniform_int_distribution<int> coin(0, 1);
  std::uniform_real_distribution<double> unif(0.0, 1.0);

  for (int t = 0; t < schedule.t_max; ++t) {
    const double temperature = anneal_temperature(t + 1, schedule);
    for (std::int64_t visit = 0; visit < total; ++visit) {
      const std::int64_t s = site(rng);
      const int proposal = coin(rng);
      const int m = static_cast<int>(s / N), n = static_cast<int>(s % N);
      const int f = estimate(m, n);
      if (proposal == f) continue;
      // posterior_flip_delta, inlined for the scan loop
      const int v = estimate(m, n == 0 ? N - 1 : n - 1) + estimate(m, n == N - 1 ? 0 : n + 1) +
                    estimate(m == 0 ? M - 1 : m - 1, n) + estimate(m == M - 1 ? 0 : m + 1, n);
      const double alpha_eff = params.alpha - llr_in(m, n);
      const double gv = g(m, n);
      const double df_new = gv - static_cast<double>(1 - f);
      const double df_old = gv - static_cast<double>(f);
      const double delta = (1 - 2 * f) * (alpha_eff + params.beta * v) +
                           (df_new * df_new - df_old * df_old) / (2.0 * sigma_g2);
      if (delta < 0.0 || unif(rng) < std::exp(-delta / temperature)) {
        estimate(m, n) = static_cast<std::uint8_t>(proposal);
      }
    }
  }
  return estimate;
}

BinaryImage bsc_awgn_map_estimate(const RealPlane& g, double sigma_w, double crossover_p,
                                  const IsingParams& params, const AnnealSchedule& schedule,
                                  std::mt19937_64& rng) {
  if (!(sigma_w > 0.0)) throw std::domain_error("bsc_awgn_map_estimate: sigma_w must be positive");
  if (crossover_p < 0.0 || crossover_p > 1.0)
    throw std::domain_error("bsc_awgn_map_estimate: crossover probability out of range");
  const int M = g.rows(), N = g.cols();
  const double inv2sig = 1.0 / (2.0 * sigma_w * sigma_w);

  // Negative log-likelihood of observing gv when the true pixel is f.
  auto data_energy = [&](double gv, int f) {
    const double d_same = gv - static_cast<double>(f);
    const double d_flip = gv - static_cast<double>(1 - f);
    const double a = -d_same * d_same * inv2sig;  // log-weights up to a shared constant
    const double b = -d_flip * d_flip * inv2sig;
    if (crossover_p == 0.0) return -a;
    if (crossover_p == 1.0) return -b;
    const double la = std::log1p(-crossover_p) + a;
    const double lb = std::log(crossover_p) + b;
    const double mx = std::max(la, lb);
    return -(mx + std::log(std::exp(la - mx) + std::exp(lb - mx)));
  };

  BinaryImage estimate(M, N);
  for (std::int64_t i = 0; i < g.size(); ++i) estimate[i] = g[i] > 0.5 ? 1 : 0;

  const std::int64_t total = static_cast<std::int64_t>(M) * N;
  std::uniform_int_distribution<std::int64_t> site(0, total - 1);
  std::uniform_int_distribution<int> coin(0, 1);
  std::uniform_real_distribution<double> unif(0.0, 1.0);

  for (int t = 0; t < schedule.t_max; ++t) {
    const double temperature = anneal_temperature(t + 1, schedule);
    for (std::int64_t visit = 0; visit < total; ++visit) {
      const std::int64_t s = site(rng);
      const int proposal = coin(rng);
      const int m = static_cast<int>(s / N), n = static_cast<int>(s % N);
      const int f = estimate(m, n);
      if (proposal == f) continue;
      const double delta = flip_energy_delta(estimate, m, n, params.alpha, params.beta) +
                           data_energy(g(m, n), 1 - f) - data_energy(g(m, n), f);
      if (delta < 0.0 || unif(rng) < std::exp(-delta / temperature)) {
        estimate(m, n) = static_cast<std::uint8_t>(proposal);
      }
    }
  }
  return estimate;
}

RealPlane mrf_soft_output(const BinaryImage& estimate, const IsingParams& params, double t_out) {
  if (!(t_out > 0.0)) throw std::domain_error("mrf_soft_output: T must be positive");
  RealPlane out(estimate.rows(), estimate.cols());
  for (int m = 0; m < estimate.rows(); ++m) {
    for (int n = 0; n < estimate.cols(); ++n) {
      const int v = neighbor_sum(estimate, m, n);
      out(m, n) = clamp_llr(-(params.alpha + params.beta * v) / t_out);
    }
  }
  return out;
}

}  // namespace mrf2d
