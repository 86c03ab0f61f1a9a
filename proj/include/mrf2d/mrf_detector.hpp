#pragma once

#include <random>

#include "mrf2d/ising.hpp"
#include "mrf2d/plane.hpp"

namespace mrf2d {

/// Per-class sample statistics of an incoming LLR plane. Pixels with LLR > 0
/// form the plus class; the rest the minus class. Population variances.
struct ConditionalStats {
  double mu_plus = 0.0;
  double mu_minus = 0.0;
  double var_plus = 0.0;
  double var_minus = 0.0;
  std::int64_t n_plus = 0;
  std::int64_t n_minus = 0;
};

/// Logarithmic annealing schedule T(t) = C / ln(1+t), 1 <= t <= t_max.
struct AnnealSchedule {
  double C = 3.0;
  int t_max = 300;
};

ConditionalStats conditional_stats(const RealPlane& llr_in);

/// Shifts and scales the LLR plane to the "noisy image" G with conditional
/// means 0 and 1:  G = (L - mu_minus) / (mu_plus - mu_minus), and estimates
/// sigma_G^2 = (N+ var+ + N- var-) / ((N+ + N-) (mu+ - mu-)^2).
struct NoisyImage {
  RealPlane g;
  double sigma_g2 = 0.0;
};
NoisyImage scale_to_noisy_image(const RealPlane& llr_in, const ConditionalStats& stats);

double anneal_temperature(int t, const AnnealSchedule& schedule);

/// Posterior-energy change for flipping pixel (m,n) of the estimate:
/// prior flip delta with alpha_eff plus the data term
/// [(G - NOT(f))^2 - (G - f)^2] / (2 sigma_G^2). Only the one pixel changes.
double posterior_flip_delta(const BinaryImage& estimate, const RealPlane& g, int m, int n,
                            double alpha_eff, double beta, double sigma_g2);

/// Annealed stochastic relaxation toward the MAP estimate. Starts from G
/// thresholded at 1/2; per step t visits M*N random sites (with replacement),
/// proposes 0 or 1 with probability 1/2 each, and accepts energy-increasing
/// flips with probability e^{-dE/T(t+1)}. The per-site alpha is shifted by the
/// extrinsic input: alpha' = alpha - L_in(m,n).
BinaryImage stochastic_relaxation(const RealPlane& g, double sigma_g2, const RealPlane& llr_in,
                                  const IsingParams& params, const AnnealSchedule& schedule,
                                  std::mt19937_64& rng);

/// Extrinsic soft output of the converged estimate:
/// L_out(m,n) = -(alpha + beta * v(m,n)) / T_out (the extrinsic input is
/// already cancelled in this form). Clamped to +-50.
RealPlane mrf_soft_output(const BinaryImage& estimate, const IsingParams& params, double t_out);

/// MAP estimator for the BSC(p)+AWGN corruption model: the same annealed
/// Metropolis scan, but the data energy is the channel's actual negative
/// log-likelihood -ln[(1-p) N(G; f, sigma_w^2) + p N(G; 1-f, sigma_w^2)],
/// which saturates at ln((1-p)/p) for outlying pixels so that crossover
/// errors remain correctable by the prior. With p = 0 this reduces to the
/// Gaussian data term; with p = 1/2 the data term is flat.
BinaryImage bsc_awgn_map_estimate(const RealPlane& g, double sigma_w, double crossover_p,
                                  const IsingParams& params, const AnnealSchedule& schedule,
                                  std::mt19937_64& rng);

}  // namespace mrf2d
