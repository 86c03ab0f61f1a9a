#pragma once

#include <cstdint>
#include <random>

#include "mrf2d/plane.hpp"

namespace mrf2d {

/// Two-parameter Ising energy model on the {0,1} pixel alphabet. The site
/// energy of pixel value f with neighbor sum v is f*(alpha + beta*v); beta <= 0
/// rewards agreeing neighbors. alpha is tied to the pixel priors (p0, p1):
/// alpha = (1/4)*ln(p0/p1) - 2*beta, which reduces to alpha = -2*beta for
/// equiprobable pixels.
struct IsingParams {
  double alpha = 6.0;
  double beta = -3.0;
  double p0 = 0.5;
  double p1 = 0.5;
};

/// alpha for given pixel priors and interaction coefficient (natural log).
double alpha_from_priors(double p0, double beta);

/// Convenience constructor keeping alpha consistent with (p0, beta).
IsingParams make_ising_params(double p0, double beta);

/// Sum of the four first-order neighbors of (m,n) with periodic (toroidal)
/// wrap. Result is in 0..4.
int neighbor_sum(const BinaryImage& image, int m, int n);

/// Site energy f*(alpha + beta*v) of Eq.-style Ising conditionals.
double ising_energy(int f, int v, const IsingParams& params);

/// Gibbs conditional probability of pixel value 1 given neighbor sum v:
/// e^{-(alpha_eff+beta*v)/T} / (1 + e^{-(alpha_eff+beta*v)/T}).
/// Numerically stable for exponents of magnitude up to ~700.
double conditional_prob_one(int v, double alpha_eff, double beta, double T);

/// Total lattice energy with periodic boundaries:
///   alpha * sum(f) + beta * sum over unordered neighbor pairs of f_i*f_j.
/// This is the joint energy whose single-site conditionals are the Gibbs
/// probabilities above; swap/flip deltas below are increments of it.
double total_energy(const BinaryImage& image, double alpha, double beta);

/// Energy change if the pixel values at the two (distinct) sites are swapped.
/// Handles adjacent sites, including double adjacency on 2-wide tori.
double swap_energy_delta(const BinaryImage& image, int ma, int na, int mb, int nb,
                         const IsingParams& params);

/// Prior-energy change if the pixel at (m,n) is flipped:
/// (1-2f)*(alpha_eff + beta*v). alpha_eff is the possibly LLR-shifted alpha.
double flip_energy_delta(const BinaryImage& image, int m, int n, double alpha_eff, double beta);

/// Draws an MRF sample by exchange (swap) dynamics at T=1: start from exactly
/// round(p1*M*N) ones placed uniformly at random, then run sweeps*M*N random
/// pair-swap proposals accepted with the Metropolis rule min(1, e^{-dE}).
/// The ones-count of the output equals the ones-count of the initialization.
BinaryImage generate_mrf(int rows, int cols, const IsingParams& params, int sweeps,
                         std::mt19937_64& rng);

}  // namespace mrf2d
