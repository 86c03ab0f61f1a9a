#pragma once

#include "mrf2d/channel.hpp"
#include "mrf2d/ising.hpp"
#include "mrf2d/rng.hpp"
#include "mrf2d/turbo.hpp"

namespace testing {

struct ChannelRun {
  mrf2d::BinaryImage source;
  mrf2d::RealPlane received;
  double sigma = 0.0;
};

// Standard transmit chain: generated MRF -> interleave -> level shift ->
// 2x2 averaging mask -> AWGN at the given SNR.
inline ChannelRun transmit(int rows, int cols, const mrf2d::IsingParams& params, double snr_db,
                           std::uint64_t seed, int sweeps = 120) {
  using namespace mrf2d;
  ChannelRun run;
  auto src = make_rng(seed, Stream::Source);
  run.source = generate_mrf(rows, cols, params, sweeps, src);
  const Permutation perm = make_interleaver(rows, cols, derive_seed(seed, Stream::Interleaver));
  const BipolarImage x = level_shift(interleave(run.source, perm));
  const RealPlane filtered = convolve2d(x, Mask2D::averaging2x2());
  run.sigma = sigma_for_snr(snr_db, filtered);
  auto noise = make_rng(seed, Stream::Noise);
  run.received = add_awgn(filtered, run.sigma, noise);
  return run;
}

inline mrf2d::SystemConfig system_for(const ChannelRun& run, const mrf2d::IsingParams& params,
                                      std::uint64_t seed) {
  mrf2d::SystemConfig cfg;
  cfg.ising = params;
  cfg.siso.p0 = params.p0;
  cfg.siso.p1 = params.p1;
  cfg.siso.sigma_w = run.sigma;
  cfg.interleaver_seed = mrf2d::derive_seed(seed, mrf2d::Stream::Interleaver);
  cfg.master_seed = seed;
  return cfg;
}

}  // namespace testing
