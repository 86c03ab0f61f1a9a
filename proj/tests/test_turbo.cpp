#include <cmath>
#include <set>

#include "doctest.h"
#include "mrf2d/turbo.hpp"
#include "test_helpers.hpp"

using namespace mrf2d;

TEST_CASE("detect is deterministic and resumable") {
  const IsingParams params = make_ising_params(0.5, -3.0);
  const auto run = testing::transmit(24, 24, params, 12.0, 42);
  SystemConfig cfg = testing::system_for(run, params, 42);
  cfg.schedule.t_max = 60;

  const DetectionTrace a = detect(run.received, cfg, &run.source);
  const DetectionTrace b = detect(run.received, cfg, &run.source);
  REQUIRE(a.iterations.size() == b.iterations.size());
  CHECK(a.estimate == b.estimate);
  for (std::size_t k = 0; k < a.iterations.size(); ++k) {
    CHECK(a.iterations[k].isi_extrinsic == b.iterations[k].isi_extrinsic);
    CHECK(a.iterations[k].mrf_extrinsic == b.iterations[k].mrf_extrinsic);
    CHECK(a.iterations[k].bit_errors == b.iterations[k].bit_errors);
  }

  // run(2) then run(3) equals run(5) bit-exactly
  TurboDetector split(run.received, cfg, &run.source);
  split.run(2);
  const DetectionTrace& resumed = split.run(3);
  REQUIRE(resumed.iterations.size() == a.iterations.size());
  CHECK(resumed.estimate == a.estimate);
  for (std::size_t k = 0; k < a.iterations.size(); ++k) {
    CHECK(resumed.iterations[k].isi_extrinsic == a.iterations[k].isi_extrinsic);
    CHECK(resumed.iterations[k].mrf_extrinsic == a.iterations[k].mrf_extrinsic);
  }
}

TEST_CASE("extrinsic-only exchange") {
  const IsingParams params = make_ising_params(0.5, -3.0);
  const auto run = testing::transmit(16, 16, params, 11.0, 7);
  SystemConfig cfg = testing::system_for(run, params, 7);
  cfg.schedule.t_max = 60;
  const DetectionTrace trace = detect(run.received, cfg, &run.source);

  const double t_out = soft_output_temperature(cfg);
  for (const IterationRecord& rec : trace.iterations) {
    // The MRF feedback plane is a pure neighborhood functional of the estimate
    // (at most five level values); it cannot contain the ISI detector's LLRs.
    std::set<double> values(rec.mrf_extrinsic.data().begin(), rec.mrf_extrinsic.data().end());
    CHECK(values.size() <= 5);
    CHECK(rec.mrf_extrinsic == mrf_soft_output(rec.estimate, params, t_out));
  }
}

TEST_CASE("degenerate MRF stage reduces to the ISI detector alone") {
  const IsingParams iid = make_ising_params(0.5, 0.0);  // alpha = beta = 0
  const auto run = testing::transmit(24, 24, iid, 13.0, 9);
  SystemConfig cfg = testing::system_for(run, iid, 9);
  cfg.outer_iterations = 1;
  cfg.schedule.t_max = 0;  // relaxation bypass: estimate = threshold(G)

  const DetectionTrace concat = detect(run.received, cfg, &run.source);
  const DetectionTrace isi = detect_isi_only(run.received, cfg, &run.source);

  // identical ISI stage output (both run with zero feedback)
  CHECK(concat.iterations[0].isi_extrinsic == isi.iterations[0].isi_extrinsic);
  // decisions agree up to the hard-decision rule (threshold of G at 1/2 vs
  // LLR sign), which may differ only at borderline pixels
  const std::int64_t disagreements = count_bit_errors(concat.estimate, isi.estimate);
  CHECK(disagreements <= run.source.size() / 50);
}

TEST_CASE("isi-only detection is clean on a noise-free plane") {
  const IsingParams params = make_ising_params(0.5, -1.5);
  auto src = make_rng(31, Stream::Source);
  const BinaryImage source = generate_mrf(32, 32, params, 120, src);
  const Permutation perm = make_interleaver(32, 32, 5);
  const RealPlane received = convolve2d(level_shift(interleave(source, perm)), Mask2D::averaging2x2());

  SystemConfig cfg;
  cfg.ising = params;
  cfg.siso.sigma_w = 1e-3;
  cfg.interleaver_seed = 5;
  const DetectionTrace trace = detect_isi_only(received, cfg, &source);
  CHECK(trace.iterations.back().bit_errors == 0);
}

TEST_CASE("turbo iterations do not increase the error count at moderate SNR") {
  const IsingParams params = make_ising_params(0.5, -3.0);
  int monotone = 0;
  const int trials = 10;
  for (int t = 0; t < trials; ++t) {
    const auto run = testing::transmit(32, 32, params, 13.0, 100 + static_cast<std::uint64_t>(t));
    SystemConfig cfg = testing::system_for(run, params, 100 + static_cast<std::uint64_t>(t));
    cfg.schedule.t_max = 100;
    const DetectionTrace trace = detect(run.received, cfg, &run.source);
    bool ok = true;
    for (std::size_t k = 1; k < trace.iterations.size(); ++k)
      ok = ok && trace.iterations[k].bit_errors <= trace.iterations[k - 1].bit_errors;
    if (ok) ++monotone;
  }
  CHECK(monotone >= 8);
}

TEST_CASE("gg_alone recovers exactly through an identity channel without noise") {
  const IsingParams params = make_ising_params(0.5, -3.0);
  auto src = make_rng(61, Stream::Source);
  const BinaryImage source = generate_mrf(16, 16, params, 60, src);
  const RealPlane received = convolve2d(level_shift(source), Mask2D::identity1x1());

  SystemConfig cfg;
  cfg.ising = params;
  cfg.mask = Mask2D::identity1x1();
  cfg.siso.sigma_w = 1e-4;
  cfg.schedule.t_max = 50;
  auto rng = make_rng(62, Stream::Relaxation);
  const BinaryImage estimate = gg_alone(received, cfg, rng);
  CHECK(count_bit_errors(estimate, source) == 0);
}
