#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "mrf2d/channel.hpp"
#include "mrf2d/ising.hpp"
#include "mrf2d/isi_detector.hpp"
#include "mrf2d/mrf_detector.hpp"
#include "mrf2d/plane.hpp"

namespace mrf2d {

/// Configuration of the concatenated detector.
struct SystemConfig {
  int outer_iterations = 5;      // full ISI <-> MRF rounds
  int inner_isi_iterations = 1;  // row+column rounds per outer iteration
  SisoConfig siso;               // weight, sigma_w, priors
  IsingParams ising;             // MRF parameters assumed at the receiver
  AnnealSchedule schedule;       // relaxation schedule (C, t_max)
  double t_out = 0.0;            // soft-output temperature; <= 0 selects T(t_max)
  Mask2D mask = Mask2D::averaging2x2();
  std::uint64_t interleaver_seed = 0;
  std::uint64_t master_seed = 1;  // seeds the relaxation scan stream
};

/// Soft-output temperature actually used: the final annealing temperature
/// unless explicitly overridden.
double soft_output_temperature(const SystemConfig& cfg);

struct IterationRecord {
  RealPlane isi_extrinsic;  // deinterleaved ISI extrinsic (MRF detector input)
  RealPlane mrf_extrinsic;  // MRF extrinsic (source order, before interleaving)
  BinaryImage estimate;     // hard estimate after this iteration
  std::int64_t bit_errors = -1;  // vs truth, when supplied
  double ber = -1.0;
};

struct DetectionTrace {
  std::vector<IterationRecord> iterations;
  BinaryImage estimate;  // final image estimate
};

/// Resumable concatenated detector; run(k) appends k outer iterations to the
/// trace, so run(n) followed by run(m) is bit-identical to run(n+m).
class TurboDetector {
 public:
  TurboDetector(const RealPlane& received, const SystemConfig& cfg,
                const BinaryImage* truth = nullptr);

  const DetectionTrace& run(int outer_iterations);
  const DetectionTrace& trace() const { return trace_; }

 private:
  RealPlane received_;
  SystemConfig cfg_;
  const BinaryImage* truth_;
  Permutation perm_;
  RealPlane mrf_extrinsic_;  // source order, zeros before the first iteration
  std::mt19937_64 relax_rng_;
  DetectionTrace trace_;
};

/// Runs the full concatenated detector of the block diagram: ISI detector and
/// MRF detector exchanging interleaved/deinterleaved extrinsic LLRs.
DetectionTrace detect(const RealPlane& received, const SystemConfig& cfg,
                      const BinaryImage* truth = nullptr);

/// Baseline: the ISI detector alone (MRF feedback held at zero). Estimates are
/// hard decisions of the deinterleaved total LLRs. With zero feedback every
/// outer iteration computes the same plane, so it is computed once and the
/// trace entries repeat it.
DetectionTrace detect_isi_only(const RealPlane& received, const SystemConfig& cfg,
                               const BinaryImage* truth = nullptr);

/// Baseline: annealed stochastic relaxation applied directly to the
/// non-interleaved channel output, with the blurring mask inside the data
/// term: E_P = E_I + ||received - h * (2F̂-1)||^2 / (2 sigma_w^2). The blurred
/// prediction is maintained incrementally across accepted flips.
BinaryImage gg_alone(const RealPlane& received, const SystemConfig& cfg, std::mt19937_64& rng);

}  // namespace mrf2d
