#include "mrf2d/turbo.hpp"

#include <cmath>
#include <stdexcept>

#include "mrf2d/math_util.hpp"
#include "mrf2d/rng.hpp"

namespace mrf2d {

namespace {

constexpr double kMinSigmaG2 = 1e-12;  // guard for degenerate (noise-free) LLR planes

BinaryImage hard_decide(const RealPlane& llr) {
  BinaryImage out(llr.rows(), llr.cols());
  for (std::int64_t i = 0; i < llr.size(); ++i) out[i] = llr[i] > 0.0 ? 1 : 0;
  return out;
}

void record_errors(IterationRecord& rec, const BinaryImage* truth) {
  if (truth == nullptr) return;
  rec.bit_errors = count_bit_errors(rec.estimate, *truth);
  rec.ber = static_cast<double>(rec.bit_errors) / static_cast<double>(truth->size());
}

}  // namespace

double soft_output_temperature(const SystemConfig& cfg) {
  if (cfg.t_out > 0.0) return cfg.t_out;
  return anneal_temperature(cfg.schedule.t_max >= 1 ? cfg.schedule.t_max : 1, cfg.schedule);
}

TurboDetector::TurboDetector(const RealPlane& received, const SystemConfig& cfg,
                             const BinaryImage* truth)
    : received_(received),
      cfg_(cfg),
      truth_(truth),
      perm_(make_interleaver(received.rows(), received.cols(), cfg.interleaver_seed)),
      mrf_extrinsic_(received.rows(), received.cols(), 0.0),
      relax_rng_(make_rng(cfg.master_seed, Stream::Relaxation)) {
  if (truth != nullptr && !truth->same_shape(received))
    throw std::invalid_argument("TurboDetector: truth shape mismatch");
}

const DetectionTrace& TurboDetector::run(int outer_iterations) {
  SisoConfig siso = cfg_.siso;
  siso.inner_iterations = cfg_.inner_isi_iterations;
  const double t_out = soft_output_temperature(cfg_);

  for (int k = 0; k < outer_iterations; ++k) {
    IterationRecord rec;

    // (a) ISI detector with the interleaved MRF extrinsic as prior.
    const RealPlane isi_prior = interleave(mrf_extrinsic_, perm_);
    const RealPlane isi_extrinsic = run_ircsdfa(received_, isi_prior, cfg_.mask, siso);

    // (b) back to source order for the MRF detector.
    rec.isi_extrinsic = deinterleave(isi_extrinsic, perm_);

    // (c) MRF detection: scale to the noisy image, relax, emit soft output.
    const ConditionalStats stats = conditional_stats(rec.isi_extrinsic);
    NoisyImage noisy = scale_to_noisy_image(rec.isi_extrinsic, stats);
    noisy.sigma_g2 = std::max(noisy.sigma_g2, kMinSigmaG2);
    rec.estimate = stochastic_relaxation(noisy.g, noisy.sigma_g2, rec.isi_extrinsic, cfg_.ising,
                                         cfg_.schedule, relax_rng_);
    rec.mrf_extrinsic = mrf_soft_output(rec.estimate, cfg_.ising, t_out);
    mrf_extrinsic_ = rec.mrf_extrinsic;

    record_errors(rec, truth_);
    trace_.iterations.push_back(std::move(rec));
  }
  if (!trace_.iterations.empty()) trace_.estimate = trace_.iterations.back().estimate;
  return trace_;
}

DetectionTrace detect(const RealPlane& received, const SystemConfig& cfg, const BinaryImage* truth) {
  TurboDetector detector(received, cfg, truth);
  return detector.run(cfg.outer_iterations);
}

DetectionTrace detect_isi_only(const RealPlane& received, const SystemConfig& cfg,
                               const BinaryImage* truth) {
  const Permutation perm = make_interleaver(received.rows(), received.cols(), cfg.interleaver_seed);
  SisoConfig siso = cfg.siso;
  siso.inner_iterations = cfg.inner_isi_iterations;

  const RealPlane zeros(received.rows(), received.cols(), 0.0);
  const RealPlane totals = run_ircsdfa(received, zeros, cfg.mask, siso);

  DetectionTrace trace;
  IterationRecord rec;
  rec.isi_extrinsic = deinterleave(totals, perm);
  rec.mrf_extrinsic = RealPlane(received.rows(), received.cols(), 0.0);
  rec.estimate = hard_decide(rec.isi_extrinsic);
  record_errors(rec, truth);
  for (int k = 0; k < cfg.outer_iterations; ++k) trace.iterations.push_back(rec);
  trace.estimate = rec.estimate;
  return trace;
}

BinaryImage gg_alone(const RealPlane& received, const SystemConfig& cfg, std::mt19937_64& rng) {
  const int M = received.rows(), N = received.cols();
  const Mask2D& mask = cfg.mask;
  const double sigma_w = cfg.siso.sigma_w;
  if (!(sigma_w > 0.0)) throw std::domain_error("gg_alone: sigma_w must be positive");
  const double inv2sig = 1.0 / (2.0 * sigma_w * sigma_w);

  BinaryImage estimate(M, N);
  for (std::int64_t i = 0; i < received.size(); ++i) estimate[i] = received[i] > 0.0 ? 1 : 0;
  RealPlane predicted = convolve2d(level_shift(estimate), mask);

  const std::int64_t total = static_cast<std::int64_t>(M) * N;
  std::uniform_int_distribution<std::int64_t> site(0, total - 1);
  std::uniform_int_distribution<int> coin(0, 1);
  std::uniform_real_distribution<double> unif(0.0, 1.0);

  for (int t = 0; t < cfg.schedule.t_max; ++t) {
    const double temperature = anneal_temperature(t + 1, cfg.schedule);
    for (std::int64_t visit = 0; visit < total; ++visit) {
      const std::int64_t s = site(rng);
      const int proposal = coin(rng);
      const int m = static_cast<int>(s / N), n = static_cast<int>(s % N);
      if (proposal == estimate(m, n)) continue;
      const double step = proposal ? 2.0 : -2.0;  // bipolar symbol change

      double delta = flip_energy_delta(estimate, m, n, cfg.ising.alpha, cfg.ising.beta);
      for (int k = 0; k < mask.rows(); ++k) {
        for (int l = 0; l < mask.cols(); ++l) {
          const int i = m + k, j = n + l;
          if (i >= M || j >= N) continue;
          const double e_old = received(i, j) - predicted(i, j);
          const double e_new = e_old - step * mask.coeff(k, l);
          delta += (e_new * e_new - e_old * e_old) * inv2sig;
        }
      }
      if (delta < 0.0 || unif(rng) < std::exp(-delta / temperature)) {
        estimate(m, n) = static_cast<std::uint8_t>(proposal);
        for (int k = 0; k < mask.rows(); ++k) {
          for (int l = 0; l < mask.cols(); ++l) {
            const int i = m + k, j = n + l;
            if (i < M && j < N) predicted(i, j) += step * mask.coeff(k, l);
          }
        }
      }
    }
  }
  return estimate;
}

}  // namespace mrf2d
