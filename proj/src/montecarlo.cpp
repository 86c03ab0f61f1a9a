#include "mrf2d/montecarlo.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "mrf2d/pbm.hpp"
#include "mrf2d/rng.hpp"

namespace mrf2d {

namespace {

// Trials are processed in fixed-size chunks; the early-stop condition is
// evaluated at chunk boundaries on the ordered reduction, which keeps results
// identical for any worker count.
constexpr int kChunk = 16;

struct TrialResult {
  std::vector<std::int64_t> per_iteration_errors;
};

BinaryImage draw_source(const Scenario& s, const BinaryImage* pbm, std::uint64_t trial) {
  switch (s.source_kind) {
    case SourceKind::PbmFile:
      return *pbm;
    case SourceKind::Iid: {
      auto rng = make_rng(s.master_seed, Stream::Source, trial);
      BinaryImage image(s.rows, s.cols);
      std::uniform_real_distribution<double> unif(0.0, 1.0);
      for (std::int64_t i = 0; i < image.size(); ++i)
        image[i] = unif(rng) < s.true_params.p1 ? 1 : 0;
      return image;
    }
    case SourceKind::GeneratedMrf:
    default: {
      auto rng = make_rng(s.master_seed, Stream::Source, trial);
      return generate_mrf(s.rows, s.cols, s.true_params, s.mrf_sweeps, rng);
    }
  }
}

SystemConfig trial_system_config(const Scenario& s, std::uint64_t trial, double sigma_w) {
  SystemConfig cfg = s.system;
  cfg.ising = s.assumed_params;
  cfg.siso.p0 = s.assumed_params.p0;
  cfg.siso.p1 = s.assumed_params.p1;
  cfg.siso.sigma_w = sigma_w;
  cfg.interleaver_seed = derive_seed(s.master_seed, Stream::Interleaver, trial);
  cfg.master_seed = derive_seed(s.master_seed, Stream::Relaxation, trial);
  return cfg;
}

TrialResult run_trial(const Scenario& s, const BinaryImage* pbm, double snr_db, std::uint64_t trial) {
  const BinaryImage source = draw_source(s, pbm, trial);
  auto noise_rng = make_rng(s.master_seed, Stream::Noise, trial);
  TrialResult result;

  switch (s.mode) {
    case Mode::Concatenated:
    case Mode::IsiOnly: {
      const Permutation perm =
          make_interleaver(s.rows, s.cols, derive_seed(s.master_seed, Stream::Interleaver, trial));
      const BipolarImage x = level_shift(interleave(source, perm));
      const RealPlane filtered = convolve2d(x, s.system.mask);
      const double sigma = sigma_for_snr(snr_db, filtered);
      const RealPlane received = add_awgn(filtered, sigma, noise_rng);

      const SystemConfig cfg = trial_system_config(s, trial, sigma);
      const DetectionTrace trace = (s.mode == Mode::Concatenated)
                                       ? detect(received, cfg, &source)
                                       : detect_isi_only(received, cfg, &source);
      for (const IterationRecord& rec : trace.iterations)
        result.per_iteration_errors.push_back(rec.bit_errors);
      break;
    }
    case Mode::GgAlone: {
      // Non-interleaved channel; SNR referenced to the filtered binary image.
      const BipolarImage x = level_shift(source);
      const RealPlane filtered_binary = convolve2d(to_real(source), s.system.mask);
      const double sigma = sigma_for_snr(snr_db, filtered_binary);
      const RealPlane received = add_awgn(convolve2d(x, s.system.mask), sigma, noise_rng);

      const SystemConfig cfg = trial_system_config(s, trial, sigma);
      auto relax_rng = make_rng(cfg.master_seed, Stream::Relaxation);
      const BinaryImage estimate = gg_alone(received, cfg, relax_rng);
      result.per_iteration_errors.push_back(count_bit_errors(estimate, source));
      break;
    }
    case Mode::MrfBscAwgn: {
      // Source -> BSC(p) -> AWGN -> MRF MAP estimator; SNR = var[F] / sigma_w^2
      // with F the binary source plane. The estimator models the full
      // corruption (crossovers and noise both known to the receiver).
      auto bsc_rng = make_rng(s.master_seed, Stream::Bsc, trial);
      const BinaryImage corrupted = bsc_corrupt(source, s.bsc_p, bsc_rng);
      const double sigma = sigma_for_snr(snr_db, to_real(source));
      const RealPlane g = add_awgn(to_real(corrupted), sigma, noise_rng);

      auto relax_rng = make_rng(s.master_seed, Stream::Relaxation, trial);
      const BinaryImage estimate = bsc_awgn_map_estimate(g, sigma, s.bsc_p, s.assumed_params,
                                                         s.system.schedule, relax_rng);
      result.per_iteration_errors.push_back(count_bit_errors(estimate, source));
      break;
    }
  }
  return result;
}

BerRecord run_point(const Scenario& s, const BinaryImage* pbm, double snr_db) {
  const auto start = std::chrono::steady_clock::now();
  const std::int64_t pixels = static_cast<std::int64_t>(s.rows) * s.cols;

  std::vector<std::int64_t> iter_errors;  // ordered accumulation
  std::int64_t trials_done = 0;
  std::int64_t final_errors = 0;

  std::vector<TrialResult> chunk(kChunk);
  for (int base = 0; base < s.trials; base += kChunk) {
    const int count = std::min(kChunk, s.trials - base);
#ifdef _OPENMP
    if (s.threads > 0) omp_set_num_threads(s.threads);
#pragma omp parallel for schedule(dynamic)
#endif
    for (int i = 0; i < count; ++i) {
      chunk[static_cast<std::size_t>(i)] =
          run_trial(s, pbm, snr_db, static_cast<std::uint64_t>(base + i));
    }
    // Ordered reduction; identical for any worker count.
    for (int i = 0; i < count; ++i) {
      const TrialResult& t = chunk[static_cast<std::size_t>(i)];
      if (iter_errors.size() < t.per_iteration_errors.size())
        iter_errors.resize(t.per_iteration_errors.size(), 0);
      for (std::size_t k = 0; k < t.per_iteration_errors.size(); ++k)
        iter_errors[k] += t.per_iteration_errors[k];
      final_errors += t.per_iteration_errors.back();
      ++trials_done;
    }
    if (final_errors >= s.min_error_events) break;
  }

  BerRecord rec;
  rec.snr_db = snr_db;
  rec.mode = s.mode;
  rec.bits_simulated = trials_done * pixels;
  rec.bit_errors = final_errors;
  rec.ber = rec.bits_simulated > 0
                ? static_cast<double>(final_errors) / static_cast<double>(rec.bits_simulated)
                : 0.0;
  rec.per_iteration_errors = iter_errors;
  for (std::int64_t e : iter_errors)
    rec.per_iteration_ber.push_back(static_cast<double>(e) / static_cast<double>(rec.bits_simulated));
  rec.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rec;
}

std::vector<BerRecord> run_sweep_impl(const Scenario& s) {
  if (s.snr_grid_db.empty()) throw std::invalid_argument("Scenario: empty SNR grid");
  if (s.trials < 1) throw std::invalid_argument("Scenario: trials must be >= 1");

  Scenario scenario = s;
  BinaryImage pbm;
  const BinaryImage* pbm_ptr = nullptr;
  if (s.source_kind == SourceKind::PbmFile) {
    pbm = load_pbm(s.pbm_path);
    scenario.rows = pbm.rows();  // the image dictates the dimensions
    scenario.cols = pbm.cols();
    pbm_ptr = &pbm;
  }

  std::vector<BerRecord> records;
  for (double snr : scenario.snr_grid_db) records.push_back(run_point(scenario, pbm_ptr, snr));
  return records;
}

}  // namespace

const char* mode_name(Mode mode) {
  switch (mode) {
    case Mode::Concatenated: return "concatenated";
    case Mode::IsiOnly: return "isi-only";
    case Mode::GgAlone: return "gg-alone";
    case Mode::MrfBscAwgn: return "mrf-bsc-awgn";
  }
  return "unknown";
}

Mode mode_from_name(const std::string& name) {
  if (name == "concatenated") return Mode::Concatenated;
  if (name == "isi-only") return Mode::IsiOnly;
  if (name == "gg-alone") return Mode::GgAlone;
  if (name == "mrf-bsc-awgn") return Mode::MrfBscAwgn;
  throw std::invalid_argument("unknown mode '" + name + "'");
}

std::vector<BerRecord> run_ber_sweep(const Scenario& scenario) {
  if (scenario.mode == Mode::MrfBscAwgn)
    throw std::invalid_argument("run_ber_sweep: use run_bsc_awgn for mrf-bsc-awgn mode");
  return run_sweep_impl(scenario);
}

std::vector<BerRecord> run_bsc_awgn(const Scenario& scenario) {
  if (scenario.mode != Mode::MrfBscAwgn)
    throw std::invalid_argument("run_bsc_awgn: scenario mode must be mrf-bsc-awgn");
  return run_sweep_impl(scenario);
}

std::vector<BerRecord> run_scenario(const Scenario& scenario) {
  return scenario.mode == Mode::MrfBscAwgn ? run_bsc_awgn(scenario) : run_ber_sweep(scenario);
}

void write_csv(std::ostream& out, const Scenario& scenario, const std::vector<BerRecord>& records,
               bool include_timing) {
  out << "snr_db,mode,beta_true,beta_assumed,p0,iter,bits,errors,ber,seconds\n";
  char buf[64];
  for (const BerRecord& rec : records) {
    for (std::size_t k = 0; k < rec.per_iteration_errors.size(); ++k) {
      out << rec.snr_db << ',' << mode_name(rec.mode) << ',' << scenario.true_params.beta << ','
          << scenario.assumed_params.beta << ',' << scenario.true_params.p0 << ',' << (k + 1) << ','
          << rec.bits_simulated << ',' << rec.per_iteration_errors[k] << ',';
      std::snprintf(buf, sizeof buf, "%.9g", rec.per_iteration_ber[k]);
      out << buf << ',';
      std::snprintf(buf, sizeof buf, "%.3f", include_timing ? rec.wall_seconds : 0.0);
      out << buf << '\n';
    }
  }
}

void write_csv_file(const std::string& path, const Scenario& scenario,
                    const std::vector<BerRecord>& records, bool include_timing) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_csv_file: cannot open '" + path + "'");
  write_csv(out, scenario, records, include_timing);
}

}  // namespace mrf2d
