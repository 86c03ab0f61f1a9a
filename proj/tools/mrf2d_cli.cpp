// Command-line driver for the 2D-ISI / MRF detection experiments: Monte-Carlo
// BER sweeps, the BSC+AWGN restoration experiment, MRF sample generation, and
// single-image end-to-end detection.

#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "mrf2d/montecarlo.hpp"
#include "mrf2d/pbm.hpp"
#include "mrf2d/rng.hpp"

namespace {

using namespace mrf2d;

struct CommonOptions {
  int rows = 64;
  int cols = 64;
  double beta = -3.0;
  double p0 = 0.5;
  double beta_assumed = 0.0;  // 0 = same as beta
  double p0_assumed = -1.0;   // <0 = same as p0
  int mrf_sweeps = 200;
  int outer_iterations = 5;
  int inner_iterations = 1;
  double weight = 0.5;
  double anneal_c = 3.0;
  int t_max = 300;
  std::uint64_t seed = 1;
  int threads = 0;
  std::string image_path;
};

void add_common(CLI::App* cmd, CommonOptions& opt) {
  cmd->add_option("--rows", opt.rows, "image height")->check(CLI::PositiveNumber);
  cmd->add_option("--cols", opt.cols, "image width")->check(CLI::PositiveNumber);
  cmd->add_option("--beta", opt.beta, "source interaction coefficient");
  cmd->add_option("--p0", opt.p0, "source prior P(pixel = 0)")->check(CLI::Range(1e-9, 1.0 - 1e-9));
  cmd->add_option("--beta-assumed", opt.beta_assumed,
                  "interaction coefficient assumed at the receiver (default: --beta)");
  cmd->add_option("--p0-assumed", opt.p0_assumed, "receiver prior (default: --p0)");
  cmd->add_option("--mrf-sweeps", opt.mrf_sweeps, "exchange-dynamics sweeps for source generation");
  cmd->add_option("--outer-iterations", opt.outer_iterations, "outer turbo iterations");
  cmd->add_option("--inner-iterations", opt.inner_iterations, "row+column rounds per outer iteration");
  cmd->add_option("-w,--weight", opt.weight, "LLR exchange weight")->check(CLI::Range(1e-9, 1.0));
  cmd->add_option("--anneal-c", opt.anneal_c, "annealing constant C");
  cmd->add_option("--t-max", opt.t_max, "annealing sweeps");
  cmd->add_option("--seed", opt.seed, "master seed")->capture_default_str();
  cmd->add_option("--threads", opt.threads, "worker threads (0 = library default)");
  cmd->add_option("--image", opt.image_path, "PBM source image instead of a generated MRF");
  cmd->set_config("--config", "", "key=value configuration file; flags override");
}

Scenario scenario_from(const CommonOptions& opt) {
  Scenario s;
  s.rows = opt.rows;
  s.cols = opt.cols;
  s.true_params = make_ising_params(opt.p0, opt.beta);
  const double beta_assumed = opt.beta_assumed != 0.0 ? opt.beta_assumed : opt.beta;
  const double p0_assumed = opt.p0_assumed > 0.0 ? opt.p0_assumed : opt.p0;
  s.assumed_params = make_ising_params(p0_assumed, beta_assumed);
  s.mrf_sweeps = opt.mrf_sweeps;
  s.system.outer_iterations = opt.outer_iterations;
  s.system.inner_isi_iterations = opt.inner_iterations;
  s.system.siso.weight = opt.weight;
  s.system.schedule.C = opt.anneal_c;
  s.system.schedule.t_max = opt.t_max;
  s.master_seed = opt.seed;
  s.threads = opt.threads;
  if (!opt.image_path.empty()) {
    s.source_kind = SourceKind::PbmFile;
    s.pbm_path = opt.image_path;
    const BinaryImage image = load_pbm(opt.image_path);
    s.rows = image.rows();
    s.cols = image.cols();
  }
  return s;
}

void print_records(const Scenario& s, const std::vector<BerRecord>& records) {
  for (const BerRecord& rec : records) {
    std::printf("snr %6.2f dB  mode %-12s  bits %10lld  errors %8lld  ber %.6g  (%.1fs)\n",
                rec.snr_db, mode_name(rec.mode), static_cast<long long>(rec.bits_simulated),
                static_cast<long long>(rec.bit_errors), rec.ber, rec.wall_seconds);
  }
  (void)s;
}

int run_sweep_command(const CommonOptions& opt, const std::vector<double>& snrs, int trials,
                      std::int64_t min_errors, const std::string& mode_str, const std::string& csv,
                      double bsc_p) {
  Scenario s = scenario_from(opt);
  s.snr_grid_db = snrs;
  s.trials = trials;
  s.min_error_events = min_errors > 0 ? min_errors : std::numeric_limits<std::int64_t>::max();
  s.mode = mode_from_name(mode_str);
  s.bsc_p = bsc_p;
  const auto records = run_scenario(s);
  print_records(s, records);
  if (!csv.empty()) {
    write_csv_file(csv, s, records);
    std::fprintf(stderr, "wrote %s\n", csv.c_str());
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"2D-ISI storage channel simulator: concatenated IRCSDFA + MRF detection"};
  app.require_subcommand(1);

  CommonOptions opt;

  auto* sweep = app.add_subcommand("sweep", "Monte-Carlo BER sweep over an SNR grid");
  std::vector<double> snrs;
  int trials = 500;
  std::int64_t min_errors = 100;
  std::string mode_str = "concatenated";
  std::string csv;
  add_common(sweep, opt);
  sweep->add_option("--snr", snrs, "SNR grid in dB")->required()->expected(-1);
  sweep->add_option("--trials", trials, "maximum trials per SNR point");
  sweep->add_option("--min-errors", min_errors, "stop a point after this many error events (0 = never)");
  sweep->add_option("--mode", mode_str, "concatenated | isi-only | gg-alone")
      ->check(CLI::IsMember({"concatenated", "isi-only", "gg-alone"}));
  sweep->add_option("--csv", csv, "CSV output path");

  auto* bsc = app.add_subcommand("bsc", "MRF -> BSC(p) -> AWGN -> MRF MAP estimator experiment");
  std::vector<double> bsc_snrs;
  double bsc_p = 0.05;
  int bsc_trials = 100;
  std::string bsc_csv;
  add_common(bsc, opt);
  bsc->add_option("--snr", bsc_snrs, "AWGN SNR grid in dB")->required()->expected(-1);
  bsc->add_option("-p,--crossover", bsc_p, "BSC crossover probability")->check(CLI::Range(0.0, 1.0));
  bsc->add_option("--trials", bsc_trials, "trials per SNR point");
  bsc->add_option("--csv", bsc_csv, "CSV output path");

  auto* generate = app.add_subcommand("generate", "draw an MRF sample and write it as PBM");
  std::string out_path;
  bool ascii = false;
  add_common(generate, opt);
  generate->add_option("--out", out_path, "output PBM path")->required();
  generate->add_flag("--ascii", ascii, "write P1 (ASCII) instead of P4");

  auto* detect_cmd = app.add_subcommand("detect", "run one image end-to-end and report the BER");
  double snr = 14.0;
  std::string est_path;
  std::string detect_mode = "concatenated";
  add_common(detect_cmd, opt);
  detect_cmd->add_option("--snr", snr, "channel SNR in dB");
  detect_cmd->add_option("--mode", detect_mode, "concatenated | isi-only")
      ->check(CLI::IsMember({"concatenated", "isi-only"}));
  detect_cmd->add_option("--out", est_path, "write the final estimate as PBM");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    if (sweep->parsed())
      return run_sweep_command(opt, snrs, trials, min_errors, mode_str, csv, 0.0);

    if (bsc->parsed()) {
      CommonOptions o = opt;
      return run_sweep_command(o, bsc_snrs, bsc_trials, 0, "mrf-bsc-awgn", bsc_csv, bsc_p);
    }

    if (generate->parsed()) {
      auto rng = make_rng(opt.seed, Stream::Source);
      const BinaryImage image =
          generate_mrf(opt.rows, opt.cols, make_ising_params(opt.p0, opt.beta), opt.mrf_sweeps, rng);
      save_pbm(image, out_path, !ascii);
      std::printf("wrote %dx%d MRF sample (beta %.2f, p0 %.2f) to %s\n", opt.rows, opt.cols,
                  opt.beta, opt.p0, out_path.c_str());
      return 0;
    }

    if (detect_cmd->parsed()) {
      Scenario s = scenario_from(opt);
      s.snr_grid_db = {snr};

      BinaryImage source;
      if (s.source_kind == SourceKind::PbmFile) {
        source = load_pbm(s.pbm_path);
      } else {
        auto rng = make_rng(s.master_seed, Stream::Source);
        source = generate_mrf(s.rows, s.cols, s.true_params, s.mrf_sweeps, rng);
      }

      const Permutation perm =
          make_interleaver(source.rows(), source.cols(), derive_seed(s.master_seed, Stream::Interleaver, 0));
      const RealPlane filtered = convolve2d(level_shift(interleave(source, perm)), s.system.mask);
      const double sigma = sigma_for_snr(snr, filtered);
      auto noise = make_rng(s.master_seed, Stream::Noise, 0);
      const RealPlane received = add_awgn(filtered, sigma, noise);

      SystemConfig cfg = s.system;
      cfg.ising = s.assumed_params;
      cfg.siso.p0 = s.assumed_params.p0;
      cfg.siso.p1 = s.assumed_params.p1;
      cfg.siso.sigma_w = sigma;
      cfg.interleaver_seed = derive_seed(s.master_seed, Stream::Interleaver, 0);
      cfg.master_seed = derive_seed(s.master_seed, Stream::Relaxation, 0);

      const DetectionTrace trace = detect_mode == "concatenated"
                                       ? detect(received, cfg, &source)
                                       : detect_isi_only(received, cfg, &source);
      for (std::size_t k = 0; k < trace.iterations.size(); ++k) {
        std::printf("iteration %zu: %lld bit errors (ber %.6g)\n", k + 1,
                    static_cast<long long>(trace.iterations[k].bit_errors),
                    trace.iterations[k].ber);
      }
      if (!est_path.empty()) save_pbm(trace.estimate, est_path);
      return 0;
    }
  } catch (const PbmParseError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 1;
}
