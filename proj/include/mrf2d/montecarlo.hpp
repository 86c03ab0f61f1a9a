#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "mrf2d/turbo.hpp"

namespace mrf2d {

enum class Mode { Concatenated, IsiOnly, GgAlone, MrfBscAwgn };

const char* mode_name(Mode mode);
Mode mode_from_name(const std::string& name);

enum class SourceKind { GeneratedMrf, PbmFile, Iid };

/// One Monte-Carlo experiment: a source, a channel operating point grid, the
/// detector mode and its configuration.
struct Scenario {
  SourceKind source_kind = SourceKind::GeneratedMrf;
  std::string pbm_path;  // for SourceKind::PbmFile
  int rows = 64;
  int cols = 64;
  IsingParams true_params = make_ising_params(0.5, -3.0);     // source model
  IsingParams assumed_params = make_ising_params(0.5, -3.0);  // receiver model
  int mrf_sweeps = 200;  // exchange-dynamics sweeps for generated sources
  std::vector<double> snr_grid_db;
  int trials = 500;
  std::int64_t min_error_events = 100;  // early stop once reached (final iteration)
  SystemConfig system;
  Mode mode = Mode::Concatenated;
  double bsc_p = 0.05;  // for Mode::MrfBscAwgn
  std::uint64_t master_seed = 1;
  int threads = 0;  // 0 = library default worker count
};

struct BerRecord {
  double snr_db = 0.0;
  Mode mode = Mode::Concatenated;
  std::int64_t bits_simulated = 0;
  std::int64_t bit_errors = 0;  // at the final iteration
  double ber = 0.0;
  std::vector<std::int64_t> per_iteration_errors;
  std::vector<double> per_iteration_ber;
  double wall_seconds = 0.0;
};

/// Runs the sweep for Mode::Concatenated / IsiOnly / GgAlone scenarios: per
/// SNR point, draws sources, pushes them through the channel and the selected
/// detector until the trial budget or the error-event target is reached.
/// Trials are independent (seeded by trial index) and are reduced in trial
/// order, so results do not depend on the worker count.
std::vector<BerRecord> run_ber_sweep(const Scenario& scenario);

/// The MRF-only error-correction experiment: source -> BSC(p) -> AWGN -> MRF
/// MAP estimator (stochastic relaxation with zero extrinsic input).
std::vector<BerRecord> run_bsc_awgn(const Scenario& scenario);

/// CSV emission, schema:
///   snr_db,mode,beta_true,beta_assumed,p0,iter,bits,errors,ber,seconds
/// One row per (SNR point, outer iteration). `include_timing=false` writes 0
/// in the seconds column for byte-stable regression comparisons.
void write_csv(std::ostream& out, const Scenario& scenario, const std::vector<BerRecord>& records,
               bool include_timing = true);
void write_csv_file(const std::string& path, const Scenario& scenario,
                    const std::vector<BerRecord>& records, bool include_timing = true);

/// Convenience dispatcher on scenario.mode.
std::vector<BerRecord> run_scenario(const Scenario& scenario);

}  // namespace mrf2d
