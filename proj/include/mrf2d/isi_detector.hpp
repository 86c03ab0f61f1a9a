#pragma once

#include <array>
#include <vector>

#include "mrf2d/channel.hpp"
#include "mrf2d/plane.hpp"

namespace mrf2d {

/// Configuration of one row/column SISO module.
struct SisoConfig {
  double weight = 0.5;       // attenuation of LLRs exchanged between the SISOs
  double sigma_w = 0.1;      // channel noise std dev (known at the receiver)
  double p0 = 0.5;           // a priori probability of pixel value 0
  double p1 = 0.5;
  int inner_iterations = 1;  // row+column rounds per call
};

/// Soft-decision feedback for one trellis section: LLRs of the two pixels of
/// the previously processed line that overlap inner product 1. Zero LLRs mean
/// an uncertain pixel; has_line == false means the previous line is outside
/// the image and contributes the zero-padding symbol exactly.
struct FeedbackLLRs {
  double omega1 = 0.0;  // pixel (m-1, n-1)
  double omega2 = 0.0;  // pixel (m-1, n)
  bool has_line = false;
};

/// Modified conditional channel likelihood p'(r | state, input, feedback) for
/// one interior trellis branch: the product over the three vertical positions
/// of Gaussian likelihood factors exp(-SED/(2 sigma_w^2)), with the inner
/// product that overlaps the previously decided line marginalized over the two
/// feedback pixels weighted by their LLR probabilities.
/// Bits are on {0,1}; bit b maps to the bipolar symbol 2b-1.
double branch_metric(const std::array<double, 3>& r_vec, const std::array<int, 3>& state_bits,
                     const std::array<int, 3>& input_bits, const FeedbackLLRs& feedback,
                     const Mask2D& mask, double sigma_w);

/// gamma = p' * P(u=i | s,s') * P(s|s') * P(u=i | extrinsic). The transition
/// indicator is 1 iff next_state_bits == input_bits; the state transition
/// probability is the product of the bit priors; the extrinsic factor is the
/// product of logistic probabilities of the incoming LLRs.
double modified_gamma(double branch_p, const std::array<int, 3>& input_bits,
                      const std::array<int, 3>& next_state_bits,
                      const std::array<double, 3>& extrinsic_llrs, double p0, double p1);

enum class Direction { Row, Column };

/// One BCJR pass over the trellis of the given line (rows m..m+2 for a row
/// pass). Returns the total a-posteriori LLRs of the decided line only,
/// clamped to +-50. `feedback_llrs` holds the LLRs of line m-1 from the same
/// sweep (empty for the first line). Lines beyond the image edge are pinned to
/// the zero-padding symbol.
std::vector<double> siso_line_pass(const RealPlane& received, int line, Direction direction,
                                   const RealPlane& extrinsic_in,
                                   const std::vector<double>& feedback_llrs, const Mask2D& mask,
                                   const SisoConfig& cfg);

/// The iterative row-column soft-decision feedback ISI detector. Performs
/// cfg.inner_iterations rounds of {row sweep top-to-bottom, column sweep
/// left-to-right}; the LLR planes exchanged between the two SISOs are
/// attenuated by cfg.weight. `extrinsic_in` is the peer detector's extrinsic
/// output in interleaved pixel order (zeros on the first outer iteration).
/// Returns the extrinsic output = total LLR - extrinsic_in for the peer.
/// If `round_totals` is non-null it receives the total-LLR plane after each
/// inner round.
RealPlane run_ircsdfa(const RealPlane& received, const RealPlane& extrinsic_in, const Mask2D& mask,
                      const SisoConfig& cfg, std::vector<RealPlane>* round_totals = nullptr);

}  // namespace mrf2d
