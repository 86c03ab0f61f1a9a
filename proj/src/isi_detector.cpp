#include "mrf2d/isi_detector.hpp"

#include <cassert>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "mrf2d/math_util.hpp"

namespace mrf2d {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double logsumexp(const double* terms, int count) {
  double mx = kNegInf;
  for (int i = 0; i < count; ++i) mx = std::max(mx, terms[i]);
  if (mx == kNegInf) return kNegInf;
  double acc = 0.0;
  for (int i = 0; i < count; ++i) acc += std::exp(terms[i] - mx);
  return mx + std::log(acc);
}

// Candidate values and log-probabilities of one feedback pixel: either the
// known zero-padding symbol or {-1,+1} weighted by the sigmoid of its LLR.
struct FeedbackPixel {
  double value[2];
  double logp[2];
  int count;
};

FeedbackPixel known_padding_pixel() { return {{0.0, 0.0}, {0.0, 0.0}, 1}; }

FeedbackPixel soft_pixel(double llr) {
  FeedbackPixel p;
  p.count = 2;
  p.value[0] = 1.0;
  p.logp[0] = log_sigmoid(llr);
  p.value[1] = -1.0;
  p.logp[1] = log_sigmoid(-llr);
  return p;
}

// Workspace for one image so the per-line buffers are allocated once.
struct Bcjr {
  std::vector<double> gamma;   // N sections x 64 branches
  std::vector<double> alpha;   // (N+1) x 8
  std::vector<double> totals;  // N decided-line LLRs

  // BCJR over the trellis of decided line `m` of an M x N plane. The state at
  // section n holds the three pixels of column n-1 in lines m..m+2; the input
  // holds column n; the next state equals the input. `fb` points at the N
  // total LLRs of line m-1 from the current sweep, or is null for line 0.
  void line_pass(const RealPlane& r, int m, const RealPlane& prior, const double* fb,
                 const Mask2D& mask, double sigma_w, double p0, double p1) {
    const int M = r.rows(), N = r.cols();
    const double inv2sig = 1.0 / (2.0 * sigma_w * sigma_w);
    const double h00 = mask.coeff_or_zero(0, 0), h01 = mask.coeff_or_zero(0, 1);
    const double h10 = mask.coeff_or_zero(1, 0), h11 = mask.coeff_or_zero(1, 1);
    const double lp[2] = {std::log(p0), std::log(p1)};
    const bool act[3] = {true, m + 1 < M, m + 2 < M};

    gamma.assign(static_cast<std::size_t>(N) * 64, 0.0);
    alpha.assign(static_cast<std::size_t>(N + 1) * 8, 0.0);
    totals.assign(static_cast<std::size_t>(N), 0.0);

    // Forward sweep, building the per-section branch tables as we go.
    alpha[0] = 1.0;  // known all-padding state left of column 0
    for (int n = 0; n < N; ++n) {
      double* g = &gamma[static_cast<std::size_t>(n) * 64];

      // Bipolar symbol values of input and state bits; pinned lines and the
      // padding column contribute 0.
      double usym[3][2], ssym[3][2];
      for (int j = 0; j < 3; ++j) {
        for (int b = 0; b < 2; ++b) {
          usym[j][b] = act[j] ? (b ? 1.0 : -1.0) : 0.0;
          ssym[j][b] = (n >= 1 && act[j]) ? (b ? 1.0 : -1.0) : 0.0;
        }
      }

      const FeedbackPixel fa = (fb != nullptr && n >= 1) ? soft_pixel(fb[n - 1]) : known_padding_pixel();
      const FeedbackPixel fbk = (fb != nullptr) ? soft_pixel(fb[n]) : known_padding_pixel();

      // Inner product 1 covers r(m,n) and marginalizes the feedback pixels.
      const double r0 = r(m, n);
      double t1[4];
      for (int s0 = 0; s0 < 2; ++s0) {
        for (int u0 = 0; u0 < 2; ++u0) {
          const double base = h00 * usym[0][u0] + h01 * ssym[0][s0];
          double terms[4];
          int k = 0;
          for (int ia = 0; ia < fa.count; ++ia) {
            for (int ib = 0; ib < fbk.count; ++ib) {
              const double d = r0 - (base + h10 * fbk.value[ib] + h11 * fa.value[ia]);
              terms[k++] = fa.logp[ia] + fbk.logp[ib] - d * d * inv2sig;
            }
          }
          t1[s0 | (u0 << 1)] = logsumexp(terms, k);
        }
      }

      // Inner products 2 and 3 cover r(m+1,n) and r(m+2,n) from state/input.
      double t2[16], t3[16];
      for (int s = 0; s < 4; ++s) {
        for (int u = 0; u < 4; ++u) {
          const int idx = s | (u << 2);
          if (act[1]) {
            const double ip = h00 * usym[1][(u >> 1) & 1] + h01 * ssym[1][(s >> 1) & 1] +
                              h10 * usym[0][u & 1] + h11 * ssym[0][s & 1];
            const double d = r(m + 1, n) - ip;
            t2[idx] = -d * d * inv2sig;
          } else {
            t2[idx] = 0.0;
          }
          if (act[2]) {
            const double ip = h00 * usym[2][(u >> 1) & 1] + h01 * ssym[2][(s >> 1) & 1] +
                              h10 * usym[1][u & 1] + h11 * ssym[1][s & 1];
            const double d = r(m + 2, n) - ip;
            t3[idx] = -d * d * inv2sig;
          } else {
            t3[idx] = 0.0;
          }
        }
      }

      // Per-bit prior: pixel prior times the extrinsic probability. Bits of
      // pinned lines are forced to 0.
      double bit_lp[3][2];
      for (int j = 0; j < 3; ++j) {
        if (act[j]) {
          const double ext = prior(m + j, n);
          bit_lp[j][0] = lp[0] + log_sigmoid(-ext);
          bit_lp[j][1] = lp[1] + log_sigmoid(ext);
        } else {
          bit_lp[j][0] = 0.0;
          bit_lp[j][1] = kNegInf;
        }
      }
      double prior_u[8];
      for (int u = 0; u < 8; ++u)
        prior_u[u] = bit_lp[0][u & 1] + bit_lp[1][(u >> 1) & 1] + bit_lp[2][(u >> 2) & 1];

      double lg[64];
      double mx = kNegInf;
      for (int s = 0; s < 8; ++s) {
        for (int u = 0; u < 8; ++u) {
          const double v = t1[(s & 1) | ((u & 1) << 1)] + t2[(s & 3) | ((u & 3) << 2)] +
                           t3[((s >> 1) & 3) | (((u >> 1) & 3) << 2)] + prior_u[u];
          lg[(s << 3) | u] = v;
          mx = std::max(mx, v);
        }
      }
      for (int i = 0; i < 64; ++i) g[i] = (lg[i] == kNegInf) ? 0.0 : std::exp(lg[i] - mx);

      const double* a = &alpha[static_cast<std::size_t>(n) * 8];
      double* a_next = &alpha[static_cast<std::size_t>(n + 1) * 8];
      double sum = 0.0;
      for (int u = 0; u < 8; ++u) {
        double acc = 0.0;
        for (int s = 0; s < 8; ++s) acc += a[s] * g[(s << 3) | u];
        a_next[u] = acc;
        sum += acc;
      }
      if (sum > 0.0) {
        for (int u = 0; u < 8; ++u) a_next[u] /= sum;
      } else {
        for (int u = 0; u < 8; ++u) a_next[u] = 0.125;  // total erasure; restart uniform
      }
      assert(std::abs(std::accumulate(a_next, a_next + 8, 0.0) - 1.0) < 1e-9);
    }

    // Backward sweep with on-the-fly decided-bit posteriors.
    double beta[8], beta_prev[8];
    for (int u = 0; u < 8; ++u) beta[u] = 0.125;
    for (int n = N - 1; n >= 0; --n) {
      const double* g = &gamma[static_cast<std::size_t>(n) * 64];
      const double* a = &alpha[static_cast<std::size_t>(n) * 8];
      double s1 = 0.0, s0 = 0.0;
      for (int s = 0; s < 8; ++s) {
        if (a[s] == 0.0) continue;
        for (int u = 0; u < 8; ++u) {
          const double w = a[s] * g[(s << 3) | u] * beta[u];
          if (u & 1)
            s1 += w;
          else
            s0 += w;
        }
      }
      double llr;
      if (s1 == 0.0)
        llr = -kLlrClamp;
      else if (s0 == 0.0)
        llr = kLlrClamp;
      else
        llr = clamp_llr(std::log(s1) - std::log(s0));
      totals[static_cast<std::size_t>(n)] = llr;

      double sum = 0.0;
      for (int s = 0; s < 8; ++s) {
        double acc = 0.0;
        for (int u = 0; u < 8; ++u) acc += g[(s << 3) | u] * beta[u];
        beta_prev[s] = acc;
        sum += acc;
      }
      if (sum > 0.0) {
        for (int s = 0; s < 8; ++s) beta_prev[s] /= sum;
      } else {
        for (int s = 0; s < 8; ++s) beta_prev[s] = 0.125;
      }
      for (int s = 0; s < 8; ++s) beta[s] = beta_prev[s];
    }
  }
};

void require_finite(const RealPlane& p, const char* what) {
  for (std::int64_t i = 0; i < p.size(); ++i)
    if (!std::isfinite(p[i])) throw std::invalid_argument(std::string(what) + ": non-finite input");
}

void validate_cfg(const SisoConfig& cfg) {
  if (!(cfg.sigma_w > 0.0)) throw std::domain_error("SisoConfig: sigma_w must be positive");
  if (!(cfg.weight > 0.0 && cfg.weight <= 1.0)) throw std::domain_error("SisoConfig: weight must be in (0,1]");
  if (cfg.inner_iterations < 1) throw std::domain_error("SisoConfig: inner_iterations must be >= 1");
}

// Full top-to-bottom sweep deciding every line, feeding each line the fresh
// totals of the line above it.
void full_sweep(Bcjr& bcjr, const RealPlane& r, const RealPlane& prior, const Mask2D& mask,
                const SisoConfig& cfg, RealPlane& totals_out) {
  const int M = r.rows(), N = r.cols();
  for (int m = 0; m < M; ++m) {
    const double* fb = (m > 0) ? &totals_out(m - 1, 0) : nullptr;
    bcjr.line_pass(r, m, prior, fb, mask, cfg.sigma_w, cfg.p0, cfg.p1);
    for (int n = 0; n < N; ++n) totals_out(m, n) = bcjr.totals[static_cast<std::size_t>(n)];
  }
}

}  // namespace

double branch_metric(const std::array<double, 3>& r_vec, const std::array<int, 3>& state_bits,
                     const std::array<int, 3>& input_bits, const FeedbackLLRs& feedback,
                     const Mask2D& mask, double sigma_w) {
  if (!(sigma_w > 0.0)) throw std::domain_error("branch_metric: sigma_w must be positive");
  const double inv2sig = 1.0 / (2.0 * sigma_w * sigma_w);
  const double h00 = mask.coeff_or_zero(0, 0), h01 = mask.coeff_or_zero(0, 1);
  const double h10 = mask.coeff_or_zero(1, 0), h11 = mask.coeff_or_zero(1, 1);
  auto sym = [](int b) { return b ? 1.0 : -1.0; };

  const FeedbackPixel fa = feedback.has_line ? soft_pixel(feedback.omega1) : known_padding_pixel();
  const FeedbackPixel fbk = feedback.has_line ? soft_pixel(feedback.omega2) : known_padding_pixel();
  const double base1 = h00 * sym(input_bits[0]) + h01 * sym(state_bits[0]);
  double terms[4];
  int k = 0;
  for (int ia = 0; ia < fa.count; ++ia) {
    for (int ib = 0; ib < fbk.count; ++ib) {
      const double d = r_vec[0] - (base1 + h10 * fbk.value[ib] + h11 * fa.value[ia]);
      terms[k++] = fa.logp[ia] + fbk.logp[ib] - d * d * inv2sig;
    }
  }
  double lg = logsumexp(terms, k);

  const double d2 = r_vec[1] - (h00 * sym(input_bits[1]) + h01 * sym(state_bits[1]) +
                                h10 * sym(input_bits[0]) + h11 * sym(state_bits[0]));
  const double d3 = r_vec[2] - (h00 * sym(input_bits[2]) + h01 * sym(state_bits[2]) +
                                h10 * sym(input_bits[1]) + h11 * sym(state_bits[1]));
  lg += -(d2 * d2 + d3 * d3) * inv2sig;
  return std::exp(lg);
}

double modified_gamma(double branch_p, const std::array<int, 3>& input_bits,
                      const std::array<int, 3>& next_state_bits,
                      const std::array<double, 3>& extrinsic_llrs, double p0, double p1) {
  if (input_bits != next_state_bits) return 0.0;  // inconsistent transition
  double g = branch_p;
  for (int j = 0; j < 3; ++j) {
    g *= input_bits[j] ? p1 : p0;
    g *= sigmoid(input_bits[j] ? extrinsic_llrs[j] : -extrinsic_llrs[j]);
  }
  return g;
}

std::vector<double> siso_line_pass(const RealPlane& received, int line, Direction direction,
                                   const RealPlane& extrinsic_in,
                                   const std::vector<double>& feedback_llrs, const Mask2D& mask,
                                   const SisoConfig& cfg) {
  validate_cfg(cfg);
  require_finite(received, "siso_line_pass");
  require_finite(extrinsic_in, "siso_line_pass");
  if (!received.same_shape(extrinsic_in)) throw std::invalid_argument("siso_line_pass: size mismatch");

  const RealPlane r = (direction == Direction::Row) ? received : received.transposed();
  const RealPlane prior = (direction == Direction::Row) ? extrinsic_in : extrinsic_in.transposed();
  const Mask2D m = (direction == Direction::Row) ? mask : mask.transposed();
  if (line < 0 || line >= r.rows()) throw std::out_of_range("siso_line_pass: line out of range");
  if (!feedback_llrs.empty() && static_cast<int>(feedback_llrs.size()) != r.cols())
    throw std::invalid_argument("siso_line_pass: feedback length mismatch");
  for (double v : feedback_llrs)
    if (std::isnan(v)) throw std::invalid_argument("siso_line_pass: NaN feedback");

  Bcjr bcjr;
  const double* fb = feedback_llrs.empty() ? nullptr : feedback_llrs.data();
  if (line == 0 && fb != nullptr)
    throw std::invalid_argument("siso_line_pass: line 0 has no previous line");
  bcjr.line_pass(r, line, prior, fb, m, cfg.sigma_w, cfg.p0, cfg.p1);
  return bcjr.totals;
}

RealPlane run_ircsdfa(const RealPlane& received, const RealPlane& extrinsic_in, const Mask2D& mask,
                      const SisoConfig& cfg, std::vector<RealPlane>* round_totals) {
  validate_cfg(cfg);
  require_finite(received, "run_ircsdfa");
  require_finite(extrinsic_in, "run_ircsdfa");
  if (!received.same_shape(extrinsic_in)) throw std::invalid_argument("run_ircsdfa: size mismatch");
  if (mask.rows() > 2 || mask.cols() > 2)
    throw std::invalid_argument("run_ircsdfa: masks larger than 2x2 are not supported");

  const int M = received.rows(), N = received.cols();
  const RealPlane received_t = received.transposed();
  const Mask2D mask_t = mask.transposed();
  const double w = cfg.weight;

  Bcjr bcjr;
  RealPlane x_col(M, N, 0.0);
  RealPlane prior_row(M, N), totals_row(M, N), prior_col(M, N), totals_col(M, N);

  for (int round = 0; round < cfg.inner_iterations; ++round) {
    for (std::int64_t i = 0; i < prior_row.size(); ++i) prior_row[i] = extrinsic_in[i] + w * x_col[i];
    full_sweep(bcjr, received, prior_row, mask, cfg, totals_row);

    for (std::int64_t i = 0; i < prior_col.size(); ++i)
      prior_col[i] = extrinsic_in[i] + w * (totals_row[i] - prior_row[i]);
    RealPlane totals_col_t(N, M);
    full_sweep(bcjr, received_t, prior_col.transposed(), mask_t, cfg, totals_col_t);
    totals_col = totals_col_t.transposed();

    for (std::int64_t i = 0; i < x_col.size(); ++i) x_col[i] = totals_col[i] - prior_col[i];
    if (round_totals != nullptr) round_totals->push_back(totals_col);
  }

  RealPlane extrinsic_out(M, N);
  for (std::int64_t i = 0; i < extrinsic_out.size(); ++i)
    extrinsic_out[i] = clamp_llr(totals_col[i] - extrinsic_in[i]);
  return extrinsic_out;
}

}  // namespace mrf2d
