#pragma once

// No-signaling verifier: does the sender's detector setting change anything
// the receiver can measure? Distances are computed exactly on the explicit
// joint state; the reduced state with detectors on is built by a second,
// independent route (outcome-weighted mixture of post-measurement states).

#include <cmath>
#include <cstddef>
#include <numbers>
#include <span>
#include <stdexcept>
#include <vector>

#include "belltel/device.hpp"
#include "belltel/protocol.hpp"
#include "belltel/quantum.hpp"

namespace belltel {

inline constexpr double kNoSignalDistanceThreshold = 1e-10;
inline constexpr double kNoSignalMutualInfoThreshold = 0.01;

enum class Verdict { pass, fail };
inline std::string_view to_string(Verdict v) { return v == Verdict::pass ? "pass" : "fail"; }

struct NoSignalReport {
  ModelMode mode = ModelMode::unitary_qm;
  double tolerance = kNoSignalDistanceThreshold;
  double tv_distance = 0.0;             // screen marginals, detectors on vs off
  double trace_distance_reduced = 0.0;  // reduced screen states, on vs off
  double mutual_information_bits = 0.0; // one hit vs a uniform detector bit
  Verdict verdict = Verdict::fail;
};

/// Which-path basis {|1>}, {|2>} or eraser basis (|1> +- |2>)/sqrt 2 on the idler.
enum class IdlerBasis { which_path, eraser };

inline MeasurementBasis idler_basis(std::size_t bins, IdlerBasis kind) {
  const Bipartition layout{2, bins};
  if (kind == IdlerBasis::which_path)
    return MeasurementBasis::computational(layout, Factor::first, {{0}, {1}});
  const double r = 1.0 / std::numbers::sqrt2;
  Eigen::MatrixXcd plus(2, 1), minus(2, 1);
  plus << r, r;
  minus << r, -r;
  return MeasurementBasis(layout, Factor::first, {{"+", plus}, {"-", minus}});
}

/// Route (a): trace out the idler of the untouched joint state.
inline DensityMatrix reduced_screen_state(const DeviceConfig& cfg) {
  const auto joint = build_joint_state(cfg);
  return partial_trace(density_from_state(joint), joint.layout(), Factor::second);
}

/// Route (b): measure the idler, then mix the normalized post-measurement
/// screen states with their Born weights.
inline DensityMatrix measured_screen_mixture(const DeviceConfig& cfg, IdlerBasis kind) {
  const auto joint = build_joint_state(cfg);
  const auto basis = idler_basis(cfg.bins, kind);
  const auto probs = born_probabilities(joint, basis);
  const auto n = static_cast<Eigen::Index>(cfg.bins);
  Eigen::MatrixXcd mix = Eigen::MatrixXcd::Zero(n, n);
  for (std::size_t k = 0; k < basis.size(); ++k) {
    if (probs[k] <= 0.0) continue;
    const Eigen::VectorXcd post = basis.project(joint.amplitudes(), k) / std::sqrt(probs[k]);
    // The idler is now in a definite state, so the screen part is the
    // sum over idler components.
    const Eigen::MatrixXcd span = basis.outcomes()[k].span;
    Eigen::VectorXcd screen = Eigen::VectorXcd::Zero(n);
    for (Eigen::Index i = 0; i < 2; ++i) screen += std::conj(span(i, 0)) * post.segment(i * n, n);
    mix += probs[k] * screen * screen.adjoint();
  }
  return DensityMatrix(std::move(mix));
}

/// Screen-factor reduced state the receiver faces for a detector setting.
/// Under naive collapse with detectors off the screen photon is taken to be
/// in the pure superposition (psi_1 + psi_2) / |psi_1 + psi_2|.
inline DensityMatrix screen_state(const DeviceConfig& cfg, DetectorState det, ModelMode mode) {
  if (det == DetectorState::on) return measured_screen_mixture(cfg, IdlerBasis::which_path);
  if (mode == ModelMode::unitary_qm) return reduced_screen_state(cfg);
  const auto s = screen_wavefunctions(cfg);
  const Eigen::VectorXcd v = (s.psi1 + s.psi2).normalized();
  return DensityMatrix::pure(v);
}

/// Conditional screen distribution for each idler outcome and its probability.
struct ConditionalScreen {
  std::vector<double> outcome_probability;
  std::vector<std::vector<double>> screen;
};

inline ConditionalScreen conditional_screens(const DeviceConfig& cfg, IdlerBasis kind) {
  const auto joint = build_joint_state(cfg);
  const auto basis = idler_basis(cfg.bins, kind);
  ConditionalScreen c;
  c.outcome_probability = born_probabilities(joint, basis);
  const auto n = static_cast<Eigen::Index>(cfg.bins);
  for (std::size_t k = 0; k < basis.size(); ++k) {
    const Eigen::VectorXcd post = basis.project(joint.amplitudes(), k);
    std::vector<double> p(cfg.bins, 0.0);
    for (Eigen::Index i = 0; i < 2; ++i)
      for (Eigen::Index j = 0; j < n; ++j) p[static_cast<std::size_t>(j)] += std::norm(post(i * n + j));
    for (double& q : p) q /= c.outcome_probability[k];
    c.screen.push_back(std::move(p));
  }
  return c;
}

namespace detail {
inline double entropy_bits(std::span<const double> p) {
  double h = 0.0;
  for (double q : p)
    if (q > 0.0) h -= q * std::log2(q);
  return h;
}
}  // namespace detail

/// I(bit; x) for a uniform bit choosing between two hit distributions.
inline double single_hit_mutual_information(const ScreenDistribution& a, const ScreenDistribution& b) {
  std::vector<double> mix(a.size());
  for (std::size_t j = 0; j < a.size(); ++j) mix[j] = 0.5 * a[j] + 0.5 * b[j];
  const double mi = detail::entropy_bits(mix) - 0.5 * detail::entropy_bits(a.probabilities()) -
                    0.5 * detail::entropy_bits(b.probabilities());
  return std::max(0.0, mi);
}

/// Distances between what the receiver sees with detectors on and off.
/// Passes iff all three measures are strictly below tolerance.
inline NoSignalReport verify_no_signaling(const DeviceConfig& cfg, ModelMode mode,
                                          double tolerance = kNoSignalDistanceThreshold) {
  if (!(tolerance > 0.0)) throw std::invalid_argument("tolerance must be > 0");
  cfg.validate();
  NoSignalReport r;
  r.mode = mode;
  r.tolerance = tolerance;
  const auto p_on = screen_marginal(cfg, DetectorState::on, mode);
  const auto p_off = screen_marginal(cfg, DetectorState::off, mode);
  r.tv_distance = total_variation(p_on, p_off);
  r.trace_distance_reduced = trace_distance(screen_state(cfg, DetectorState::on, mode),
                                            screen_state(cfg, DetectorState::off, mode));
  r.mutual_information_bits = single_hit_mutual_information(p_on, p_off);
  const bool ok = r.tv_distance < tolerance && r.trace_distance_reduced < tolerance &&
                  r.mutual_information_bits < tolerance;
  r.verdict = ok ? Verdict::pass : Verdict::fail;
  return r;
}

/// max_j |(p_plus + p_minus)/2 - p_incoherent|.
inline double eraser_decomposition_residual(std::span<const double> plus,
                                            std::span<const double> minus,
                                            std::span<const double> incoherent) {
  if (plus.size() != incoherent.size() || minus.size() != incoherent.size())
    throw std::invalid_argument("eraser residual: size mismatch");
  double worst = 0.0;
  for (std::size_t j = 0; j < incoherent.size(); ++j)
    worst = std::max(worst, std::abs(0.5 * (plus[j] + minus[j]) - incoherent[j]));
  return worst;
}

inline double eraser_decomposition_check(const DeviceConfig& cfg) {
  const auto e = eraser_conditionals(cfg);
  return eraser_decomposition_residual(e.plus.probabilities(), e.minus.probabilities(),
                                       incoherent_distribution(cfg).probabilities());
}

/// Plug-in mutual information (bits) of paired binary samples, no bias
/// correction.
inline double plug_in_mutual_information(std::span<const int> sent, std::span<const int> received) {
  if (sent.size() != received.size()) throw std::invalid_argument("sample size mismatch");
  if (sent.empty()) throw std::invalid_argument("mutual information needs at least one sample");
  double joint[2][2] = {{0, 0}, {0, 0}};
  for (std::size_t i = 0; i < sent.size(); ++i) joint[sent[i] != 0][received[i] != 0] += 1.0;
  const auto k = static_cast<double>(sent.size());
  double mi = 0.0;
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) {
      if (joint[a][b] == 0.0) continue;
      const double pa = (joint[a][0] + joint[a][1]) / k;
      const double pb = (joint[0][b] + joint[1][b]) / k;
      const double pab = joint[a][b] / k;
      mi += pab * std::log2(pab / (pa * pb));
    }
  return std::max(0.0, mi);
}

struct ChannelEstimate {
  double mutual_information_bits = 0.0;
  double symbol_error_rate = 0.0;
  std::size_t symbols = 0;
};

/// Sends K uniform random bits and estimates the channel's information rate.
inline ChannelEstimate channel_estimate(ModelMode mode, const TransmissionPlan& plan, std::size_t symbols,
                                        const DeviceConfig& cfg, const Rng& rng, unsigned threads = 1) {
  if (symbols == 0) throw std::invalid_argument("channel estimate needs K >= 1 symbols");
  const auto bits = random_bits(symbols, rng);
  const auto tx = transmit_message(bits, plan, mode, cfg, rng, {threads, false});
  return {plug_in_mutual_information(bits, tx.received), tx.symbol_error_rate(), symbols};
}

inline double channel_mutual_information(ModelMode mode, const TransmissionPlan& plan,
                                         std::size_t symbols, const DeviceConfig& cfg,
                                         const Rng& rng, unsigned threads = 1) {
  return channel_estimate(mode, plan, symbols, cfg, rng, threads).mutual_information_bits;
}

}  // namespace belltel
