#pragma once

// Two-pipe interference device: photon wavefunctions on a discretized screen,
// the pipe-entangled joint state, and the reference screen distributions.

#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "belltel/quantum.hpp"

namespace belltel {

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Dimensionless screen geometry. Positions are in the same units as
/// envelope_width; x_max is a multiple of envelope_width.
struct DeviceConfig {
  double kappa = std::numbers::pi;
  double envelope_width = 2.0;
  double x_max = 7.0;
  std::size_t bins = 256;
  double relative_phase = 0.0;

  void validate() const {
    if (!(kappa > 0.0) || !std::isfinite(kappa)) throw ConfigError("kappa must be > 0");
    if (!(envelope_width > 0.0) || !std::isfinite(envelope_width))
      throw ConfigError("envelope_width must be > 0");
    if (!(x_max > 0.0) || !std::isfinite(x_max)) throw ConfigError("x_max must be > 0");
    if (bins < 2) throw ConfigError("bins must be >= 2");
    if (!std::isfinite(relative_phase)) throw ConfigError("relative_phase must be finite");
  }

  [[nodiscard]] double half_width() const noexcept { return x_max * envelope_width; }
  [[nodiscard]] double bin_width() const noexcept {
    return 2.0 * half_width() / static_cast<double>(bins);
  }
  [[nodiscard]] double bin_center(std::size_t j) const noexcept {
    return -half_width() + (static_cast<double>(j) + 0.5) * bin_width();
  }
  [[nodiscard]] std::vector<double> bin_centers() const {
    std::vector<double> x(bins);
    for (std::size_t j = 0; j < bins; ++j) x[j] = bin_center(j);
    return x;
  }
  /// Bin containing x; positions outside the screen are an error.
  [[nodiscard]] std::size_t bin_of(double x) const {
    const double h = half_width();
    if (!(x >= -h && x <= h)) throw std::out_of_range("screen position outside grid");
    const auto j = static_cast<std::size_t>(std::floor((x + h) / bin_width()));
    return j < bins ? j : bins - 1;
  }
};

/// Probability vector over screen bins.
class ScreenDistribution {
 public:
  explicit ScreenDistribution(std::vector<double> p) : p_(std::move(p)) {
    if (p_.empty()) throw std::invalid_argument("screen distribution is empty");
    double sum = 0.0;
    for (double q : p_) {
      if (!(q >= 0.0)) throw std::invalid_argument("screen distribution has a negative entry");
      sum += q;
    }
    if (std::abs(sum - 1.0) > kLinalgTol)
      throw std::invalid_argument("screen distribution sums to " + std::to_string(sum));
  }

  static ScreenDistribution from_weights(std::vector<double> w) {
    double sum = 0.0;
    for (double q : w) sum += q;
    if (!(sum > 0.0)) throw std::invalid_argument("screen weights sum to zero");
    for (double& q : w) q /= sum;
    return ScreenDistribution(std::move(w));
  }

  [[nodiscard]] const std::vector<double>& probabilities() const noexcept { return p_; }
  [[nodiscard]] std::size_t size() const noexcept { return p_.size(); }
  [[nodiscard]] double operator[](std::size_t j) const { return p_[j]; }

  friend bool operator==(const ScreenDistribution&, const ScreenDistribution&) = default;

 private:
  std::vector<double> p_;
};

inline double total_variation(const ScreenDistribution& a, const ScreenDistribution& b) {
  if (a.size() != b.size()) throw std::invalid_argument("total_variation: size mismatch");
  double s = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) s += std::abs(a[j] - b[j]);
  return 0.5 * s;
}

/// Photon amplitude at the screen from pipe 1 or 2 (unnormalized):
/// G(x) exp(i (s_k kappa x + delta_k)), s = +1/-1, delta = 0/relative_phase.
inline cplx pipe_amplitude(const DeviceConfig& cfg, int pipe, double x) {
  if (pipe != 1 && pipe != 2)
    throw std::invalid_argument("pipe index must be 1 or 2, got " + std::to_string(pipe));
  const double w = cfg.envelope_width;
  const double envelope = std::exp(-x * x / (4.0 * w * w));
  const double phase = pipe == 1 ? cfg.kappa * x : -cfg.kappa * x + cfg.relative_phase;
  return std::polar(envelope, phase);
}

/// Bin-center samples of psi_1, psi_2 with the common normalization that
/// makes each a unit vector.
struct ScreenWavefunctions {
  Eigen::VectorXcd psi1;
  Eigen::VectorXcd psi2;
};

inline ScreenWavefunctions screen_wavefunctions(const DeviceConfig& cfg) {
  cfg.validate();
  const auto n = static_cast<Eigen::Index>(cfg.bins);
  ScreenWavefunctions s{Eigen::VectorXcd(n), Eigen::VectorXcd(n)};
  for (Eigen::Index j = 0; j < n; ++j) {
    const double x = cfg.bin_center(static_cast<std::size_t>(j));
    s.psi1(j) = pipe_amplitude(cfg, 1, x);
    s.psi2(j) = pipe_amplitude(cfg, 2, x);
  }
  const double norm = s.psi1.norm();
  s.psi1 /= norm;
  s.psi2 /= norm;
  return s;
}

/// (1/sqrt 2) sum_k |k>_idler (x) |psi_k>_screen, layout {2, bins}.
inline StateVector build_joint_state(const DeviceConfig& cfg) {
  const auto s = screen_wavefunctions(cfg);
  const auto n = static_cast<Eigen::Index>(cfg.bins);
  std::vector<BasisLabel> labels;
  labels.reserve(2 * cfg.bins);
  Eigen::VectorXcd amps(2 * n);
  const double r = 1.0 / std::numbers::sqrt2;
  for (int pipe = 1; pipe <= 2; ++pipe)
    for (Eigen::Index j = 0; j < n; ++j) {
      labels.emplace_back(PipeBin{pipe, static_cast<std::size_t>(j)});
      amps((pipe - 1) * n + j) = r * (pipe == 1 ? s.psi1(j) : s.psi2(j));
    }
  return normalize(StateVector(std::move(labels), std::move(amps), Bipartition{2, cfg.bins}));
}

namespace detail {

/// |a + sign*b|^2, flushed to exactly zero when the sum is at the level of
/// round-off in the phases (of magnitude up to `phase`). Ideal
/// destructive-interference nodes then carry probability 0 rather than ~1e-33.
inline double interference_intensity(cplx a, cplx b, double sign, double phase) {
  const cplx s = a + sign * b;
  const double scale = std::abs(a) + std::abs(b);
  const double noise = 4.0 * std::numeric_limits<double>::epsilon() * (1.0 + phase) * scale;
  if (std::abs(s) <= noise) return 0.0;
  return std::norm(s);
}

inline ScreenDistribution interference_pattern(const DeviceConfig& cfg, double sign) {
  const auto s = screen_wavefunctions(cfg);
  std::vector<double> w(cfg.bins);
  for (std::size_t j = 0; j < cfg.bins; ++j) {
    const auto i = static_cast<Eigen::Index>(j);
    const double phase = std::abs(cfg.kappa * cfg.bin_center(j)) + std::abs(cfg.relative_phase);
    w[j] = interference_intensity(s.psi1(i), s.psi2(i), sign, phase);
  }
  return ScreenDistribution::from_weights(std::move(w));
}

}  // namespace detail

/// p_c ~ |psi_1 + psi_2|^2: the pattern with no which-path marker.
inline ScreenDistribution coherent_distribution(const DeviceConfig& cfg) {
  return detail::interference_pattern(cfg, +1.0);
}

/// p_i ~ (|psi_1|^2 + |psi_2|^2) / 2: the pattern with which-path information.
inline ScreenDistribution incoherent_distribution(const DeviceConfig& cfg) {
  const auto s = screen_wavefunctions(cfg);
  std::vector<double> w(cfg.bins);
  for (std::size_t j = 0; j < cfg.bins; ++j) {
    const auto i = static_cast<Eigen::Index>(j);
    w[j] = 0.5 * (std::norm(s.psi1(i)) + std::norm(s.psi2(i)));
  }
  return ScreenDistribution::from_weights(std::move(w));
}

struct EraserConditionals {
  ScreenDistribution plus;
  ScreenDistribution minus;
  double prob_plus = 0.5;
  double prob_minus = 0.5;
};

/// Screen patterns conditioned on the idler outcome in the (|1> +- |2>)/sqrt 2
/// basis, with the probability of each outcome.
inline EraserConditionals eraser_conditionals(const DeviceConfig& cfg) {
  const auto s = screen_wavefunctions(cfg);
  // P(+-) = ||psi_1 +- psi_2||^2 / 4 for unit psi_k.
  const double overlap = s.psi1.dot(s.psi2).real();
  return {detail::interference_pattern(cfg, +1.0), detail::interference_pattern(cfg, -1.0),
          0.5 * (1.0 + overlap), 0.5 * (1.0 - overlap)};
}

}  // namespace belltel
