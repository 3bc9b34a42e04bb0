#pragma once

#include <cmath>
#include <complex>

#include <Eigen/Dense>

#include "belltel/quantum.hpp"
#include "belltel/rng.hpp"

namespace belltel::testing {

/// Random normalized amplitudes with Gaussian real and imaginary parts.
inline Eigen::VectorXcd random_amplitudes(std::size_t n, Rng& rng) {
  Eigen::VectorXcd v(static_cast<Eigen::Index>(n));
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    // Box-Muller on two uniforms.
    const double u1 = 1.0 - rng.uniform();
    const double u2 = rng.uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    v(i) = {r * std::cos(2 * M_PI * u2), r * std::sin(2 * M_PI * u2)};
  }
  return v.normalized();
}

inline StateVector random_state(std::size_t n, Rng& rng) {
  return StateVector::indexed(random_amplitudes(n, rng));
}

/// Random mixed state: weighted sum of `rank` random pure projectors.
inline DensityMatrix random_density(std::size_t n, std::size_t rank, Rng& rng) {
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  double total = 0.0;
  std::vector<double> w(rank);
  for (auto& x : w) total += (x = rng.uniform() + 1e-3);
  for (std::size_t k = 0; k < rank; ++k) {
    const auto v = random_amplitudes(n, rng);
    m += (w[k] / total) * v * v.adjoint();
  }
  m = 0.5 * (m + m.adjoint()).eval();
  m /= m.trace().real();
  return DensityMatrix(m);
}

}  // namespace belltel::testing
