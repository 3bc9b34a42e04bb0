#pragma once

// Finite-dimensional state algebra over bipartite product bases: pure states,
// density matrices, partial trace, Born-rule measurement and trace distance.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "belltel/rng.hpp"

namespace belltel {

using cplx = std::complex<double>;

/// Tolerance ladder: algebraic identities, composed linear algebra,
/// eigenvalue checks.
inline constexpr double kAlgebraTol = 1e-15;
inline constexpr double kLinalgTol = 1e-12;
inline constexpr double kEigenTol = 1e-10;

class QuantumError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Basis label of the idler-pipe x screen-bin product space. Pipes are 1-based.
struct PipeBin {
  int pipe = 1;
  std::size_t bin = 0;
  friend auto operator<=>(const PipeBin&, const PipeBin&) = default;
};

using BasisLabel = std::variant<std::size_t, PipeBin>;

/// Dimensions of a two-factor tensor product; index = i * second + j.
struct Bipartition {
  std::size_t first = 1;
  std::size_t second = 1;

  [[nodiscard]] std::size_t total() const noexcept { return first * second; }
  [[nodiscard]] std::size_t dim(bool first_factor) const noexcept {
    return first_factor ? first : second;
  }
  friend bool operator==(const Bipartition&, const Bipartition&) = default;
};

enum class Factor { first, second };

class StateVector {
 public:
  StateVector(std::vector<BasisLabel> basis, Eigen::VectorXcd amplitudes,
              Bipartition layout)
      : basis_(std::move(basis)), amplitudes_(std::move(amplitudes)), layout_(layout) {
    const auto n = static_cast<std::size_t>(amplitudes_.size());
    if (basis_.size() != n)
      throw QuantumError("state vector: " + std::to_string(basis_.size()) +
                         " labels for " + std::to_string(n) + " amplitudes");
    if (layout_.total() != n)
      throw QuantumError("state vector: layout " + std::to_string(layout_.first) + "x" +
                         std::to_string(layout_.second) + " does not match dimension " +
                         std::to_string(n));
    if (std::set<BasisLabel>(basis_.begin(), basis_.end()).size() != n)
      throw QuantumError("state vector: basis labels are not unique");
  }

  /// Single-factor state labelled 0..n-1.
  static StateVector indexed(Eigen::VectorXcd amplitudes) {
    const auto n = static_cast<std::size_t>(amplitudes.size());
    return StateVector(index_labels(n), std::move(amplitudes), Bipartition{n, 1});
  }

  /// a (x) b, labelled by flat index.
  static StateVector product(const StateVector& a, const StateVector& b) {
    const auto na = a.size();
    const auto nb = b.size();
    Eigen::VectorXcd amps(static_cast<Eigen::Index>(na * nb));
    for (std::size_t i = 0; i < na; ++i)
      for (std::size_t j = 0; j < nb; ++j)
        amps(static_cast<Eigen::Index>(i * nb + j)) =
            a.amplitudes()(static_cast<Eigen::Index>(i)) *
            b.amplitudes()(static_cast<Eigen::Index>(j));
    return StateVector(index_labels(na * nb), std::move(amps), Bipartition{na, nb});
  }

  [[nodiscard]] const std::vector<BasisLabel>& basis() const noexcept { return basis_; }
  [[nodiscard]] const Eigen::VectorXcd& amplitudes() const noexcept { return amplitudes_; }
  [[nodiscard]] Bipartition layout() const noexcept { return layout_; }
  [[nodiscard]] std::size_t size() const noexcept { return basis_.size(); }
  [[nodiscard]] double norm() const { return amplitudes_.norm(); }
  [[nodiscard]] bool is_normalized(double tol = kLinalgTol) const {
    return std::abs(amplitudes_.squaredNorm() - 1.0) <= tol;
  }

  [[nodiscard]] StateVector with_amplitudes(Eigen::VectorXcd amplitudes) const {
    return StateVector(basis_, std::move(amplitudes), layout_);
  }

 private:
  static std::vector<BasisLabel> index_labels(std::size_t n) {
    std::vector<BasisLabel> labels;
    labels.reserve(n);
    for (std::size_t i = 0; i < n; ++i) labels.emplace_back(i);
    return labels;
  }

  std::vector<BasisLabel> basis_;
  Eigen::VectorXcd amplitudes_;
  Bipartition layout_;
};

/// Hermitian, unit-trace, positive semidefinite matrix. Checked on construction.
class DensityMatrix {
 public:
  explicit DensityMatrix(Eigen::MatrixXcd entries) : entries_(std::move(entries)) {
    check_hermitian_unit_trace();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(entries_, Eigen::EigenvaluesOnly);
    min_eigenvalue_ = solver.eigenvalues().minCoeff();
    if (min_eigenvalue_ < -kEigenTol)
      throw QuantumError("density matrix is not positive semidefinite (eigenvalue " +
                         std::to_string(min_eigenvalue_) + ")");
  }

  /// |v><v| for a unit vector: positive semidefinite by construction, so the
  /// eigen-decomposition is skipped.
  static DensityMatrix pure(const Eigen::VectorXcd& v) {
    return DensityMatrix(v * v.adjoint(), pure_tag{});
  }

  [[nodiscard]] std::size_t dimension() const noexcept {
    return static_cast<std::size_t>(entries_.rows());
  }
  [[nodiscard]] const Eigen::MatrixXcd& entries() const noexcept { return entries_; }
  [[nodiscard]] double min_eigenvalue() const noexcept { return min_eigenvalue_; }

  /// Diagonal as probabilities; tiny negative round-off is clamped to zero.
  [[nodiscard]] std::vector<double> probabilities() const {
    std::vector<double> p(dimension());
    for (std::size_t i = 0; i < p.size(); ++i)
      p[i] = std::max(0.0, entries_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)).real());
    return p;
  }

 private:
  struct pure_tag {};
  DensityMatrix(Eigen::MatrixXcd entries, pure_tag) : entries_(std::move(entries)) {
    check_hermitian_unit_trace();
  }

  void check_hermitian_unit_trace() const {
    if (entries_.rows() == 0 || entries_.rows() != entries_.cols())
      throw QuantumError("density matrix must be square and non-empty");
    const double asym = (entries_ - entries_.adjoint()).cwiseAbs().maxCoeff();
    if (asym > kLinalgTol)
      throw QuantumError("density matrix is not Hermitian (deviation " + std::to_string(asym) + ")");
    const cplx tr = entries_.trace();
    if (std::abs(tr - 1.0) > kLinalgTol)
      throw QuantumError("density matrix trace is " + std::to_string(tr.real()) + ", expected 1");
  }

  Eigen::MatrixXcd entries_;
  double min_eigenvalue_ = 0.0;
};

/// One measurement outcome: an orthonormal set of vectors (as columns) that
/// spans its projector's range on the measured factor.
struct MeasurementOutcome {
  std::string label;
  Eigen::MatrixXcd span;
};

/// Complete projective measurement on one factor of a bipartite space.
class MeasurementBasis {
 public:
  MeasurementBasis(Bipartition layout, Factor subsystem, std::vector<MeasurementOutcome> outcomes)
      : layout_(layout), subsystem_(subsystem), outcomes_(std::move(outcomes)) {
    const auto dim = static_cast<Eigen::Index>(factor_dim());
    if (outcomes_.empty()) throw QuantumError("measurement basis has no outcomes");
    Eigen::Index cols = 0;
    for (const auto& o : outcomes_) {
      if (o.span.rows() != dim || o.span.cols() == 0)
        throw QuantumError("measurement outcome '" + o.label + "' has wrong shape");
      cols += o.span.cols();
    }
    if (cols != dim)
      throw QuantumError("measurement projectors span " + std::to_string(cols) +
                         " dimensions of a " + std::to_string(dim) + "-dimensional factor");
    Eigen::MatrixXcd all(dim, cols);
    Eigen::Index at = 0;
    for (const auto& o : outcomes_) {
      all.middleCols(at, o.span.cols()) = o.span;
      at += o.span.cols();
    }
    const double dev =
        (all.adjoint() * all - Eigen::MatrixXcd::Identity(dim, dim)).cwiseAbs().maxCoeff();
    if (dev > kLinalgTol)
      throw QuantumError("measurement projectors are not orthonormal and disjoint");
  }

  /// Projectors onto groups of basis indices of the measured factor.
  static MeasurementBasis computational(Bipartition layout, Factor subsystem,
                                        const std::vector<std::vector<std::size_t>>& groups) {
    const std::size_t dim = layout.dim(subsystem == Factor::first);
    std::vector<MeasurementOutcome> outcomes;
    for (std::size_t g = 0; g < groups.size(); ++g) {
      Eigen::MatrixXcd span = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(dim),
                                                     static_cast<Eigen::Index>(groups[g].size()));
      for (std::size_t c = 0; c < groups[g].size(); ++c) {
        if (groups[g][c] >= dim) throw QuantumError("measurement group index out of range");
        span(static_cast<Eigen::Index>(groups[g][c]), static_cast<Eigen::Index>(c)) = 1.0;
      }
      outcomes.push_back({std::to_string(g), std::move(span)});
    }
    return MeasurementBasis(layout, subsystem, std::move(outcomes));
  }

  [[nodiscard]] Bipartition layout() const noexcept { return layout_; }
  [[nodiscard]] Factor subsystem() const noexcept { return subsystem_; }
  [[nodiscard]] const std::vector<MeasurementOutcome>& outcomes() const noexcept { return outcomes_; }
  [[nodiscard]] std::size_t size() const noexcept { return outcomes_.size(); }
  [[nodiscard]] std::size_t factor_dim() const noexcept {
    return layout_.dim(subsystem_ == Factor::first);
  }

  [[nodiscard]] Eigen::MatrixXcd projector(std::size_t k) const {
    const auto& s = outcomes_.at(k).span;
    return s * s.adjoint();
  }

  /// (P_k (x) I) v or (I (x) P_k) v, without renormalization.
  [[nodiscard]] Eigen::VectorXcd project(const Eigen::VectorXcd& v, std::size_t k) const {
    using RowMajor = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
    const auto rows = static_cast<Eigen::Index>(layout_.first);
    const auto cols = static_cast<Eigen::Index>(layout_.second);
    Eigen::Map<const RowMajor> a(v.data(), rows, cols);
    const Eigen::MatrixXcd p = projector(k);
    RowMajor out = subsystem_ == Factor::first ? RowMajor(p * a) : RowMajor(a * p.transpose());
    return Eigen::Map<const Eigen::VectorXcd>(out.data(), v.size());
  }

 private:
  Bipartition layout_;
  Factor subsystem_;
  std::vector<MeasurementOutcome> outcomes_;
};

struct MeasurementResult {
  std::size_t outcome = 0;
  std::string label;
  double probability = 0.0;
  StateVector collapsed;
};

inline StateVector normalize(const StateVector& v) {
  const double n = v.norm();
  if (!(n > 0.0) || !std::isfinite(n))
    throw QuantumError("cannot normalize a zero or non-finite state vector");
  if (n == 1.0) return v;
  return v.with_amplitudes(v.amplitudes() / n);
}

inline DensityMatrix density_from_state(const StateVector& v) {
  if (!v.is_normalized())
    throw QuantumError("density_from_state requires a normalized state (norm^2 = " +
                       std::to_string(v.amplitudes().squaredNorm()) + ")");
  return DensityMatrix::pure(v.amplitudes());
}

/// Reduced state on the kept factor of a bipartite density matrix.
inline DensityMatrix partial_trace(const DensityMatrix& rho, Bipartition layout, Factor keep) {
  if (rho.dimension() != layout.total())
    throw QuantumError("partial_trace: dimension " + std::to_string(rho.dimension()) +
                       " does not factor as " + std::to_string(layout.first) + "x" +
                       std::to_string(layout.second));
  const auto& m = rho.entries();
  const auto d1 = static_cast<Eigen::Index>(layout.first);
  const auto d2 = static_cast<Eigen::Index>(layout.second);
  if (keep == Factor::first) {
    Eigen::MatrixXcd r = Eigen::MatrixXcd::Zero(d1, d1);
    for (Eigen::Index i = 0; i < d1; ++i)
      for (Eigen::Index k = 0; k < d1; ++k)
        for (Eigen::Index j = 0; j < d2; ++j) r(i, k) += m(i * d2 + j, k * d2 + j);
    return DensityMatrix(std::move(r));
  }
  Eigen::MatrixXcd r = Eigen::MatrixXcd::Zero(d2, d2);
  for (Eigen::Index i = 0; i < d1; ++i) r += m.block(i * d2, i * d2, d2, d2);
  return DensityMatrix(std::move(r));
}

/// Born probabilities of every outcome; nonnegative and summing to 1.
inline std::vector<double> born_probabilities(const StateVector& v, const MeasurementBasis& basis) {
  if (!v.is_normalized()) throw QuantumError("born measurement requires a normalized state");
  if (!(v.layout() == basis.layout()))
    throw QuantumError("measurement basis layout does not match the state");
  std::vector<double> p(basis.size());
  for (std::size_t k = 0; k < p.size(); ++k)
    p[k] = basis.project(v.amplitudes(), k).squaredNorm();
  return p;
}

/// Samples an outcome with Born probabilities and returns the renormalized
/// post-measurement state. Zero-probability outcomes are never drawn.
inline MeasurementResult born_measure(const StateVector& v, const MeasurementBasis& basis, Rng& rng) {
  const auto p = born_probabilities(v, basis);
  double total = 0.0;
  for (double q : p) total += q;
  const double u = rng.uniform() * total;
  std::size_t pick = p.size();
  double cum = 0.0;
  for (std::size_t k = 0; k < p.size(); ++k) {
    if (p[k] <= 0.0) continue;
    cum += p[k];
    pick = k;
    if (u < cum) break;
  }
  Eigen::VectorXcd projected = basis.project(v.amplitudes(), pick);
  projected /= std::sqrt(p[pick]);
  return {pick, basis.outcomes()[pick].label, p[pick], v.with_amplitudes(std::move(projected))};
}

/// (1/2) sum |eig(a - b)|, clamped to [0, 1].
inline double trace_distance(const DensityMatrix& a, const DensityMatrix& b) {
  if (a.dimension() != b.dimension())
    throw QuantumError("trace_distance: dimension mismatch (" + std::to_string(a.dimension()) +
                       " vs " + std::to_string(b.dimension()) + ")");
  const Eigen::MatrixXcd diff = a.entries() - b.entries();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(diff, Eigen::EigenvaluesOnly);
  const double d = 0.5 * solver.eigenvalues().cwiseAbs().sum();
  return std::clamp(d, 0.0, 1.0);
}

}  // namespace belltel
