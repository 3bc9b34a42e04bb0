#pragma once

// Telegraph protocol: the sender toggles which-path detectors, the receiver
// pools M screen hits and runs a likelihood-ratio test. Also sample-size
// planning and the staggered N-telegraph ensemble.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "belltel/device.hpp"
#include "belltel/parallel.hpp"
#include "belltel/quantum.hpp"
#include "belltel/rng.hpp"

namespace belltel {

enum class DetectorState { off, on };

/// How the receiving end's statistics respond to the sender's detectors.
/// naive_collapse: detectors off leave full interference at the screen.
/// unitary_qm: the screen sees the reduced state of the entangled pair.
enum class ModelMode { naive_collapse, unitary_qm };

inline std::string_view to_string(DetectorState d) { return d == DetectorState::on ? "on" : "off"; }
inline std::string_view to_string(ModelMode m) {
  return m == ModelMode::naive_collapse ? "NaiveCollapse" : "UnitaryQM";
}
inline ModelMode parse_mode(std::string_view s) {
  if (s == "NaiveCollapse") return ModelMode::naive_collapse;
  if (s == "UnitaryQM") return ModelMode::unitary_qm;
  throw ConfigError("mode must be NaiveCollapse or UnitaryQM, got '" + std::string(s) + "'");
}
inline DetectorState parse_detectors(std::string_view s) {
  if (s == "on") return DetectorState::on;
  if (s == "off") return DetectorState::off;
  throw ConfigError("detectors must be on or off, got '" + std::string(s) + "'");
}

/// M pairs per symbol, pair period T, N staggered telegraphs.
struct TransmissionPlan {
  std::size_t pairs_per_symbol = 1000;
  double period = 1.0;
  std::size_t telegraphs = 1;

  void validate() const {
    if (pairs_per_symbol < 1) throw ConfigError("M must be >= 1");
    if (!(period > 0.0) || !std::isfinite(period)) throw ConfigError("T must be > 0");
    if (telegraphs < 1) throw ConfigError("N must be >= 1");
  }
  [[nodiscard]] double nominal_symbol_time() const {
    return static_cast<double>(pairs_per_symbol) * period / static_cast<double>(telegraphs);
  }
};

struct HitRecord {
  std::size_t telegraph_id = 0;
  double time = 0.0;
  double x = 0.0;
  std::optional<int> idler_outcome;  // pipe seen by the detectors, when on
};

enum class Decision { interference, no_interference };
inline std::string_view to_string(Decision d) {
  return d == Decision::interference ? "interference" : "no-interference";
}

struct DecisionResult {
  double log_lr = 0.0;
  Decision decided = Decision::no_interference;
  double fringe_statistic = 0.0;
};

/// Probability floor applied before taking log-ratios.
inline constexpr double kProbabilityFloor = 1e-300;

/// Distribution of screen hits for a detector setting under a model.
inline ScreenDistribution screen_marginal(const DeviceConfig& cfg, DetectorState det, ModelMode mode) {
  if (mode == ModelMode::naive_collapse)
    return det == DetectorState::off ? coherent_distribution(cfg) : incoherent_distribution(cfg);
  // The sender's setting acts only on the idler factor; the screen sees the
  // reduced state either way.
  const auto joint = build_joint_state(cfg);
  const auto reduced = partial_trace(density_from_state(joint), joint.layout(), Factor::second);
  return ScreenDistribution::from_weights(reduced.probabilities());
}

/// Inverse-CDF sampler over bins. Zero-probability bins are never drawn.
class BinSampler {
 public:
  explicit BinSampler(const ScreenDistribution& dist) : cdf_(dist.size()) {
    std::partial_sum(dist.probabilities().begin(), dist.probabilities().end(), cdf_.begin());
    total_ = cdf_.back();
  }

  std::size_t draw(Rng& rng) const {
    const double u = rng.uniform() * total_;
    auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
    if (it == cdf_.end()) {
      // u landed on the rounded top of the cdf; take the last bin with mass.
      it = std::lower_bound(cdf_.begin(), cdf_.end(), total_);
    }
    return static_cast<std::size_t>(it - cdf_.begin());
  }

 private:
  std::vector<double> cdf_;
  double total_ = 1.0;
};

/// M i.i.d. screen positions, reported at bin centers.
inline std::vector<double> sample_hits(const ScreenDistribution& dist, const DeviceConfig& cfg,
                                       std::size_t count, Rng& rng) {
  if (dist.size() != cfg.bins) throw std::invalid_argument("distribution does not match grid");
  const BinSampler sampler(dist);
  std::vector<double> x(count);
  for (auto& xi : x) xi = cfg.bin_center(sampler.draw(rng));
  return x;
}

/// Likelihood-ratio receiver for coherent vs. incoherent screen statistics,
/// with per-bin tables precomputed from the device.
class LikelihoodRatioReceiver {
 public:
  explicit LikelihoodRatioReceiver(const DeviceConfig& cfg)
      : cfg_(cfg),
        coherent_(coherent_distribution(cfg)),
        incoherent_(incoherent_distribution(cfg)),
        log_ratio_(cfg.bins),
        phasor_(cfg.bins) {
    for (std::size_t j = 0; j < cfg.bins; ++j) {
      log_ratio_[j] = std::log(std::max(coherent_[j], kProbabilityFloor) /
                               std::max(incoherent_[j], kProbabilityFloor));
      phasor_[j] = std::polar(1.0, 2.0 * cfg.kappa * cfg.bin_center(j));
    }
  }

  [[nodiscard]] const DeviceConfig& config() const noexcept { return cfg_; }
  [[nodiscard]] const ScreenDistribution& coherent() const noexcept { return coherent_; }
  [[nodiscard]] const ScreenDistribution& incoherent() const noexcept { return incoherent_; }

  [[nodiscard]] double log_likelihood_ratio(std::span<const double> hits) const {
    double s = 0.0;
    for (double x : hits) s += log_ratio_[cfg_.bin_of(x)];
    return s;
  }
  [[nodiscard]] double log_likelihood_ratio_bins(std::span<const std::size_t> bins) const {
    double s = 0.0;
    for (auto j : bins) s += log_ratio_[j];
    return s;
  }

  /// interference iff log_lr > 0; fringe statistic |mean exp(2 i kappa x)|.
  [[nodiscard]] DecisionResult decide(std::span<const double> hits) const {
    DecisionResult r;
    cplx sum = 0.0;
    for (double x : hits) {
      const auto j = cfg_.bin_of(x);
      r.log_lr += log_ratio_[j];
      sum += phasor_[j];
    }
    r.decided = r.log_lr > 0.0 ? Decision::interference : Decision::no_interference;
    r.fringe_statistic = hits.empty() ? 0.0 : std::abs(sum) / static_cast<double>(hits.size());
    return r;
  }

 private:
  DeviceConfig cfg_;
  ScreenDistribution coherent_;
  ScreenDistribution incoherent_;
  std::vector<double> log_ratio_;
  std::vector<cplx> phasor_;
};

inline double log_likelihood_ratio(std::span<const double> hits, const DeviceConfig& cfg) {
  return LikelihoodRatioReceiver(cfg).log_likelihood_ratio(hits);
}

inline DecisionResult decide_bit(std::span<const double> hits, const DeviceConfig& cfg) {
  return LikelihoodRatioReceiver(cfg).decide(hits);
}

// ---------------------------------------------------------------------------
// Sample-size planning

struct SampleSizeOptions {
  std::size_t trials = 10000;
  std::size_t max_pairs = std::size_t{1} << 16;
  unsigned threads = 1;
};

struct SampleSizeProbe {
  std::size_t pairs = 0;
  double miss_rate = 0.0;         // said no-interference on coherent data
  double false_alarm_rate = 0.0;  // said interference on incoherent data
  bool accepted = false;
};

struct SampleSizeResult {
  std::optional<std::size_t> pairs;  // empty when no finite M reaches alpha
  std::string failure;
  double alpha = 0.0;
  double total_variation = 0.0;
  std::vector<SampleSizeProbe> probes;  // in search order
};

/// Monte Carlo error rates of the receiver at a fixed M. Each trial draws
/// from its own stream so the estimate does not depend on thread count.
inline SampleSizeProbe probe_error_rates(const LikelihoodRatioReceiver& rx, std::size_t pairs,
                                         double alpha, std::size_t trials, const Rng& rng,
                                         unsigned threads = 1) {
  const BinSampler coherent(rx.coherent());
  const BinSampler incoherent(rx.incoherent());
  std::vector<unsigned char> miss(trials), false_alarm(trials);
  parallel_for(trials, threads, [&](std::size_t t) {
    std::vector<std::size_t> bins(pairs);
    Rng rc = rng.stream(2 * t);
    for (auto& b : bins) b = coherent.draw(rc);
    miss[t] = rx.log_likelihood_ratio_bins(bins) <= 0.0;
    Rng ri = rng.stream(2 * t + 1);
    for (auto& b : bins) b = incoherent.draw(ri);
    false_alarm[t] = rx.log_likelihood_ratio_bins(bins) > 0.0;
  });
  SampleSizeProbe p;
  p.pairs = pairs;
  const auto n = static_cast<double>(trials);
  p.miss_rate = static_cast<double>(std::count(miss.begin(), miss.end(), 1)) / n;
  p.false_alarm_rate = static_cast<double>(std::count(false_alarm.begin(), false_alarm.end(), 1)) / n;
  p.accepted = p.miss_rate <= alpha && p.false_alarm_rate <= alpha;
  return p;
}

/// Smallest M whose estimated miss and false-alarm rates are both <= alpha.
/// Doubling from M = 1, then bisection between the last rejected and first
/// accepted M. Probe M uses stream M of rng, independent of search path.
inline SampleSizeResult required_sample_size(const DeviceConfig& cfg, double alpha, const Rng& rng,
                                             const SampleSizeOptions& opt = {}) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("alpha must be in (0, 1)");
  const LikelihoodRatioReceiver rx(cfg);
  SampleSizeResult res;
  res.alpha = alpha;
  res.total_variation = total_variation(rx.coherent(), rx.incoherent());
  if (alpha >= 0.5) {
    res.pairs = 0;
    return res;
  }
  // Any test on M samples has error sum >= 1 - TV(P^M, Q^M) >= 1 - M * TV.
  const double lower_bound = res.total_variation > 0.0
                                 ? (1.0 - 2.0 * alpha) / res.total_variation
                                 : std::numeric_limits<double>::infinity();
  if (lower_bound > static_cast<double>(opt.max_pairs)) {
    res.failure = "hypotheses indistinguishable: total variation " +
                  std::to_string(res.total_variation) + " needs M >= " +
                  std::to_string(lower_bound) + " > limit " + std::to_string(opt.max_pairs);
    return res;
  }
  std::map<std::size_t, bool> seen;
  auto accepted = [&](std::size_t m) {
    if (auto it = seen.find(m); it != seen.end()) return it->second;
    auto p = probe_error_rates(rx, m, alpha, opt.trials, rng.stream(m), opt.threads);
    res.probes.push_back(p);
    return seen[m] = p.accepted;
  };
  std::size_t lo = 0;
  std::size_t hi = 1;
  while (!accepted(hi)) {
    lo = hi;
    if (hi >= opt.max_pairs) {
      res.failure = "no M <= " + std::to_string(opt.max_pairs) + " reaches alpha";
      return res;
    }
    hi = std::min(2 * hi, opt.max_pairs);
  }
  while (hi - lo > 1) {
    const std::size_t mid = lo + (hi - lo) / 2;
    (accepted(mid) ? hi : lo) = mid;
  }
  res.pairs = hi;
  return res;
}

// ---------------------------------------------------------------------------
// Staggered ensemble

/// N telegraphs; telegraph n emits at offset_n + j T for j = 0, 1, ...
class EnsembleSchedule {
 public:
  EnsembleSchedule(std::vector<double> offsets, double period)
      : offsets_(std::move(offsets)), order_(offsets_.size()), period_(period) {
    std::iota(order_.begin(), order_.end(), std::size_t{0});
    std::stable_sort(order_.begin(), order_.end(),
                     [&](std::size_t a, std::size_t b) { return offsets_[a] < offsets_[b]; });
  }

  struct Emission {
    std::size_t telegraph = 0;
    double time = 0.0;
  };

  [[nodiscard]] const std::vector<double>& offsets() const noexcept { return offsets_; }
  [[nodiscard]] double period() const noexcept { return period_; }
  [[nodiscard]] std::size_t telegraphs() const noexcept { return offsets_.size(); }

  /// k-th emission of the merged timeline (time-ordered).
  [[nodiscard]] Emission emission(std::size_t k) const {
    const std::size_t n = offsets_.size();
    const std::size_t id = order_[k % n];
    return {id, offsets_[id] + static_cast<double>(k / n) * period_};
  }

  /// Emission times of one telegraph within [0, horizon).
  [[nodiscard]] std::vector<double> emissions_of(std::size_t telegraph, double horizon) const {
    std::vector<double> t;
    for (double s = offsets_.at(telegraph); s < horizon; s += period_) t.push_back(s);
    return t;
  }

  /// Number of emissions of the whole ensemble in [start, start + length).
  [[nodiscard]] std::size_t count_in_window(double start, double length) const {
    std::size_t c = 0;
    for (double phi : offsets_) {
      const double first = std::ceil((start - phi) / period_);
      const double last = std::ceil((start + length - phi) / period_);  // exclusive
      const double lo = std::max(0.0, first);
      if (last > lo) c += static_cast<std::size_t>(last - lo);
    }
    return c;
  }

 private:
  std::vector<double> offsets_;
  std::vector<std::size_t> order_;
  double period_;
};

/// Offsets i.i.d. uniform on [0, T); offset n comes from stream n.
inline EnsembleSchedule ensemble_schedule(std::size_t telegraphs, double period, const Rng& rng) {
  if (telegraphs < 1) throw std::invalid_argument("ensemble needs N >= 1");
  if (!(period > 0.0)) throw std::invalid_argument("ensemble needs T > 0");
  std::vector<double> offsets(telegraphs);
  for (std::size_t n = 0; n < telegraphs; ++n) {
    Rng r = rng.stream(n);
    double phi = r.uniform() * period;
    if (phi >= period) phi = std::nextafter(period, 0.0);
    offsets[n] = phi;
  }
  return EnsembleSchedule(std::move(offsets), period);
}

/// Time to pool each symbol's M hits: symbol s takes emissions
/// [sM, (s+1)M) and ends at its last one.
inline std::vector<double> symbol_durations(const EnsembleSchedule& sched, std::size_t pairs,
                                            std::size_t symbols) {
  std::vector<double> d(symbols);
  double prev_end = 0.0;
  for (std::size_t s = 0; s < symbols; ++s) {
    const double end = sched.emission((s + 1) * pairs - 1).time;
    d[s] = end - prev_end;
    prev_end = end;
  }
  return d;
}

// Stream ids reserved under a transmission's rng.
inline constexpr std::uint64_t kScheduleStream = 0x5c4ed;
inline constexpr std::uint64_t kSymbolStreamBase = 1ULL << 32;

struct TransmitOptions {
  unsigned threads = 1;
  bool keep_hits = false;
};

struct SymbolTranscript {
  int sent = 0;
  int received = 0;
  std::size_t hits = 0;
  double start_time = 0.0;
  double elapsed = 0.0;
  DecisionResult decision;
};

struct Transmission {
  std::vector<int> received;
  std::vector<SymbolTranscript> symbols;
  std::vector<HitRecord> hits;  // filled when keep_hits
  double total_time = 0.0;

  [[nodiscard]] double symbol_error_rate() const {
    if (symbols.empty()) return 0.0;
    std::size_t errors = 0;
    for (const auto& s : symbols) errors += s.sent != s.received;
    return static_cast<double>(errors) / static_cast<double>(symbols.size());
  }
  [[nodiscard]] double mean_symbol_time() const {
    return symbols.empty() ? 0.0 : total_time / static_cast<double>(symbols.size());
  }
};

/// Which-path conditional screen distributions P(x | pipe k), k = 1, 2, and
/// the Born probabilities of each pipe, from the joint state.
struct WhichPathConditionals {
  std::vector<double> pipe_probability;
  std::vector<ScreenDistribution> screen;
};

inline WhichPathConditionals which_path_conditionals(const DeviceConfig& cfg) {
  const auto joint = build_joint_state(cfg);
  const auto basis = MeasurementBasis::computational(joint.layout(), Factor::first, {{0}, {1}});
  WhichPathConditionals w;
  w.pipe_probability = born_probabilities(joint, basis);
  const auto bins = static_cast<Eigen::Index>(cfg.bins);
  for (std::size_t k = 0; k < 2; ++k) {
    const Eigen::VectorXcd v = basis.project(joint.amplitudes(), k);
    std::vector<double> p(cfg.bins);
    for (Eigen::Index j = 0; j < bins; ++j) p[static_cast<std::size_t>(j)] = std::norm(v(static_cast<Eigen::Index>(k) * bins + j));
    w.screen.push_back(ScreenDistribution::from_weights(std::move(p)));
  }
  return w;
}

/// Sends bits over the staggered ensemble. Bit 1 switches every detector on,
/// bit 0 switches them off; the receiver decodes interference as 0 and
/// no-interference as 1.
inline Transmission transmit_message(std::span<const int> bits, const TransmissionPlan& plan,
                                     ModelMode mode, const DeviceConfig& cfg, const Rng& rng,
                                     const TransmitOptions& opt = {}) {
  plan.validate();
  Transmission tx;
  if (bits.empty()) return tx;
  for (int b : bits)
    if (b != 0 && b != 1) throw std::invalid_argument("message bits must be 0 or 1");

  const LikelihoodRatioReceiver rx(cfg);
  const BinSampler off_sampler(screen_marginal(cfg, DetectorState::off, mode));
  const auto which_path = which_path_conditionals(cfg);
  const BinSampler pipe1(which_path.screen[0]);
  const BinSampler pipe2(which_path.screen[1]);
  const double p_pipe1 = which_path.pipe_probability[0] /
                         (which_path.pipe_probability[0] + which_path.pipe_probability[1]);

  const auto sched = ensemble_schedule(plan.telegraphs, plan.period, rng.stream(kScheduleStream));
  const std::size_t m = plan.pairs_per_symbol;
  const auto durations = symbol_durations(sched, m, bits.size());

  tx.symbols.resize(bits.size());
  std::vector<std::vector<HitRecord>> hits(opt.keep_hits ? bits.size() : 0);
  parallel_for(bits.size(), opt.threads, [&](std::size_t s) {
    Rng r = rng.stream(kSymbolStreamBase + s);
    const bool on = bits[s] == 1;
    std::vector<double> xs(m);
    std::vector<HitRecord> local;
    if (opt.keep_hits) local.reserve(m);
    for (std::size_t i = 0; i < m; ++i) {
      std::optional<int> pipe;
      std::size_t bin;
      if (on) {
        pipe = r.uniform() < p_pipe1 ? 1 : 2;
        bin = (*pipe == 1 ? pipe1 : pipe2).draw(r);
      } else {
        bin = off_sampler.draw(r);
      }
      xs[i] = cfg.bin_center(bin);
      if (opt.keep_hits) {
        const auto e = sched.emission(s * m + i);
        local.push_back({e.telegraph, e.time, xs[i], pipe});
      }
    }
    auto& sym = tx.symbols[s];
    sym.sent = bits[s];
    sym.hits = m;
    sym.decision = rx.decide(xs);
    sym.received = sym.decision.decided == Decision::interference ? 0 : 1;
    sym.elapsed = durations[s];
    if (opt.keep_hits) hits[s] = std::move(local);
  });

  double t = 0.0;
  for (auto& sym : tx.symbols) {
    sym.start_time = t;
    t += sym.elapsed;
    tx.received.push_back(sym.received);
  }
  tx.total_time = t;
  for (auto& h : hits) tx.hits.insert(tx.hits.end(), h.begin(), h.end());
  return tx;
}

/// Mean time to pool M hits per symbol across the staggered ensemble.
inline double throughput_check(const TransmissionPlan& plan, const Rng& rng,
                               std::size_t symbols = 64) {
  plan.validate();
  if (symbols == 0) throw std::invalid_argument("throughput_check needs at least one symbol");
  const auto sched = ensemble_schedule(plan.telegraphs, plan.period, rng.stream(kScheduleStream));
  const auto d = symbol_durations(sched, plan.pairs_per_symbol, symbols);
  return std::accumulate(d.begin(), d.end(), 0.0) / static_cast<double>(symbols);
}

/// Uniform random message bits from a dedicated stream.
inline std::vector<int> random_bits(std::size_t count, const Rng& rng) {
  Rng r = rng.stream(0xb175);
  std::vector<int> bits(count);
  for (auto& b : bits) b = static_cast<int>(r.below(2));
  return bits;
}

}  // namespace belltel
