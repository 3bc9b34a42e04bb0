#pragma once

// 1+1 Minkowski kinematics (c = 1) for instantaneous-collapse signal legs and
// the two-telegraph loop that delivers a message into its sender's past.

#include <array>
#include <cmath>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>

namespace belltel {

class RelativityError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct Event {
  double t = 0.0;
  double x = 0.0;
  friend bool operator==(const Event&, const Event&) = default;
};

/// Velocity of an inertial frame relative to the lab, |beta| < 1.
class FrameVelocity {
 public:
  constexpr FrameVelocity() = default;
  explicit FrameVelocity(double beta) : beta_(beta) {
    if (!(std::abs(beta) < 1.0))
      throw RelativityError("frame velocity must satisfy |beta| < 1, got " + std::to_string(beta));
  }
  [[nodiscard]] constexpr double beta() const noexcept { return beta_; }
  [[nodiscard]] double gamma() const { return 1.0 / std::sqrt(1.0 - beta_ * beta_); }
  [[nodiscard]] FrameVelocity reversed() const { return FrameVelocity(-beta_); }

 private:
  double beta_ = 0.0;
};

/// t' = gamma (t - beta x), x' = gamma (x - beta t).
inline Event boost(const Event& e, FrameVelocity v) {
  const double b = v.beta();
  const double g = v.gamma();
  return {g * (e.t - b * e.x), g * (e.x - b * e.t)};
}

/// (dt)^2 - (dx)^2; negative for spacelike separation.
inline double interval(const Event& a, const Event& b) {
  const double dt = b.t - a.t;
  const double dx = b.x - a.x;
  return dt * dt - dx * dx;
}

/// Reception at x_rec simultaneous with the emission in `frame`. Lines of
/// simultaneity of a frame moving at beta have slope beta in the lab chart.
inline Event signal_reception(const Event& emission, double x_rec, FrameVelocity frame) {
  return {emission.t + frame.beta() * (x_rec - emission.x), x_rec};
}

/// Which frame the collapse is instantaneous in.
struct Privileged {
  FrameVelocity frame;  // one frame for every telegraph
};
struct StateDependent {
  FrameVelocity speed;  // telegraph A's rest frame; B moves the opposite way
};
using FrameStrategy = std::variant<Privileged, StateDependent>;

struct ParadoxTrace {
  Event a_emission;
  Event a_reception;
  Event b_emission;
  Event b_reception;
  FrameVelocity frame_a;
  FrameVelocity frame_b;
  double loop_advance = 0.0;  // t(A emission) - t(B reception)
  bool closed_loop = false;   // B reception strictly precedes A emission
};

/// Telegraph A sends from x = X to x = 0, where the message is immediately
/// re-sent through telegraph B back to x = X.
inline ParadoxTrace build_paradox(const FrameStrategy& strategy, double separation) {
  if (!(separation > 0.0) || !std::isfinite(separation))
    throw RelativityError("separation X must be > 0");
  ParadoxTrace p;
  if (const auto* s = std::get_if<StateDependent>(&strategy)) {
    p.frame_a = s->speed;
    p.frame_b = s->speed.reversed();
  } else {
    p.frame_a = p.frame_b = std::get<Privileged>(strategy).frame;
  }
  p.a_emission = {0.0, separation};
  p.a_reception = signal_reception(p.a_emission, 0.0, p.frame_a);
  p.b_emission = p.a_reception;
  p.b_reception = signal_reception(p.b_emission, separation, p.frame_b);
  p.loop_advance = p.a_emission.t - p.b_reception.t;
  p.closed_loop = p.loop_advance > 0.0;
  return p;
}

enum class Message { m1, m2 };
inline std::string_view to_string(Message m) { return m == Message::m1 ? "m1" : "m2"; }

/// What a relay transmits for each message it reads.
struct AutomatonRule {
  Message on_m1 = Message::m1;
  Message on_m2 = Message::m2;

  [[nodiscard]] Message operator()(Message m) const { return m == Message::m1 ? on_m1 : on_m2; }

  static AutomatonRule identity() { return {Message::m1, Message::m2}; }
  static AutomatonRule negation() { return {Message::m2, Message::m1}; }
  static AutomatonRule constant(Message m) { return {m, m}; }
};

/// Messages consistent with a closed loop feeding the relay its own output.
/// Empty means no consistent history exists.
inline std::set<Message> automaton_fixed_points(const AutomatonRule& rule) {
  std::set<Message> out;
  for (auto m : {Message::m1, Message::m2})
    if (rule(m) == m) out.insert(m);
  return out;
}

}  // namespace belltel
