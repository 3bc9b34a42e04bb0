#pragma once

// Report serialization: JSON documents, CSV tables and key: value text.
// Every artifact embeds the resolved configuration and seed.

#include <charconv>
#include <cstdint>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "belltel/config.hpp"
#include "belltel/device.hpp"
#include "belltel/nosignal.hpp"
#include "belltel/protocol.hpp"
#include "belltel/relativity.hpp"

namespace belltel::report {

using json = nlohmann::ordered_json;

/// Shortest round-trip decimal form of x.
inline std::string num(double x) {
  char buf[32];
  auto r = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, r.ptr);
}

inline json config_json(const RunConfig& c) {
  json j;
  j["seed"] = c.seed;
  j["kappa"] = c.device.kappa;
  j["w"] = c.device.envelope_width;
  j["x_max"] = c.device.x_max;
  j["B"] = c.device.bins;
  j["relative_phase"] = c.device.relative_phase;
  j["M"] = c.plan.pairs_per_symbol;
  j["T"] = c.plan.period;
  j["N"] = c.plan.telegraphs;
  j["mode"] = std::string(to_string(c.mode));
  j["alpha"] = c.alpha;
  j["output_dir"] = c.output_dir.generic_string();
  j["detectors"] = std::string(to_string(c.detectors));
  j["symbols"] = c.symbols;
  j["trials"] = c.trials;
  j["threads"] = c.threads;
  j["tolerance"] = c.tolerance;
  j["strategy"] = c.strategy;
  j["velocity"] = c.velocity;
  j["separation"] = c.separation;
  j["automaton"] = c.automaton;
  return j;
}

/// `# key: value` lines, one per config key. Thread count is omitted so that
/// outputs are byte-identical across thread counts.
inline std::string config_comment(const RunConfig& c) {
  const json cj = config_json(c);
  std::string out;
  for (const auto& [k, v] : cj.items()) {
    if (k == "threads") continue;
    out += "# " + k + ": " + (v.is_string() ? v.get<std::string>() : v.dump()) + "\n";
  }
  return out;
}

inline json provenance(const RunConfig& c) {
  json j = config_json(c);
  j.erase("threads");
  return j;
}

inline std::string distributions_csv(const RunConfig& c) {
  const auto& d = c.device;
  const auto coh = coherent_distribution(d);
  const auto inc = incoherent_distribution(d);
  const auto er = eraser_conditionals(d);
  std::string out = config_comment(c);
  out += "x,p_coherent,p_incoherent,p_plus,p_minus\n";
  for (std::size_t j = 0; j < d.bins; ++j)
    out += num(d.bin_center(j)) + "," + num(coh[j]) + "," + num(inc[j]) + "," + num(er.plus[j]) +
           "," + num(er.minus[j]) + "\n";
  return out;
}

inline std::string hits_csv(const RunConfig& c, const std::vector<HitRecord>& hits) {
  std::string out = config_comment(c);
  out += "telegraph_id,time,x\n";
  for (const auto& h : hits)
    out += std::to_string(h.telegraph_id) + "," + num(h.time) + "," + num(h.x) + "\n";
  return out;
}

inline json decision_json(const DecisionResult& d) {
  json j;
  j["log_lr"] = d.log_lr;
  j["decided"] = std::string(to_string(d.decided));
  j["fringe_statistic"] = d.fringe_statistic;
  return j;
}

inline json sample_size_json(const RunConfig& c, const SampleSizeResult& r) {
  json j;
  j["config"] = provenance(c);
  j["alpha"] = r.alpha;
  j["total_variation"] = r.total_variation;
  j["status"] = r.pairs ? "ok" : "failed";
  if (r.pairs) j["M"] = *r.pairs;
  else j["M"] = nullptr;
  if (!r.failure.empty()) j["failure"] = r.failure;
  json probes = json::array();
  for (const auto& p : r.probes)
    probes.push_back({{"M", p.pairs},
                      {"miss_rate", p.miss_rate},
                      {"false_alarm_rate", p.false_alarm_rate},
                      {"accepted", p.accepted}});
  j["probes"] = probes;
  return j;
}

inline json transmission_json(const RunConfig& c, const Transmission& tx, double mutual_information) {
  json j;
  j["config"] = provenance(c);
  j["seed"] = c.seed;
  j["mode"] = std::string(to_string(c.mode));
  j["plan"] = {{"M", c.plan.pairs_per_symbol}, {"T", c.plan.period}, {"N", c.plan.telegraphs}};
  j["summary"] = {{"symbols", tx.symbols.size()},
                  {"symbol_error_rate", tx.symbol_error_rate()},
                  {"accuracy", 1.0 - tx.symbol_error_rate()},
                  {"mutual_information_bits", mutual_information},
                  {"mean_symbol_time", tx.mean_symbol_time()},
                  {"nominal_symbol_time", c.plan.nominal_symbol_time()},
                  {"total_time", tx.total_time}};
  json symbols = json::array();
  for (const auto& s : tx.symbols)
    symbols.push_back({{"sent", s.sent},
                       {"received", s.received},
                       {"hits", s.hits},
                       {"start_time", s.start_time},
                       {"elapsed", s.elapsed},
                       {"log_lr", s.decision.log_lr},
                       {"decided", std::string(to_string(s.decision.decided))},
                       {"fringe_statistic", s.decision.fringe_statistic}});
  j["symbols"] = symbols;
  return j;
}

inline std::string transmission_summary(const RunConfig& c, const Transmission& tx,
                                        double mutual_information) {
  std::ostringstream o;
  o << config_comment(c);
  o << "symbols: " << tx.symbols.size() << "\n"
    << "symbol_error_rate: " << num(tx.symbol_error_rate()) << "\n"
    << "accuracy: " << num(1.0 - tx.symbol_error_rate()) << "\n"
    << "mutual_information_bits: " << num(mutual_information) << "\n"
    << "mean_symbol_time: " << num(tx.mean_symbol_time()) << "\n"
    << "nominal_symbol_time: " << num(c.plan.nominal_symbol_time()) << "\n";
  return o.str();
}

inline json nosignal_json(const RunConfig& c, const NoSignalReport& r) {
  json j;
  j["config"] = provenance(c);
  j["mode"] = std::string(to_string(r.mode));
  j["tolerance"] = r.tolerance;
  j["tv_distance"] = r.tv_distance;
  j["trace_distance_reduced"] = r.trace_distance_reduced;
  j["mutual_information_bits"] = r.mutual_information_bits;
  j["verdict"] = std::string(to_string(r.verdict));
  return j;
}

inline std::string nosignal_text(const RunConfig& c, const NoSignalReport& r) {
  std::string out = config_comment(c);
  out += "mode: " + std::string(to_string(r.mode)) + "\n";
  out += "tolerance: " + num(r.tolerance) + "\n";
  out += "tv_distance: " + num(r.tv_distance) + "\n";
  out += "trace_distance_reduced: " + num(r.trace_distance_reduced) + "\n";
  out += "mutual_information_bits: " + num(r.mutual_information_bits) + "\n";
  out += "verdict: " + std::string(to_string(r.verdict)) + "\n";
  return out;
}

inline json event_json(const Event& e) { return {{"t", e.t}, {"x", e.x}}; }

inline json paradox_json(const RunConfig& c, const ParadoxTrace& p, const AutomatonRule& rule) {
  const auto fixed = automaton_fixed_points(rule);
  json fp = json::array();
  for (auto m : fixed) fp.push_back(std::string(to_string(m)));
  json j;
  j["config"] = provenance(c);
  j["frame_a_beta"] = p.frame_a.beta();
  j["frame_b_beta"] = p.frame_b.beta();
  j["a_emission"] = event_json(p.a_emission);
  j["a_reception"] = event_json(p.a_reception);
  j["b_emission"] = event_json(p.b_emission);
  j["b_reception"] = event_json(p.b_reception);
  j["leg_a_interval"] = interval(p.a_emission, p.a_reception);
  j["leg_b_interval"] = interval(p.b_emission, p.b_reception);
  j["loop_advance"] = p.loop_advance;
  j["closed_loop"] = p.closed_loop;
  j["automaton"] = c.automaton;
  j["automaton_fixed_points"] = fp;
  j["contradiction"] = p.closed_loop && fixed.empty();
  return j;
}

inline std::string paradox_events_csv(const RunConfig& c, const ParadoxTrace& p) {
  std::string out = config_comment(c);
  out += "label,t,x\n";
  auto row = [&](const char* label, const Event& e) {
    out += std::string(label) + "," + num(e.t) + "," + num(e.x) + "\n";
  };
  row("A emission", p.a_emission);
  row("A reception", p.a_reception);
  row("B emission", p.b_emission);
  row("B reception", p.b_reception);
  return out;
}

}  // namespace belltel::report
