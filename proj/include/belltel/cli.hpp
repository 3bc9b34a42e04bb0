#pragma once

// Subcommand dispatch shared by the command-line tool and the acceptance suite.

#include <array>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>

#include "belltel/config.hpp"
#include "belltel/nosignal.hpp"
#include "belltel/protocol.hpp"
#include "belltel/relativity.hpp"
#include "belltel/report.hpp"

namespace belltel {

class CommandError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr std::array<std::string_view, 6> kSubcommands = {
    "simulate", "plan", "transmit", "nosignal-check", "paradox", "distributions"};

// Rng streams per subcommand, so one seed drives independent experiments.
inline constexpr std::uint64_t kSimulateStream = 1;
inline constexpr std::uint64_t kPlanStream = 2;
inline constexpr std::uint64_t kTransmitStream = 3;

namespace detail {

inline void write_file(const std::filesystem::path& path, const std::string& body) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw CommandError("cannot write " + path.string());
  out << body;
  if (!out) throw CommandError("failed writing " + path.string());
}

inline void prepare_output_dir(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec || !std::filesystem::is_directory(dir))
    throw CommandError("output directory " + dir.string() + " is not writable");
}

}  // namespace detail

/// Runs one subcommand, writing its artifacts under cfg.output_dir.
/// Returns the process exit status: nonzero when nosignal-check fails its
/// verdict or the planner finds no finite sample size.
inline int run_command(std::string_view name, const RunConfig& cfg, std::ostream& log) {
  if (std::find(kSubcommands.begin(), kSubcommands.end(), name) == kSubcommands.end())
    throw CommandError("unknown subcommand '" + std::string(name) + "'");
  cfg.validate();
  detail::prepare_output_dir(cfg.output_dir);
  const auto& dir = cfg.output_dir;
  const Rng root(cfg.seed);

  if (name == "distributions") {
    detail::write_file(dir / "distributions.csv", report::distributions_csv(cfg));
    log << "wrote " << (dir / "distributions.csv").string() << "\n";
    return 0;
  }

  if (name == "simulate") {
    const std::array<int, 1> bit = {cfg.detectors == DetectorState::on ? 1 : 0};
    const auto tx = transmit_message(bit, cfg.plan, cfg.mode, cfg.device,
                                     root.stream(kSimulateStream), {cfg.threads, true});
    auto j = report::decision_json(tx.symbols.front().decision);
    j["detectors"] = std::string(to_string(cfg.detectors));
    j["hits"] = tx.hits.size();
    j["elapsed"] = tx.total_time;
    report::json doc;
    doc["config"] = report::provenance(cfg);
    doc["decision"] = j;
    detail::write_file(dir / "hits.csv", report::hits_csv(cfg, tx.hits));
    detail::write_file(dir / "decision.json", doc.dump(2) + "\n");
    log << "decided: " << to_string(tx.symbols.front().decision.decided)
        << " (log_lr " << report::num(tx.symbols.front().decision.log_lr) << ")\n";
    return 0;
  }

  if (name == "plan") {
    const auto r = required_sample_size(cfg.device, cfg.alpha, root.stream(kPlanStream),
                                        {cfg.trials, std::size_t{1} << 16, cfg.threads});
    detail::write_file(dir / "plan.json", report::sample_size_json(cfg, r).dump(2) + "\n");
    if (!r.pairs) {
      log << "plan failed: " << r.failure << "\n";
      return 1;
    }
    log << "M*: " << *r.pairs << " (alpha " << report::num(cfg.alpha) << ")\n";
    return 0;
  }

  if (name == "transmit") {
    const Rng rng = root.stream(kTransmitStream);
    const auto bits = random_bits(cfg.symbols, rng);
    const auto tx = transmit_message(bits, cfg.plan, cfg.mode, cfg.device, rng, {cfg.threads, false});
    const double mi = plug_in_mutual_information(bits, tx.received);
    detail::write_file(dir / "transcript.json", report::transmission_json(cfg, tx, mi).dump(2) + "\n");
    const auto summary = report::transmission_summary(cfg, tx, mi);
    detail::write_file(dir / "summary.txt", summary);
    log << "symbol_error_rate: " << report::num(tx.symbol_error_rate())
        << "\nmutual_information_bits: " << report::num(mi) << "\n";
    return 0;
  }

  if (name == "nosignal-check") {
    const auto r = verify_no_signaling(cfg.device, cfg.mode, cfg.tolerance);
    const auto text = report::nosignal_text(cfg, r);
    detail::write_file(dir / "nosignal.txt", text);
    detail::write_file(dir / "nosignal.json", report::nosignal_json(cfg, r).dump(2) + "\n");
    log << "mode: " << to_string(r.mode) << "\ntv_distance: " << report::num(r.tv_distance)
        << "\ntrace_distance_reduced: " << report::num(r.trace_distance_reduced)
        << "\nmutual_information_bits: " << report::num(r.mutual_information_bits)
        << "\nverdict: " << to_string(r.verdict) << "\n";
    return r.verdict == Verdict::pass ? 0 : 1;
  }

  // paradox
  const auto trace = build_paradox(cfg.frame_strategy(), cfg.separation);
  const auto rule = cfg.automaton_rule();
  const auto j = report::paradox_json(cfg, trace, rule);
  detail::write_file(dir / "paradox.json", j.dump(2) + "\n");
  detail::write_file(dir / "events.csv", report::paradox_events_csv(cfg, trace));
  log << "loop_advance: " << report::num(trace.loop_advance)
      << "\nclosed_loop: " << (trace.closed_loop ? "true" : "false")
      << "\ncontradiction: " << (j["contradiction"].get<bool>() ? "true" : "false") << "\n";
  return 0;
}

}  // namespace belltel
