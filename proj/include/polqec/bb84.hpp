#ifndef POLQEC_BB84_HPP
#define POLQEC_BB84_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "polqec/channel.hpp"
#include "polqec/fpb.hpp"
#include "polqec/parallel.hpp"

namespace polqec {

/// One protocol round. `error` implies `sifted`.
struct TrialRecord {
  AliceChoice alice_state = AliceChoice::H;
  Basis bob_basis = Basis::Rectilinear;
  std::string detected_port;
  int detected_delay = 1;
  int alice_bit = 0;
  int bob_bit = 0;
  bool sifted = false;
  bool error = false;
  std::optional<int> eve_guess;

  bool operator==(const TrialRecord&) const = default;
};

struct Bb84Config {
  std::size_t rounds = 100000;
  std::uint64_t seed = 12345;
  std::optional<FpbConfig> eve;
  ChannelDistribution channel = ChannelDistribution::defaults();
  /// The receiver keys on this output port; detections elsewhere are not sifted.
  std::string key_port = "1";
  /// Time-multiplex both outputs onto one detector pair instead of keying on
  /// a single port: sifting then needs only the basis match.
  bool both_ports = false;
  /// Retain per-round records (needed for CSV export and record-level tests).
  bool keep_records = true;
};

struct Bb84Stats {
  std::size_t rounds = 0;
  std::size_t sifted = 0;
  std::size_t errors = 0;
  std::size_t eve_correct = 0;  // on sifted rounds only
  double sift_rate = 0.0;
  double qber = 0.0;  // errors / sifted
  std::optional<double> eve_success;

  bool operator==(const Bb84Stats&) const = default;
};

struct Bb84Result {
  Bb84Stats stats;
  std::vector<TrialRecord> records;  // empty when keep_records is false
};

/// The per-round kernel: deterministic function of (config, round index).
TrialRecord run_bb84_trial(const Bb84Config& cfg, std::uint64_t round_index);

/// Monte Carlo driver. Per-round randomness comes from independent streams
/// derived from (seed, round index), and reduction runs serially over the
/// preallocated record slots, so serial and parallel execution produce
/// identical results for any thread count.
Bb84Result run_bb84(const Bb84Config& cfg, Execution exec = Execution::Parallel);

}  // namespace polqec

#endif  // POLQEC_BB84_HPP
