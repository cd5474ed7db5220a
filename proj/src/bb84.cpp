#include "polqec/bb84.hpp"

#include <utility>

#include "polqec/components.hpp"
#include "polqec/rng.hpp"
#include "polqec/setups.hpp"

namespace polqec {

namespace {

// Measurement-frame change for the diagonal basis: |+> lands on H, |-> on V.
// The entries are the same literal constant, so a diagonal signal leaves an
// exactly zero amplitude on the wrong detector and the sifted error rate of
// an undisturbed channel is exactly zero, not merely small.
const PolarizationUnitary kDiagonalFrame{{Complex{kInvSqrt2, 0}, Complex{kInvSqrt2, 0},
                                          Complex{-kInvSqrt2, 0}, Complex{kInvSqrt2, 0}}};

int eve_guess_bit(Basis revealed_basis, int probe_outcome) {
  // Probe outcome 0 points to the t_plus group, i.e. V in the rectilinear
  // basis but + in the diagonal one.
  if (revealed_basis == Basis::Rectilinear) {
    return probe_outcome == 0 ? 1 : 0;
  }
  return probe_outcome == 0 ? 0 : 1;
}

}  // namespace

TrialRecord run_bb84_trial(const Bb84Config& cfg, std::uint64_t round_index) {
  std::mt19937_64 rng = make_trial_rng(cfg.seed, round_index);

  // Draw order is part of the reproducibility contract: signal choice,
  // receiver basis, channel parameters, photon detection, probe measurement.
  const auto choice = static_cast<AliceChoice>(rng() % 4);
  const Basis bob_basis = (rng() % 2 == 0) ? Basis::Rectilinear : Basis::Diagonal;
  const ChannelParams params = sample_params(rng, cfg.channel);

  PhotonState out = cfg.eve ? fpb_through_corrector(choice, *cfg.eve, params)
                            : run_fig2_corrector(signal_qubit(choice, ports::kIn), params);

  if (cfg.both_ports) {
    out = time_multiplex(out, ports::kOut2, ports::kOut1, 1);
  }
  if (bob_basis == Basis::Diagonal) {
    out = apply_polarization_unitary(out, ports::kOut1, kDiagonalFrame);
    if (!cfg.both_ports) {
      out = apply_polarization_unitary(out, ports::kOut2, kDiagonalFrame);
    }
  }

  TrialRecord rec;
  rec.alice_state = choice;
  rec.bob_basis = bob_basis;
  rec.alice_bit = bit_of(choice);

  BornOutcome detection{0, out};
  if (cfg.both_ports) {
    // One detector pair, time-tagged: the delay reveals which corrector
    // output the photon came from, so every basis-matched round is sifted.
    const std::vector<ModePredicate> cells{
        [](const ModeLabel& m) { return m.delay == 1 && m.pol == Pol::H; },
        [](const ModeLabel& m) { return m.delay == 1 && m.pol == Pol::V; },
        [](const ModeLabel& m) { return m.delay == 2 && m.pol == Pol::H; },
        [](const ModeLabel& m) { return m.delay == 2 && m.pol == Pol::V; },
    };
    detection = born_sample(out, cells, rng);
    rec.detected_delay = detection.cell < 2 ? 1 : 2;
    rec.detected_port = detection.cell < 2 ? ports::kOut1 : ports::kOut2;
    rec.bob_bit = static_cast<int>(detection.cell % 2);
    rec.sifted = bob_basis == basis_of(choice);
  } else {
    // Detectors on the key port only; arrivals on the other port are thrown
    // away during sifting.
    const std::string& key = cfg.key_port;
    const std::vector<ModePredicate> cells{
        [&](const ModeLabel& m) { return m.port == key && m.pol == Pol::H; },
        [&](const ModeLabel& m) { return m.port == key && m.pol == Pol::V; },
        [&](const ModeLabel& m) { return m.port != key; },
    };
    detection = born_sample(out, cells, rng);
    const bool on_key_port = detection.cell < 2;
    rec.detected_port = on_key_port ? key : (key == ports::kOut1 ? ports::kOut2 : ports::kOut1);
    rec.detected_delay = 1;
    rec.bob_bit = on_key_port ? static_cast<int>(detection.cell) : 0;
    rec.sifted = on_key_port && bob_basis == basis_of(choice);
  }
  rec.error = rec.sifted && rec.bob_bit != rec.alice_bit;

  if (cfg.eve) {
    const EveMeasurement probe = measure_eve(detection.collapsed, rng);
    rec.eve_guess = eve_guess_bit(basis_of(choice), probe.outcome);
  }
  return rec;
}

Bb84Result run_bb84(const Bb84Config& cfg, Execution exec) {
  Bb84Result result;
  result.records.resize(cfg.rounds);
  std::vector<TrialRecord>& records = result.records;

  for_each_index(cfg.rounds, exec,
                 [&](std::size_t i) { records[i] = run_bb84_trial(cfg, i); });

  // Serial reduction keeps the statistics independent of thread count.
  Bb84Stats& stats = result.stats;
  stats.rounds = cfg.rounds;
  for (const TrialRecord& rec : records) {
    if (!rec.sifted) {
      continue;
    }
    ++stats.sifted;
    if (rec.error) {
      ++stats.errors;
    }
    if (rec.eve_guess && *rec.eve_guess == rec.alice_bit) {
      ++stats.eve_correct;
    }
  }
  stats.sift_rate = cfg.rounds == 0 ? 0.0 : static_cast<double>(stats.sifted) / cfg.rounds;
  stats.qber = stats.sifted == 0 ? 0.0 : static_cast<double>(stats.errors) / stats.sifted;
  if (cfg.eve) {
    stats.eve_success =
        stats.sifted == 0 ? 0.0 : static_cast<double>(stats.eve_correct) / stats.sifted;
  }

  if (!cfg.keep_records) {
    records.clear();
    records.shrink_to_fit();
  }
  return result;
}

}  // namespace polqec
