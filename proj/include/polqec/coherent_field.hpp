#ifndef POLQEC_COHERENT_FIELD_HPP
#define POLQEC_COHERENT_FIELD_HPP

#include <compare>
#include <functional>
#include <map>
#include <string>

#include "polqec/mode.hpp"

namespace polqec {

/// Addresses one pulse slot of a multi-pulse classical-like field.
struct SlotKey {
  int delay = 0;
  std::string port;

  auto operator<=>(const SlotKey&) const = default;
};

/// Two-mode coherent amplitudes (horizontal, vertical) of one pulse slot,
/// in sqrt(photon-number) units.
struct SlotAmplitudes {
  Complex h{0, 0};
  Complex v{0, 0};

  double power() const { return std::norm(h) + std::norm(v); }
};

/// A set of two-mode coherent pulses indexed by (time-bin, port).
///
/// Carries optical power, never probability amplitudes. Power only leaves the
/// live slots through with_port_discarded() / filtered(), which fold it into
/// a running total so end-to-end accounting stays exact.
class CoherentField {
 public:
  using SlotMap = std::map<SlotKey, SlotAmplitudes>;

  CoherentField() = default;

  /// Single input pulse at delay 0 on `port`.
  static CoherentField single_pulse(Complex alpha_h, Complex alpha_v, const std::string& port);

  const SlotMap& slots() const { return slots_; }
  bool empty() const { return slots_.empty(); }

  /// Amplitudes of one slot; vacuum if the slot is not populated.
  SlotAmplitudes slot(const SlotKey& key) const;
  double slot_power(const SlotKey& key) const { return slot(key).power(); }

  /// Total power over live slots (discarded power not included).
  double total_power() const;

  /// Power folded away by explicit discards so far.
  double discarded_power() const { return discarded_power_; }

  /// Sets a slot's amplitudes (used by components when rebuilding fields).
  void set_slot(const SlotKey& key, SlotAmplitudes amps);

  /// Drops every slot on `port`, adding its power to the discarded total.
  CoherentField with_port_discarded(const std::string& port) const;

  /// Keeps only slots matching `keep`; everything else is discarded.
  CoherentField filtered(const std::function<bool(const SlotKey&)>& keep) const;

 private:
  SlotMap slots_;
  double discarded_power_ = 0.0;

  void prune();
  friend CoherentField with_slots(const CoherentField& like, SlotMap slots);
};

/// New field with the given slots but the same discarded-power total as `like`.
CoherentField with_slots(const CoherentField& like, CoherentField::SlotMap slots);

}  // namespace polqec

#endif  // POLQEC_COHERENT_FIELD_HPP
