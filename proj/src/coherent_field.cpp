#include "polqec/coherent_field.hpp"

#include <cmath>

#include "polqec/photon_state.hpp"  // kAmplitudePruneThreshold

namespace polqec {

CoherentField CoherentField::single_pulse(Complex alpha_h, Complex alpha_v,
                                          const std::string& port) {
  CoherentField f;
  f.slots_[{0, port}] = {alpha_h, alpha_v};
  f.prune();
  return f;
}

SlotAmplitudes CoherentField::slot(const SlotKey& key) const {
  const auto it = slots_.find(key);
  return it == slots_.end() ? SlotAmplitudes{} : it->second;
}

double CoherentField::total_power() const {
  double p = 0.0;
  for (const auto& [key, amps] : slots_) {
    p += amps.power();
  }
  return p;
}

void CoherentField::set_slot(const SlotKey& key, SlotAmplitudes amps) {
  if (std::abs(amps.h) < kAmplitudePruneThreshold && std::abs(amps.v) < kAmplitudePruneThreshold) {
    discarded_power_ += amps.power();
    slots_.erase(key);
    return;
  }
  slots_[key] = amps;
}

CoherentField CoherentField::with_port_discarded(const std::string& port) const {
  CoherentField out = *this;
  for (auto it = out.slots_.begin(); it != out.slots_.end();) {
    if (it->first.port == port) {
      out.discarded_power_ += it->second.power();
      it = out.slots_.erase(it);
    } else {
      ++it;
    }
  }
  return out;
}

CoherentField CoherentField::filtered(const std::function<bool(const SlotKey&)>& keep) const {
  CoherentField out = *this;
  for (auto it = out.slots_.begin(); it != out.slots_.end();) {
    if (keep(it->first)) {
      ++it;
    } else {
      out.discarded_power_ += it->second.power();
      it = out.slots_.erase(it);
    }
  }
  return out;
}

void CoherentField::prune() {
  // Sub-threshold components are residue of exact cancellations; their power
  // is folded into the discarded total so end-to-end accounting still closes.
  for (auto it = slots_.begin(); it != slots_.end();) {
    SlotAmplitudes& amps = it->second;
    if (std::abs(amps.h) < kAmplitudePruneThreshold) {
      discarded_power_ += std::norm(amps.h);
      amps.h = Complex{0, 0};
    }
    if (std::abs(amps.v) < kAmplitudePruneThreshold) {
      discarded_power_ += std::norm(amps.v);
      amps.v = Complex{0, 0};
    }
    if (amps.h == Complex{0, 0} && amps.v == Complex{0, 0}) {
      it = slots_.erase(it);
    } else {
      ++it;
    }
  }
}

CoherentField with_slots(const CoherentField& like, CoherentField::SlotMap slots) {
  CoherentField out;
  out.slots_ = std::move(slots);
  out.discarded_power_ = like.discarded_power();
  out.prune();
  return out;
}

}  // namespace polqec
