#include "polqec/components.hpp"

#include <cmath>
#include <map>
#include <tuple>
#include <utility>

#include "polqec/errors.hpp"

namespace polqec {

namespace {

// Applies a 2x2 matrix to the (H, V) amplitude pair of every (delay, port,
// probe) group on `port` of a photon state. Groups elsewhere pass through.
PhotonState mix_polarizations(const PhotonState& s, const std::string& port,
                              const PolarizationUnitary& u) {
  using Group = std::tuple<int, std::string, std::optional<EveBit>>;
  std::map<Group, std::pair<Complex, Complex>> groups;
  PhotonState::TermMap out;
  for (const auto& [label, amp] : s.terms()) {
    if (label.port != port) {
      out[label] += amp;
      continue;
    }
    auto& hv = groups[{label.delay, label.port, label.eve}];
    (label.pol == Pol::H ? hv.first : hv.second) += amp;
  }
  for (const auto& [group, hv] : groups) {
    const auto [h, v] = u.apply(hv.first, hv.second);
    const auto& [delay, group_port, eve] = group;
    out[{Pol::H, delay, group_port, eve}] += h;
    out[{Pol::V, delay, group_port, eve}] += v;
  }
  return PhotonState(std::move(out));
}

CoherentField mix_polarizations(const CoherentField& f, const std::string& port,
                                const PolarizationUnitary& u) {
  CoherentField::SlotMap out;
  for (const auto& [key, amps] : f.slots()) {
    if (key.port != port) {
      out[key] = amps;
      continue;
    }
    const auto [h, v] = u.apply(amps.h, amps.v);
    out[key] = {h, v};
  }
  return with_slots(f, std::move(out));
}

void add_component(CoherentField::SlotMap& slots, const SlotKey& key, Pol pol, Complex amp) {
  SlotAmplitudes& target = slots[key];
  (pol == Pol::H ? target.h : target.v) += amp;
}

}  // namespace

PhotonState pbs(const PhotonState& s, const std::string& in_port, const std::string& out_h,
                const std::string& out_v) {
  return s.relabeled([&](const ModeLabel& m) {
    if (m.port != in_port) {
      return m;
    }
    ModeLabel out = m;
    out.port = m.pol == Pol::H ? out_h : out_v;
    return out;
  });
}

CoherentField pbs(const CoherentField& f, const std::string& in_port, const std::string& out_h,
                  const std::string& out_v) {
  CoherentField::SlotMap out;
  for (const auto& [key, amps] : f.slots()) {
    if (key.port != in_port) {
      add_component(out, key, Pol::H, amps.h);
      add_component(out, key, Pol::V, amps.v);
      continue;
    }
    add_component(out, {key.delay, out_h}, Pol::H, amps.h);
    add_component(out, {key.delay, out_v}, Pol::V, amps.v);
  }
  return with_slots(f, std::move(out));
}

PhotonState pockels_flip(const PhotonState& s, const std::string& port, int delay_gate) {
  return s.relabeled([&](const ModeLabel& m) {
    if (m.port != port || m.delay != delay_gate) {
      return m;
    }
    ModeLabel out = m;
    out.pol = flipped(m.pol);
    return out;
  });
}

PhotonState delay_arm(const PhotonState& s, const std::string& port, Pol long_path) {
  return s.relabeled([&](const ModeLabel& m) {
    if (m.port != port || m.pol != long_path) {
      return m;
    }
    ModeLabel out = m;
    out.delay += 1;
    return out;
  });
}

CoherentField delay_arm(const CoherentField& f, const std::string& port, Pol long_path) {
  CoherentField::SlotMap out;
  for (const auto& [key, amps] : f.slots()) {
    if (key.port != port) {
      add_component(out, key, Pol::H, amps.h);
      add_component(out, key, Pol::V, amps.v);
      continue;
    }
    const SlotKey delayed{key.delay + 1, key.port};
    add_component(out, long_path == Pol::H ? delayed : key, Pol::H, amps.h);
    add_component(out, long_path == Pol::V ? delayed : key, Pol::V, amps.v);
  }
  return with_slots(f, std::move(out));
}

PhotonState apply_polarization_unitary(const PhotonState& s, const std::string& port,
                                       const PolarizationUnitary& u) {
  return mix_polarizations(s, port, u);
}

CoherentField apply_polarization_unitary(const CoherentField& f, const std::string& port,
                                         const PolarizationUnitary& u) {
  return mix_polarizations(f, port, u);
}

PhotonState rotate(const PhotonState& s, const std::string& port, double theta) {
  return mix_polarizations(s, port, PolarizationUnitary::rotation(theta));
}

CoherentField rotate(const CoherentField& f, const std::string& port, double theta) {
  return mix_polarizations(f, port, PolarizationUnitary::rotation(theta));
}

PhotonState hwp_swap(const PhotonState& s, const std::string& port) {
  // A pure label rewrite: bitwise-exact, unlike a matrix product.
  return s.relabeled([&](const ModeLabel& m) {
    if (m.port != port) {
      return m;
    }
    ModeLabel out = m;
    out.pol = flipped(m.pol);
    return out;
  });
}

CoherentField hwp_swap(const CoherentField& f, const std::string& port) {
  CoherentField::SlotMap out;
  for (const auto& [key, amps] : f.slots()) {
    if (key.port != port) {
      add_component(out, key, Pol::H, amps.h);
      add_component(out, key, Pol::V, amps.v);
      continue;
    }
    add_component(out, key, Pol::H, amps.v);
    add_component(out, key, Pol::V, amps.h);
  }
  return with_slots(f, std::move(out));
}

CoherentField coupler_50_50(const CoherentField& f, const std::string& in1,
                            const std::string& in2, const std::string& out1,
                            const std::string& out2) {
  const Complex t{kInvSqrt2, 0};  // transmission
  const Complex r{0, kInvSqrt2};  // reflection, +pi/2 ahead of transmission
  CoherentField::SlotMap out;
  std::map<int, std::pair<SlotAmplitudes, SlotAmplitudes>> inputs;  // delay -> (in1, in2)
  for (const auto& [key, amps] : f.slots()) {
    if (key.port == in1) {
      inputs[key.delay].first = amps;
    } else if (key.port == in2) {
      inputs[key.delay].second = amps;
    } else {
      add_component(out, key, Pol::H, amps.h);
      add_component(out, key, Pol::V, amps.v);
    }
  }
  for (const auto& [delay, pair] : inputs) {
    const auto& [a, b] = pair;
    out[{delay, out1}] = {t * a.h + r * b.h, t * a.v + r * b.v};
    out[{delay, out2}] = {r * a.h + t * b.h, r * a.v + t * b.v};
  }
  return with_slots(f, std::move(out));
}

PhotonState coupler_50_50(const PhotonState&, const std::string&, const std::string&,
                          const std::string&, const std::string&) {
  throw UnsupportedKindError("the 50/50 coupler is only modeled for coherent fields");
}

PhotonState phase_shift(const PhotonState& s, const std::string& port, double phi) {
  const Complex factor = std::polar(1.0, phi);
  PhotonState::TermMap out;
  for (const auto& [label, amp] : s.terms()) {
    out[label] = label.port == port ? amp * factor : amp;
  }
  return PhotonState(std::move(out));
}

CoherentField phase_shift(const CoherentField& f, const std::string& port, double phi) {
  const Complex factor = std::polar(1.0, phi);
  CoherentField::SlotMap out;
  for (const auto& [key, amps] : f.slots()) {
    if (key.port == port) {
      out[key] = {amps.h * factor, amps.v * factor};
    } else {
      out[key] = amps;
    }
  }
  return with_slots(f, std::move(out));
}

}  // namespace polqec
