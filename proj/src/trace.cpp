#include "polqec/trace.hpp"

#include <json.hpp>

#include "polqec/errors.hpp"

namespace polqec {

namespace {

nlohmann::json term_json(const ModeLabel& label, Complex amp) {
  nlohmann::json t{{"pol", to_string(label.pol)},
                   {"delay", label.delay},
                   {"port", label.port},
                   {"re", amp.real()},
                   {"im", amp.imag()}};
  if (label.eve) {
    t["probe"] = to_string(*label.eve);
  }
  return t;
}

nlohmann::json stage_json(const TraceStage& stage) {
  nlohmann::json out{{"label", stage.label}};
  nlohmann::json terms = nlohmann::json::array();
  if (const auto* photon = std::get_if<PhotonState>(&stage.snapshot)) {
    out["kind"] = "photon";
    for (const auto& [label, amp] : photon->terms()) {
      terms.push_back(term_json(label, amp));
    }
  } else {
    const auto& field = std::get<CoherentField>(stage.snapshot);
    out["kind"] = "field";
    out["discarded_power"] = field.discarded_power();
    for (const auto& [key, amps] : field.slots()) {
      if (amps.h != Complex{0, 0}) {
        terms.push_back(term_json({Pol::H, key.delay, key.port, std::nullopt}, amps.h));
      }
      if (amps.v != Complex{0, 0}) {
        terms.push_back(term_json({Pol::V, key.delay, key.port, std::nullopt}, amps.v));
      }
    }
  }
  out["terms"] = std::move(terms);
  return out;
}

}  // namespace

void SetupTrace::add(std::string label, PhotonState state) {
  stages_.push_back({std::move(label), std::move(state)});
}

void SetupTrace::add(std::string label, CoherentField field) {
  stages_.push_back({std::move(label), std::move(field)});
}

const TraceStage* SetupTrace::find(const std::string& label) const {
  for (const auto& stage : stages_) {
    if (stage.label == label) {
      return &stage;
    }
  }
  return nullptr;
}

const PhotonState& SetupTrace::photon_stage(const std::string& label) const {
  const TraceStage* stage = find(label);
  if (stage == nullptr) {
    throw StructureError("no trace stage labeled '" + label + "'");
  }
  const auto* photon = std::get_if<PhotonState>(&stage->snapshot);
  if (photon == nullptr) {
    throw StructureError("trace stage '" + label + "' holds a coherent field, not a photon state");
  }
  return *photon;
}

const CoherentField& SetupTrace::field_stage(const std::string& label) const {
  const TraceStage* stage = find(label);
  if (stage == nullptr) {
    throw StructureError("no trace stage labeled '" + label + "'");
  }
  const auto* field = std::get_if<CoherentField>(&stage->snapshot);
  if (field == nullptr) {
    throw StructureError("trace stage '" + label + "' holds a photon state, not a coherent field");
  }
  return *field;
}

std::string SetupTrace::to_json(int indent) const {
  nlohmann::json out;
  nlohmann::json stages = nlohmann::json::array();
  for (const auto& stage : stages_) {
    stages.push_back(stage_json(stage));
  }
  out["stages"] = std::move(stages);
  return out.dump(indent);
}

}  // namespace polqec
