#ifndef POLQEC_TRACE_HPP
#define POLQEC_TRACE_HPP

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "polqec/coherent_field.hpp"
#include "polqec/photon_state.hpp"

namespace polqec {

/// One checkpoint of a setup pipeline: a stage label and the full state at
/// that point. Stage labels are part of the public contract of each setup so
/// the intermediate states can be audited one by one.
struct TraceStage {
  std::string label;
  std::variant<PhotonState, CoherentField> snapshot;
};

class SetupTrace {
 public:
  void add(std::string label, PhotonState state);
  void add(std::string label, CoherentField field);

  const std::vector<TraceStage>& stages() const { return stages_; }

  const TraceStage* find(const std::string& label) const;
  const PhotonState& photon_stage(const std::string& label) const;
  const CoherentField& field_stage(const std::string& label) const;

  /// Serialized form: {"stages": [{"label", "kind", "terms": [...]}]}.
  /// Photon terms are {pol, delay, port, eve?, re, im}; field entries are the
  /// same shape with one entry per populated polarization of each slot.
  std::string to_json(int indent = 2) const;

 private:
  std::vector<TraceStage> stages_;
};

}  // namespace polqec

#endif  // POLQEC_TRACE_HPP
