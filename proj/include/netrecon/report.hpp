#pragma once

// JSON and delimited-text serialization of analysis results. Node indices
// are 1-based in every external format.

#include <netrecon/gram.hpp>
#include <netrecon/group.hpp>
#include <netrecon/model.hpp>
#include <netrecon/perturb.hpp>
#include <netrecon/reconstruct.hpp>
#include <netrecon/trajectory_io.hpp>

#include <json.hpp>

#include <cstddef>
#include <ostream>
#include <vector>

namespace netrecon {

using Json = nlohmann::ordered_json;

inline Json to_json(const Vector& v) {
  Json out = Json::array();
  for (Eigen::Index k = 0; k < v.size(); ++k) out.push_back(v(k));
  return out;
}

/// Row-major nested arrays.
inline Json to_json(const Matrix& m) {
  Json out = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) out.push_back(to_json(Vector(m.row(r).transpose())));
  return out;
}

inline Json columns_to_json(const Matrix& m) {
  Json out = Json::array();
  for (Eigen::Index c = 0; c < m.cols(); ++c) out.push_back(to_json(Vector(m.col(c))));
  return out;
}

inline Json indices_to_json(const std::vector<std::size_t>& idx) {
  Json out = Json::array();
  for (std::size_t j : idx) out.push_back(j + 1);
  return out;
}

inline Json to_json(const GramSummary& g) {
  const PeResult pe = pe_check(g);
  Json j;
  j["node"] = g.node + 1;
  j["rank"] = g.rank;
  j["singular_values"] = to_json(g.singular_values);
  j["kernel_basis"] = columns_to_json(g.kernel);
  j["pe"] = pe.holds;
  j["margin"] = pe.margin;
  return j;
}

inline Json to_json(const ContainmentResult& c) {
  Json j;
  j["containment"] = to_string(c.kind);
  j["kernel_support"] = indices_to_json(c.kernel_support);
  j["identifiable"] = indices_to_json(c.identifiable_coordinates());
  return j;
}

inline Json to_json(const Verdict& v) {
  Json j;
  j["node"] = v.node + 1;
  j["property"] = to_string(v.property);
  j["status"] = to_string(v.status);
  if (v.value) j["value"] = to_json(*v.value);
  if (v.status == VerdictStatus::ambiguous) {
    Json w = Json::array();
    for (std::size_t k = 0; k < v.witnesses.size(); ++k) {
      Json item;
      item["vector"] = to_json(v.witnesses[k]);
      item["value"] = to_json(v.witness_values[k]);
      w.push_back(std::move(item));
    }
    j["witnesses"] = std::move(w);
  }
  j["residual"] = v.residual;
  j["pieces_checked"] = v.pieces_checked;
  return j;
}

inline Json to_json(const AdjacencyVerdict& v) {
  Json j;
  j["node"] = v.node + 1;
  j["containment"] = to_string(v.containment);
  Json coords = Json::array();
  for (AdjacencyState s : v.coordinates) coords.push_back(to_string(s));
  j["adjacency"] = std::move(coords);
  j["weights_reconstructable"] = v.weights_reconstructable;
  j["sign_reconstructable"] = v.sign_reconstructable;
  j["residual"] = v.residual;
  return j;
}

inline Json to_json(const SurvivalRow& r) {
  Json j;
  j["delta"] = r.delta;
  j["trials"] = r.trials;
  j["survived"] = r.survived;
  j["fraction"] = r.fraction;
  j["min_margin"] = r.min_margin;
  return j;
}

inline Json to_json(const FlipRow& r) {
  Json j;
  j["delta"] = r.delta;
  j["size"] = r.size;
  j["before"] = to_string(r.before);
  j["after"] = to_string(r.after);
  j["flipped"] = r.flipped;
  return j;
}

inline void write_survival_table(std::ostream& os, const std::vector<SurvivalRow>& rows) {
  os << "delta,trials,survived,fraction\n";
  for (const auto& r : rows)
    os << detail::format_real(r.delta) << ',' << r.trials << ',' << r.survived << ','
       << detail::format_real(r.fraction) << '\n';
}

inline void write_flip_table(std::ostream& os, const std::vector<FlipRow>& rows) {
  os << "delta,size,before,after,flipped\n";
  for (const auto& r : rows)
    os << detail::format_real(r.delta) << ',' << detail::format_real(r.size) << ','
       << to_string(r.before) << ',' << to_string(r.after) << ',' << (r.flipped ? 1 : 0)
       << '\n';
}

}  // namespace netrecon
