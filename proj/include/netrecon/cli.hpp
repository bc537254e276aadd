#pragma once

// Batch front end: JSON run configuration, pipeline orchestration and report
// writing. Each command writes its files once, at the end.
//
// Exit codes: 0 all nodes unique / analysis done, 1 usage or IO error,
// 2 ambiguity found, 3 data inconsistent with the model class.

#include <netrecon/errors.hpp>
#include <netrecon/geometry.hpp>
#include <netrecon/gram.hpp>
#include <netrecon/group.hpp>
#include <netrecon/model.hpp>
#include <netrecon/perturb.hpp>
#include <netrecon/property.hpp>
#include <netrecon/reconstruct.hpp>
#include <netrecon/report.hpp>
#include <netrecon/trajectory_io.hpp>

#include <json.hpp>

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace netrecon::cli {

namespace fs = std::filesystem;

inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitAmbiguous = 2;
inline constexpr int kExitInconsistent = 3;

struct Tolerances {
  double rank = RankTolerance::kDefault;
  double zero = kDefaultZeroTol;
  double consistency = kDefaultConsistencyTol;

  void validate() const {
    auto check = [](double v, const char* name) {
      if (!(v > 0.0 && v < 1.0))
        throw ParameterError(std::string("tolerance '") + name + "' must lie in (0, 1)");
    };
    check(rank, "rank");
    check(zero, "zero");
    check(consistency, "consistency");
  }
};

struct InputConfig {
  std::string kind = "glv";  // none | glv | sinusoid | glv+sinusoid | glv-modulated
  Vector amplitude;
  Vector frequency;
  Vector phase;
};

struct ModelConfig {
  CouplingPreset preset = CouplingPreset::glv;
  std::size_t n = 0;
  std::optional<Matrix> a;
  Vector r;
  Vector x0;
  double horizon = 10.0;
  double step = 0.01;
  InputConfig input;
};

struct PriorConfig {
  PriorKind kind = PriorKind::unconstrained;
  std::vector<Vector> points;
  double epsilon = 0.0;
  double a_min = 0.0;
  double a_max = 0.0;
};

struct ProbeConfig {
  std::string kind = "pe-survival";  // pe-survival | orbit-flip
  std::size_t node = 0;              // 0-based internally
  std::vector<double> deltas;
  std::vector<double> margin_fractions;
  std::size_t trials = 100;
  DeformationKind deformation = DeformationKind::rotation;
};

struct RunConfig {
  std::string command;
  std::optional<ModelConfig> model;
  std::optional<fs::path> trajectory;
  Uncertainty uncertainty = Uncertainty::exact;
  std::optional<PriorConfig> prior;
  PropertyKind property = PropertyKind::sign;
  Tolerances tolerances;
  ProbeConfig probe;
  std::uint64_t seed = 0;
  std::optional<std::uint64_t> pair_seed;  // build an indistinguishable pair from the model
  fs::path out = "netrecon-out";
};

/// Command-line values that take precedence over the config file.
struct Overrides {
  std::optional<fs::path> out;
  std::optional<std::uint64_t> seed;
  std::optional<double> tol_rank;
  std::optional<double> tol_zero;
  std::optional<double> tol_consistency;
};

namespace detail {

inline Vector vector_from(const Json& j, const std::string& key) {
  if (!j.is_array()) throw ParameterError("config: '" + key + "' must be an array of numbers");
  Vector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t k = 0; k < j.size(); ++k) {
    if (!j[k].is_number()) throw ParameterError("config: '" + key + "' must hold numbers");
    v(static_cast<Eigen::Index>(k)) = j[k].get<double>();
  }
  return v;
}

inline Matrix matrix_from(const Json& j, const std::string& key) {
  if (!j.is_array() || j.empty()) throw ParameterError("config: '" + key + "' must be a nested array");
  const std::size_t rows = j.size();
  const std::size_t cols = j[0].is_array() ? j[0].size() : 0;
  Matrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (std::size_t r = 0; r < rows; ++r) {
    const Vector row = vector_from(j[r], key);
    if (static_cast<std::size_t>(row.size()) != cols)
      throw ParameterError("config: rows of '" + key + "' differ in length");
    m.row(static_cast<Eigen::Index>(r)) = row.transpose();
  }
  return m;
}

inline double number_from(const Json& j, const std::string& key) {
  if (!j.is_number()) throw ParameterError("config: '" + key + "' must be a number");
  return j.get<double>();
}

inline std::uint64_t seed_from(const Json& j, const std::string& key) {
  if (!j.is_number_unsigned()) throw ParameterError("config: '" + key + "' must be an unsigned integer");
  return j.get<std::uint64_t>();
}

inline std::size_t line_of_offset(const std::string& text, std::size_t byte) {
  byte = std::min(byte, text.size());
  return 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(byte), '\n'));
}

inline CouplingPreset parse_preset(const std::string& s) {
  if (s == "glv") return CouplingPreset::glv;
  if (s == "linear") return CouplingPreset::linear;
  throw ParameterError("config: model preset must be 'glv' or 'linear', got '" + s + "'");
}

inline ModelConfig parse_model(const Json& j) {
  ModelConfig m;
  if (j.contains("preset")) m.preset = parse_preset(j["preset"].get<std::string>());
  if (j.contains("A")) m.a = matrix_from(j["A"], "model.A");
  if (j.contains("n")) m.n = static_cast<std::size_t>(number_from(j["n"], "model.n"));
  if (m.a) {
    if (m.n != 0 && m.n != static_cast<std::size_t>(m.a->rows()))
      throw ParameterError("config: model.n disagrees with model.A");
    m.n = static_cast<std::size_t>(m.a->rows());
  }
  if (j.contains("r")) m.r = vector_from(j["r"], "model.r");
  if (j.contains("x0")) m.x0 = vector_from(j["x0"], "model.x0");
  if (j.contains("horizon")) m.horizon = number_from(j["horizon"], "model.horizon");
  if (j.contains("step")) m.step = number_from(j["step"], "model.step");
  if (j.contains("input")) {
    const Json& in = j["input"];
    if (in.contains("kind")) m.input.kind = in["kind"].get<std::string>();
    if (in.contains("amplitude")) m.input.amplitude = vector_from(in["amplitude"], "input.amplitude");
    if (in.contains("frequency")) m.input.frequency = vector_from(in["frequency"], "input.frequency");
    if (in.contains("phase")) m.input.phase = vector_from(in["phase"], "input.phase");
  } else if (m.preset != CouplingPreset::glv) {
    m.input.kind = "none";
  }
  return m;
}

inline PriorConfig parse_prior(const Json& j) {
  PriorConfig p;
  if (j.contains("discrete")) {
    p.kind = PriorKind::discrete;
    for (const Json& pt : j["discrete"]) p.points.push_back(vector_from(pt, "prior.discrete"));
  } else if (j.contains("bounds")) {
    p.kind = PriorKind::box_union;
    const Json& b = j["bounds"];
    p.epsilon = number_from(b.at("epsilon"), "bounds.epsilon");
    p.a_min = number_from(b.at("a_min"), "bounds.a_min");
    p.a_max = number_from(b.at("a_max"), "bounds.a_max");
  } else if (j.value("unconstrained", false)) {
    p.kind = PriorKind::unconstrained;
  } else {
    throw ParameterError("config: prior needs 'discrete', 'bounds' or 'unconstrained'");
  }
  return p;
}

inline ProbeConfig parse_probe(const Json& j) {
  ProbeConfig p;
  if (j.contains("kind")) p.kind = j["kind"].get<std::string>();
  if (p.kind != "pe-survival" && p.kind != "orbit-flip")
    throw ParameterError("config: probe kind must be 'pe-survival' or 'orbit-flip'");
  if (j.contains("node")) {
    const double node = number_from(j["node"], "probe.node");
    if (node < 1) throw ParameterError("config: probe.node is 1-based");
    p.node = static_cast<std::size_t>(node) - 1;
  }
  auto list = [](const Json& a, const std::string& key) {
    const Vector v = vector_from(a, key);
    return std::vector<double>(v.data(), v.data() + v.size());
  };
  if (j.contains("deltas")) p.deltas = list(j["deltas"], "probe.deltas");
  if (j.contains("margin_fractions"))
    p.margin_fractions = list(j["margin_fractions"], "probe.margin_fractions");
  if (j.contains("trials")) p.trials = static_cast<std::size_t>(number_from(j["trials"], "probe.trials"));
  if (j.contains("deformation")) p.deformation = parse_deformation_kind(j["deformation"].get<std::string>());
  return p;
}

}  // namespace detail

/// Builds a RunConfig from parsed JSON. Relative file paths resolve
/// against `base_dir`.
inline RunConfig parse_config(const Json& j, const fs::path& base_dir) {
  if (!j.is_object()) throw ParameterError("config: top level must be an object");
  RunConfig c;
  try {
    if (j.contains("command")) c.command = j["command"].get<std::string>();
    if (j.contains("model")) c.model = detail::parse_model(j["model"]);
    if (j.contains("trajectory")) {
      fs::path p = j["trajectory"].get<std::string>();
      c.trajectory = p.is_absolute() ? p : base_dir / p;
    }
    if (j.contains("uncertainty")) {
      const auto u = j["uncertainty"].get<std::string>();
      if (u == "exact") c.uncertainty = Uncertainty::exact;
      else if (u == "linear-group") c.uncertainty = Uncertainty::linear_group;
      else throw ParameterError("config: uncertainty must be 'exact' or 'linear-group'");
    }
    if (j.contains("prior")) c.prior = detail::parse_prior(j["prior"]);
    if (j.contains("property")) c.property = parse_property_kind(j["property"].get<std::string>());
    if (j.contains("tolerances")) {
      const Json& t = j["tolerances"];
      if (t.contains("rank")) c.tolerances.rank = detail::number_from(t["rank"], "tolerances.rank");
      if (t.contains("zero")) c.tolerances.zero = detail::number_from(t["zero"], "tolerances.zero");
      if (t.contains("consistency"))
        c.tolerances.consistency = detail::number_from(t["consistency"], "tolerances.consistency");
    }
    if (j.contains("probe")) c.probe = detail::parse_probe(j["probe"]);
    if (j.contains("seed")) c.seed = detail::seed_from(j["seed"], "seed");
    if (j.contains("indistinguishable_pair"))
      c.pair_seed = detail::seed_from(j["indistinguishable_pair"].at("seed"),
                                      "indistinguishable_pair.seed");
    if (j.contains("out")) {
      fs::path p = j["out"].get<std::string>();
      c.out = p;
    }
  } catch (const nlohmann::json::exception& e) {
    throw ParameterError(std::string("config: ") + e.what());
  }
  return c;
}

inline RunConfig load_config(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open config file '" + path.string() + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();
  Json j;
  try {
    j = Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(detail::line_of_offset(text, e.byte), path.string() + ": malformed JSON");
  }
  return parse_config(j, path.parent_path());
}

inline void apply(RunConfig& c, const Overrides& o) {
  if (o.out) c.out = *o.out;
  if (o.seed) c.seed = *o.seed;
  if (o.tol_rank) c.tolerances.rank = *o.tol_rank;
  if (o.tol_zero) c.tolerances.zero = *o.tol_zero;
  if (o.tol_consistency) c.tolerances.consistency = *o.tol_consistency;
}

/// Trajectory, regressor family and optional ground truth a command runs on.
struct Dataset {
  Trajectory trajectory;
  RegressorFamily regressor;
  std::optional<InteractionMatrix> truth;
  std::optional<IndistinguishablePair> pair;
  std::optional<double> pair_sup_distance;
};

namespace detail {

inline RegressorFamily make_regressor(CouplingPreset p, std::size_t n, Uncertainty u) {
  return p == CouplingPreset::linear ? RegressorFamily::linear(n, u) : RegressorFamily::glv(n, u);
}

inline InputSignal make_input(const ModelConfig& m) {
  const std::size_t n = m.n;
  auto sinusoid = [&]() {
    const auto sz = static_cast<Eigen::Index>(n);
    Vector phase = m.input.phase.size() ? m.input.phase : Vector(Vector::Zero(sz));
    if (m.input.amplitude.size() != sz || m.input.frequency.size() != sz || phase.size() != sz)
      throw ParameterError("config: sinusoid amplitude/frequency/phase need n entries");
    return sinusoidal_input(m.input.amplitude, m.input.frequency, phase);
  };
  auto growth = [&]() {
    if (static_cast<std::size_t>(m.r.size()) != n)
      throw ParameterError("config: model.r needs n entries for GLV growth input");
    return glv_input(GlvParameters(m.r));
  };
  const std::string& k = m.input.kind;
  if (k == "none") return zero_input(n);
  if (k == "glv") return growth();
  if (k == "sinusoid") return sinusoid();
  if (k == "glv+sinusoid") return sum_inputs(growth(), sinusoid());
  if (k == "glv-modulated") {
    const auto sz = static_cast<Eigen::Index>(n);
    Vector phase = m.input.phase.size() ? m.input.phase : Vector(Vector::Zero(sz));
    if (static_cast<std::size_t>(m.r.size()) != n)
      throw ParameterError("config: model.r needs n entries for GLV growth input");
    if (m.input.amplitude.size() != sz || m.input.frequency.size() != sz || phase.size() != sz)
      throw ParameterError("config: modulation amplitude/frequency/phase need n entries");
    return modulated_glv_input(GlvParameters(m.r), m.input.amplitude, m.input.frequency, phase);
  }
  throw ParameterError("config: unknown input kind '" + k + "'");
}

}  // namespace detail

inline Dataset load_dataset(const RunConfig& c) {
  if (c.trajectory) {
    std::ifstream in(*c.trajectory);
    if (!in) throw Error("cannot open trajectory file '" + c.trajectory->string() + "'");
    Trajectory traj = read_trajectory(in);
    const CouplingPreset preset = c.model ? c.model->preset : CouplingPreset::glv;
    RegressorFamily reg = detail::make_regressor(preset, traj.nodes(), c.uncertainty);
    return Dataset{std::move(traj), std::move(reg), std::nullopt, std::nullopt, std::nullopt};
  }
  if (!c.model) throw ParameterError("config: need either 'trajectory' or 'model'");
  const ModelConfig& m = *c.model;
  if (!m.a) throw ParameterError("config: model.A is required for simulation");
  InteractionMatrix a(*m.a);
  RegressorFamily reg = detail::make_regressor(m.preset, m.n, c.uncertainty);
  const InputSignal u = detail::make_input(m);

  std::optional<IndistinguishablePair> pair;
  Vector x0 = m.x0;
  if (c.pair_seed) {
    if (m.preset != CouplingPreset::glv)
      throw ParameterError("config: indistinguishable pair needs the GLV preset");
    pair = indistinguishable_pair(a, GlvParameters(m.r), *c.pair_seed);
    x0 = pair->steady_state;
  }
  if (static_cast<std::size_t>(x0.size()) != m.n)
    throw ParameterError("config: model.x0 needs n entries");
  Trajectory traj = simulate(a, reg, u, x0, m.horizon, m.step);
  std::optional<double> dist;
  if (pair) dist = sup_distance(traj, simulate(pair->a_prime, reg, u, x0, m.horizon, m.step));
  return Dataset{std::move(traj), std::move(reg), std::move(a), std::move(pair), dist};
}

inline PriorSet make_prior(const PriorConfig& p, std::size_t n) {
  switch (p.kind) {
    case PriorKind::unconstrained: return PriorSet::unconstrained(n);
    case PriorKind::discrete: {
      PriorSet s = PriorSet::discrete(p.points);
      if (s.dimension() != n) throw ParameterError("config: discrete prior points need n entries");
      return s;
    }
    case PriorKind::box_union: return sign_boxes(n, p.epsilon, p.a_min, p.a_max);
  }
  return PriorSet::unconstrained(n);
}

namespace detail {

inline Json tolerances_json(const Tolerances& t) {
  Json j;
  j["rank"] = t.rank;
  j["zero"] = t.zero;
  j["consistency"] = t.consistency;
  return j;
}

inline Json report_header(const RunConfig& c) {
  Json j;
  j["command"] = c.command;
  j["tolerances"] = tolerances_json(c.tolerances);
  j["seed"] = c.seed;
  j["uncertainty"] = to_string(c.uncertainty);
  return j;
}

inline Json pair_json(const Dataset& d) {
  Json j;
  j["A"] = to_json(d.pair->a.matrix());
  j["A_prime"] = to_json(d.pair->a_prime.matrix());
  j["steady_state"] = to_json(d.pair->steady_state);
  j["sup_distance"] = *d.pair_sup_distance;
  return j;
}

inline void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  out << text;
  if (!out) throw Error("write failed for '" + path.string() + "'");
}

inline void write_report(const fs::path& dir, const Json& report) {
  fs::create_directories(dir);
  write_text(dir / "report.json", report.dump(2) + "\n");
}

inline std::vector<GramSummary> all_grams(const Dataset& d, const Tolerances& t) {
  std::vector<GramSummary> out;
  for (std::size_t i = 0; i < d.trajectory.nodes(); ++i)
    out.push_back(compute_gram(d.trajectory, d.regressor, i, RankTolerance(t.rank)));
  return out;
}

}  // namespace detail

inline int cmd_simulate(const RunConfig& c, std::ostream& log) {
  const Dataset d = load_dataset(c);
  Json report = detail::report_header(c);
  report["nodes"] = d.trajectory.nodes();
  report["samples"] = d.trajectory.samples();
  report["t0"] = d.trajectory.t0();
  report["t1"] = d.trajectory.t1();
  report["step"] = d.trajectory.step();
  report["final_state"] = to_json(d.trajectory.state(d.trajectory.samples() - 1));
  if (d.pair) report["indistinguishable_pair"] = detail::pair_json(d);
  std::ostringstream csv;
  write_trajectory(csv, d.trajectory);
  fs::create_directories(c.out);
  detail::write_text(c.out / "trajectory.csv", csv.str());
  detail::write_report(c.out, report);
  log << "simulated " << d.trajectory.samples() << " samples of " << d.trajectory.nodes()
      << " nodes -> " << (c.out / "trajectory.csv").string() << '\n';
  return kExitOk;
}

inline int cmd_analyze(const RunConfig& c, std::ostream& log) {
  const Dataset d = load_dataset(c);
  Json report = detail::report_header(c);
  Json nodes = Json::array();
  for (const GramSummary& g : detail::all_grams(d, c.tolerances)) {
    Json j = to_json(g);
    j["kernel_dimension"] = g.kernel_dimension();
    const ContainmentResult cr = kernel_orbit_containment(g, c.tolerances.zero);
    for (auto& [key, value] : to_json(cr).items()) j[key] = value;
    j["generic_verdict"] = to_string(generic_verdict(g, c.tolerances.zero));
    log << "node " << g.node + 1 << ": rank " << g.rank << '/' << g.dimension()
        << (pe_check(g).holds ? ", PE" : ", no PE") << '\n';
    nodes.push_back(std::move(j));
  }
  report["nodes"] = std::move(nodes);
  detail::write_report(c.out, report);
  return kExitOk;
}

inline int cmd_reconstruct(const RunConfig& c, std::ostream& log) {
  const Dataset d = load_dataset(c);
  const std::vector<GramSummary> grams = detail::all_grams(d, c.tolerances);
  const std::size_t n = d.trajectory.nodes();
  Json report = detail::report_header(c);
  report["property"] = to_string(c.property);
  if (d.pair) report["indistinguishable_pair"] = detail::pair_json(d);

  bool ambiguous = false;
  bool inconsistent = false;
  Json nodes = Json::array();
  if (c.uncertainty == Uncertainty::linear_group) {
    if (c.property != PropertyKind::adjacency)
      throw PreconditionError("under linear-group uncertainty only the adjacency pattern can be "
                              "reconstructed; set property to 'adjacency'");
    for (const GramSummary& g : grams) {
      const AdjacencyVerdict v = reconstruct_adjacency_under_uncertainty(g, c.tolerances.zero);
      if (v.residual > c.tolerances.consistency) inconsistent = true;
      for (std::size_t j = 0; j < n; ++j)
        if (j != g.node && v.coordinates[j] == AdjacencyState::unknown) ambiguous = true;
      nodes.push_back(to_json(v));
    }
  } else {
    PriorConfig pc = c.prior.value_or(PriorConfig{});
    if (d.pair && !c.prior) {
      // Candidates are the rows of both matrices of the pair.
      pc.kind = PriorKind::discrete;
      for (const InteractionMatrix* m : {&d.pair->a, &d.pair->a_prime})
        for (std::size_t i = 0; i < n; ++i)
          if (std::find(pc.points.begin(), pc.points.end(), m->row(i)) == pc.points.end())
            pc.points.push_back(m->row(i));
    }
    const PriorSet prior = make_prior(pc, n);
    report["prior"] = to_string(prior.kind());
    ReconstructOptions opt;
    opt.zero_tol = c.tolerances.zero;
    opt.consistency_tol = c.tolerances.consistency;
    const NetworkReconstruction rec = reconstruct_network(grams, prior, c.property, opt);
    for (const Verdict& v : rec.verdicts) {
      if (v.status == VerdictStatus::ambiguous) ambiguous = true;
      if (v.status == VerdictStatus::inconsistent) inconsistent = true;
      log << "node " << v.node + 1 << ": " << to_string(v.status) << '\n';
      nodes.push_back(to_json(v));
    }
    if (rec.assembled) {
      report["assembled"] = to_json(*rec.assembled);
      if (c.property == PropertyKind::sign) {
        const SignDerived s = derive_from_sign(*rec.assembled);
        report["S"] = to_json(*rec.assembled);
        report["C"] = to_json(s.connectivity);
        report["K"] = to_json(s.adjacency);
        report["d"] = to_json(s.degree);
      }
    }
  }
  report["nodes"] = std::move(nodes);
  const int code = inconsistent ? kExitInconsistent : ambiguous ? kExitAmbiguous : kExitOk;
  report["status"] = inconsistent ? "inconsistent" : ambiguous ? "ambiguous" : "unique";
  detail::write_report(c.out, report);
  return code;
}

inline int cmd_probe(const RunConfig& c, std::ostream& log) {
  const Dataset d = load_dataset(c);
  if (c.probe.node >= d.trajectory.nodes()) throw ParameterError("config: probe.node out of range");
  const GramSummary g =
      compute_gram(d.trajectory, d.regressor, c.probe.node, RankTolerance(c.tolerances.rank));
  Json report = detail::report_header(c);
  report["probe"] = c.probe.kind;
  report["node"] = c.probe.node + 1;
  report["gram"] = to_json(g);
  std::ostringstream table;
  fs::path table_name;
  if (c.probe.kind == "pe-survival") {
    std::vector<double> deltas = c.probe.deltas;
    const double margin = pe_check(g).margin;
    for (double f : c.probe.margin_fractions) deltas.push_back(f * margin);
    const auto rows =
        probe_pe_stability(g, deltas, c.probe.trials, c.probe.deformation, c.seed);
    report["deformation"] = to_string(c.probe.deformation);
    Json t = Json::array();
    for (const auto& r : rows) {
      t.push_back(to_json(r));
      log << "delta " << netrecon::detail::format_real(r.delta) << ": survival " << r.survived << '/'
          << r.trials << '\n';
    }
    report["survival"] = std::move(t);
    write_survival_table(table, rows);
    table_name = "survival.csv";
  } else {
    const auto rows = probe_orbit_instability(g, c.probe.deltas, c.tolerances.zero);
    Json t = Json::array();
    for (const auto& r : rows) {
      t.push_back(to_json(r));
      log << "delta " << netrecon::detail::format_real(r.delta) << ": "
          << (r.flipped ? "flipped" : "unchanged") << '\n';
    }
    report["flips"] = std::move(t);
    write_flip_table(table, rows);
    table_name = "flip.csv";
  }
  fs::create_directories(c.out);
  detail::write_text(c.out / table_name, table.str());
  detail::write_report(c.out, report);
  return kExitOk;
}

inline int run(const RunConfig& c, std::ostream& log = std::cout) {
  c.tolerances.validate();
  if (c.command == "simulate") return cmd_simulate(c, log);
  if (c.command == "analyze") return cmd_analyze(c, log);
  if (c.command == "reconstruct") return cmd_reconstruct(c, log);
  if (c.command == "probe") return cmd_probe(c, log);
  throw ParameterError("unknown command '" + c.command + "'");
}

/// Config of a shipped demo: <demo_dir>/<name>.json.
inline fs::path demo_path(const fs::path& demo_dir, const std::string& name) {
  const fs::path p = demo_dir / (name + ".json");
  if (fs::exists(p)) return p;
  std::vector<std::string> names;
  if (fs::is_directory(demo_dir))
    for (const auto& e : fs::directory_iterator(demo_dir))
      if (e.path().extension() == ".json") names.push_back(e.path().stem().string());
  std::sort(names.begin(), names.end());
  std::string list;
  for (const auto& s : names) list += (list.empty() ? "" : ", ") + s;
  throw ParameterError("unknown demo '" + name + "' (available: " + list + ")");
}

}  // namespace netrecon::cli
