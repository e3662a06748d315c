#include "acons/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <type_traits>
#include <variant>

namespace acons {

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw InvalidInput("config " + (path.empty() ? std::string("/") : path) + ": " + what);
}

std::string child(const std::string& path, const std::string& key) { return path + "/" + key; }
std::string child(const std::string& path, std::size_t index) {
  return path + "/" + std::to_string(index);
}

// A JSON value paired with its pointer, for error messages.
class Node {
 public:
  Node(const Json& value, std::string path) : value_(value), path_(std::move(path)) {}

  [[nodiscard]] const std::string& path() const { return path_; }
  [[nodiscard]] const Json& raw() const { return value_; }

  [[nodiscard]] bool has(const char* key) const {
    return value_.is_object() && value_.contains(key) && !value_[key].is_null();
  }
  [[nodiscard]] Node at(const char* key) const {
    if (!value_.is_object()) fail(path_, "expected an object");
    if (!value_.contains(key)) fail(child(path_, key), "required field is missing");
    return Node(value_[key], child(path_, key));
  }
  [[nodiscard]] std::vector<Node> items() const {
    if (!value_.is_array()) fail(path_, "expected an array");
    std::vector<Node> out;
    for (std::size_t i = 0; i < value_.size(); ++i) out.emplace_back(value_[i], child(path_, i));
    return out;
  }
  [[nodiscard]] double number() const {
    if (!value_.is_number()) fail(path_, "expected a number");
    const double v = value_.get<double>();
    if (!std::isfinite(v)) fail(path_, "expected a finite number");
    return v;
  }
  [[nodiscard]] std::uint64_t unsigned_integer() const {
    if (!value_.is_number_unsigned() && !(value_.is_number_integer() && value_.get<long long>() >= 0)) {
      fail(path_, "expected a nonnegative integer");
    }
    return value_.get<std::uint64_t>();
  }
  [[nodiscard]] std::string string() const {
    if (!value_.is_string()) fail(path_, "expected a string");
    return value_.get<std::string>();
  }
  [[nodiscard]] bool boolean() const {
    if (!value_.is_boolean()) fail(path_, "expected true or false");
    return value_.get<bool>();
  }
  [[nodiscard]] std::vector<double> numbers() const {
    std::vector<double> out;
    for (const Node& n : items()) out.push_back(n.number());
    return out;
  }
  [[nodiscard]] Vector vector() const {
    const std::vector<double> v = numbers();
    return Eigen::Map<const Vector>(v.data(), static_cast<Eigen::Index>(v.size()));
  }
  [[nodiscard]] Point2 point() const {
    const std::vector<double> v = numbers();
    if (v.size() != 2) fail(path_, "expected a point [x, y]");
    return {v[0], v[1]};
  }
  [[nodiscard]] std::vector<std::size_t> indices() const {
    std::vector<std::size_t> out;
    for (const Node& n : items()) out.push_back(static_cast<std::size_t>(n.unsigned_integer()));
    return out;
  }

  void reject_unknown(std::initializer_list<const char*> known) const {
    if (!value_.is_object()) fail(path_, "expected an object");
    const std::set<std::string> allowed(known.begin(), known.end());
    for (const auto& [key, _] : value_.items()) {
      if (allowed.count(key) == 0) fail(child(path_, key), "unknown field");
    }
  }

 private:
  const Json& value_;
  std::string path_;
};

// Runs a library constructor, re-anchoring its validation message at `path`.
template <typename F>
auto anchored(const std::string& path, F&& make) {
  try {
    return make();
  } catch (const InvalidInput& e) {
    fail(path, e.what());
  }
}

ReferenceSignal parse_signal(const Node& node) {
  const std::string kind = node.at("kind").string();
  if (kind == "constant") {
    node.reject_unknown({"kind", "value"});
    return ReferenceSignal::constant(node.at("value").number());
  }
  if (kind == "sinusoid") {
    node.reject_unknown({"kind", "offset", "amplitude", "omega", "phase"});
    return anchored(node.path(), [&] {
      return ReferenceSignal::sinusoid(node.has("offset") ? node.at("offset").number() : 0.0,
                                       node.at("amplitude").number(), node.at("omega").number(),
                                       node.has("phase") ? node.at("phase").number() : 0.0);
    });
  }
  if (kind == "zoh") {
    node.reject_unknown({"kind", "samples", "period"});
    return anchored(node.path(), [&] {
      return ReferenceSignal::zoh(node.at("samples").numbers(), node.at("period").number());
    });
  }
  if (kind == "polynomial") {
    node.reject_unknown({"kind", "coeffs"});
    return anchored(node.path(),
                    [&] { return ReferenceSignal::polynomial(node.at("coeffs").numbers()); });
  }
  if (kind == "piecewise") {
    node.reject_unknown({"kind", "starts", "pieces"});
    std::vector<ReferenceSignal> pieces;
    for (const Node& p : node.at("pieces").items()) pieces.push_back(parse_signal(p));
    return anchored(node.path(), [&] {
      return ReferenceSignal::piecewise(node.at("starts").numbers(), std::move(pieces));
    });
  }
  fail(child(node.path(), "kind"),
       "unknown signal kind '" + kind + "' (constant, sinusoid, zoh, polynomial, piecewise)");
}

TopologySpec parse_topology(const Node& node) {
  node.reject_unknown({"generator", "n", "weight", "adjacency"});
  TopologySpec spec;
  if (node.has("adjacency")) {
    if (node.has("generator")) fail(node.path(), "give either 'generator' or 'adjacency', not both");
    const auto rows = node.at("adjacency").items();
    Matrix a(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.size()));
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const std::vector<double> row = rows[i].numbers();
      if (row.size() != rows.size()) fail(rows[i].path(), "adjacency matrix must be square");
      for (std::size_t j = 0; j < row.size(); ++j) {
        a(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = row[j];
      }
    }
    spec.adjacency = std::move(a);
  } else {
    spec.generator = node.at("generator").string();
    spec.n = static_cast<std::size_t>(node.at("n").unsigned_integer());
    if (node.has("weight")) spec.weight = node.at("weight").number();
  }
  anchored(node.path(), [&] { return spec.build(); });
  return spec;
}

ScheduleSpec parse_schedule(const Node& node) {
  node.reject_unknown({"horizon", "epochs", "dwell"});
  ScheduleSpec spec;
  spec.horizon = node.at("horizon").number();
  for (const Node& e : node.at("epochs").items()) {
    e.reject_unknown({"start", "weights"});
    const Node w = e.at("weights");
    Vector weights = w.vector();
    if ((weights.array() < 0.0).any() || !(weights.array() > 0.0).any()) {
      fail(w.path(), "weights must be >= 0 with at least one active agent");
    }
    spec.epochs.push_back(Epoch{e.at("start").number(), std::move(weights)});
  }
  if (node.has("dwell")) {
    const Node d = node.at("dwell");
    d.reject_unknown({"chatter_bound", "average_dwell"});
    spec.dwell = DwellStats{d.at("chatter_bound").number(), d.at("average_dwell").number()};
    if (!(spec.dwell->average_dwell > 0.0) || spec.dwell->chatter_bound < 0.0) {
      fail(d.path(), "need chatter_bound >= 0 and average_dwell > 0");
    }
  }
  anchored(node.path(), [&] { return spec.build(); });
  return spec;
}

ContainmentSpec parse_containment(const Node& node) {
  node.reject_unknown({"leaders", "observations", "initial_positions", "delta_s", "delta_c", "steps"});
  ContainmentSpec spec;
  const Node leaders = node.at("leaders");
  leaders.reject_unknown({"displacement_bound", "paths"});
  spec.displacement_bound = leaders.at("displacement_bound").number();
  for (const Node& p : leaders.at("paths").items()) {
    p.reject_unknown({"times", "waypoints"});
    LeaderPath path;
    path.times = p.at("times").numbers();
    for (const Node& w : p.at("waypoints").items()) path.waypoints.push_back(w.point());
    spec.paths.push_back(std::move(path));
  }
  anchored(leaders.path(), [&] { return LeaderEnsemble(spec.paths, spec.displacement_bound); });
  for (const Node& e : node.at("observations").items()) {
    e.reject_unknown({"start", "observed"});
    ObservationEpoch epoch;
    epoch.start = e.at("start").number();
    for (const Node& s : e.at("observed").items()) epoch.observed.push_back(s.indices());
    spec.observations.push_back(std::move(epoch));
  }
  anchored(child(node.path(), "observations"),
           [&] { return ObservationMap(spec.observations, spec.paths.size()); });
  for (const Node& p : node.at("initial_positions").items()) spec.initial_positions.push_back(p.point());
  spec.delta_s = node.at("delta_s").number();
  spec.delta_c = node.at("delta_c").number();
  spec.steps = static_cast<std::size_t>(node.at("steps").unsigned_integer());
  if (!(spec.delta_s > 0.0)) fail(child(node.path(), "delta_s"), "must be > 0");
  if (!(spec.delta_c > 0.0)) fail(child(node.path(), "delta_c"), "must be > 0");
  return spec;
}

Json matrix_to_json(const Matrix& m) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

Json vector_to_json(const Vector& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

Json point_to_json(const Point2& p) { return Json::array({p.x(), p.y()}); }

}  // namespace

Topology TopologySpec::build() const {
  if (adjacency) return Topology(*adjacency);
  if (generator == "ring") return Topology::ring(n, weight);
  if (generator == "path") return Topology::path(n, weight);
  if (generator == "complete") return Topology::complete(n, weight);
  throw InvalidInput("unknown topology generator '" + generator + "' (ring, path, complete)");
}

Json signal_to_json(const ReferenceSignal& signal) {
  return std::visit(
      [](const auto& k) -> Json {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, signal_kind::Constant>) {
          return {{"kind", "constant"}, {"value", k.value}};
        } else if constexpr (std::is_same_v<K, signal_kind::Sinusoid>) {
          return {{"kind", "sinusoid"}, {"offset", k.offset}, {"amplitude", k.amplitude},
                  {"omega", k.omega},   {"phase", k.phase}};
        } else if constexpr (std::is_same_v<K, signal_kind::ZohTrack>) {
          return {{"kind", "zoh"}, {"samples", k.samples}, {"period", k.period}};
        } else if constexpr (std::is_same_v<K, signal_kind::Polynomial>) {
          return {{"kind", "polynomial"}, {"coeffs", k.coeffs}};
        } else {
          Json pieces = Json::array();
          for (const ReferenceSignal& p : k.pieces) pieces.push_back(signal_to_json(p));
          return {{"kind", "piecewise"}, {"starts", k.starts}, {"pieces", pieces}};
        }
      },
      signal.kind());
}

ScenarioConfig parse_config(const Json& document) {
  const Node root(document, "");
  root.reject_unknown({"schema_version", "topology", "schedule", "signals", "initial",
                       "departures", "rates", "certificate", "containment", "seed", "output"});
  ScenarioConfig c;
  c.schema_version = static_cast<int>(root.at("schema_version").unsigned_integer());
  if (c.schema_version != kSchemaVersion) {
    fail("/schema_version", "unsupported schema version " + std::to_string(c.schema_version) +
                                " (expected " + std::to_string(kSchemaVersion) + ")");
  }
  c.topology = parse_topology(root.at("topology"));
  if (root.has("schedule")) c.schedule = parse_schedule(root.at("schedule"));
  if (root.has("signals")) {
    for (const Node& s : root.at("signals").items()) c.signals.push_back(parse_signal(s));
  }
  if (root.has("initial")) {
    const Node init = root.at("initial");
    init.reject_unknown({"x", "v"});
    if (init.has("x")) c.x0 = init.at("x").vector();
    if (init.has("v")) c.v0 = init.at("v").vector();
  }
  if (root.has("departures")) {
    for (const Node& d : root.at("departures").items()) {
      d.reject_unknown({"t", "agent"});
      c.departures.push_back(
          Departure{d.at("t").number(), static_cast<std::size_t>(d.at("agent").unsigned_integer())});
    }
  }
  if (root.has("rates")) {
    const Node r = root.at("rates");
    r.reject_unknown({"h", "delta_c", "delta_s", "steps"});
    if (r.has("h")) c.rates.h = r.at("h").number();
    if (r.has("delta_c")) c.rates.delta_c = r.at("delta_c").number();
    if (r.has("delta_s")) c.rates.delta_s = r.at("delta_s").number();
    if (r.has("steps")) c.rates.steps = static_cast<std::size_t>(r.at("steps").unsigned_integer());
    if (!(c.rates.h > 0.0)) fail("/rates/h", "must be > 0");
    if (!(c.rates.delta_c > 0.0)) fail("/rates/delta_c", "must be > 0");
    if (!(c.rates.delta_s > 0.0)) fail("/rates/delta_s", "must be > 0");
  }
  if (root.has("certificate")) {
    const Node cert = root.at("certificate");
    cert.reject_unknown({"safety_factor", "grid_step", "max_origins", "fit_seeds", "min_dwell",
                         "max_dwell", "evaluate_bound", "modes"});
    CertificateSpec& s = c.certificate;
    if (cert.has("safety_factor")) s.safety_factor = cert.at("safety_factor").number();
    if (cert.has("grid_step")) s.grid_step = cert.at("grid_step").number();
    if (cert.has("max_origins")) s.max_origins = cert.at("max_origins").unsigned_integer();
    if (cert.has("fit_seeds")) {
      s.fit_seeds.clear();
      for (const Node& n : cert.at("fit_seeds").items()) s.fit_seeds.push_back(n.unsigned_integer());
      if (s.fit_seeds.empty()) fail("/certificate/fit_seeds", "needs at least one seed");
    }
    if (cert.has("min_dwell")) s.min_dwell = cert.at("min_dwell").number();
    if (cert.has("max_dwell")) s.max_dwell = cert.at("max_dwell").number();
    if (cert.has("evaluate_bound")) s.evaluate_bound = cert.at("evaluate_bound").boolean();
    if (cert.has("modes")) {
      s.modes.clear();
      for (const Node& m : cert.at("modes").items()) {
        const std::string mode = m.string();
        if (mode != "ct" && mode != "dt") fail(m.path(), "mode must be 'ct' or 'dt'");
        s.modes.push_back(mode);
      }
    }
    if (!(s.safety_factor >= 1.0)) fail("/certificate/safety_factor", "must be >= 1");
    if (!(s.grid_step > 0.0)) fail("/certificate/grid_step", "must be > 0");
    if (s.max_origins == 0) fail("/certificate/max_origins", "must be >= 1");
  }
  if (root.has("containment")) c.containment = parse_containment(root.at("containment"));
  if (root.has("seed")) c.seed = root.at("seed").unsigned_integer();
  if (root.has("output")) {
    const Node out = root.at("output");
    out.reject_unknown({"dir"});
    if (out.has("dir")) c.output_dir = out.at("dir").string();
  }
  c.validate();
  return c;
}

void ScenarioConfig::validate() const {
  const std::size_t n = anchored("/topology", [&] { return topology.build(); }).size();
  auto check_length = [&](const std::string& path, std::size_t got) {
    if (got != n) {
      std::ostringstream msg;
      msg << "length " << got << " differs from the agent count " << n;
      fail(path, msg.str());
    }
  };
  if (schedule) {
    for (std::size_t e = 0; e < schedule->epochs.size(); ++e) {
      check_length("/schedule/epochs/" + std::to_string(e) + "/weights",
                   static_cast<std::size_t>(schedule->epochs[e].weights.size()));
    }
    check_length("/signals", signals.size());
    if (!departures.empty()) {
      Topology current = topology.build();
      ModeSchedule sched = schedule->build();
      std::vector<std::size_t> present(n);
      for (std::size_t i = 0; i < n; ++i) present[i] = i;
      double last = 0.0;
      for (std::size_t d = 0; d < departures.size(); ++d) {
        const std::string path = "/departures/" + std::to_string(d);
        const Departure& dep = departures[d];
        if (!(dep.t > last) || dep.t >= schedule->horizon) {
          fail(path + "/t", "departures must be increasing and inside (0, horizon)");
        }
        const auto it = std::find(present.begin(), present.end(), dep.agent);
        if (it == present.end()) fail(path + "/agent", "agent is not present at this time");
        const auto idx = static_cast<std::size_t>(it - present.begin());
        current = anchored(path, [&] { return current.without_agent(idx); });
        present.erase(it);
        last = dep.t;
      }
    }
  } else if (!signals.empty()) {
    fail("/signals", "signals need a schedule");
  }
  if (x0) check_length("/initial/x", static_cast<std::size_t>(x0->size()));
  if (v0) check_length("/initial/v", static_cast<std::size_t>(v0->size()));
  if (certificate.evaluate_bound && (!schedule || !schedule->dwell)) {
    fail("/schedule/dwell", "a dwell declaration is required when certificate.evaluate_bound is set");
  }
  if (schedule && rates.steps) {
    if (static_cast<double>(*rates.steps) * rates.delta_c >
        schedule->horizon + time_snap(schedule->horizon)) {
      fail("/rates/steps", "steps * delta_c exceeds the schedule horizon");
    }
  }
  if (containment) {
    if (containment->observations.front().observed.size() != n) {
      fail("/containment/observations", "follower count differs from the agent count");
    }
    if (containment->initial_positions.size() != n) {
      fail("/containment/initial_positions", "length differs from the agent count");
    }
  }
}

CtScenario ScenarioConfig::ct_scenario() const {
  if (!schedule) fail("/schedule", "required for this command");
  return CtScenario{topology.build(), schedule->build(), ReferenceEnsemble(signals)};
}

DtScenario ScenarioConfig::dt_scenario() const {
  if (!schedule) fail("/schedule", "required for this command");
  const std::size_t steps =
      rates.steps ? *rates.steps
                  : static_cast<std::size_t>(std::floor(schedule->horizon / rates.delta_c + 1e-9));
  DtScenario s{topology.build(), schedule->build(), ReferenceEnsemble(signals), rates.delta_c,
               rates.delta_s, steps};
  anchored("/rates", [&] {
    s.validate();
    return 0;
  });
  return s;
}

Vector ScenarioConfig::initial_x() const {
  return x0 ? *x0 : Vector::Zero(static_cast<Eigen::Index>(agent_count()));
}

Vector ScenarioConfig::initial_v() const {
  return v0 ? *v0 : Vector::Zero(static_cast<Eigen::Index>(agent_count()));
}

ContainmentSetup ScenarioConfig::containment_setup() const {
  if (!containment) fail("/containment", "required for this command");
  const ContainmentSpec& s = *containment;
  return ContainmentSetup{topology.build(), ObservationMap(s.observations, s.paths.size()),
                          LeaderEnsemble(s.paths, s.displacement_bound), s.delta_s, s.delta_c,
                          s.steps};
}

ScenarioConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open config file " + path.string());
  Json doc;
  try {
    doc = Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw InvalidInput(path.string() + ": " + e.what());
  }
  return parse_config(doc);
}

Json to_json(const ScenarioConfig& c) {
  Json j;
  j["schema_version"] = c.schema_version;
  if (c.topology.adjacency) {
    j["topology"] = {{"adjacency", matrix_to_json(*c.topology.adjacency)}};
  } else {
    j["topology"] = {{"generator", c.topology.generator}, {"n", c.topology.n},
                     {"weight", c.topology.weight}};
  }
  if (c.schedule) {
    Json epochs = Json::array();
    for (const Epoch& e : c.schedule->epochs) {
      epochs.push_back({{"start", e.start}, {"weights", vector_to_json(e.weights)}});
    }
    j["schedule"] = {{"horizon", c.schedule->horizon}, {"epochs", epochs}};
    if (c.schedule->dwell) {
      j["schedule"]["dwell"] = {{"chatter_bound", c.schedule->dwell->chatter_bound},
                                {"average_dwell", c.schedule->dwell->average_dwell}};
    }
    Json signals = Json::array();
    for (const ReferenceSignal& s : c.signals) signals.push_back(signal_to_json(s));
    j["signals"] = signals;
  }
  if (c.x0 || c.v0) {
    j["initial"] = Json::object();
    if (c.x0) j["initial"]["x"] = vector_to_json(*c.x0);
    if (c.v0) j["initial"]["v"] = vector_to_json(*c.v0);
  }
  if (!c.departures.empty()) {
    Json deps = Json::array();
    for (const Departure& d : c.departures) deps.push_back({{"t", d.t}, {"agent", d.agent}});
    j["departures"] = deps;
  }
  j["rates"] = {{"h", c.rates.h}, {"delta_c", c.rates.delta_c}, {"delta_s", c.rates.delta_s}};
  if (c.rates.steps) j["rates"]["steps"] = *c.rates.steps;
  const CertificateSpec& s = c.certificate;
  j["certificate"] = {{"safety_factor", s.safety_factor}, {"grid_step", s.grid_step},
                      {"max_origins", s.max_origins},     {"fit_seeds", s.fit_seeds},
                      {"evaluate_bound", s.evaluate_bound}, {"modes", s.modes}};
  if (s.min_dwell) j["certificate"]["min_dwell"] = *s.min_dwell;
  if (s.max_dwell) j["certificate"]["max_dwell"] = *s.max_dwell;
  if (c.containment) {
    const ContainmentSpec& cs = *c.containment;
    Json paths = Json::array();
    for (const LeaderPath& p : cs.paths) {
      Json waypoints = Json::array();
      for (const Point2& w : p.waypoints) waypoints.push_back(point_to_json(w));
      paths.push_back({{"times", p.times}, {"waypoints", waypoints}});
    }
    Json observations = Json::array();
    for (const ObservationEpoch& e : cs.observations) {
      observations.push_back({{"start", e.start}, {"observed", e.observed}});
    }
    Json initial = Json::array();
    for (const Point2& p : cs.initial_positions) initial.push_back(point_to_json(p));
    j["containment"] = {{"leaders", {{"displacement_bound", cs.displacement_bound}, {"paths", paths}}},
                        {"observations", observations},
                        {"initial_positions", initial},
                        {"delta_s", cs.delta_s},
                        {"delta_c", cs.delta_c},
                        {"steps", cs.steps}};
  }
  j["seed"] = c.seed;
  j["output"] = {{"dir", c.output_dir}};
  return j;
}

}  // namespace acons
