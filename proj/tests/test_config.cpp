#include <doctest.h>

#include <string>

#include "acons/commands.hpp"
#include "acons/config.hpp"

using namespace acons;

namespace {

Json small_config() {
  return Json::parse(R"({
    "schema_version": 1,
    "topology": {"generator": "ring", "n": 4, "weight": 1.5},
    "schedule": {
      "horizon": 20,
      "epochs": [{"start": 0, "weights": [1, 0, 1, 0]}, {"start": 8, "weights": [0, 2, 0, 1]}],
      "dwell": {"chatter_bound": 1, "average_dwell": 4}
    },
    "signals": [
      {"kind": "constant", "value": 1},
      {"kind": "sinusoid", "offset": 0.5, "amplitude": 1, "omega": 0.3, "phase": 0.1},
      {"kind": "zoh", "samples": [0, 1, 2], "period": 5},
      {"kind": "polynomial", "coeffs": [1, 0.1]}
    ],
    "initial": {"x": [0, 1, 2, 3], "v": [0, 0, 0, 0]},
    "rates": {"h": 0.01, "delta_c": 0.05, "delta_s": 0.1},
    "certificate": {"safety_factor": 1.5, "fit_seeds": [1, 2], "modes": ["dt"]},
    "seed": 42,
    "output": {"dir": "out/small"}
  })");
}

std::string rejection(const Json& document) {
  try {
    parse_config(document);
  } catch (const InvalidInput& e) {
    return e.what();
  }
  return "";
}

bool mentions(const std::string& message, const std::string& needle) {
  return message.find(needle) != std::string::npos;
}

}  // namespace

TEST_CASE("config round trip is the identity") {
  const ScenarioConfig c = parse_config(small_config());
  CHECK(c.agent_count() == 4);
  CHECK(c.seed == 42);
  CHECK(c.certificate.modes == std::vector<std::string>{"dt"});
  const Json once = to_json(c);
  CHECK(to_json(parse_config(once)) == once);

  for (const char* demo : {"fig2", "fig4"}) {
    const Json j = to_json(demo_config(demo));
    CHECK(to_json(parse_config(j)) == j);
  }
}

TEST_CASE("piecewise signals survive a round trip") {
  Json j = small_config();
  j["signals"][0] = Json::parse(R"({"kind": "piecewise", "starts": [0, 5],
      "pieces": [{"kind": "constant", "value": 1}, {"kind": "sinusoid", "amplitude": 2, "omega": 1}]})");
  const ScenarioConfig c = parse_config(j);
  CHECK(c.signals[0].value(6.0) == doctest::Approx(2.0 * std::sin(6.0)));
  CHECK(to_json(parse_config(to_json(c))) == to_json(c));
}

TEST_CASE("disconnected graph is rejected") {
  Json j = small_config();
  j["topology"] = Json::parse(R"({"adjacency": [[0,1,0,0],[1,0,0,0],[0,0,0,1],[0,0,1,0]]})");
  CHECK(mentions(rejection(j), "/topology"));
}

TEST_CASE("epoch without an active agent is rejected") {
  Json j = small_config();
  j["schedule"]["epochs"][1]["weights"] = {0, 0, 0, 0};
  CHECK(mentions(rejection(j), "/schedule/epochs/1/weights"));
}

TEST_CASE("containment without an observation map is rejected") {
  Json j = to_json(demo_config("fig4"));
  j["containment"].erase("observations");
  CHECK(mentions(rejection(j), "/containment/observations"));
}

TEST_CASE("malformed documents are rejected with a pointer") {
  Json unknown = small_config();
  unknown["rates"]["dt"] = 0.1;
  CHECK(mentions(rejection(unknown), "/rates/dt"));

  Json version = small_config();
  version["schema_version"] = 2;
  CHECK(mentions(rejection(version), "/schema_version"));

  Json count = small_config();
  count["signals"].erase(3);
  CHECK(mentions(rejection(count), "/signals"));

  Json x0 = small_config();
  x0["initial"]["x"] = {1, 2};
  CHECK(mentions(rejection(x0), "/initial/x"));

  Json kind = small_config();
  kind["signals"][1]["kind"] = "square";
  CHECK(mentions(rejection(kind), "/signals/1/kind"));

  Json type = small_config();
  type["rates"]["h"] = "fast";
  CHECK(mentions(rejection(type), "/rates/h"));

  Json departure = small_config();
  departure["departures"] = Json::parse(R"([{"t": 50, "agent": 0}])");
  CHECK(mentions(rejection(departure), "/departures/0"));
}

TEST_CASE("bound evaluation needs a dwell declaration") {
  Json j = small_config();
  j["schedule"].erase("dwell");
  j["certificate"]["evaluate_bound"] = true;
  CHECK(mentions(rejection(j), "/schedule/dwell"));
}
