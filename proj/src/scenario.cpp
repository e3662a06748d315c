#include "acons/scenario.hpp"

#include <cmath>
#include <sstream>

namespace acons {

namespace {

void check_sizes(const Topology& topology, const ModeSchedule& schedule,
                 const ReferenceEnsemble& ensemble) {
  const std::size_t n = topology.size();
  if (schedule.agent_count() != n) {
    std::ostringstream msg;
    msg << "schedule has " << schedule.agent_count() << " agents, topology has " << n;
    throw InvalidInput(msg.str());
  }
  if (ensemble.size() != n) {
    std::ostringstream msg;
    msg << "ensemble has " << ensemble.size() << " signals, topology has " << n << " agents";
    throw InvalidInput(msg.str());
  }
}

}  // namespace

void CtScenario::validate() const { check_sizes(topology, schedule, ensemble); }

void DtScenario::validate() const {
  check_sizes(topology, schedule, ensemble);
  if (!(delta_c > 0.0) || !std::isfinite(delta_c)) throw InvalidInput("delta_c must be > 0");
  if (!(delta_s > 0.0) || !std::isfinite(delta_s)) throw InvalidInput("delta_s must be > 0");
  if (time_at(steps) > schedule.horizon_end() + time_snap(schedule.horizon_end())) {
    std::ostringstream msg;
    msg << "dt run of " << steps << " steps ends at t = " << time_at(steps)
        << ", beyond the schedule horizon " << schedule.horizon_end();
    throw InvalidInput(msg.str());
  }
}

}  // namespace acons
