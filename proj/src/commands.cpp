#include "acons/commands.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <future>
#include <limits>
#include <random>
#include <sstream>

#include "acons/containment.hpp"
#include "acons/ct_sim.hpp"
#include "acons/dt_sim.hpp"

namespace acons {

namespace fs = std::filesystem;

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

class CsvWriter {
 public:
  CsvWriter(const fs::path& path, const std::vector<std::string>& header) : out_(path) {
    if (!out_) throw InvalidInput("cannot write " + path.string());
    row(header);
  }
  void row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) out_ << (i ? "," : "") << cells[i];
    out_ << '\n';
  }

 private:
  std::ofstream out_;
};

void write_json(const fs::path& path, const Json& j) {
  std::ofstream out(path);
  if (!out) throw InvalidInput("cannot write " + path.string());
  out << j.dump(2) << '\n';
}

Json vector_json(const Vector& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

Json spectrum_json(const std::vector<Complex>& spectrum) {
  Json out = Json::array();
  for (const Complex& mu : spectrum) out.push_back(Json::array({mu.real(), mu.imag()}));
  return out;
}

std::vector<std::string> agent_columns(const std::string& prefix, std::size_t n) {
  std::vector<std::string> out;
  for (std::size_t i = 1; i <= n; ++i) out.push_back(prefix + std::to_string(i));
  return out;
}

std::vector<std::string> trajectory_header(const std::string& lead, std::size_t n) {
  std::vector<std::string> h;
  if (!lead.empty()) h.push_back(lead);
  h.emplace_back("t");
  for (const auto& c : agent_columns("x_", n)) h.push_back(c);
  for (const auto& c : agent_columns("v_", n)) h.push_back(c);
  h.emplace_back("avg");
  for (const auto& c : agent_columns("err_", n)) h.push_back(c);
  return h;
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t fit) {
  std::seed_seq seq{static_cast<std::uint32_t>(base), static_cast<std::uint32_t>(base >> 32),
                    static_cast<std::uint32_t>(fit), static_cast<std::uint32_t>(fit >> 32)};
  std::array<std::uint32_t, 2> words{};
  seq.generate(words.begin(), words.end());
  return (static_cast<std::uint64_t>(words[0]) << 32) | words[1];
}

std::uint64_t base_seed(const ScenarioConfig& config, const CommandOptions& options) {
  return options.seed ? *options.seed : config.seed;
}

CertificateOptions certificate_options(const ScenarioConfig& config) {
  CertificateOptions o;
  o.safety_factor = config.certificate.safety_factor;
  o.grid_step = config.certificate.grid_step;
  o.delta_c = config.rates.delta_c;
  o.max_origins = config.certificate.max_origins;
  if (config.schedule) o.dwell = config.schedule->dwell;
  return o;
}

Json certificate_json(const StabilityCertificate& c) {
  return {{"mode", to_string(c.mode)},
          {"kappa", c.kappa},
          {"rate", c.rate},
          {"safety_factor", c.safety_factor},
          {"grid_step", c.grid_step},
          {"schedules", c.schedules},
          {"samples", c.samples},
          {"max_lag", c.max_lag},
          {"fit_seeds", c.fit_seeds}};
}

struct Margin {
  double min_gap = std::numeric_limits<double>::infinity();  // bound - error
  double worst_ratio = 0.0;                                  // error / bound
  std::size_t violations = 0;
  std::size_t points = 0;
};

Margin margin(const std::vector<double>& error, const std::vector<double>& bound) {
  Margin m;
  for (std::size_t i = 0; i < error.size(); ++i) {
    const double gap = bound[i] - error[i];
    m.min_gap = std::min(m.min_gap, gap);
    if (bound[i] > 0.0) m.worst_ratio = std::max(m.worst_ratio, error[i] / bound[i]);
    else if (error[i] > 0.0) m.worst_ratio = std::numeric_limits<double>::infinity();
    if (gap < 0.0) ++m.violations;
    ++m.points;
  }
  return m;
}

Json margin_json(const Margin& m) {
  return {{"min_gap", m.points ? m.min_gap : 0.0},
          {"worst_ratio", std::isfinite(m.worst_ratio) ? Json(m.worst_ratio) : Json("inf")},
          {"violations", m.violations},
          {"points", m.points}};
}

// d_bar over the schedule's weight patterns; throws NumericalError when a
// subsystem is not Hurwitz.
StepBounds config_step_bounds(const ScenarioConfig& config) {
  const ModeSchedule schedule = config.schedule->build();
  return step_bounds(spectral_decomposition(config.topology.build()), schedule.weight_set());
}

void require_stable_step(const ScenarioConfig& config, double d_bar, const CommandOptions& options,
                         std::vector<std::string>& warnings) {
  if (config.rates.delta_c < d_bar) return;
  std::ostringstream msg;
  msg << "delta_c = " << config.rates.delta_c << " is not below the stable step bound d_bar = "
      << d_bar;
  if (!options.allow_unstable) throw InvalidInput(msg.str() + " (pass --allow-unstable to run anyway)");
  warnings.push_back(msg.str());
}

struct CtEvaluation {
  Trajectory trajectory;
  BoundCurve bound;
  std::vector<double> error;
  Margin margin;
};

CtEvaluation evaluate_ct(const ScenarioConfig& config, const StabilityCertificate& cert) {
  const CtScenario sc = config.ct_scenario();
  CtEvaluation e;
  e.trajectory = integrate(sc, config.initial_x(), config.initial_v(), config.schedule->horizon,
                           config.rates.h);
  e.bound = ct_bound_curve(cert, sc, config.initial_x(), config.initial_v(), e.trajectory.times,
                           e.trajectory.left_limit);
  for (std::size_t i = 0; i < e.trajectory.size(); ++i) e.error.push_back(e.trajectory.max_error(i));
  e.margin = margin(e.error, e.bound.total);
  return e;
}

struct DtEvaluation {
  DtTrajectory trajectory;
  BoundCurve bound;
  std::vector<double> error;
  Margin margin;
};

DtEvaluation evaluate_dt(const ScenarioConfig& config, const StabilityCertificate& cert) {
  const DtScenario sc = config.dt_scenario();
  DtEvaluation e;
  e.trajectory = simulate(sc, config.initial_x(), config.initial_v());
  e.bound = dt_bound_curve(cert, sc, config.initial_x(), config.initial_v());
  for (std::size_t i = 0; i < e.trajectory.size(); ++i) e.error.push_back(e.trajectory.max_error(i));
  e.margin = margin(e.error, e.bound.total);
  return e;
}

void write_bound_csv(const fs::path& path, const std::string& lead,
                     const std::vector<std::size_t>& steps, const BoundCurve& bound,
                     const std::vector<double>& error) {
  std::vector<std::string> header;
  if (!lead.empty()) header.push_back(lead);
  for (const char* c : {"t", "err_max", "transient", "switching", "input", "bound"}) header.emplace_back(c);
  CsvWriter csv(path, header);
  for (std::size_t i = 0; i < bound.times.size(); ++i) {
    std::vector<std::string> row;
    if (!lead.empty()) row.push_back(std::to_string(steps[i]));
    for (double v : {bound.times[i], error[i], bound.transient[i], bound.switching[i],
                     bound.input[i], bound.total[i]}) {
      row.push_back(format_double(v));
    }
    csv.row(row);
  }
}

}  // namespace

std::vector<ModeSchedule> fit_family(const ScenarioConfig& config, std::uint64_t seed) {
  if (!config.schedule) throw InvalidInput("config /schedule: required for certification");
  const ModeSchedule schedule = config.schedule->build();
  const auto& epochs = schedule.epochs();
  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  for (std::size_t e = 0; e < epochs.size(); ++e) {
    const double end = e + 1 < epochs.size() ? epochs[e + 1].start : schedule.horizon_end();
    const double len = end - epochs[e].start;
    if (len <= 0.0) continue;
    lo = std::min(lo, len);
    hi = std::max(hi, len);
  }
  if (!std::isfinite(lo)) lo = hi = std::max(schedule.horizon_end(), 1.0);
  ScheduleFamily family;
  family.patterns = schedule.weight_set();
  family.min_dwell = config.certificate.min_dwell.value_or(lo);
  family.max_dwell = config.certificate.max_dwell.value_or(std::max(hi, family.min_dwell));
  family.horizon_end = schedule.horizon_end();
  std::vector<ModeSchedule> out;
  for (std::uint64_t fit : config.certificate.fit_seeds) out.push_back(family.sample(derive_seed(seed, fit)));
  return out;
}

StabilityCertificate fit_config_certificate(const ScenarioConfig& config, TimeMode mode,
                                            std::uint64_t seed, unsigned jobs) {
  const std::vector<ModeSchedule> schedules = fit_family(config, seed);
  const SpectralDecomposition decomposition = spectral_decomposition(config.topology.build());
  const CertificateOptions options = certificate_options(config);
  if (options.dwell) {
    for (std::size_t s = 0; s < schedules.size(); ++s) {
      const DwellCheck check = verify_dwell(schedules[s], *options.dwell);
      if (!check.ok) {
        std::ostringstream msg;
        msg << "fit schedule for seed " << config.certificate.fit_seeds[s]
            << " violates the declared dwell time at t = " << *check.first_violation
            << "; widen /certificate/min_dwell or the dwell declaration";
        throw InvalidInput(msg.str());
      }
    }
  }
  std::vector<std::vector<EnvelopeSample>> parts(schedules.size());
  const std::size_t width = std::max(1u, jobs);
  for (std::size_t start = 0; start < schedules.size(); start += width) {
    std::vector<std::future<std::vector<EnvelopeSample>>> pending;
    const std::size_t stop = std::min(schedules.size(), start + width);
    for (std::size_t s = start; s < stop; ++s) {
      pending.push_back(std::async(width > 1 ? std::launch::async : std::launch::deferred, [&, s] {
        return transition_norm_samples(decomposition, schedules[s], mode, options);
      }));
    }
    for (std::size_t s = start; s < stop; ++s) parts[s] = pending[s - start].get();
  }
  std::vector<EnvelopeSample> all;
  for (const auto& p : parts) all.insert(all.end(), p.begin(), p.end());
  StabilityCertificate cert = fit_envelope(all, mode, options);
  cert.schedules = schedules.size();
  cert.fit_seeds = config.certificate.fit_seeds;
  return cert;
}

CommandResult cmd_analyze(const ScenarioConfig& config, const CommandOptions& options) {
  if (!config.schedule) throw InvalidInput("config /schedule: required for analyze");
  const Topology topology = config.topology.build();
  const ModeSchedule schedule = config.schedule->build();
  const SpectralDecomposition decomposition = spectral_decomposition(topology);
  const Matrix l = laplacian(topology);

  CommandResult result;
  Json report;
  report["agents"] = topology.size();
  report["laplacian_eigenvalues"] = symmetric_eigenvalues(l);
  Json patterns = Json::array();
  bool all_hurwitz = true;
  double d_bar = std::numeric_limits<double>::infinity();
  std::size_t binding = 0;
  const std::vector<Vector> weight_set = schedule.weight_set();
  std::vector<Subsystem> subsystems;
  for (std::size_t p = 0; p < weight_set.size(); ++p) {
    Matrix el = l;
    el.diagonal() += weight_set[p];
    const Verdict base = hurwitz_verdict(-el);
    Subsystem s = subsystem_matrix(decomposition, weight_set[p]);
    const Verdict v = spectral_abscissa(s.spectrum) < -1e-10 ? Verdict::kStable
                      : spectral_abscissa(s.spectrum) <= 1e-10 ? Verdict::kMarginal
                                                               : Verdict::kUnstable;
    Json entry{{"weights", vector_json(weight_set[p])},
               {"minus_e_plus_l", to_string(base)},
               {"spectrum", spectrum_json(s.spectrum)},
               {"hurwitz", to_string(v)}};
    if (v == Verdict::kStable) {
      const double step = stable_step(s.spectrum);
      entry["stable_step"] = step;
      if (step < d_bar) {
        d_bar = step;
        binding = p;
      }
    } else {
      all_hurwitz = false;
    }
    subsystems.push_back(std::move(s));
    patterns.push_back(std::move(entry));
  }
  bool schur_ok = true;
  if (all_hurwitz) {
    report["d_bar"] = d_bar;
    report["binding_pattern"] = binding;
    const double dc = config.rates.delta_c;
    for (std::size_t p = 0; p < subsystems.size(); ++p) {
      const Matrix m = Matrix::Identity(subsystems[p].matrix.rows(), subsystems[p].matrix.cols()) +
                       dc * subsystems[p].matrix;
      const Verdict sv = schur_verdict(m);
      patterns[p]["schur_at_delta_c"] = to_string(sv);
      schur_ok = schur_ok && sv == Verdict::kStable;
    }
    report["delta_c"] = dc;
    report["delta_c_below_d_bar"] = dc < d_bar;
  }
  report["patterns"] = patterns;
  report["all_hurwitz"] = all_hurwitz;

  fs::create_directories(options.out_dir);
  const fs::path path = options.out_dir / "analyze.json";
  write_json(path, report);
  result.files.push_back(path);

  std::ostringstream s;
  s << weight_set.size() << " weight pattern(s) on " << topology.size() << " agents: "
    << (all_hurwitz ? "all subsystems Hurwitz" : "NOT all subsystems Hurwitz");
  if (all_hurwitz) {
    s << "; d_bar = " << format_double(d_bar) << " (pattern " << binding << "); delta_c = "
      << config.rates.delta_c << (schur_ok ? " is Schur-stable" : " is NOT Schur-stable");
  }
  result.summary = s.str();
  result.exit_code = all_hurwitz && schur_ok ? kExitOk : kExitCheckFailed;
  result.report = std::move(report);
  return result;
}

CommandResult cmd_simulate(const ScenarioConfig& config, TimeMode mode,
                           const CommandOptions& options) {
  if (!config.schedule) throw InvalidInput("config /schedule: required for simulation");
  fs::create_directories(options.out_dir);
  CommandResult result;
  Json report;
  const std::size_t n = config.agent_count();
  const fs::path traj_path = options.out_dir / "trajectory.csv";
  const fs::path err_path = options.out_dir / "error.csv";
  result.files = {traj_path, err_path};

  if (mode == TimeMode::kContinuous) {
    const CtScenario sc = config.ct_scenario();
    const double horizon = config.schedule->horizon;
    CsvWriter traj(traj_path, trajectory_header("", n));
    CsvWriter err(err_path, {"t", "left_limit", "err_max"});
    report["mode"] = "ct";
    if (horizon == 0.0) {
      result.summary = "zero horizon: header-only output";
      result.report = report;
      return result;
    }
    const std::vector<CtSegment> segments = integrate_with_departures(
        sc, config.initial_x(), config.initial_v(), horizon, config.rates.h, config.departures);
    double peak = 0.0;
    double final_error = 0.0;
    std::size_t samples = 0;
    for (const CtSegment& seg : segments) {
      const Trajectory& tr = seg.trajectory;
      for (const std::string& w : tr.warnings) result.warnings.push_back(w);
      for (std::size_t i = 0; i < tr.size(); ++i) {
        std::vector<std::string> xs(n, "nan"), vs(n, "nan"), es(n, "nan");
        for (std::size_t a = 0; a < seg.agents.size(); ++a) {
          const auto ai = static_cast<Eigen::Index>(a);
          xs[seg.agents[a]] = format_double(tr.x[i](ai));
          vs[seg.agents[a]] = format_double(tr.v[i](ai));
          es[seg.agents[a]] = format_double(tr.error[i](ai));
        }
        std::vector<std::string> row{format_double(tr.times[i])};
        row.insert(row.end(), xs.begin(), xs.end());
        row.insert(row.end(), vs.begin(), vs.end());
        row.push_back(format_double(tr.average[i]));
        row.insert(row.end(), es.begin(), es.end());
        traj.row(row);
        const double e = tr.max_error(i);
        err.row({format_double(tr.times[i]), tr.left_limit[i] ? "1" : "0", format_double(e)});
        peak = std::max(peak, e);
        final_error = e;
        ++samples;
      }
    }
    report["samples"] = samples;
    report["segments"] = segments.size();
    report["peak_error"] = peak;
    report["final_error"] = final_error;
    if (config.departures.empty()) {
      const Trajectory& tr = segments.front().trajectory;
      report["sum_v_drift"] = std::abs(tr.v.back().sum() - tr.v.front().sum());
      Json jumps = Json::array();
      for (double t : jump_instants(sc)) {
        const Jump j = jump_at_time(sc.ensemble, sc.schedule, t);
        jumps.push_back({{"t", t}, {"delta_average", j.average},
                         {"delta_disagreement_norm", j.disagreement.norm()}});
      }
      report["jumps"] = std::move(jumps);
    }
    if (config.certificate.evaluate_bound) {
      if (!config.departures.empty()) {
        result.warnings.push_back("bound evaluation skipped: the scenario has departures");
      } else {
        const StabilityCertificate cert = fit_config_certificate(
            config, TimeMode::kContinuous, base_seed(config, options), options.jobs);
        const Trajectory& tr = segments.front().trajectory;
        const BoundCurve bound = ct_bound_curve(cert, sc, config.initial_x(), config.initial_v(),
                                                tr.times, tr.left_limit);
        std::vector<double> error;
        for (std::size_t i = 0; i < tr.size(); ++i) error.push_back(tr.max_error(i));
        const Margin m = margin(error, bound.total);
        const fs::path bound_path = options.out_dir / "bound.csv";
        write_bound_csv(bound_path, "", {}, bound, error);
        result.files.push_back(bound_path);
        report["certificate"] = certificate_json(cert);
        report["bound_margin"] = margin_json(m);
        report["bound_margin"]["input_sup_grid"] = config.rates.h;
        report["bound_margin"]["note"] =
            "input supremum taken on the simulation grid; bound checks hold conditional on the "
            "fitted certificate dominating the transition norms";
        if (m.violations > 0) result.exit_code = kExitCheckFailed;
      }
    }
    std::ostringstream s;
    s << "ct: " << samples << " samples over [0, " << horizon << "], peak error "
      << format_double(peak) << ", final error " << format_double(final_error);
    result.summary = s.str();
  } else {
    if (!config.departures.empty()) {
      throw InvalidInput("config /departures: departures are supported in continuous time only");
    }
    const DtScenario sc = config.dt_scenario();
    const StepBounds bounds = config_step_bounds(config);
    require_stable_step(config, bounds.d_bar, options, result.warnings);
    report["mode"] = "dt";
    report["d_bar"] = bounds.d_bar;
    CsvWriter traj(traj_path, trajectory_header("k", n));
    CsvWriter err(err_path, {"k", "t", "err_max"});
    if (sc.steps == 0) {
      result.summary = "zero steps: header-only output";
      result.report = report;
      return result;
    }
    const DtTrajectory tr = simulate(sc, config.initial_x(), config.initial_v());
    double peak = 0.0;
    for (std::size_t i = 0; i < tr.size(); ++i) {
      std::vector<std::string> row{std::to_string(tr.steps[i]), format_double(tr.times[i])};
      for (Eigen::Index a = 0; a < tr.x[i].size(); ++a) row.push_back(format_double(tr.x[i](a)));
      for (Eigen::Index a = 0; a < tr.v[i].size(); ++a) row.push_back(format_double(tr.v[i](a)));
      row.push_back(format_double(tr.average[i]));
      for (Eigen::Index a = 0; a < tr.error[i].size(); ++a) row.push_back(format_double(tr.error[i](a)));
      traj.row(row);
      err.row({std::to_string(tr.steps[i]), format_double(tr.times[i]), format_double(tr.max_error(i))});
      peak = std::max(peak, tr.max_error(i));
    }
    report["steps"] = sc.steps;
    report["peak_error"] = peak;
    report["final_error"] = tr.max_error(tr.size() - 1);
    report["sum_v_drift"] = std::abs(tr.v.back().sum() - tr.v.front().sum());
    if (config.certificate.evaluate_bound) {
      const StabilityCertificate cert = fit_config_certificate(
          config, TimeMode::kDiscrete, base_seed(config, options), options.jobs);
      const BoundCurve bound = dt_bound_curve(cert, sc, config.initial_x(), config.initial_v());
      std::vector<double> error;
      for (std::size_t i = 0; i < tr.size(); ++i) error.push_back(tr.max_error(i));
      const Margin m = margin(error, bound.total);
      const fs::path bound_path = options.out_dir / "bound.csv";
      write_bound_csv(bound_path, "k", tr.steps, bound, error);
      result.files.push_back(bound_path);
      report["certificate"] = certificate_json(cert);
      report["bound_margin"] = margin_json(m);
      if (m.violations > 0) result.exit_code = kExitCheckFailed;
    }
    std::ostringstream s;
    s << "dt: " << sc.steps << " steps of " << sc.delta_c << " s, peak error " << format_double(peak)
      << ", final error " << format_double(tr.max_error(tr.size() - 1));
    result.summary = s.str();
  }
  const fs::path summary_path = options.out_dir / "summary.json";
  report["warnings"] = result.warnings;
  write_json(summary_path, report);
  result.files.push_back(summary_path);
  result.report = std::move(report);
  return result;
}

CommandResult cmd_certify(const ScenarioConfig& config, const CommandOptions& options) {
  if (!config.schedule) throw InvalidInput("config /schedule: required for certify");
  CommandResult result;
  const std::uint64_t seed = base_seed(config, options);
  const SpectralDecomposition decomposition = spectral_decomposition(config.topology.build());
  const ModeSchedule schedule = config.schedule->build();
  if (config.schedule->dwell) {
    const DwellCheck check = verify_dwell(schedule, *config.schedule->dwell);
    if (!check.ok) {
      std::ostringstream msg;
      msg << "config /schedule: violates its dwell declaration at t = " << *check.first_violation;
      throw InvalidInput(msg.str());
    }
  }
  const StepBounds bounds = config_step_bounds(config);
  Json report;
  Json subsystems = Json::array();
  const std::vector<Vector> weight_set = schedule.weight_set();
  for (std::size_t p = 0; p < weight_set.size(); ++p) {
    const Subsystem s = subsystem_matrix(decomposition, weight_set[p]);
    subsystems.push_back({{"weights", vector_json(s.weights)},
                          {"spectrum", spectrum_json(s.spectrum)},
                          {"stable_step", bounds.per_subsystem[p]}});
  }
  report["subsystems"] = subsystems;
  report["d_bar"] = bounds.d_bar;
  report["binding_pattern"] = bounds.binding;
  report["seed"] = seed;
  report["fit_seeds"] = config.certificate.fit_seeds;
  report["certificates"] = Json::object();
  if (!config.departures.empty()) {
    result.warnings.push_back("departures are ignored: bounds are evaluated on the full network");
  }
  ScenarioConfig evaluation = config;
  evaluation.departures.clear();

  bool ok = true;
  std::ostringstream summary;
  summary << "d_bar = " << format_double(bounds.d_bar);
  for (const std::string& mode_name : config.certificate.modes) {
    const TimeMode mode = mode_name == "ct" ? TimeMode::kContinuous : TimeMode::kDiscrete;
    Json entry;
    if (mode == TimeMode::kDiscrete) {
      require_stable_step(config, bounds.d_bar, options, result.warnings);
      entry["delta_c"] = config.rates.delta_c;
    }
    try {
      const StabilityCertificate cert = fit_config_certificate(config, mode, seed, options.jobs);
      entry["certificate"] = certificate_json(cert);
      Margin m;
      if (mode == TimeMode::kContinuous) {
        m = evaluate_ct(evaluation, cert).margin;
      } else {
        m = evaluate_dt(evaluation, cert).margin;
      }
      entry["margin"] = margin_json(m);
      entry["dominated"] = m.violations == 0;
      ok = ok && m.violations == 0;
      summary << "; " << mode_name << ": kappa = " << format_double(cert.kappa)
              << ", rate = " << format_double(cert.rate) << ", "
              << (m.violations == 0 ? "bound dominates" : "BOUND VIOLATED") << " (worst ratio "
              << format_double(m.worst_ratio) << ")";
    } catch (const NumericalError& e) {
      entry["error"] = e.what();
      entry["dominated"] = false;
      ok = false;
      summary << "; " << mode_name << ": certification FAILED: " << e.what();
    }
    report["certificates"][mode_name] = std::move(entry);
  }
  report["dominated"] = ok;
  report["warnings"] = result.warnings;
  fs::create_directories(options.out_dir);
  const fs::path path = options.out_dir / "certificate.json";
  write_json(path, report);
  result.files.push_back(path);
  result.exit_code = ok ? kExitOk : kExitCheckFailed;
  result.summary = summary.str();
  result.report = std::move(report);
  return result;
}

CommandResult cmd_containment(const ScenarioConfig& config, const CommandOptions& options) {
  const ContainmentSetup setup = config.containment_setup();
  const ContainmentReport rep =
      run_containment(setup, config.containment->initial_positions, options.allow_unstable);
  const std::size_t n = setup.topology.size();
  fs::create_directories(options.out_dir);
  CommandResult result;
  result.warnings = rep.warnings;

  std::vector<std::string> header{"k", "t"};
  for (std::size_t i = 1; i <= n; ++i) {
    header.push_back("x_" + std::to_string(i));
    header.push_back("y_" + std::to_string(i));
  }
  for (const char* c : {"target_x", "target_y", "err_max", "target_in_hull", "followers_in_hull"}) {
    header.emplace_back(c);
  }
  const fs::path csv_path = options.out_dir / "containment.csv";
  const fs::path hull_path = options.out_dir / "hulls.csv";
  {
    CsvWriter csv(csv_path, header);
    CsvWriter hulls(hull_path, {"k", "vertex", "x", "y"});
    for (std::size_t k = 0; k < rep.times.size(); ++k) {
      std::vector<std::string> row{std::to_string(k), format_double(rep.times[k])};
      for (const Point2& p : rep.followers[k]) {
        row.push_back(format_double(p.x()));
        row.push_back(format_double(p.y()));
      }
      row.push_back(format_double(rep.target[k].x()));
      row.push_back(format_double(rep.target[k].y()));
      row.push_back(format_double(rep.max_error[k]));
      row.push_back(rep.target_in_hull[k] ? "1" : "0");
      row.push_back(std::to_string(
          std::count(rep.follower_in_hull[k].begin(), rep.follower_in_hull[k].end(), true)));
      csv.row(row);
      const auto& v = rep.hulls[k].vertices;
      for (std::size_t j = 0; j < v.size(); ++j) {
        hulls.row({std::to_string(k), std::to_string(j), format_double(v[j].x()),
                   format_double(v[j].y())});
      }
    }
  }
  Json report{{"steps", setup.steps},
              {"delta_c", setup.delta_c},
              {"delta_s", setup.delta_s},
              {"d_bar", rep.d_bar},
              {"peak_error", rep.peak_error},
              {"final_error", rep.max_error.empty() ? 0.0 : rep.max_error.back()},
              {"target_violations", rep.target_violations},
              {"follower_samples_outside_hull", rep.follower_outside},
              {"warnings", rep.warnings}};
  const fs::path summary_path = options.out_dir / "summary.json";
  write_json(summary_path, report);
  result.files = {csv_path, hull_path, summary_path};
  std::ostringstream s;
  s << "containment: " << setup.steps << " steps, peak error " << format_double(rep.peak_error)
    << ", final error " << format_double(rep.max_error.back()) << ", target outside hull at "
    << rep.target_violations << " step(s)";
  result.summary = s.str();
  result.exit_code = rep.target_violations == 0 ? kExitOk : kExitCheckFailed;
  result.report = std::move(report);
  return result;
}

CommandResult cmd_demo(const std::string& name, const CommandOptions& options) {
  const ScenarioConfig config = demo_config(name);
  fs::create_directories(options.out_dir);
  write_json(options.out_dir / "config.json", to_json(config));
  CommandResult result = name == "fig2" ? cmd_simulate(config, TimeMode::kContinuous, options)
                                        : cmd_containment(config, options);
  result.files.insert(result.files.begin(), options.out_dir / "config.json");
  return result;
}

}  // namespace acons
