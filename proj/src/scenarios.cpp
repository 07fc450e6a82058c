#include "qsim/scenarios.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <functional>
#include <mutex>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <thread>

#include "qsim/decay.hpp"
#include "qsim/hyperion.hpp"
#include "qsim/measure.hpp"
#include "qsim/modal.hpp"
#include "qsim/qcore.hpp"
#include "qsim/statmech.hpp"

namespace qsim::scenarios {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

const std::vector<std::string> kNames = {
    "polarization",     "modal_pointer",     "decay_counting",
    "decay_homodyne",   "hyperion_classical", "hyperion_quantum",
    "ehrenfest_sweep",  "ising",             "thermalization"};

// Index-addressed parallel loop; results must be written by index so the
// output is independent of the thread count.
void parallel_for(int n, int threads, const std::function<void(int)>& body) {
  if (threads <= 0) threads = int(std::thread::hardware_concurrency());
  if (threads < 1) threads = 1;
  threads = std::min(threads, n);
  if (threads <= 1) {
    for (int i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  for (int t = 0; t < threads; ++t)
    pool.emplace_back([&] {
      for (;;) {
        int i = next.fetch_add(1);
        if (i >= n) return;
        try {
          body(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!error) error = std::current_exception();
          return;
        }
      }
    });
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

struct ParamSpec {
  const char* key;
  json def;
};

bool same_kind(const json& a, const json& b) {
  if (a.is_number() && b.is_number()) return true;
  return a.type() == b.type();
}

json resolve_params(const json& in, const std::vector<ParamSpec>& specs,
                    const std::string& scenario) {
  if (!in.is_object() && !in.is_null())
    throw ConfigError("params for " + scenario + " must be an object");
  json out = json::object();
  for (const auto& spec : specs) out[spec.key] = spec.def;
  if (in.is_null()) return out;
  for (auto it = in.begin(); it != in.end(); ++it) {
    auto found = out.find(it.key());
    if (found == out.end())
      throw ConfigError("unknown param '" + it.key() + "' for scenario " +
                        scenario);
    if (!same_kind(*found, it.value()))
      throw ConfigError("param '" + it.key() + "' for scenario " + scenario +
                        " has wrong type");
    *found = it.value();
  }
  return out;
}

const std::vector<ParamSpec>& param_specs(Scenario s) {
  static const std::vector<ParamSpec> polarization = {
      {"epsilon", 0.05},       {"rotation_angle", 0.4},
      {"n_measurements", 3},   {"n_paths", 2000},
      {"env_dof", 1000000}};
  static const std::vector<ParamSpec> modal_pointer = {
      {"c1_sq", 0.7}, {"tau", 1.0},      {"dt", 0.005},
      {"t_max", 8.0}, {"n_paths", 4000}};
  static const std::vector<ParamSpec> decay_counting = {
      {"gamma", 0.5}, {"eta", 0.01},     {"omega", 1.0},
      {"t_max", 6.0}, {"n_paths", 10000}};
  static const std::vector<ParamSpec> decay_homodyne = {
      {"gamma", 0.5}, {"eta", 0.001},   {"beta", 1.0},
      {"omega", 1.0}, {"t_max", 6.0},   {"n_paths", 1000}};
  static const std::vector<ParamSpec> hyperion_classical = {
      {"asymmetry", 0.7},        {"eccentricity", 0.4},
      {"phi0", 0.8},             {"ell0", 0.0},
      {"t_max", 60.0},           {"dt", 2.0 * M_PI / 2000.0},
      {"lyapunov_duration", 800.0}};
  static const std::vector<ParamSpec> hyperion_quantum = {
      {"asymmetry", 0.7},  {"eccentricity", 0.4},
      {"hbar_eff", 0.01},  {"x0", 0.8},
      {"p0", 0.0},         {"delta_x", 0.0},
      {"t_max", 30.0},     {"dt", 2.0 * M_PI / 2000.0},
      {"sample_every", 10},{"p_margin", 6.5},
      {"husimi_cells", 32},{"husimi_p_range", 1.5}};
  static const std::vector<ParamSpec> ehrenfest_sweep = {
      {"asymmetry", 0.7},
      {"eccentricity", 0.4},
      {"hbar_list", json::array({3.84e-3, 2e-3, 3.84e-4, 6.6e-5, 3.84e-5})},
      {"width_mode", "fixed_momentum"},
      {"threshold", 1.2},
      {"momentum_width", 0.004},
      {"position_width", 0.05},
      {"x0", 0.8},
      {"p0", 0.0},
      {"horizon", 25.0},
      {"dt", 2.0 * M_PI / 2000.0},
      {"sample_every", 10},
      {"p_margin", 7.5}};
  static const std::vector<ParamSpec> ising = {
      {"lattice_size", 16}, {"temperature", 5.0}, {"sweeps", 10000},
      {"start", "random"}};
  static const std::vector<ParamSpec> thermalization = {
      {"d_mc", 500},
      {"sector_dims", json::array({100, 150, 250})},
      {"duration", 200.0},
      {"dt", 0.05},
      {"n_paths", 20},
      {"n_times", 400},
      {"blocked", false}};
  switch (s) {
    case Scenario::polarization: return polarization;
    case Scenario::modal_pointer: return modal_pointer;
    case Scenario::decay_counting: return decay_counting;
    case Scenario::decay_homodyne: return decay_homodyne;
    case Scenario::hyperion_classical: return hyperion_classical;
    case Scenario::hyperion_quantum: return hyperion_quantum;
    case Scenario::ehrenfest_sweep: return ehrenfest_sweep;
    case Scenario::ising: return ising;
    case Scenario::thermalization: return thermalization;
  }
  throw ConfigError("unreachable scenario");
}

class ArtifactWriter {
 public:
  ArtifactWriter(const std::string& dir, Format format)
      : dir_(dir), format_(format) {
    fs::create_directories(dir_);
  }

  void csv(const std::string& name, const std::string& content) {
    if (format_ != Format::json) write(name, content);
  }
  void json_file(const std::string& name, const std::string& content) {
    if (format_ != Format::csv) write(name, content);
  }
  void always(const std::string& name, const std::string& content) {
    write(name, content);
  }
  const std::vector<std::string>& files() const { return files_; }

 private:
  void write(const std::string& name, const std::string& content) {
    fs::path path = fs::path(dir_) / name;
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path.string());
    out << content;
    files_.push_back(path.string());
  }
  std::string dir_;
  Format format_;
  std::vector<std::string> files_;
};

std::string format_double(double v) {
  std::ostringstream os;
  os << std::setprecision(12) << v;
  return os.str();
}

// ---- individual scenarios -------------------------------------------------

void run_polarization(const ScenarioConfig& cfg, ArtifactWriter& out) {
  const auto& p = cfg.params;
  double eps = p["epsilon"];
  double angle = p["rotation_angle"];
  int n_meas = p["n_measurements"];
  int n_paths = p["n_paths"];
  long long env_dof = p["env_dof"];
  if (n_meas < 1 || n_meas > 12) throw ConfigError("n_measurements out of [1,12]");
  if (n_paths < 1) throw ConfigError("n_paths < 1");

  Mat sigma_y = Mat::Zero(2, 2);
  sigma_y(0, 1) = Complex(0, -1);
  sigma_y(1, 0) = Complex(0, 1);
  measure::MeasurementSchedule schedule;
  for (int k = 0; k < n_meas; ++k) {
    schedule.steps.push_back(measure::UnitarySegment{sigma_y, angle});
    schedule.steps.push_back(
        measure::MeasurementStep{measure::noisy_splitter_ops(eps), "splitter"});
  }
  schedule.validate();
  Vec psi0 = Vec::Zero(2);
  psi0[0] = 1.0;

  auto branches = measure::enumerate_branches(schedule, psi0);
  std::vector<long long> counts(branches.histories.size(), 0);
  auto history_index = [&](const std::vector<int>& h) {
    long long idx = 0;
    for (int o : h) idx = idx * 2 + o;
    return idx;
  };
  std::vector<long long> lookup(1LL << n_meas, -1);
  for (size_t b = 0; b < branches.histories.size(); ++b)
    lookup[history_index(branches.histories[b])] = static_cast<long long>(b);

  std::vector<std::vector<int>> sampled(n_paths);
  parallel_for(n_paths, cfg.threads, [&](int path) {
    RngStream rng(cfg.seed, path);
    sampled[path] = measure::run_trajectory(schedule, psi0, rng).outcomes;
  });
  for (const auto& h : sampled) ++counts[lookup[history_index(h)]];

  std::ostringstream csv;
  csv << "history,born_prob,empirical_prob,count\n";
  double max_dev = 0.0;
  for (size_t b = 0; b < branches.histories.size(); ++b) {
    std::string hist;
    for (int o : branches.histories[b]) hist += char('0' + o);
    double emp = double(counts[b]) / n_paths;
    max_dev = std::max(max_dev, std::abs(emp - branches.joint_probs[b]));
    csv << hist << "," << format_double(branches.joint_probs[b]) << ","
        << format_double(emp) << "," << counts[b] << "\n";
  }
  out.csv("polarization_counts.csv", csv.str());

  json summary;
  summary["epsilon"] = eps;
  summary["n_measurements"] = n_meas;
  summary["n_paths"] = n_paths;
  summary["max_abs_deviation"] = max_dev;
  summary["log10_environment_overlap"] =
      measure::log_environment_overlap(eps, env_dof) / std::log(10.0);
  double total = 0.0;
  for (double q : branches.joint_probs) total += q;
  summary["branch_prob_total"] = total;
  out.json_file("polarization_summary.json", summary.dump(2));
}

void run_modal_pointer(const ScenarioConfig& cfg, ArtifactWriter& out) {
  const auto& p = cfg.params;
  double c1_sq = p["c1_sq"];
  double tau = p["tau"];
  double dt = p["dt"];
  double t_max = p["t_max"];
  int n_paths = p["n_paths"];
  if (c1_sq <= 0.0 || c1_sq >= 1.0) throw ConfigError("c1_sq out of (0,1)");
  if (tau <= 0.0 || dt <= 0.0 || t_max <= dt) throw ConfigError("bad time grid");
  int steps = int(std::llround(t_max / dt));

  Complex c1 = std::sqrt(c1_sq), c2 = std::sqrt(1.0 - c1_sq);
  std::vector<modal::ModalPath> paths(n_paths);
  parallel_for(n_paths, cfg.threads, [&](int path) {
    RngStream rng(cfg.seed, path);
    paths[path] = modal::simulate_pointer_model(c1, c2, tau, dt, steps, rng);
  });

  std::ostringstream csv;
  csv << "t,frac_branch0,frac_branch1,p1_theory,p2_theory\n";
  double late_transitions = 0;
  for (int n = 0; n < steps; n += std::max(1, steps / 400)) {
    int occ0 = 0;
    for (const auto& path : paths) occ0 += path.indices[n] == 0;
    double t = n * dt;
    double F = std::exp(-(t / tau) * (t / tau));
    auto probs = modal::pointer_overlap_probs(c1, c2, F);
    csv << format_double(t) << "," << format_double(double(occ0) / n_paths)
        << "," << format_double(1.0 - double(occ0) / n_paths) << ","
        << format_double(probs.first) << "," << format_double(probs.second)
        << "\n";
  }
  int total_transitions = 0;
  for (const auto& path : paths) {
    total_transitions += int(path.transitions.size());
    for (const auto& tr : path.transitions)
      if (tr.t >= 5.0 * tau) late_transitions += 1;
  }
  out.csv("pointer_occupation.csv", csv.str());

  int final0 = 0;
  for (const auto& path : paths) final0 += path.indices.back() == 0;
  json summary;
  summary["n_paths"] = n_paths;
  summary["final_frac_branch0"] = double(final0) / n_paths;
  summary["target_branch0"] = std::max(c1_sq, 1.0 - c1_sq);
  summary["total_transitions"] = total_transitions;
  summary["transitions_after_5tau"] = late_transitions;
  out.json_file("pointer_summary.json", summary.dump(2));
}

// Censored-exponential maximum-likelihood rate: clicks at t_i, unclicked
// paths censored at the horizon.
double fit_click_rate(const std::vector<double>& click_times, int n_paths,
                      double horizon) {
  double total_time = 0.0;
  for (double t : click_times) total_time += t;
  total_time += double(n_paths - int(click_times.size())) * horizon;
  if (total_time <= 0.0) return 0.0;
  return double(click_times.size()) / total_time;
}

void run_decay(const ScenarioConfig& cfg, ArtifactWriter& out, bool homodyne) {
  const auto& p = cfg.params;
  double gamma = p["gamma"];
  double eta = p["eta"];
  double omega = p["omega"];
  double t_max = p["t_max"];
  int n_paths = p["n_paths"];
  if (gamma <= 0.0 || eta <= 0.0) throw ConfigError("gamma, eta must be > 0");
  if (gamma * eta >= 0.05) throw ConfigError("eta*gamma >= 0.05");
  if (n_paths < 1) throw ConfigError("n_paths < 1");
  int steps = int(std::llround(t_max / eta));

  Mat H = Mat::Zero(2, 2);
  H(1, 1) = omega;
  PovmSet ops = homodyne
                    ? decay::homodyne_ops(gamma, eta, Complex(double(p["beta"]), 0.0), H)
                    : decay::photon_counting_ops(gamma, eta, H);
  Vec psi0 = Vec::Zero(2);
  psi0[1] = 1.0;  // excited

  auto summary = decay::run_ensemble(ops, psi0, steps, eta, n_paths, cfg.seed);

  std::ostringstream pop;
  pop << "t,mean_excited,stderr,exact\n";
  for (size_t n = 0; n < summary.times.size();
       n += std::max<size_t>(1, summary.times.size() / 600)) {
    pop << format_double(summary.times[n]) << ","
        << format_double(summary.mean_excited_population[n]) << ","
        << format_double(summary.stderr_excited_population[n]) << ","
        << format_double(std::exp(-2.0 * gamma * summary.times[n])) << "\n";
  }
  out.csv(homodyne ? "homodyne_population.csv" : "counting_population.csv",
          pop.str());

  json js;
  js["gamma"] = gamma;
  js["eta"] = eta;
  js["n_paths"] = n_paths;
  js["no_click_fraction"] = summary.no_click_fraction;
  js["no_click_exact"] = std::exp(-2.0 * gamma * t_max);
  js["mean_quadratic_variation"] = summary.mean_quadratic_variation;
  if (!homodyne) {
    std::ostringstream clicks;
    clicks << "click_time\n";
    for (double t : summary.click_times) clicks << format_double(t) << "\n";
    out.csv("click_times.csv", clicks.str());
    js["fitted_rate"] = fit_click_rate(summary.click_times, n_paths, t_max);
    js["target_rate"] = 2.0 * gamma;
  } else {
    js["beta"] = double(p["beta"]);
  }
  out.json_file(homodyne ? "homodyne_summary.json" : "counting_summary.json",
                js.dump(2));
}

hyperion::RotorParams rotor_params_from(const json& p) {
  hyperion::RotorParams params;
  params.asymmetry = p["asymmetry"];
  params.eccentricity = p["eccentricity"];
  return params;
}

void run_hyperion_classical(const ScenarioConfig& cfg, ArtifactWriter& out) {
  const auto& p = cfg.params;
  auto params = rotor_params_from(p);
  params.validate();
  hyperion::ClassicalRotorState s0{hyperion::wrap_angle(double(p["phi0"])),
                                   double(p["ell0"])};
  double t_max = p["t_max"], dt = p["dt"];
  auto traj = hyperion::integrate_classical(params, s0, 0.0, t_max, dt);
  auto ly = hyperion::lyapunov(params, s0, double(p["lyapunov_duration"]), dt);

  std::ostringstream csv;
  csv << "t,phi,ell\n";
  size_t stride = std::max<size_t>(1, traj.times.size() / 4000);
  for (size_t n = 0; n < traj.times.size(); n += stride)
    csv << format_double(traj.times[n]) << ","
        << format_double(hyperion::wrap_angle(traj.phi[n])) << ","
        << format_double(traj.ell[n]) << "\n";
  out.csv("classical_trajectory.csv", csv.str());

  json js;
  js["lambda_max"] = ly.lambda_max;
  js["t_c"] = ly.t_c;
  js["regular"] = ly.regular;
  js["area_drift"] = ly.area_drift;
  out.json_file("lyapunov.json", js.dump(2));
}

void run_hyperion_quantum(const ScenarioConfig& cfg, ArtifactWriter& out) {
  const auto& p = cfg.params;
  auto params = rotor_params_from(p);
  params.hbar_eff = p["hbar_eff"];
  params.validate();
  double x0 = p["x0"], p0 = p["p0"];
  double dt = p["dt"], t_max = p["t_max"];
  int sample_every = p["sample_every"];
  double delta_x = p["delta_x"];
  if (delta_x <= 0.0) delta_x = std::sqrt(params.hbar_eff / 2.0);
  int M = int(std::ceil(double(p["p_margin"]) / params.hbar_eff));

  auto psi = hyperion::coherent_state(x0, p0, M, delta_x, params);
  hyperion::RotorEvolver evolver(params, M);
  hyperion::ClassicalRotorState c0{hyperion::wrap_angle(x0 / params.radius),
                                   p0 * params.radius};
  auto classical = hyperion::integrate_classical(params, c0, 0.0, t_max, dt);

  std::ostringstream csv;
  csv << "t,mean_x,mean_p,spread_x,classical_x,classical_p\n";
  int total_steps = int(std::ceil(t_max / dt));
  for (int step = 0; step < total_steps; step += sample_every) {
    int chunk = std::min(sample_every, total_steps - step);
    psi = evolver.evolve(psi, step * dt, dt, chunk);
    double t = (step + chunk) * dt;
    auto mom = evolver.moments(psi);
    size_t ci = std::min(size_t(std::llround(t / dt)), classical.phi.size() - 1);
    csv << format_double(t) << "," << format_double(mom.mean_x) << ","
        << format_double(mom.mean_p) << "," << format_double(mom.spread_x)
        << "," << format_double(hyperion::wrap_angle(classical.phi[ci]) *
                                params.radius)
        << "," << format_double(classical.ell[ci] / params.radius) << "\n";
  }
  out.csv("quantum_moments.csv", csv.str());

  hyperion::PhaseSpaceGrid grid;
  grid.x_cells = p["husimi_cells"];
  grid.p_cells = p["husimi_cells"];
  grid.p_max = p["husimi_p_range"];
  grid.p_min = -grid.p_max;
  grid.coh_x = delta_x;
  auto density = hyperion::husimi(psi, grid, params);
  out.csv("husimi_final.csv", density.to_csv(params));

  json js;
  js["hbar_eff"] = params.hbar_eff;
  js["truncation_m"] = M;
  js["delta_x"] = delta_x;
  js["husimi_total_mass"] = density.total_mass(params.hbar_eff);
  js["final_tail_mass"] = psi.tail_mass();
  out.json_file("quantum_summary.json", js.dump(2));
}

void run_ehrenfest_sweep(const ScenarioConfig& cfg, ArtifactWriter& out) {
  const auto& p = cfg.params;
  auto params = rotor_params_from(p);
  params.validate();
  std::vector<double> hbar_list = p["hbar_list"].get<std::vector<double>>();

  hyperion::BreakdownSettings settings;
  std::string mode = p["width_mode"];
  if (mode == "fixed_momentum")
    settings.width_mode =
        hyperion::BreakdownSettings::WidthMode::fixed_momentum_width;
  else if (mode == "fixed_position")
    settings.width_mode =
        hyperion::BreakdownSettings::WidthMode::fixed_position_width;
  else
    throw ConfigError("width_mode must be fixed_momentum or fixed_position");
  settings.threshold = p["threshold"];
  settings.momentum_width = p["momentum_width"];
  settings.position_width = p["position_width"];
  settings.x0 = p["x0"];
  settings.p0 = p["p0"];
  settings.horizon = p["horizon"];
  settings.dt = p["dt"];
  settings.sample_every = p["sample_every"];
  settings.p_margin = p["p_margin"];

  auto result = hyperion::ehrenfest_breakdown(params, hbar_list, settings);
  out.json_file("breakdown.json", result.to_json());

  std::ostringstream csv;
  csv << "hbar_eff,tq_spread,tq_discrepancy,censored_spread,censored_discrepancy\n";
  for (const auto& pt : result.points)
    csv << format_double(pt.hbar_eff) << ","
        << (pt.tq_spread ? format_double(*pt.tq_spread) : "") << ","
        << (pt.tq_discrepancy ? format_double(*pt.tq_discrepancy) : "") << ","
        << !pt.tq_spread.has_value() << "," << !pt.tq_discrepancy.has_value()
        << "\n";
  out.csv("breakdown_points.csv", csv.str());
}

void run_ising(const ScenarioConfig& cfg, ArtifactWriter& out) {
  const auto& p = cfg.params;
  int L = p["lattice_size"];
  double T = p["temperature"];
  int sweeps = p["sweeps"];
  std::string start = p["start"];
  if (L < 2) throw ConfigError("lattice_size < 2");
  if (T <= 0.0) throw ConfigError("temperature <= 0");

  RngStream rng(cfg.seed, 0);
  statmech::IsingLattice lattice =
      start == "up" ? statmech::IsingLattice::all_up(L, T)
      : start == "random"
          ? statmech::IsingLattice::random(L, T, rng)
          : throw ConfigError("start must be 'up' or 'random'");
  auto series = statmech::simulate_ising(lattice, sweeps, rng);

  std::ostringstream csv;
  csv << "sweep,magnetization\n";
  size_t stride = std::max<size_t>(1, series.size() / 10000);
  for (size_t n = 0; n < series.size(); n += stride)
    csv << n + 1 << "," << format_double(series[n]) << "\n";
  out.csv("magnetization.csv", csv.str());

  double mean = 0.0, min_m = series[0], max_m = series[0];
  size_t half = series.size() / 2;
  for (size_t n = half; n < series.size(); ++n) mean += series[n];
  mean /= double(series.size() - half);
  bool sign_flip = false;
  for (double m : series) {
    min_m = std::min(min_m, m);
    max_m = std::max(max_m, m);
    if (m * series[0] < 0.0) sign_flip = true;
  }
  json js;
  js["lattice_size"] = L;
  js["temperature"] = T;
  js["sweeps"] = sweeps;
  js["mean_magnetization_second_half"] = mean;
  js["min_magnetization"] = min_m;
  js["max_magnetization"] = max_m;
  js["sign_flip_observed"] = sign_flip;
  out.json_file("ising_summary.json", js.dump(2));
}

void run_thermalization(const ScenarioConfig& cfg, ArtifactWriter& out) {
  const auto& p = cfg.params;
  int d_mc = p["d_mc"];
  std::vector<int> sector_dims = p["sector_dims"].get<std::vector<int>>();
  double duration = p["duration"], dt = p["dt"];
  int n_paths = p["n_paths"], n_times = p["n_times"];
  bool blocked = p["blocked"];
  if (n_times < 2 || n_paths < 1 || duration <= 0.0 || dt <= 0.0)
    throw ConfigError("bad thermalization settings");

  RngStream model_rng(cfg.seed, 0xF00D);
  auto model = blocked
                   ? statmech::build_microcanonical_blocked(d_mc, sector_dims,
                                                            model_rng)
                   : statmech::build_microcanonical(d_mc, sector_dims, model_rng);
  RngStream state_rng(cfg.seed, 0xBEEF);
  Vec psi0 = random_state(d_mc, state_rng);

  std::vector<double> times(n_times);
  for (int n = 0; n < n_times; ++n) times[n] = duration * (n + 1) / n_times;
  auto series = statmech::thermal_expectations(model, psi0, times);
  out.csv("thermal_series.csv", series.to_csv());

  auto check =
      statmech::bell_ergodicity_check(model, psi0, duration, dt, n_paths, cfg.seed);
  json js = json::parse(check.to_json());
  js["time_average_p"] = series.time_average;
  js["blocked"] = blocked;
  out.json_file("ergodicity.json", js.dump(2));
}

}  // namespace

const std::vector<std::string>& scenario_names() { return kNames; }

Scenario scenario_from_name(const std::string& name) {
  for (size_t i = 0; i < kNames.size(); ++i)
    if (kNames[i] == name) return Scenario(i);
  throw ConfigError("unknown scenario '" + name + "'");
}

std::string to_string(Scenario s) { return kNames[size_t(s)]; }

std::string to_string(Format f) {
  switch (f) {
    case Format::csv: return "csv";
    case Format::json: return "json";
    case Format::both: return "both";
  }
  return "both";
}

nlohmann::json ScenarioConfig::to_json() const {
  json j;
  j["scenario"] = to_string(scenario);
  j["params"] = params;
  j["seed"] = seed;
  j["output_dir"] = output_dir;
  j["format"] = to_string(format);
  j["threads"] = threads;
  return j;
}

ScenarioConfig parse_config_json(const nlohmann::json& doc) {
  if (!doc.is_object()) throw ConfigError("config root must be an object");
  if (doc.contains("config")) return parse_config_json(doc.at("config"));
  ScenarioConfig cfg;
  bool have_scenario = false;
  for (auto it = doc.begin(); it != doc.end(); ++it) {
    const std::string& key = it.key();
    if (key == "scenario") {
      if (!it->is_string()) throw ConfigError("scenario must be a string");
      cfg.scenario = scenario_from_name(*it);
      have_scenario = true;
    } else if (key == "params") {
      cfg.params = *it;
    } else if (key == "seed") {
      if (!it->is_number_integer()) throw ConfigError("seed must be an integer");
      cfg.seed = it->get<std::uint64_t>();
    } else if (key == "output_dir") {
      if (!it->is_string()) throw ConfigError("output_dir must be a string");
      cfg.output_dir = *it;
    } else if (key == "format") {
      std::string f = *it;
      if (f == "csv")
        cfg.format = Format::csv;
      else if (f == "json")
        cfg.format = Format::json;
      else if (f == "both")
        cfg.format = Format::both;
      else
        throw ConfigError("format must be csv, json or both");
    } else if (key == "threads") {
      if (!it->is_number_integer()) throw ConfigError("threads must be an integer");
      cfg.threads = *it;
    } else {
      throw ConfigError("unknown config key '" + key + "'");
    }
  }
  if (!have_scenario) throw ConfigError("missing required key 'scenario'");
  cfg.params = resolve_params(cfg.params, param_specs(cfg.scenario),
                              to_string(cfg.scenario));
  return cfg;
}

ScenarioConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("parse error in " + path + ": " + e.what());
  }
  return parse_config_json(doc);
}

RunResult run_scenario(const ScenarioConfig& config) {
  auto t_start = std::chrono::steady_clock::now();
  ArtifactWriter out(config.output_dir, config.format);
  switch (config.scenario) {
    case Scenario::polarization: run_polarization(config, out); break;
    case Scenario::modal_pointer: run_modal_pointer(config, out); break;
    case Scenario::decay_counting: run_decay(config, out, false); break;
    case Scenario::decay_homodyne: run_decay(config, out, true); break;
    case Scenario::hyperion_classical: run_hyperion_classical(config, out); break;
    case Scenario::hyperion_quantum: run_hyperion_quantum(config, out); break;
    case Scenario::ehrenfest_sweep: run_ehrenfest_sweep(config, out); break;
    case Scenario::ising: run_ising(config, out); break;
    case Scenario::thermalization: run_thermalization(config, out); break;
  }
  double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                              t_start)
                    .count();
  json manifest;
  manifest["config"] = config.to_json();
  manifest["code_version"] = kCodeVersion;
  manifest["seed"] = config.seed;
  manifest["wall_time_seconds"] = wall;
  manifest["artifacts"] = json::array();
  for (const auto& f : out.files())
    manifest["artifacts"].push_back(std::filesystem::path(f).filename().string());
  out.always("manifest.json", manifest.dump(2) + "\n");
  RunResult result;
  result.artifacts = out.files();
  return result;
}

}  // namespace qsim::scenarios
