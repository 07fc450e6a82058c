// Acceptance gate: one line per criterion, exit code = number of failures.
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "qsim/decay.hpp"
#include "qsim/hyperion.hpp"
#include "qsim/measure.hpp"
#include "qsim/modal.hpp"
#include "qsim/qcore.hpp"
#include "qsim/scenarios.hpp"
#include "qsim/statmech.hpp"

using namespace qsim;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.4g", v);
  return buf;
}

// ---------------------------------------------------------------- criterion 1
Outcome headline() {
  const double day = 86400.0, year = 365.25 * day;
  auto res = hyperion::tq_headline(100.0 * day, 1.4e5, 1e19, 100.0);
  double years = res.t_q_seconds / year;
  bool tq_ok = years >= 21.0 && years <= 27.0;
  double ratio = res.de_broglie_m / 1e-34;
  bool db_ok = ratio > 1.0 / 3.0 && ratio < 3.0;
  return {tq_ok && db_ok,
          "t_q = " + fmt(years) + " years (target [21, 27]" +
              (tq_ok ? ", ok" : ", FAIL") + "); de Broglie = " +
              fmt(res.de_broglie_m) + " m vs 1e-34 m, factor " + fmt(ratio) +
              (db_ok ? " (ok)" : " (FAIL, outside factor 3)")};
}

// ---------------------------------------------------------------- criterion 2
Outcome log_scaling() {
  // chaotic demo preset: thermal packets of fixed momentum width, so the
  // hbar-dependent position width hbar/(2 dp) seeds the exponential growth
  hyperion::RotorParams params;
  params.asymmetry = 0.7;
  params.eccentricity = 0.4;
  hyperion::BreakdownSettings s;
  s.width_mode = hyperion::BreakdownSettings::WidthMode::fixed_momentum_width;
  s.momentum_width = 0.004;
  s.threshold = 1.2;
  s.x0 = 0.8;
  s.p0 = 0.0;
  s.horizon = 25.0;
  s.p_margin = 7.5;
  // points are placed so the two-decade span covers three stretching bursts
  // of the orbit-periodic torque; the breakdown-time staircase those bursts
  // produce is the dominant deviation from the log law at desk scale
  std::vector<double> hbars{3.84e-3, 2e-3, 3.84e-4, 6.6e-5, 3.84e-5};
  auto chaotic = hyperion::ehrenfest_breakdown(params, hbars, s);
  double inv_lambda = 1.0 / chaotic.lambda_max;
  bool r2_ok = chaotic.fit_spread.r_squared > 0.95;
  bool slope_ok =
      std::abs(chaotic.fit_spread.slope - inv_lambda) < 0.30 * inv_lambda;

  // free-rotor control: fixed position width, ballistic spreading, so the
  // breakdown time grows as a power of 1/hbar, not its logarithm
  hyperion::RotorParams free_params = params;
  free_params.asymmetry = 0.0;
  hyperion::BreakdownSettings fs = s;
  fs.width_mode = hyperion::BreakdownSettings::WidthMode::fixed_position_width;
  fs.position_width = 0.05;
  fs.threshold = 0.3;
  fs.horizon = 400.0;
  fs.p_margin = 1.0;
  std::vector<double> free_hbars{1e-2, 3.16e-3, 1e-3, 3.16e-4, 1e-4};
  auto control = hyperion::ehrenfest_breakdown(free_params, free_hbars, fs);
  bool control_ok = control.fit_spread.n_points >= 4 &&
                    control.powerlaw_fit_spread.r_squared > 0.99 &&
                    control.fit_spread.r_squared <
                        control.powerlaw_fit_spread.r_squared;

  return {r2_ok && slope_ok && control_ok,
          "chaotic slope = " + fmt(chaotic.fit_spread.slope) + " vs 1/lambda = " +
              fmt(inv_lambda) + ", R^2 = " + fmt(chaotic.fit_spread.r_squared) +
              "; control log R^2 = " + fmt(control.fit_spread.r_squared) +
              " < power law R^2 = " +
              fmt(control.powerlaw_fit_spread.r_squared) +
              (control_ok ? " (ok)" : " (FAIL)")};
}

// ---------------------------------------------------------------- criterion 3
Outcome decay_law() {
  const double gamma = 0.5, eta = 0.01, t_max = 6.0;
  const int n_paths = 10000, steps = int(t_max / eta);
  Mat H = Mat::Zero(2, 2);
  Vec excited = Vec::Zero(2);
  excited[1] = 1.0;
  auto ops = decay::photon_counting_ops(gamma, eta, H);
  auto summary = decay::run_ensemble(ops, excited, steps, eta, n_paths, 2024);

  std::vector<double> clicks = summary.click_times;
  std::sort(clicks.begin(), clicks.end());
  const double n = double(clicks.size());
  const double z = 1.0 - std::exp(-2.0 * gamma * t_max);
  double d_stat = 0.0;
  for (size_t i = 0; i < clicks.size(); ++i) {
    double cdf = (1.0 - std::exp(-2.0 * gamma * clicks[i])) / z;
    d_stat = std::max(d_stat, std::abs(cdf - double(i + 1) / n));
    d_stat = std::max(d_stat, std::abs(cdf - double(i) / n));
  }
  double d_crit = 1.628 / std::sqrt(n);  // 1% level, large-sample
  bool ks_ok = d_stat < d_crit;

  // censored-exponential MLE for the click rate over t <= 3/gamma
  double total_time = std::accumulate(clicks.begin(), clicks.end(), 0.0) +
                      double(n_paths - clicks.size()) * t_max;
  double rate = n / total_time;
  bool rate_ok = std::abs(rate / (2.0 * gamma) - 1.0) < 0.02;
  return {ks_ok && rate_ok,
          "KS D = " + fmt(d_stat) + " < " + fmt(d_crit) +
              (ks_ok ? " (ok)" : " (FAIL)") + "; survival rate fit = " +
              fmt(rate) + " vs 1.0, rel err " + fmt(std::abs(rate - 1.0)) +
              (rate_ok ? " (ok)" : " (FAIL)")};
}

// ---------------------------------------------------------------- criterion 4
Outcome unraveling_independence() {
  const double gamma = 0.5, eta = 2e-4, t_max = 2.0;
  const int n_paths = 1000, steps = int(t_max / eta);
  Mat H = Mat::Zero(2, 2);
  Vec excited = Vec::Zero(2);
  excited[1] = 1.0;

  auto agree = [&](const decay::EnsembleSummary& s) {
    int checks = 0, bad = 0;
    for (size_t k = s.times.size() / 10; k < s.times.size();
         k += s.times.size() / 10) {
      double expected = std::exp(-2.0 * gamma * s.times[k]);
      double se = std::max(s.stderr_excited_population[k], 1e-4);
      ++checks;
      if (std::abs(s.mean_excited_population[k] - expected) > 3.0 * se) ++bad;
    }
    return bad == 0 && checks >= 9;
  };

  auto counting = decay::run_ensemble(decay::photon_counting_ops(gamma, eta, H),
                                      excited, steps, eta, n_paths, 11);
  bool pop_ok = agree(counting);
  std::vector<double> qv;
  for (double beta : {0.1, 1.0, 10.0}) {
    auto s = decay::run_ensemble(decay::homodyne_ops(gamma, eta, beta, H),
                                 excited, steps, eta, n_paths, 11);
    pop_ok = pop_ok && agree(s);
    qv.push_back(s.mean_quadratic_variation);
  }
  bool qv_ok = qv[0] > qv[1] && qv[1] > qv[2];
  return {pop_ok && qv_ok,
          std::string("populations vs e^{-2 gamma t}: ") +
              (pop_ok ? "within 3 sigma" : "FAIL") +
              "; quadratic variation beta {0.1,1,10} = {" + fmt(qv[0]) + ", " +
              fmt(qv[1]) + ", " + fmt(qv[2]) + "}" +
              (qv_ok ? " strictly decreasing" : " NOT decreasing (FAIL)")};
}

// ---------------------------------------------------------------- criterion 5
Outcome bell_fidelity() {
  const int d = 3;
  RngStream hr(271, 0);
  Mat A(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) A(i, j) = Complex(hr.normal(), hr.normal());
  Mat H = (A + A.adjoint()) / 2.0;
  modal::CutSpec cut;
  cut.povm.kind = PovmSet::Kind::effects;
  for (int i = 0; i < d; ++i) {
    Mat pi = Mat::Zero(d, d);
    pi(i, i) = 1.0;
    cut.povm.elements.push_back(pi);
  }
  Vec psi0(d);
  psi0 << Complex(0.8, 0.0), Complex(0.0, 0.4), Complex(0.2, -0.4);
  psi0.normalize();

  const double dt = 5e-4;
  const int steps = 6000, n_paths = 10000;
  auto table = modal::build_rate_table(H, cut, psi0, dt, steps);

  // exact antisymmetry on every tabulated step
  bool antisym_ok = true;
  for (const auto& r : table.rates)
    for (int i = 0; i < d && antisym_ok; ++i)
      for (int j = 0; j < i; ++j)
        if (std::min(r(i, j), r(j, i)) != 0.0) antisym_ok = false;

  // initial branches drawn from the t = 0 Born distribution, so the ensemble
  // marginals track the Born weights for all times
  auto decomp0 = modal::local_states(cut, psi0);
  std::vector<std::vector<int>> occupancy(steps + 1,
                                          std::vector<int>(d, 0));
  for (int p = 0; p < n_paths; ++p) {
    RngStream rng(314, p);
    int j0 = measure::sample_outcome(decomp0.probs, rng);
    auto path = modal::sample_path(table, j0, rng);
    for (size_t k = 0; k < path.indices.size(); ++k)
      occupancy[k][path.indices[k]] += 1;
  }
  int violations = 0, checks = 0;
  for (int k = 600; k < steps; k += 600)
    for (int i = 0; i < d; ++i) {
      double p_hat = double(occupancy[k][i]) / n_paths;
      double target = table.occupation[std::min<size_t>(k, table.occupation.size() - 1)][i];
      double se = std::max(std::sqrt(target * (1.0 - target) / n_paths), 1e-4);
      ++checks;
      if (std::abs(p_hat - target) > 5.0 * se) ++violations;
    }
  bool occ_ok = violations == 0;
  return {antisym_ok && occ_ok,
          std::string("rate antisymmetry ") +
              (antisym_ok ? "exact" : "VIOLATED") + "; occupation vs Born: " +
              std::to_string(violations) + "/" + std::to_string(checks) +
              " checks beyond 5 sigma" + (occ_ok ? " (ok)" : " (FAIL)")};
}

// ---------------------------------------------------------------- criterion 6
Outcome pointer_model() {
  const double c1_sq = 0.7, tau = 1.0, dt = 0.005;
  const int steps = int(8.0 * tau / dt), n_paths = 4000;
  Complex c1(std::sqrt(c1_sq), 0.0), c2(std::sqrt(1.0 - c1_sq), 0.0);
  int final0 = 0;
  double last_transition = 0.0;
  for (int p = 0; p < n_paths; ++p) {
    RngStream rng(2718, p);
    auto path = modal::simulate_pointer_model(c1, c2, tau, dt, steps, rng);
    if (path.indices.back() == 0) ++final0;
    for (const auto& tr : path.transitions)
      last_transition = std::max(last_transition, tr.t);
  }
  double p_hat = double(final0) / n_paths;
  double se = std::sqrt(c1_sq * (1.0 - c1_sq) / n_paths);
  bool prob_ok = std::abs(p_hat - c1_sq) < 3.0 * se;
  bool confined_ok = last_transition < 5.0 * tau;
  return {prob_ok && confined_ok,
          "limit prob = " + fmt(p_hat) + " vs 0.7 (3 sigma = " + fmt(3.0 * se) +
              (prob_ok ? ", ok" : ", FAIL") + "); last transition at t = " +
              fmt(last_transition) + " tau" +
              (confined_ok ? " < 5 tau" : " >= 5 tau (FAIL)")};
}

// ---------------------------------------------------------------- criterion 7
Outcome reduction_bookkeeping() {
  double worst_tv = 0.0;
  for (int d : {2, 4, 8}) {
    RngStream rng(99 + d, 0);
    // two Kraus measurements built by partitioning rows of a random unitary,
    // separated by a unitary drift segment
    auto random_unitary = [&](int dim) {
      Mat A(dim, dim);
      for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) A(i, j) = Complex(rng.normal(), rng.normal());
      Eigen::HouseholderQR<Mat> qr(A);
      return Mat(qr.householderQ());
    };
    auto partition_kraus = [&](int dim, int k) {
      Mat U = random_unitary(dim);
      PovmSet set;
      set.kind = PovmSet::Kind::kraus;
      int rows = dim / k;
      for (int i = 0; i < k; ++i) {
        Mat omega = Mat::Zero(dim, dim);
        omega.middleRows(i * rows, rows) = U.middleRows(i * rows, rows);
        set.elements.push_back(omega);
      }
      return set;
    };
    measure::MeasurementSchedule schedule;
    schedule.steps.push_back(measure::MeasurementStep{partition_kraus(d, 2), "m1"});
    Mat A(d, d);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) A(i, j) = Complex(rng.normal(), rng.normal());
    schedule.steps.push_back(measure::UnitarySegment{(A + A.adjoint()) / 2.0, 0.7});
    schedule.steps.push_back(measure::MeasurementStep{partition_kraus(d, 2), "m2"});
    schedule.validate();

    Vec psi0 = random_state(d, rng);
    auto full = measure::enumerate_branches(schedule, psi0);

    // the same joint distribution computed through reduce_global after the
    // first outcome
    double tv = 0.0;
    for (size_t b = 0; b < full.histories.size(); ++b) {
      const auto& hist = full.histories[b];
      // first-step probability from the full state
      auto& first_ops = std::get<measure::MeasurementStep>(schedule.steps[0]).ops;
      double p1 = measure::born_probabilities(first_ops, psi0)[hist[0]];
      Vec reduced = measure::reduce_global(schedule, {hist[0]}, psi0);
      // evolve the reduced state and measure the second step
      auto& seg = std::get<measure::UnitarySegment>(schedule.steps[1]);
      Vec drifted = evolve_step(seg.hamiltonian, reduced, seg.duration);
      auto& second_ops = std::get<measure::MeasurementStep>(schedule.steps[2]).ops;
      double p2 = measure::born_probabilities(second_ops, drifted)[hist[1]];
      tv += 0.5 * std::abs(p1 * p2 - full.joint_probs[b]);
    }
    worst_tv = std::max(worst_tv, tv);
  }
  bool ok = worst_tv < 1e-12;
  return {ok, "max TV distance over dims {2,4,8} = " + fmt(worst_tv) +
                  (ok ? " < 1e-12" : " (FAIL)")};
}

// ---------------------------------------------------------------- criterion 8
Outcome povm_husimi() {
  hyperion::RotorParams params;
  params.hbar_eff = 0.05;

  // completeness of the coarse POVM on its retained momentum block
  hyperion::PhaseSpaceGrid grid;
  grid.x_cells = 4;
  grid.p_cells = 2;
  grid.p_min = -2.0;
  grid.p_max = 2.0;
  grid.subsamples = 40;
  grid.coh_x = 2.0 * M_PI / 4.0 / 10.5;
  const int M = 60;
  auto set = hyperion::phase_space_povm(grid, params, M);
  double completeness = hyperion::povm_block_residual(set, M - 15, M + 15);
  bool complete_ok = completeness < 1e-6;

  // Husimi normalization
  hyperion::RotorParams hp = params;
  hp.hbar_eff = 2e-3;
  auto psi = hyperion::coherent_state(2.0, 0.3, 1400, 0.05, hp);
  psi.delta_x = 0.0;
  hyperion::PhaseSpaceGrid hgrid;
  hgrid.x_cells = 128;
  hgrid.p_cells = 64;
  hgrid.p_min = -2.0;
  hgrid.p_max = 2.0;
  hgrid.coh_x = 2.0 * M_PI / 128.0 / 10.0;
  auto rho = hyperion::husimi(psi, hgrid, hp);
  double mass = rho.total_mass(hp.hbar_eff);
  bool mass_ok = std::abs(mass - 1.0) < 1e-4;

  // projectivity / commutator residuals shrink as the angular cell grows
  // against the coherence length (ratio sweep 10, 30, 100 at a fixed
  // momentum-axis ratio of 10); elementwise residuals from momentum-cell
  // boundaries are diagonal in the angular-momentum basis and set a floor,
  // so the sweep direction that can shrink is the angular one
  std::vector<double> proj, comm;
  for (double ratio : {10.0, 30.0, 100.0}) {
    hyperion::PhaseSpaceGrid g;
    g.x_cells = 2;
    g.p_cells = 2;
    g.coh_x = M_PI / ratio;
    double coh_p = params.hbar_eff / (2.0 * g.coh_x);
    g.p_min = -10.0 * coh_p;
    g.p_max = 10.0 * coh_p;
    int trunc = int((10.0 * coh_p + 5.0 * coh_p) / params.hbar_eff) + 2;
    g.subsamples = trunc + 2;  // angular quadrature must out-resolve the basis
    g.subsamples_p = 40;
    auto povm = hyperion::phase_space_povm(g, params, trunc);
    auto report = check_povm(povm);
    proj.push_back(*std::max_element(report.projectivity_residuals.begin(),
                                     report.projectivity_residuals.end()));
    comm.push_back(report.max_commutator_norm);
  }
  bool mono_ok = proj[0] > proj[1] && proj[1] > proj[2] && comm[0] > comm[1] &&
                 comm[1] > comm[2];
  return {complete_ok && mass_ok && mono_ok,
          "block completeness = " + fmt(completeness) +
              (complete_ok ? " (ok)" : " (FAIL)") + "; Husimi mass = " +
              fmt(mass) + (mass_ok ? " (ok)" : " (FAIL)") +
              "; projectivity {" + fmt(proj[0]) + ", " + fmt(proj[1]) + ", " +
              fmt(proj[2]) + "}, commutator {" + fmt(comm[0]) + ", " +
              fmt(comm[1]) + ", " + fmt(comm[2]) + "}" +
              (mono_ok ? " decreasing" : " NOT decreasing (FAIL)")};
}

// ---------------------------------------------------------------- criterion 9
Outcome thermalization() {
  RngStream rng(1234, 0);
  auto model = statmech::build_microcanonical(500, {100, 150, 250}, rng);
  Vec psi0 = Vec::Zero(500);
  for (int k = 0; k < 100; ++k) psi0[k] = Complex(rng.normal(), rng.normal());
  psi0.normalize();

  std::vector<double> times;
  for (int i = 0; i <= 400; ++i) times.push_back(i * 0.5);
  auto series = statmech::thermal_expectations(model, psi0, times);
  auto targets = model.thermal_values();
  double tol = 5.0 / std::sqrt(500.0);
  bool avg_ok = true;
  for (size_t i = 0; i < targets.size(); ++i)
    avg_ok = avg_ok && std::abs(series.time_average[i] - targets[i]) < tol;

  auto check = statmech::bell_ergodicity_check(model, psi0, 200.0, 0.05, 20, 7);
  bool frac_ok = true;
  for (size_t i = 0; i < targets.size(); ++i) {
    double se = std::max(check.report.occupation_stderr[i], 1e-3);
    frac_ok = frac_ok && std::abs(check.report.occupation_fraction[i] -
                                  targets[i]) < 3.0 * se;
  }

  auto blocked =
      statmech::build_microcanonical_blocked(500, {100, 150, 250}, rng);
  auto bcheck =
      statmech::bell_ergodicity_check(blocked, psi0, 200.0, 0.05, 20, 7);
  long long cross = 0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      if (i != j) cross += bcheck.report.cross_counts(i, j);
  bool blocked_ok = cross == 0;

  return {avg_ok && frac_ok && blocked_ok,
          std::string("time averages vs (0.2,0.3,0.5): ") +
              (avg_ok ? "within " + fmt(tol) : "FAIL") +
              "; jump-process fractions: " +
              (frac_ok ? "within 3 sigma" : "FAIL") +
              "; blocked control cross transitions = " + std::to_string(cross) +
              (blocked_ok ? "" : " (FAIL)")};
}

// --------------------------------------------------------------- criterion 10
Outcome glauber() {
  // exact detailed balance on the 2x2 lattice
  const double T = 1.7;
  double worst = 0.0;
  for (int c = 0; c < 16; ++c) {
    statmech::IsingLattice lat = statmech::IsingLattice::all_up(2, T);
    for (int s = 0; s < 4; ++s) lat.spins[s] = (c >> s) & 1 ? 1 : -1;
    double e_c = lat.energy();
    for (int site = 0; site < 4; ++site) {
      int r = site / 2, col = site % 2;
      double p_fwd = statmech::glauber_flip_prob(lat.spins[site],
                                                 lat.neighbor_sum(r, col), T);
      statmech::IsingLattice flipped = lat;
      flipped.spins[site] = -flipped.spins[site];
      double p_bwd = statmech::glauber_flip_prob(flipped.spins[site],
                                                 flipped.neighbor_sum(r, col), T);
      double lhs = std::exp(-e_c / (2.0 * T)) * p_fwd;
      double rhs = std::exp(-flipped.energy() / (2.0 * T)) * p_bwd;
      worst = std::max(worst, std::abs(lhs - rhs) / std::max(lhs, rhs));
    }
  }
  bool balance_ok = worst < 1e-12;

  RngStream rng(5150, 0);
  auto hot = statmech::IsingLattice::random(16, 5.0, rng);
  auto hot_series = statmech::simulate_ising(hot, 10000, rng);
  double mean = 0.0, var = 0.0;
  size_t half = hot_series.size() / 2;
  for (size_t i = half; i < hot_series.size(); ++i) mean += hot_series[i];
  mean /= double(half);
  for (size_t i = half; i < hot_series.size(); ++i)
    var += (hot_series[i] - mean) * (hot_series[i] - mean);
  var /= double(half);
  // blocked standard error with a conservative autocorrelation allowance
  double se = std::sqrt(var / double(half)) * 10.0;
  bool hot_ok = std::abs(mean) < std::max(3.0 * se, 0.02);

  auto cold = statmech::IsingLattice::all_up(16, 1.0);
  auto cold_series = statmech::simulate_ising(cold, 10000, rng);
  bool cold_ok = true;
  for (double m : cold_series) cold_ok = cold_ok && m > 0.5;

  return {balance_ok && hot_ok && cold_ok,
          "detailed-balance residual = " + fmt(worst) +
              (balance_ok ? " (ok)" : " (FAIL)") + "; T=5 mean m = " +
              fmt(mean) + (hot_ok ? " ~ 0" : " (FAIL)") +
              "; T=1 magnetization " +
              (cold_ok ? "stays > 0.5 over 1e4 sweeps" : "collapsed (FAIL)")};
}

// --------------------------------------------------------------- criterion 11
Outcome determinism() {
  namespace sc = qsim::scenarios;
  auto dir = fs::temp_directory_path() / "qsim_acceptance_det";
  fs::remove_all(dir);
  fs::create_directories(dir / "a");
  fs::create_directories(dir / "b");
  nlohmann::json doc;
  doc["scenario"] = "decay_counting";
  doc["seed"] = 7;
  doc["output_dir"] = (dir / "a").string();
  doc["params"]["n_paths"] = 2000;
  doc["params"]["t_max"] = 3.0;
  auto res_a = sc::run_scenario(sc::parse_config_json(doc));

  std::ifstream min(res_a.artifacts.back());
  nlohmann::json manifest = nlohmann::json::parse(min);
  auto cfg = sc::parse_config_json(manifest);
  cfg.output_dir = (dir / "b").string();
  auto res_b = sc::run_scenario(cfg);

  auto slurp = [](const std::string& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
  };
  bool ok = res_a.artifacts.size() == res_b.artifacts.size();
  int compared = 0;
  // manifest (last artifact) excluded: it records wall time
  for (size_t i = 0; ok && i + 1 < res_a.artifacts.size(); ++i) {
    ok = slurp(res_a.artifacts[i]) == slurp(res_b.artifacts[i]);
    ++compared;
  }
  return {ok, std::string("manifest re-run: ") + std::to_string(compared) +
                  " artifacts byte-compared" +
                  (ok ? ", all identical" : ", MISMATCH (FAIL)")};
}

}  // namespace

// With no arguments all 11 criteria run; numeric arguments select a subset.
int main(int argc, char** argv) {
  struct Criterion {
    const char* name;
    Outcome (*run)();
  };
  const Criterion criteria[] = {
      {"headline t_q and de Broglie", headline},
      {"log scaling of the Ehrenfest time", log_scaling},
      {"photon counting decay law", decay_law},
      {"unraveling independence", unraveling_independence},
      {"jump process vs Born occupation", bell_fidelity},
      {"pointer model limit probabilities", pointer_model},
      {"reduction bookkeeping", reduction_bookkeeping},
      {"POVM and Husimi numerics", povm_husimi},
      {"microcanonical thermalization", thermalization},
      {"Glauber dynamics", glauber},
      {"manifest determinism", determinism},
  };
  std::vector<int> selected;
  for (int i = 1; i < argc; ++i) selected.push_back(std::atoi(argv[i]));
  int failures = 0;
  int idx = 0;
  for (const auto& c : criteria) {
    ++idx;
    if (!selected.empty() &&
        std::find(selected.begin(), selected.end(), idx) == selected.end())
      continue;
    Outcome out;
    try {
      out = c.run();
    } catch (const std::exception& e) {
      out = {false, std::string("exception: ") + e.what()};
    }
    if (!out.pass) ++failures;
    std::printf("[%2d] %s: %s — %s\n", idx, out.pass ? "PASS" : "FAIL", c.name,
                out.detail.c_str());
    std::fflush(stdout);
  }
  int total = selected.empty() ? 11 : int(selected.size());
  std::printf("%d/%d criteria passed\n", total - failures, total);
  return failures;
}
