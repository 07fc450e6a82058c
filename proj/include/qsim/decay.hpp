#pragma once

#include <vector>

#include "qsim/qcore.hpp"

namespace qsim::decay {

// Two-level atom + photon window detector, hbar = 1. Basis {|psi0>, |psi1>}
// (ground, excited); the lowering operator is a = |psi0><psi1|.
struct AtomFieldParams {
  double lambda_coupling = 1.0;  // atom-field coupling
  double tau_dispersal = 2.0;    // rapid-dispersal time scale
  double omega = 1.0;            // (E1 - E0)/hbar
  double eta = 0.01;             // detector window

  void validate() const;  // positivity and eta*gamma < 0.05
};

// gamma = lambda^2 tau / 2 (hbar = 1).
double decay_rate(const AtomFieldParams& params);

Mat lowering_op();  // a = |psi0><psi1| on the 2d basis

// Arrival-window outcome probabilities: p0 = e^{-2 gamma t} with t = n eta,
// p_j = 2 gamma eta e^{-2 gamma j eta}, j = 1..n.
struct ArrivalProbs {
  double p_no_click;
  std::vector<double> p_window;  // index 0 <-> window j=1
};
ArrivalProbs arrival_probs(double gamma, double eta, int n_windows);

// Photon-counting Kraus pair per window: element 0 is the no-click operator
// 1 - (iH + gamma a^dag a) eta, element 1 the click operator sqrt(2 gamma eta) a.
PovmSet photon_counting_ops(double gamma, double eta, const Mat& H);

// Homodyne Kraus pair: element 0 is
// 1 - (iH + 2 sqrt(gamma) conj(beta) a + gamma a^dag a + |beta|^2) eta,
// element 1 is sqrt(2 eta) (sqrt(gamma) a + beta).
PovmSet homodyne_ops(double gamma, double eta, Complex beta, const Mat& H);

struct UnravelResult {
  std::vector<double> times;     // t = (n+1) eta after each window
  std::vector<double> overlaps;  // |<psi1|psi(t)>|
  std::vector<int> outcomes;     // sampled element index per window
  int click_count = 0;           // element-1 outcomes
  double first_click_time = -1.0;  // midpoint of the click window, -1 if none

  std::string to_csv() const;  // t, overlap, clicked_flag
};

// Iterates exact per-window Born sampling and conditioning with the given
// Kraus pair, recording |<psi1|psi(t)>|.
UnravelResult unravel(const PovmSet& ops, const Vec& psi0, int steps,
                      double eta, RngStream& rng);

// Ensemble summary over trajectories of one Kraus pair.
struct EnsembleSummary {
  std::vector<double> times;
  std::vector<double> mean_excited_population;  // ensemble <|<psi1|psi>|^2>
  std::vector<double> stderr_excited_population;
  std::vector<double> click_times;  // first-click times of clicked paths
  double mean_quadratic_variation = 0.0;  // mean over paths of sum (d overlap)^2
  double no_click_fraction = 0.0;

  std::string to_json() const;
};

EnsembleSummary run_ensemble(const PovmSet& ops, const Vec& psi0, int steps,
                             double eta, int n_paths, std::uint64_t seed);

}  // namespace qsim::decay
