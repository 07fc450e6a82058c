#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "qsim/qcore.hpp"

namespace qsim::modal {

// A Copenhagen cut: the quasi-classical POVM of effects defining the
// preferred observables.
struct CutSpec {
  PovmSet povm;  // kind effects
  double degenerate_tol = 1e-9;

  void validate() const;  // completeness residual < 1e-8
};

// Local states Psi_i = Pi_i |Psi>, stored unnormalized so that
// sum_i Psi_i == Psi exactly.
struct LocalDecomposition {
  std::vector<Vec> local_states;
  std::vector<double> probs;  // p_i = <Psi|Pi_i|Psi>
  bool degenerate_flag = false;
};

// A realized path of the jump process between local states.
struct ModalPath {
  std::vector<double> times;    // sample times
  std::vector<int> indices;     // j(t) at each sample time
  struct Transition {
    double t;
    int from, to;
    double rate;
  };
  std::vector<Transition> transitions;

  std::string to_csv() const;
  std::string transitions_json() const;
};

LocalDecomposition local_states(const CutSpec& cut, const Vec& psi);

// p_{1,2} = (1 +- sqrt(1 - 4|c1|^2|c2|^2 (F-1)^2)) / 2 for the two-outcome
// pointer-overlap model; p1 is the branch continuously connected to the
// initial state (the larger-|c|^2 one once F -> 0).
std::pair<double, double> pointer_overlap_probs(Complex c1, Complex c2, double F);

// Bell rates T(j,i) = 2 max(Im<Psi_j|H|Psi_i> / p_i, 0), hbar = 1.
// Rates out of branches with p_i < kZeroBranch are zeroed.
Mat bell_rates_matrix(const Mat& H, const LocalDecomposition& decomp);
struct BellRates {
  Eigen::MatrixXd rates;           // rates(j,i): rate i -> j
  std::vector<bool> zeroed_source; // true where p_i was below threshold
};
BellRates bell_rates(const Mat& H, const LocalDecomposition& decomp);

// Precomputed per-step rate matrices along the deterministic global-state
// evolution; the jump process is then sampled over this table. All paths of
// an ensemble share the table since the global state is not conditioned.
struct RateTable {
  double dt = 0.0;
  std::vector<Eigen::MatrixXd> rates;           // one k x k matrix per step
  std::vector<std::vector<double>> occupation;  // p_i(t) per step (diagnostic)
};

using TimeDependentH = std::function<Mat(double)>;

// Tabulates decomposition probabilities and Bell rates at each step for a
// fixed Hamiltonian (eigendecomposed once).
RateTable build_rate_table(const Mat& H, const CutSpec& cut, const Vec& psi0,
                           double dt, int steps);
// Same with H(t); the propagation uses per-step midpoint sampling of H.
RateTable build_rate_table(const TimeDependentH& H, const CutSpec& cut,
                           const Vec& psi0, double dt, int steps);

// First-order jump sampling over a rate table. Throws StepTooLarge if the
// total exit rate times dt reaches 1 at any step.
ModalPath sample_path(const RateTable& table, int j0, RngStream& rng);

ModalPath simulate_modal(const Mat& H, const CutSpec& cut, const Vec& psi0,
                         int j0, double dt, int steps, RngStream& rng);
ModalPath simulate_modal(const TimeDependentH& H, const CutSpec& cut,
                         const Vec& psi0, int j0, double dt, int steps,
                         RngStream& rng);

// Two-outcome pointer model with F(t) = exp[-(t/tau)^2]: jump process whose
// ensemble follows pointer_overlap_probs(c1, c2, F(t)). Index 0 is the branch
// connected to the initial state. Degenerate |c1|^2 == |c2|^2 is broken by
// perturbing F by +1e-9.
ModalPath simulate_pointer_model(Complex c1, Complex c2, double tau, double dt,
                                 int steps, RngStream& rng);

struct ErgodicityReport {
  Eigen::MatrixXi cross_counts;          // transition counts between labels
  std::vector<double> occupation_fraction;
  std::vector<double> occupation_stderr; // across paths
  std::vector<std::vector<int>> reachable;  // reachability per start label
  int n_paths = 0;

  std::string to_json() const;
};

ErgodicityReport ergodicity_report(const std::vector<ModalPath>& paths,
                                   int n_labels);

}  // namespace qsim::modal
