#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "qsim/qcore.hpp"

namespace qsim::measure {

// One segment of a measurement schedule: either unitary drift under a fixed
// Hamiltonian for a duration, or a generalized (Kraus) measurement.
struct UnitarySegment {
  Mat hamiltonian;
  double duration = 0.0;
};

struct MeasurementStep {
  PovmSet ops;  // kind must be kraus
  std::string label;
};

using ScheduleStep = std::variant<UnitarySegment, MeasurementStep>;

struct MeasurementSchedule {
  std::vector<ScheduleStep> steps;

  int n_measurements() const;
  // Every measurement PovmSet must pass check_povm; throws otherwise.
  void validate(double tolerance = tol::kAlgebraic) const;
};

struct TrajectoryRecord {
  std::vector<int> outcomes;            // i_1 ... i_n
  std::vector<double> step_probs;       // conditional probability of each outcome
  std::vector<Vec> conditioned_states;  // normalized state after each outcome
  std::vector<double> times;            // cumulative time at each measurement
  double joint_prob = 1.0;              // product of step_probs

  std::string to_json() const;
  std::string to_csv() const;  // one row per step
};

// Append-only outcome history identifying a branch (pointer record).
struct BranchTag {
  std::vector<int> outcome_history;
};

// p_i = <phi|Omega_i^dag Omega_i|phi> (kraus) or <phi|Pi_i|phi> (effects).
// Tiny negatives (>= kProbClamp) are clamped to zero and the vector is
// renormalized once; larger negativity throws.
std::vector<double> born_probabilities(const PovmSet& ops, const Vec& psi);

// Inverse-CDF sampling on a single uniform draw. Rejects negative entries
// and vectors whose sum is off 1 by more than 1e-8.
int sample_outcome(const std::vector<double>& probs, RngStream& rng);

// Omega|phi> / ||Omega|phi>||; zero-norm result throws ImpossibleOutcome.
Vec condition(const Mat& omega, const Vec& psi);

// Alternates unitary drift and sampled measurements, recording outcomes,
// probabilities and conditioned states.
TrajectoryRecord run_trajectory(const MeasurementSchedule& schedule,
                                const Vec& psi0, RngStream& rng);

// Noisy polarizing beam splitter, eq. of the two-outcome Kraus pair:
// Omega_1 = sqrt(1-eps^2)|h><h| + eps|v><v|, Omega_2 with roles swapped.
PovmSet noisy_splitter_ops(double epsilon);

// Modeled |<E_1|E_2>| = (1-eps)^n, computed in log space.
double environment_overlap(double epsilon, long long n_dof);
double log_environment_overlap(double epsilon, long long n_dof);

// Renormalized branch of `full` for the realized outcome history: applies the
// recorded Kraus/unitary sequence of the schedule and normalizes. All future
// outcome distributions computed from the result equal those computed from the
// full state conditioned on the history.
Vec reduce_global(const MeasurementSchedule& schedule,
                  const std::vector<int>& outcome_history, const Vec& full);

// Exhaustive enumeration over all outcome histories of a schedule: returns
// (history, joint probability, unnormalized branch state). Used for
// probability-conservation and reduction-equivalence checks.
struct BranchEnumeration {
  std::vector<std::vector<int>> histories;
  std::vector<double> joint_probs;
  std::vector<Vec> branch_states;  // unnormalized
};
BranchEnumeration enumerate_branches(const MeasurementSchedule& schedule,
                                     const Vec& psi0);

}  // namespace qsim::measure
