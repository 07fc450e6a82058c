#include "qsim/measure.hpp"

#include <cmath>
#include <sstream>

#include <json.hpp>

namespace qsim::measure {

int MeasurementSchedule::n_measurements() const {
  int n = 0;
  for (const auto& s : steps)
    if (std::holds_alternative<MeasurementStep>(s)) ++n;
  return n;
}

void MeasurementSchedule::validate(double tolerance) const {
  for (const auto& s : steps) {
    if (const auto* m = std::get_if<MeasurementStep>(&s)) {
      if (m->ops.kind != PovmSet::Kind::kraus)
        throw std::invalid_argument("schedule: measurement steps must be kraus sets");
      auto rep = check_povm(m->ops, tolerance);
      if (!rep.pass())
        throw std::invalid_argument("schedule: measurement step fails check_povm (residual " +
                                    std::to_string(rep.completeness_residual) + ")");
    } else {
      const auto& u = std::get<UnitarySegment>(s);
      if (!is_hermitian(u.hamiltonian))
        throw std::invalid_argument("schedule: non-hermitian Hamiltonian segment");
    }
  }
}

std::string TrajectoryRecord::to_json() const {
  nlohmann::json j;
  j["outcomes"] = outcomes;
  j["step_probs"] = step_probs;
  j["times"] = times;
  j["joint_prob"] = joint_prob;
  return j.dump(2);
}

std::string TrajectoryRecord::to_csv() const {
  std::ostringstream os;
  os << "step,time,outcome,step_prob\n";
  for (size_t k = 0; k < outcomes.size(); ++k)
    os << k << "," << (k < times.size() ? times[k] : 0.0) << ","
       << outcomes[k] << "," << step_probs[k] << "\n";
  return os.str();
}

std::vector<double> born_probabilities(const PovmSet& ops, const Vec& psi) {
  if (std::abs(psi.norm() - 1.0) > 1e-8)
    throw std::invalid_argument("born_probabilities: psi not normalized");
  std::vector<double> p(ops.size());
  double sum = 0.0;
  for (int i = 0; i < ops.size(); ++i) {
    double v;
    if (ops.kind == PovmSet::Kind::kraus) {
      Vec w = ops.elements[i] * psi;
      v = w.squaredNorm();
    } else {
      v = std::real(psi.dot(ops.elements[i] * psi));
    }
    if (v < tol::kProbClamp)
      throw std::invalid_argument("born_probabilities: negative probability " +
                                  std::to_string(v));
    p[i] = std::max(v, 0.0);
    sum += p[i];
  }
  if (std::abs(sum - 1.0) > tol::kAlgebraic)
    throw std::invalid_argument("born_probabilities: probabilities sum to " +
                                std::to_string(sum));
  for (auto& v : p) v /= sum;  // single renormalization per step
  return p;
}

int sample_outcome(const std::vector<double>& probs, RngStream& rng) {
  double sum = 0.0;
  for (double p : probs) {
    if (p < 0.0) throw std::invalid_argument("sample_outcome: negative entry");
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-8)
    throw std::invalid_argument("sample_outcome: probabilities sum to " +
                                std::to_string(sum));
  double u = rng.uniform() * sum;
  double acc = 0.0;
  for (size_t i = 0; i < probs.size(); ++i) {
    acc += probs[i];
    if (u < acc) return int(i);
  }
  // u landed past the accumulated mass from rounding; return last nonzero.
  for (size_t i = probs.size(); i-- > 0;)
    if (probs[i] > 0.0) return int(i);
  throw std::invalid_argument("sample_outcome: all-zero probability vector");
}

Vec condition(const Mat& omega, const Vec& psi) {
  Vec w = omega * psi;
  double n = w.norm();
  if (n <= tol::kZeroBranch)
    throw ImpossibleOutcome("condition: zero-norm branch");
  return w / n;
}

TrajectoryRecord run_trajectory(const MeasurementSchedule& schedule,
                                const Vec& psi0, RngStream& rng) {
  if (std::abs(psi0.norm() - 1.0) > 1e-8)
    throw std::invalid_argument("run_trajectory: psi0 not normalized");
  TrajectoryRecord rec;
  Vec psi = psi0;
  double t = 0.0;
  for (const auto& s : schedule.steps) {
    if (const auto* u = std::get_if<UnitarySegment>(&s)) {
      psi = evolve_step(u->hamiltonian, psi, u->duration);
      t += u->duration;
    } else {
      const auto& m = std::get<MeasurementStep>(s);
      auto probs = born_probabilities(m.ops, psi);
      int i = sample_outcome(probs, rng);
      psi = condition(m.ops.elements[i], psi);
      rec.outcomes.push_back(i);
      rec.step_probs.push_back(probs[i]);
      rec.conditioned_states.push_back(psi);
      rec.times.push_back(t);
      rec.joint_prob *= probs[i];
    }
  }
  return rec;
}

PovmSet noisy_splitter_ops(double epsilon) {
  if (epsilon < 0.0 || epsilon > 1.0)
    throw std::invalid_argument("noisy_splitter_ops: epsilon out of [0,1]");
  double c = std::sqrt(1.0 - epsilon * epsilon);
  Mat o1 = Mat::Zero(2, 2), o2 = Mat::Zero(2, 2);
  o1(0, 0) = c;
  o1(1, 1) = epsilon;
  o2(0, 0) = epsilon;
  o2(1, 1) = c;
  return PovmSet{{o1, o2}, PovmSet::Kind::kraus};
}

double log_environment_overlap(double epsilon, long long n_dof) {
  if (epsilon < 0.0 || epsilon > 1.0)
    throw std::invalid_argument("environment_overlap: epsilon out of [0,1]");
  if (n_dof < 0) throw std::invalid_argument("environment_overlap: n < 0");
  if (n_dof == 0) return 0.0;
  if (epsilon == 1.0) return -std::numeric_limits<double>::infinity();
  return double(n_dof) * std::log1p(-epsilon);
}

double environment_overlap(double epsilon, long long n_dof) {
  return std::exp(log_environment_overlap(epsilon, n_dof));
}

Vec reduce_global(const MeasurementSchedule& schedule,
                  const std::vector<int>& outcome_history, const Vec& full) {
  Vec psi = full;
  size_t k = 0;
  for (const auto& s : schedule.steps) {
    if (k >= outcome_history.size()) break;
    if (const auto* u = std::get_if<UnitarySegment>(&s)) {
      psi = evolve_step(u->hamiltonian, psi, u->duration);
    } else {
      const auto& m = std::get<MeasurementStep>(s);
      int i = outcome_history[k++];
      if (i < 0 || i >= m.ops.size())
        throw std::invalid_argument("reduce_global: outcome index out of range");
      psi = m.ops.elements[i] * psi;
    }
  }
  if (k != outcome_history.size())
    throw std::invalid_argument("reduce_global: history longer than schedule");
  double n = psi.norm();
  if (n <= tol::kZeroBranch)
    throw ImpossibleOutcome("reduce_global: zero-weight branch");
  return psi / n;
}

namespace {

void enumerate_rec(const MeasurementSchedule& schedule, size_t step_idx,
                   std::vector<int>& history, const Vec& psi,
                   BranchEnumeration& out) {
  if (step_idx == schedule.steps.size()) {
    out.histories.push_back(history);
    out.joint_probs.push_back(psi.squaredNorm());
    out.branch_states.push_back(psi);
    return;
  }
  const auto& s = schedule.steps[step_idx];
  if (const auto* u = std::get_if<UnitarySegment>(&s)) {
    enumerate_rec(schedule, step_idx + 1, history,
                  evolve_step(u->hamiltonian, psi, u->duration), out);
  } else {
    const auto& m = std::get<MeasurementStep>(s);
    for (int i = 0; i < m.ops.size(); ++i) {
      history.push_back(i);
      enumerate_rec(schedule, step_idx + 1, history, m.ops.elements[i] * psi, out);
      history.pop_back();
    }
  }
}

}  // namespace

BranchEnumeration enumerate_branches(const MeasurementSchedule& schedule,
                                     const Vec& psi0) {
  BranchEnumeration out;
  std::vector<int> history;
  enumerate_rec(schedule, 0, history, psi0, out);
  return out;
}

}  // namespace qsim::measure
