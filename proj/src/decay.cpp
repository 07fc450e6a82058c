#include "qsim/decay.hpp"

#include <cmath>
#include <sstream>

#include <json.hpp>

#include "qsim/measure.hpp"

namespace qsim::decay {

void AtomFieldParams::validate() const {
  if (lambda_coupling < 0.0 || tau_dispersal <= 0.0 || eta <= 0.0)
    throw std::invalid_argument("AtomFieldParams: non-positive parameter");
  if (eta * decay_rate(*this) >= 0.05)
    throw std::invalid_argument("AtomFieldParams: eta*gamma >= 0.05");
}

double decay_rate(const AtomFieldParams& params) {
  return params.lambda_coupling * params.lambda_coupling * params.tau_dispersal / 2.0;
}

Mat lowering_op() {
  Mat a = Mat::Zero(2, 2);
  a(0, 1) = 1.0;  // |psi0><psi1|
  return a;
}

ArrivalProbs arrival_probs(double gamma, double eta, int n_windows) {
  if (gamma < 0.0 || eta <= 0.0 || n_windows < 0)
    throw std::invalid_argument("arrival_probs: bad arguments");
  if (gamma * eta >= 0.05)
    throw std::invalid_argument("arrival_probs: eta*gamma >= 0.05");
  ArrivalProbs out;
  out.p_no_click = std::exp(-2.0 * gamma * eta * n_windows);
  out.p_window.resize(n_windows);
  for (int j = 1; j <= n_windows; ++j)
    out.p_window[j - 1] = 2.0 * gamma * eta * std::exp(-2.0 * gamma * j * eta);
  return out;
}

PovmSet photon_counting_ops(double gamma, double eta, const Mat& H) {
  if (gamma * eta >= 0.05)
    throw std::invalid_argument("photon_counting_ops: eta*gamma >= 0.05");
  Mat a = lowering_op();
  Mat no_click = Mat::Identity(2, 2) -
                 (Complex(0, 1) * H + gamma * a.adjoint() * a) * eta;
  Mat click = std::sqrt(2.0 * gamma * eta) * a;
  return PovmSet{{no_click, click}, PovmSet::Kind::kraus};
}

PovmSet homodyne_ops(double gamma, double eta, Complex beta, const Mat& H) {
  if (gamma * eta >= 0.05)
    throw std::invalid_argument("homodyne_ops: eta*gamma >= 0.05");
  Mat a = lowering_op();
  double sg = std::sqrt(gamma);
  Mat o1 = Mat::Identity(2, 2) -
           (Complex(0, 1) * H + 2.0 * sg * std::conj(beta) * a +
            gamma * a.adjoint() * a +
            std::norm(beta) * Mat::Identity(2, 2)) * eta;
  Mat o0 = std::sqrt(2.0 * eta) * (sg * a + beta * Mat::Identity(2, 2));
  return PovmSet{{o1, o0}, PovmSet::Kind::kraus};
}

UnravelResult unravel(const PovmSet& ops, const Vec& psi0, int steps,
                      double eta, RngStream& rng) {
  if (ops.size() != 2)
    throw std::invalid_argument("unravel: expected a two-element Kraus pair");
  UnravelResult res;
  res.times.reserve(steps);
  res.overlaps.reserve(steps);
  res.outcomes.reserve(steps);
  Vec psi = psi0;
  for (int n = 0; n < steps; ++n) {
    // exact per-window probabilities from the Kraus pair, renormalized
    std::vector<double> p(2);
    double sum = 0.0;
    for (int i = 0; i < 2; ++i) {
      p[i] = (ops.elements[i] * psi).squaredNorm();
      sum += p[i];
    }
    for (auto& v : p) v /= sum;
    int i = measure::sample_outcome(p, rng);
    psi = measure::condition(ops.elements[i], psi);
    if (i == 1) {
      ++res.click_count;
      if (res.first_click_time < 0.0) res.first_click_time = (n + 0.5) * eta;
    }
    res.outcomes.push_back(i);
    res.times.push_back((n + 1) * eta);
    res.overlaps.push_back(std::abs(psi[1]));
  }
  return res;
}

EnsembleSummary run_ensemble(const PovmSet& ops, const Vec& psi0, int steps,
                             double eta, int n_paths, std::uint64_t seed) {
  EnsembleSummary sum;
  sum.times.resize(steps);
  for (int n = 0; n < steps; ++n) sum.times[n] = (n + 1) * eta;
  std::vector<double> mean(steps, 0.0), m2(steps, 0.0);
  int no_click = 0;
  double qv_total = 0.0;
  for (int p = 0; p < n_paths; ++p) {
    RngStream rng(seed, p);
    auto res = unravel(ops, psi0, steps, eta, rng);
    double prev = std::abs(psi0[1]);
    double qv = 0.0;
    for (int n = 0; n < steps; ++n) {
      double pop = res.overlaps[n] * res.overlaps[n];
      double delta = pop - mean[n];
      mean[n] += delta / double(p + 1);
      m2[n] += delta * (pop - mean[n]);
      double d = res.overlaps[n] - prev;
      qv += d * d;
      prev = res.overlaps[n];
    }
    qv_total += qv;
    if (res.click_count == 0)
      ++no_click;
    else
      sum.click_times.push_back(res.first_click_time);
  }
  sum.mean_excited_population = mean;
  sum.stderr_excited_population.resize(steps);
  for (int n = 0; n < steps; ++n)
    sum.stderr_excited_population[n] =
        n_paths > 1 ? std::sqrt(m2[n] / double(n_paths - 1) / double(n_paths)) : 0.0;
  sum.mean_quadratic_variation = qv_total / double(n_paths);
  sum.no_click_fraction = double(no_click) / double(n_paths);
  return sum;
}

std::string UnravelResult::to_csv() const {
  std::ostringstream os;
  os << "t,overlap,clicked_flag\n";
  for (size_t n = 0; n < times.size(); ++n)
    os << times[n] << "," << overlaps[n] << "," << outcomes[n] << "\n";
  return os.str();
}

std::string EnsembleSummary::to_json() const {
  nlohmann::json j;
  j["times"] = times;
  j["mean_excited_population"] = mean_excited_population;
  j["stderr_excited_population"] = stderr_excited_population;
  j["no_click_fraction"] = no_click_fraction;
  j["mean_quadratic_variation"] = mean_quadratic_variation;
  j["n_click_times"] = click_times.size();
  return j.dump(2);
}

}  // namespace qsim::decay
