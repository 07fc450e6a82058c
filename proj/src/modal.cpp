#include "qsim/modal.hpp"

#include <cmath>
#include <deque>
#include <sstream>

#include <json.hpp>

namespace qsim::modal {

void CutSpec::validate() const {
  if (povm.kind != PovmSet::Kind::effects)
    throw std::invalid_argument("CutSpec: povm must be of kind effects");
  const int d = povm.dim();
  Mat sum = Mat::Zero(d, d);
  for (const auto& e : povm.elements) sum += e;
  double residual = (sum - Mat::Identity(d, d)).cwiseAbs().maxCoeff();
  if (residual >= 1e-8)
    throw std::invalid_argument("CutSpec: completeness residual " +
                                std::to_string(residual));
}

std::string ModalPath::to_csv() const {
  std::ostringstream os;
  os << "t,j\n";
  for (size_t k = 0; k < times.size(); ++k)
    os << times[k] << "," << indices[k] << "\n";
  return os.str();
}

std::string ModalPath::transitions_json() const {
  nlohmann::json j = nlohmann::json::array();
  for (const auto& tr : transitions)
    j.push_back({{"t", tr.t}, {"from", tr.from}, {"to", tr.to}, {"rate", tr.rate}});
  return j.dump(2);
}

LocalDecomposition local_states(const CutSpec& cut, const Vec& psi) {
  if (std::abs(psi.norm() - 1.0) > 1e-8)
    throw std::invalid_argument("local_states: psi not normalized");
  LocalDecomposition d;
  const int k = cut.povm.size();
  d.local_states.reserve(k);
  d.probs.reserve(k);
  for (int i = 0; i < k; ++i) {
    Vec psi_i = cut.povm.elements[i] * psi;
    d.local_states.push_back(psi_i);
    d.probs.push_back(std::max(0.0, std::real(psi.dot(psi_i))));
  }
  for (int i = 0; i < k && !d.degenerate_flag; ++i)
    for (int j = i + 1; j < k; ++j)
      if (std::abs(d.probs[i] - d.probs[j]) < cut.degenerate_tol) {
        d.degenerate_flag = true;
        break;
      }
  return d;
}

std::pair<double, double> pointer_overlap_probs(Complex c1, Complex c2, double F) {
  if (F < 0.0 || F > 1.0)
    throw std::invalid_argument("pointer_overlap_probs: F out of [0,1]");
  double a1 = std::norm(c1), a2 = std::norm(c2);
  if (std::abs(a1 + a2 - 1.0) > tol::kAlgebraic)
    throw std::invalid_argument("pointer_overlap_probs: |c1|^2+|c2|^2 != 1");
  double disc = 1.0 - 4.0 * a1 * a2 * (F - 1.0) * (F - 1.0);
  double s = std::sqrt(std::max(disc, 0.0));
  return {0.5 * (1.0 + s), 0.5 * (1.0 - s)};
}

BellRates bell_rates(const Mat& H, const LocalDecomposition& decomp) {
  if (!is_hermitian(H))
    throw std::invalid_argument("bell_rates: H not hermitian");
  const int k = int(decomp.local_states.size());
  BellRates out;
  out.rates = Eigen::MatrixXd::Zero(k, k);
  out.zeroed_source.assign(k, false);
  std::vector<Vec> h_psi(k);
  for (int i = 0; i < k; ++i) h_psi[i] = H * decomp.local_states[i];
  for (int i = 0; i < k; ++i) {
    if (decomp.probs[i] < tol::kZeroBranch) {
      out.zeroed_source[i] = true;
      continue;
    }
    for (int j = 0; j < k; ++j) {
      if (j == i) continue;
      double im = std::imag(decomp.local_states[j].dot(h_psi[i]));
      out.rates(j, i) = 2.0 * std::max(im / decomp.probs[i], 0.0);
    }
  }
  return out;
}

Mat bell_rates_matrix(const Mat& H, const LocalDecomposition& decomp) {
  return bell_rates(H, decomp).rates.cast<Complex>();
}

namespace {

Eigen::MatrixXd rates_at(const CutSpec& cut, const Mat& H, const Vec& psi,
                         std::vector<double>* probs_out) {
  auto decomp = local_states(cut, psi);
  auto br = bell_rates(H, decomp);
  if (probs_out) *probs_out = decomp.probs;
  return br.rates;
}

}  // namespace

RateTable build_rate_table(const Mat& H, const CutSpec& cut, const Vec& psi0,
                           double dt, int steps) {
  cut.validate();
  UnitaryStepper stepper(H);
  RateTable table;
  table.dt = dt;
  table.rates.reserve(steps);
  table.occupation.reserve(steps);
  Vec psi = psi0;
  for (int n = 0; n < steps; ++n) {
    std::vector<double> p;
    table.rates.push_back(rates_at(cut, H, psi, &p));
    table.occupation.push_back(std::move(p));
    psi = stepper.at_time(psi0, (n + 1) * dt);
  }
  return table;
}

RateTable build_rate_table(const TimeDependentH& H, const CutSpec& cut,
                           const Vec& psi0, double dt, int steps) {
  cut.validate();
  RateTable table;
  table.dt = dt;
  Vec psi = psi0;
  for (int n = 0; n < steps; ++n) {
    double t = n * dt;
    Mat h = H(t);
    std::vector<double> p;
    table.rates.push_back(rates_at(cut, h, psi, &p));
    table.occupation.push_back(std::move(p));
    psi = evolve_step(H(t + 0.5 * dt), psi, dt);
  }
  return table;
}

ModalPath sample_path(const RateTable& table, int j0, RngStream& rng) {
  ModalPath path;
  int cur = j0;
  const int steps = int(table.rates.size());
  path.times.reserve(steps);
  path.indices.reserve(steps);
  for (int n = 0; n < steps; ++n) {
    const auto& T = table.rates[n];
    const int k = int(T.rows());
    double exit = T.col(cur).sum();
    if (exit * table.dt >= 1.0)
      throw StepTooLarge("sample_path: exit rate * dt = " +
                         std::to_string(exit * table.dt));
    double t = n * table.dt;
    double u = rng.uniform();
    if (u < exit * table.dt) {
      // jump: destination proportional to T(j, cur)
      double v = u / table.dt;  // uniform on [0, exit)
      double acc = 0.0;
      int dest = cur;
      for (int j = 0; j < k; ++j) {
        acc += T(j, cur);
        if (v < acc) {
          dest = j;
          break;
        }
      }
      if (dest != cur) {
        path.transitions.push_back({t, cur, dest, T(dest, cur)});
        cur = dest;
      }
    }
    path.times.push_back(t);
    path.indices.push_back(cur);
  }
  return path;
}

ModalPath simulate_modal(const Mat& H, const CutSpec& cut, const Vec& psi0,
                         int j0, double dt, int steps, RngStream& rng) {
  return sample_path(build_rate_table(H, cut, psi0, dt, steps), j0, rng);
}

ModalPath simulate_modal(const TimeDependentH& H, const CutSpec& cut,
                         const Vec& psi0, int j0, double dt, int steps,
                         RngStream& rng) {
  return sample_path(build_rate_table(H, cut, psi0, dt, steps), j0, rng);
}

ModalPath simulate_pointer_model(Complex c1, Complex c2, double tau, double dt,
                                 int steps, RngStream& rng) {
  double a1 = std::norm(c1), a2 = std::norm(c2);
  if (std::abs(a1 + a2 - 1.0) > tol::kAlgebraic)
    throw std::invalid_argument("simulate_pointer_model: state not normalized");
  double prod = 4.0 * a1 * a2;
  RateTable table;
  table.dt = dt;
  table.rates.reserve(steps);
  for (int n = 0; n < steps; ++n) {
    double t = n * dt;
    double F = std::exp(-(t / tau) * (t / tau));
    if (std::abs(a1 - a2) < 1e-12) F += 1e-9;  // deterministic degeneracy break
    double disc = 1.0 - prod * (F - 1.0) * (F - 1.0);
    double s = std::sqrt(std::max(disc, 1e-18));
    double p1 = 0.5 * (1.0 + s);
    // dp2/dt = -s'/2 with s' = -prod (F-1) F' / s, F' = -2t/tau^2 F
    double Fdot = -2.0 * t / (tau * tau) * F;
    double dp2dt = -prod * (1.0 - F) * Fdot / (2.0 * s);
    Eigen::MatrixXd T = Eigen::MatrixXd::Zero(2, 2);
    T(1, 0) = std::max(dp2dt, 0.0) / p1;  // flow toward the detached branch
    table.rates.push_back(T);
    table.occupation.push_back({p1, 1.0 - p1});
  }
  return sample_path(table, 0, rng);
}

ErgodicityReport ergodicity_report(const std::vector<ModalPath>& paths,
                                   int n_labels) {
  if (paths.size() < 1)
    throw std::invalid_argument("ergodicity_report: no paths");
  ErgodicityReport rep;
  rep.n_paths = int(paths.size());
  rep.cross_counts = Eigen::MatrixXi::Zero(n_labels, n_labels);
  std::vector<std::vector<double>> frac_per_path(paths.size(),
                                                 std::vector<double>(n_labels, 0.0));
  for (size_t p = 0; p < paths.size(); ++p) {
    const auto& path = paths[p];
    for (int j : path.indices) frac_per_path[p][j] += 1.0;
    for (auto& f : frac_per_path[p]) f /= double(path.indices.size());
    for (const auto& tr : path.transitions) rep.cross_counts(tr.from, tr.to) += 1;
  }
  rep.occupation_fraction.assign(n_labels, 0.0);
  rep.occupation_stderr.assign(n_labels, 0.0);
  for (int j = 0; j < n_labels; ++j) {
    double mean = 0.0;
    for (const auto& f : frac_per_path) mean += f[j];
    mean /= double(paths.size());
    rep.occupation_fraction[j] = mean;
    double var = 0.0;
    for (const auto& f : frac_per_path) var += (f[j] - mean) * (f[j] - mean);
    if (paths.size() > 1) {
      var /= double(paths.size() - 1);
      rep.occupation_stderr[j] = std::sqrt(var / double(paths.size()));
    }
  }
  // reachability over the observed transition graph
  rep.reachable.resize(n_labels);
  for (int start = 0; start < n_labels; ++start) {
    std::vector<bool> seen(n_labels, false);
    std::deque<int> queue{start};
    seen[start] = true;
    while (!queue.empty()) {
      int u = queue.front();
      queue.pop_front();
      for (int v = 0; v < n_labels; ++v)
        if (!seen[v] && rep.cross_counts(u, v) > 0) {
          seen[v] = true;
          queue.push_back(v);
        }
    }
    for (int v = 0; v < n_labels; ++v)
      if (seen[v]) rep.reachable[start].push_back(v);
  }
  return rep;
}

std::string ErgodicityReport::to_json() const {
  nlohmann::json j;
  j["n_paths"] = n_paths;
  j["occupation_fraction"] = occupation_fraction;
  j["occupation_stderr"] = occupation_stderr;
  std::vector<std::vector<int>> counts(cross_counts.rows());
  for (int r = 0; r < cross_counts.rows(); ++r)
    for (int c = 0; c < cross_counts.cols(); ++c)
      counts[r].push_back(cross_counts(r, c));
  j["cross_counts"] = counts;
  j["reachable"] = reachable;
  return j.dump(2);
}

}  // namespace qsim::modal
