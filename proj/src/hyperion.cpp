#include "qsim/hyperion.hpp"

#include <cmath>
#include <mutex>
#include <sstream>

#include <fftw3.h>
#include <json.hpp>

namespace qsim::hyperion {

namespace {

constexpr double kBoltzmann = 1.380649e-23;   // J/K
constexpr double kHbarSI = 1.054571817e-34;   // J s

std::mutex& fftw_mutex() {
  static std::mutex m;
  return m;
}

int next_fast_size(int n) {
  // smallest 7-smooth integer >= n (fftw is O(n log n) for these)
  for (;; ++n) {
    int m = n;
    for (int f : {2, 3, 5, 7})
      while (m % f == 0) m /= f;
    if (m == 1) return n;
  }
}

double circular_distance(double a, double b) {
  double d = std::fmod(a - b, 2.0 * M_PI);
  if (d > M_PI) d -= 2.0 * M_PI;
  if (d < -M_PI) d += 2.0 * M_PI;
  return std::abs(d);
}

}  // namespace

double wrap_angle(double phi) {
  phi = std::fmod(phi, 2.0 * M_PI);
  if (phi < 0.0) phi += 2.0 * M_PI;
  return phi;
}

void RotorParams::validate() const {
  if (eccentricity < 0.0 || eccentricity >= 1.0)
    throw std::invalid_argument("RotorParams: eccentricity out of [0,1)");
  if (asymmetry < 0.0)
    throw std::invalid_argument("RotorParams: asymmetry < 0");
  if (orbital_period <= 0.0 || semi_major <= 0.0 || moment_i3 <= 0.0 ||
      radius <= 0.0 || hbar_eff <= 0.0)
    throw std::invalid_argument("RotorParams: non-positive scale");
}

OrbitPoint orbit(const RotorParams& params, double t) {
  const double e = params.eccentricity;
  if (e >= 1.0) throw std::invalid_argument("orbit: e >= 1");
  const double mean_anom = 2.0 * M_PI * t / params.orbital_period;
  double ecc_anom = mean_anom + e * std::sin(mean_anom);
  bool converged = false;
  for (int it = 0; it < 50; ++it) {
    double f = ecc_anom - e * std::sin(ecc_anom) - mean_anom;
    if (std::abs(f) < 1e-13) {
      converged = true;
      break;
    }
    ecc_anom -= f / (1.0 - e * std::cos(ecc_anom));
  }
  if (!converged &&
      std::abs(ecc_anom - e * std::sin(ecc_anom) - mean_anom) >= 1e-12)
    throw std::runtime_error("orbit: Kepler iteration did not converge");
  OrbitPoint out;
  out.r = params.semi_major * (1.0 - e * std::cos(ecc_anom));
  out.theta = 2.0 * std::atan2(std::sqrt(1.0 + e) * std::sin(0.5 * ecc_anom),
                               std::sqrt(1.0 - e) * std::cos(0.5 * ecc_anom));
  return out;
}

double torque_coefficient(const RotorParams& params, double t) {
  auto pt = orbit(params, t);
  double ar = params.semi_major / pt.r;
  return 3.0 * M_PI * M_PI / (params.orbital_period * params.orbital_period) *
         ar * ar * ar * params.asymmetry * params.moment_i3;
}

namespace {

struct Deriv {
  double dphi, dell;
};

Deriv rotor_rhs(const RotorParams& params, double t, double phi, double ell) {
  Deriv d;
  d.dphi = ell / params.moment_i3;
  if (params.asymmetry == 0.0) {
    d.dell = 0.0;
  } else {
    auto pt = orbit(params, t);
    double ar = params.semi_major / pt.r;
    double k = 3.0 * M_PI * M_PI /
               (params.orbital_period * params.orbital_period) * ar * ar * ar *
               params.asymmetry * params.moment_i3;
    d.dell = -2.0 * k * std::sin(2.0 * (phi - pt.theta));
  }
  return d;
}

void rk4_step(const RotorParams& params, double t, double dt, double& phi,
              double& ell) {
  auto k1 = rotor_rhs(params, t, phi, ell);
  auto k2 = rotor_rhs(params, t + 0.5 * dt, phi + 0.5 * dt * k1.dphi,
                      ell + 0.5 * dt * k1.dell);
  auto k3 = rotor_rhs(params, t + 0.5 * dt, phi + 0.5 * dt * k2.dphi,
                      ell + 0.5 * dt * k2.dell);
  auto k4 =
      rotor_rhs(params, t + dt, phi + dt * k3.dphi, ell + dt * k3.dell);
  phi += dt / 6.0 * (k1.dphi + 2.0 * k2.dphi + 2.0 * k3.dphi + k4.dphi);
  ell += dt / 6.0 * (k1.dell + 2.0 * k2.dell + 2.0 * k3.dell + k4.dell);
}

// tangent dynamics: d(dphi) = dell/I3, d(dell) = -4 K cos(2(phi-theta)) dphi
void rk4_tangent_step(const RotorParams& params, double t, double dt,
                      double phi, double ell, double& dphi, double& dell) {
  auto rhs = [&](double tt, double ph, double dp, double dl, double& odp,
                 double& odl) {
    odp = dl / params.moment_i3;
    if (params.asymmetry == 0.0) {
      odl = 0.0;
      return;
    }
    auto pt = orbit(params, tt);
    double ar = params.semi_major / pt.r;
    double k = 3.0 * M_PI * M_PI /
               (params.orbital_period * params.orbital_period) * ar * ar * ar *
               params.asymmetry * params.moment_i3;
    odl = -4.0 * k * std::cos(2.0 * (ph - pt.theta)) * dp;
  };
  // base point re-integrated inside the substeps for consistency
  double p1, l1;
  double a1, b1, a2, b2, a3, b3, a4, b4;
  auto base = rotor_rhs(params, t, phi, ell);
  rhs(t, phi, dphi, dell, a1, b1);
  double phm = phi + 0.5 * dt * base.dphi, elm = ell + 0.5 * dt * base.dell;
  rhs(t + 0.5 * dt, phm, dphi + 0.5 * dt * a1, dell + 0.5 * dt * b1, a2, b2);
  rhs(t + 0.5 * dt, phm, dphi + 0.5 * dt * a2, dell + 0.5 * dt * b2, a3, b3);
  auto basem = rotor_rhs(params, t + 0.5 * dt, phm, elm);
  p1 = phi + dt * basem.dphi;
  l1 = ell + dt * basem.dell;
  rhs(t + dt, p1, dphi + dt * a3, dell + dt * b3, a4, b4);
  dphi += dt / 6.0 * (a1 + 2.0 * a2 + 2.0 * a3 + a4);
  dell += dt / 6.0 * (b1 + 2.0 * b2 + 2.0 * b3 + b4);
}

}  // namespace

ClassicalTrajectory integrate_classical(const RotorParams& params,
                                        const ClassicalRotorState& state0,
                                        double t0, double t1, double dt) {
  params.validate();
  if (dt <= 0.0 || dt > params.orbital_period / 500.0)
    throw std::invalid_argument("integrate_classical: dt too large (> T/500)");
  ClassicalTrajectory traj;
  double phi = state0.phi, ell = state0.ell, t = t0;
  const long long n = llround((t1 - t0) / dt);
  traj.times.reserve(n + 1);
  traj.phi.reserve(n + 1);
  traj.ell.reserve(n + 1);
  traj.times.push_back(t);
  traj.phi.push_back(phi);
  traj.ell.push_back(ell);
  for (long long i = 0; i < n; ++i) {
    rk4_step(params, t, dt, phi, ell);
    if (!std::isfinite(phi) || !std::isfinite(ell))
      throw std::runtime_error("integrate_classical: NaN blowup");
    t = t0 + (i + 1) * dt;
    traj.times.push_back(t);
    traj.phi.push_back(phi);
    traj.ell.push_back(ell);
  }
  return traj;
}

LyapunovResult lyapunov(const RotorParams& params,
                        const ClassicalRotorState& state0, double duration,
                        double dt) {
  params.validate();
  double phi = state0.phi, ell = state0.ell;
  // two tangent vectors: leading stretch + area conservation
  double v1p = 1.0, v1l = 0.0;
  double v2p = 0.0, v2l = 1.0;
  double log_stretch = 0.0, log_area = 0.0;
  const long long n = llround(duration / dt);
  const int renorm_every = 20;
  double t = 0.0;
  for (long long i = 0; i < n; ++i) {
    rk4_tangent_step(params, t, dt, phi, ell, v1p, v1l);
    rk4_tangent_step(params, t, dt, phi, ell, v2p, v2l);
    rk4_step(params, t, dt, phi, ell);
    t = (i + 1) * dt;
    if ((i + 1) % renorm_every == 0 || i + 1 == n) {
      double n1 = std::hypot(v1p, v1l);
      double area = std::abs(v1p * v2l - v1l * v2p);
      log_stretch += std::log(n1);
      log_area += std::log(area);
      v1p /= n1;
      v1l /= n1;
      // Gram-Schmidt v2 against v1, then rescale to unit
      double proj = v2p * v1p + v2l * v1l;
      v2p -= proj * v1p;
      v2l -= proj * v1l;
      double n2 = std::hypot(v2p, v2l);
      v2p /= n2;
      v2l /= n2;
      log_area -= std::log(n1) + std::log(n2);
    }
  }
  LyapunovResult res;
  res.lambda_max = log_stretch / (n * dt);
  res.area_drift = std::abs(log_area);
  res.regular = res.lambda_max < 1e-3 * 2.0 * M_PI / params.orbital_period;
  res.t_c = res.regular ? std::numeric_limits<double>::infinity()
                        : 1.0 / res.lambda_max;
  return res;
}

double RotorWavefunction::tail_mass(double fraction) const {
  const int cutoff = int(std::floor(fraction * truncation_m));
  double mass = 0.0;
  for (int m = -truncation_m; m <= truncation_m; ++m)
    if (std::abs(m) > cutoff) mass += std::norm(coeffs[m + truncation_m]);
  return mass;
}

RotorWavefunction coherent_state(double x, double p, int truncation_m,
                                 double delta_x, const RotorParams& params) {
  const double hbar = params.hbar_eff;
  const double R = params.radius;
  if (std::abs(p) * R / hbar >= 0.8 * truncation_m)
    throw std::invalid_argument("coherent_state: |p| too close to truncation");
  RotorWavefunction psi;
  psi.truncation_m = truncation_m;
  psi.delta_x = delta_x;
  psi.coeffs.resize(2 * truncation_m + 1);
  const double w = (delta_x / hbar) * (delta_x / hbar);
  for (int m = -truncation_m; m <= truncation_m; ++m) {
    double dp = p - m * hbar / R;
    double g = std::exp(-w * dp * dp);
    psi.coeffs[m + truncation_m] = g * std::exp(Complex(0.0, -m * x / R));
  }
  psi.coeffs.normalize();
  return psi;
}

Complex coherent_overlap(double x, double p, const RotorWavefunction& psi,
                         double delta_x, const RotorParams& params) {
  const double hbar = params.hbar_eff;
  const double R = params.radius;
  const int M = psi.truncation_m;
  const double w = (delta_x / hbar) * (delta_x / hbar);
  // <x,p|psi> with the bra normalized over the same truncation
  double norm2 = 0.0;
  Complex acc = 0.0;
  for (int m = -M; m <= M; ++m) {
    double dp = p - m * hbar / R;
    double g = std::exp(-w * dp * dp);
    norm2 += g * g;
    acc += g * std::exp(Complex(0.0, m * x / R)) * psi.coeffs[m + M];
  }
  return acc / std::sqrt(norm2);
}

void PhaseSpaceGrid::validate_ratio(const RotorParams& params) const {
  if (coh_x <= 0.0)
    throw std::invalid_argument("PhaseSpaceGrid: coherence scale not set");
  double cell_x = x_max(params) / x_cells;
  double cell_p = (p_max - p_min) / p_cells;
  double coh_p = 0.5 * params.hbar_eff / coh_x;
  if (cell_x < 10.0 * coh_x || cell_p < 10.0 * coh_p)
    throw std::invalid_argument(
        "PhaseSpaceGrid: cell/coherence ratio below 10");
}

HusimiDensity husimi(const RotorWavefunction& psi, const PhaseSpaceGrid& grid,
                     const RotorParams& params) {
  HusimiDensity out;
  out.grid = grid;
  out.cell_dx = grid.x_max(params) / grid.x_cells;
  out.cell_dp = (grid.p_max - grid.p_min) / grid.p_cells;
  out.values.resize(size_t(grid.p_cells) * grid.x_cells);
  const double dx = psi.delta_x > 0.0 ? psi.delta_x : grid.coh_x;
  for (int ip = 0; ip < grid.p_cells; ++ip) {
    double p = grid.p_min + (ip + 0.5) * out.cell_dp;
    for (int ix = 0; ix < grid.x_cells; ++ix) {
      double x = (ix + 0.5) * out.cell_dx;
      out.values[size_t(ip) * grid.x_cells + ix] =
          std::norm(coherent_overlap(x, p, psi, dx, params));
    }
  }
  return out;
}

double HusimiDensity::total_mass(double hbar_eff) const {
  double sum = 0.0;
  for (double v : values) sum += v;
  return sum * cell_dx * cell_dp / (2.0 * M_PI * hbar_eff);
}

std::string HusimiDensity::to_csv(const RotorParams& params) const {
  std::ostringstream os;
  os << "x,p,rho\n";
  for (int ip = 0; ip < grid.p_cells; ++ip)
    for (int ix = 0; ix < grid.x_cells; ++ix)
      os << (ix + 0.5) * cell_dx << "," << grid.p_min + (ip + 0.5) * cell_dp
         << "," << values[size_t(ip) * grid.x_cells + ix] << "\n";
  return os.str();
}

PovmSet phase_space_povm(const PhaseSpaceGrid& grid, const RotorParams& params,
                         int truncation_m) {
  grid.validate_ratio(params);
  const int M = truncation_m;
  const int d = 2 * M + 1;
  const double hbar = params.hbar_eff;
  const double R = params.radius;
  const int nx_total = grid.x_cells * grid.subsamples;
  if (nx_total <= 2 * M)
    throw std::invalid_argument(
        "phase_space_povm: x quadrature aliases the m range; increase "
        "subsamples or x_cells");
  const int sub_p = grid.subsamples_p > 0 ? grid.subsamples_p : grid.subsamples;
  const double hx = grid.x_max(params) / nx_total;
  const double hp = (grid.p_max - grid.p_min) / (grid.p_cells * sub_p);
  const double weight = hx * hp / (2.0 * M_PI * hbar);
  const double w = (grid.coh_x / hbar) * (grid.coh_x / hbar);

  PovmSet set;
  set.kind = PovmSet::Kind::effects;
  set.elements.assign(size_t(grid.x_cells) * grid.p_cells, Mat::Zero(d, d));

  Vec v(d);
  for (int ip_cell = 0; ip_cell < grid.p_cells; ++ip_cell) {
    for (int ix_cell = 0; ix_cell < grid.x_cells; ++ix_cell) {
      Mat& acc = set.elements[size_t(ip_cell) * grid.x_cells + ix_cell];
      for (int sp = 0; sp < sub_p; ++sp) {
        double p = grid.p_min + (ip_cell * sub_p + sp + 0.5) * hp;
        double norm2 = 0.0;
        Eigen::VectorXd g(d);
        for (int m = -M; m <= M; ++m) {
          double dp = p - m * hbar / R;
          g[m + M] = std::exp(-w * dp * dp);
          norm2 += g[m + M] * g[m + M];
        }
        double inv_norm = norm2 > 0.0 ? 1.0 / std::sqrt(norm2) : 0.0;
        for (int sx = 0; sx < grid.subsamples; ++sx) {
          double x = (ix_cell * grid.subsamples + sx + 0.5) * hx;
          for (int m = -M; m <= M; ++m)
            v[m + M] = g[m + M] * inv_norm * std::exp(Complex(0.0, -m * x / R));
          acc.noalias() += weight * v * v.adjoint();
        }
      }
    }
  }
  return set;
}

double povm_block_residual(const PovmSet& set, int lo, int hi) {
  const int d = set.dim();
  Mat sum = Mat::Zero(d, d);
  for (int i = 0; i < set.size(); ++i) sum += set.effect(i);
  Mat block = sum.block(lo, lo, hi - lo + 1, hi - lo + 1) -
              Mat::Identity(hi - lo + 1, hi - lo + 1);
  return block.cwiseAbs().maxCoeff();
}

struct RotorEvolver::Impl {
  RotorParams params;
  int M;
  int n_grid;
  fftw_plan to_angle;
  fftw_plan to_momentum;
  fftw_complex* buf;

  Impl(const RotorParams& p, int truncation_m) : params(p), M(truncation_m) {
    n_grid = next_fast_size(2 * M + 2);
    std::lock_guard<std::mutex> lock(fftw_mutex());
    buf = fftw_alloc_complex(n_grid);
    to_angle = fftw_plan_dft_1d(n_grid, buf, buf, FFTW_BACKWARD, FFTW_ESTIMATE);
    to_momentum = fftw_plan_dft_1d(n_grid, buf, buf, FFTW_FORWARD, FFTW_ESTIMATE);
  }
  ~Impl() {
    std::lock_guard<std::mutex> lock(fftw_mutex());
    fftw_destroy_plan(to_angle);
    fftw_destroy_plan(to_momentum);
    fftw_free(buf);
  }
};

RotorEvolver::RotorEvolver(const RotorParams& params, int truncation_m)
    : impl_(new Impl(params, truncation_m)) {
  params.validate();
}

RotorEvolver::~RotorEvolver() { delete impl_; }

RotorWavefunction RotorEvolver::evolve(const RotorWavefunction& psi, double t0,
                                       double dt, int n_steps) const {
  const auto& P = impl_->params;
  const int M = impl_->M;
  if (psi.truncation_m != M)
    throw std::invalid_argument("RotorEvolver: truncation mismatch");
  const int N = impl_->n_grid;
  const double hbar = P.hbar_eff;

  // kinetic half-step phases: exp(-i m^2 hbar dt / (4 I3))
  std::vector<Complex> half_kin(2 * M + 1);
  for (int m = -M; m <= M; ++m)
    half_kin[m + M] =
        std::exp(Complex(0.0, -double(m) * m * hbar * dt / (4.0 * P.moment_i3)));

  std::vector<Complex> state(N, Complex(0.0, 0.0));
  auto idx = [&](int m) { return m >= 0 ? m : m + N; };
  for (int m = -M; m <= M; ++m) state[idx(m)] = psi.coeffs[m + M];

  auto* buf = reinterpret_cast<Complex*>(impl_->buf);
  const double inv_n = 1.0 / N;
  for (int s = 0; s < n_steps; ++s) {
    double t_mid = t0 + (s + 0.5) * dt;
    for (int m = -M; m <= M; ++m) state[idx(m)] *= half_kin[m + M];
    std::copy(state.begin(), state.end(), buf);
    fftw_execute(impl_->to_angle);
    // potential step, diagonal on the angle grid
    double k = torque_coefficient(P, t_mid);
    double theta = orbit(P, t_mid).theta;
    for (int j = 0; j < N; ++j) {
      double phi = 2.0 * M_PI * j / N;
      double v = -k * std::cos(2.0 * (phi - theta));
      buf[j] *= std::exp(Complex(0.0, -v * dt / hbar));
    }
    fftw_execute(impl_->to_momentum);
    std::copy(buf, buf + N, state.begin());
    for (auto& c : state) c *= inv_n;
    for (int m = -M; m <= M; ++m) state[idx(m)] *= half_kin[m + M];
  }

  RotorWavefunction out;
  out.truncation_m = M;
  out.delta_x = psi.delta_x;
  out.coeffs.resize(2 * M + 1);
  for (int m = -M; m <= M; ++m) out.coeffs[m + M] = state[idx(m)];
  if (out.tail_mass() > 1e-6)
    throw std::runtime_error("RotorEvolver: truncation tail mass exceeded 1e-6");
  return out;
}

RotorEvolver::Moments RotorEvolver::moments(const RotorWavefunction& psi) const {
  const int M = impl_->M;
  const auto& P = impl_->params;
  double norm2 = psi.coeffs.squaredNorm();
  Complex z = 0.0;  // <e^{i phi}>
  double p_mean = 0.0;
  for (int m = -M; m <= M; ++m) {
    double w = std::norm(psi.coeffs[m + M]);
    p_mean += w * m * P.hbar_eff / P.radius;
    if (m < M) z += std::conj(psi.coeffs[m + 1 + M]) * psi.coeffs[m + M];
  }
  z /= norm2;
  p_mean /= norm2;
  Moments mom;
  mom.mean_x = wrap_angle(std::arg(z)) * P.radius;
  mom.mean_p = p_mean;
  double az = std::abs(z);
  mom.spread_x = az > 0.0 ? std::sqrt(std::max(0.0, -2.0 * std::log(az))) *
                                P.radius
                          : std::numeric_limits<double>::infinity();
  return mom;
}

RotorWavefunction evolve_rotor(const RotorWavefunction& psi,
                               const RotorParams& params, double t0, double dt,
                               int n_steps) {
  RotorEvolver evolver(params, psi.truncation_m);
  return evolver.evolve(psi, t0, dt, n_steps);
}

namespace {

LogFit least_squares(const std::vector<double>& xs,
                     const std::vector<double>& ys) {
  LogFit fit;
  fit.n_points = int(xs.size());
  if (xs.size() < 2) return fit;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sy += ys[i];
    sxx += xs[i] * xs[i];
    sxy += xs[i] * ys[i];
  }
  double n = double(xs.size());
  double denom = n * sxx - sx * sx;
  fit.slope = (n * sxy - sx * sy) / denom;
  fit.intercept = (sy - fit.slope * sx) / n;
  double ss_res = 0, ss_tot = 0, ybar = sy / n;
  for (size_t i = 0; i < xs.size(); ++i) {
    double r = ys[i] - (fit.intercept + fit.slope * xs[i]);
    ss_res += r * r;
    ss_tot += (ys[i] - ybar) * (ys[i] - ybar);
  }
  fit.r_squared = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
  return fit;
}

}  // namespace

BreakdownResult ehrenfest_breakdown(const RotorParams& base_params,
                                    const std::vector<double>& hbar_eff_list,
                                    const BreakdownSettings& s) {
  if (hbar_eff_list.size() < 4)
    throw std::invalid_argument("ehrenfest_breakdown: need >= 4 hbar values");
  {
    double lo = *std::min_element(hbar_eff_list.begin(), hbar_eff_list.end());
    double hi = *std::max_element(hbar_eff_list.begin(), hbar_eff_list.end());
    if (hi / lo < 100.0 * (1.0 - 1e-9))
      throw std::invalid_argument("ehrenfest_breakdown: span < 2 decades");
  }

  BreakdownResult result;

  // classical reference and chaos scale, shared across the sweep
  ClassicalRotorState c0{wrap_angle(s.x0 / base_params.radius),
                         s.p0 * base_params.radius};
  auto cl = integrate_classical(base_params, c0, 0.0, s.horizon, s.dt);
  auto ly = lyapunov(base_params, c0, 60.0 * base_params.orbital_period, s.dt);
  result.lambda_max = ly.lambda_max;
  result.t_c = ly.t_c;

  for (double hbar : hbar_eff_list) {
    RotorParams params = base_params;
    params.hbar_eff = hbar;
    double dx = s.width_mode == BreakdownSettings::WidthMode::fixed_momentum_width
                    ? hbar / (2.0 * s.momentum_width)
                    : s.position_width;
    int M = int(std::ceil(s.p_margin / hbar));
    RotorWavefunction psi = coherent_state(s.x0, s.p0, M, dx, params);

    BreakdownPoint point;
    point.hbar_eff = hbar;
    RotorEvolver evolver(params, M);
    int total_steps = int(std::ceil(s.horizon / s.dt));
    for (int step = 0; step < total_steps; step += s.sample_every) {
      int chunk = std::min(s.sample_every, total_steps - step);
      psi = evolver.evolve(psi, step * s.dt, s.dt, chunk);
      double t = (step + chunk) * s.dt;
      auto mom = evolver.moments(psi);
      if (!point.tq_spread && mom.spread_x > s.threshold * params.radius)
        point.tq_spread = t;
      size_t ci = std::min(size_t(llround(t / s.dt)), cl.phi.size() - 1);
      double disc = circular_distance(mom.mean_x / params.radius,
                                      cl.phi[ci]) * params.radius;
      if (!point.tq_discrepancy && disc > s.threshold * params.radius)
        point.tq_discrepancy = t;
      if (point.tq_spread && point.tq_discrepancy) break;
    }
    result.points.push_back(point);
  }

  std::vector<double> xs_sp, ys_sp, xs_di, ys_di, ys_sp_log;
  for (const auto& pt : result.points) {
    double lx = std::log(1.0 / pt.hbar_eff);
    if (pt.tq_spread) {
      xs_sp.push_back(lx);
      ys_sp.push_back(*pt.tq_spread);
      ys_sp_log.push_back(std::log(*pt.tq_spread));
    }
    if (pt.tq_discrepancy) {
      xs_di.push_back(lx);
      ys_di.push_back(*pt.tq_discrepancy);
    }
  }
  result.fit_spread = least_squares(xs_sp, ys_sp);
  result.fit_discrepancy = least_squares(xs_di, ys_di);
  result.powerlaw_fit_spread = least_squares(xs_sp, ys_sp_log);
  return result;
}

std::string BreakdownResult::to_json() const {
  nlohmann::json j;
  j["lambda_max"] = lambda_max;
  j["t_c"] = t_c;
  auto fit_json = [](const LogFit& f) {
    return nlohmann::json{{"intercept", f.intercept},
                          {"slope", f.slope},
                          {"r_squared", f.r_squared},
                          {"n_points", f.n_points}};
  };
  j["fit_spread"] = fit_json(fit_spread);
  j["fit_discrepancy"] = fit_json(fit_discrepancy);
  j["powerlaw_fit_spread"] = fit_json(powerlaw_fit_spread);
  j["points"] = nlohmann::json::array();
  for (const auto& pt : points) {
    nlohmann::json p;
    p["hbar_eff"] = pt.hbar_eff;
    p["censored_spread"] = !pt.tq_spread.has_value();
    p["censored_discrepancy"] = !pt.tq_discrepancy.has_value();
    if (pt.tq_spread) p["tq_spread"] = *pt.tq_spread;
    if (pt.tq_discrepancy) p["tq_discrepancy"] = *pt.tq_discrepancy;
    j["points"].push_back(p);
  }
  return j.dump(2);
}

HeadlineResult tq_headline(double t_c_seconds, double radius_m, double mass_kg,
                           double temperature_k) {
  if (t_c_seconds <= 0.0 || radius_m <= 0.0 || mass_kg <= 0.0 ||
      temperature_k <= 0.0)
    throw std::invalid_argument("tq_headline: inputs must be positive");
  double thermal_p = std::sqrt(mass_kg * kBoltzmann * temperature_k);
  HeadlineResult out;
  out.de_broglie_m = kHbarSI / thermal_p;
  out.t_q_seconds = t_c_seconds * std::log(radius_m * thermal_p / kHbarSI);
  return out;
}

}  // namespace qsim::hyperion
