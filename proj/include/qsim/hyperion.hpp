#pragma once

#include <optional>
#include <vector>

#include "qsim/qcore.hpp"

namespace qsim::hyperion {

// Dimensionless spin-orbit rotor: I3 = 1, R = 1, orbital period T = 2 pi,
// semi-major axis a = 1 by default. hbar_eff is the effective Planck constant
// of the quantum rotor; SI enters only in tq_headline.
struct RotorParams {
  double asymmetry = 0.7;   // (I2 - I1) / I3
  double eccentricity = 0.4;
  double orbital_period = 2.0 * M_PI;
  double semi_major = 1.0;
  double moment_i3 = 1.0;
  double radius = 1.0;
  double hbar_eff = 1e-2;

  void validate() const;
};

struct ClassicalRotorState {
  double phi = 0.0;  // wrapped into [0, 2 pi)
  double ell = 0.0;
};

// Kepler orbit position at time t: E - e sin E = 2 pi t / T solved by Newton
// iteration to residual < 1e-12; r = a(1 - e cos E), theta = true anomaly.
struct OrbitPoint {
  double r;
  double theta;
};
OrbitPoint orbit(const RotorParams& params, double t);

// Spin-orbit torque prefactor K(t) = (3 pi^2 / T^2) (a/r)^3 (I2 - I1).
double torque_coefficient(const RotorParams& params, double t);

struct ClassicalTrajectory {
  std::vector<double> times;
  std::vector<double> phi;
  std::vector<double> ell;
};

// Fixed-step RK4 for dphi/dt = ell/I3, dell/dt = -2 K(t) sin(2(phi - theta)).
ClassicalTrajectory integrate_classical(const RotorParams& params,
                                        const ClassicalRotorState& state0,
                                        double t0, double t1, double dt);

struct LyapunovResult {
  double lambda_max = 0.0;
  double t_c = 0.0;          // 1/lambda_max, inf when regular
  bool regular = false;      // lambda_max indistinguishable from 0
  double area_drift = 0.0;   // |log det| of the tangent pair (Liouville check)
};

// Tangent-space propagation with periodic Gram-Schmidt renormalization.
LyapunovResult lyapunov(const RotorParams& params,
                        const ClassicalRotorState& state0, double duration,
                        double dt = 1e-3 * 2.0 * M_PI);

// Rotor wavefunction over m in [-M, M]; coeffs[0] corresponds to m = -M.
struct RotorWavefunction {
  Vec coeffs;
  int truncation_m = 0;
  double delta_x = 0.0;  // coherent-state width used to build it, if any

  int dim() const { return 2 * truncation_m + 1; }
  double tail_mass(double fraction = 0.9) const;  // |c_m|^2 beyond fraction*M
};

// Coherent state |x, p>: c_m ~ exp[-(dx/hbar)^2 (p - m hbar/R)^2] e^{i m x / R},
// normalized. Requires |p| R / hbar_eff < 0.8 M.
RotorWavefunction coherent_state(double x, double p, int truncation_m,
                                 double delta_x, const RotorParams& params);

Complex coherent_overlap(double x, double p, const RotorWavefunction& psi,
                         double delta_x, const RotorParams& params);

struct PhaseSpaceGrid {
  int x_cells = 8;
  int p_cells = 8;
  double p_min = -2.0;
  double p_max = 2.0;
  double coh_x = 0.0;    // coherence length scale (delta_x)
  int subsamples = 8;    // quadrature points per cell per axis
  int subsamples_p = 0;  // momentum-axis override; 0 = same as subsamples

  double x_min() const { return 0.0; }
  double x_max(const RotorParams& params) const {
    return 2.0 * M_PI * params.radius;
  }
  void validate_ratio(const RotorParams& params) const;  // cell/coherence >= 10
};

// Husimi density |<x,p|Psi>|^2 at cell centers; row-major [ip][ix].
struct HusimiDensity {
  std::vector<double> values;  // p_cells * x_cells
  PhaseSpaceGrid grid;
  double cell_dx = 0.0, cell_dp = 0.0;

  double total_mass(double hbar_eff) const;  // sum rho dx dp / (2 pi hbar)
  std::string to_csv(const RotorParams& params) const;  // x,p,rho
};
HusimiDensity husimi(const RotorWavefunction& psi, const PhaseSpaceGrid& grid,
                     const RotorParams& params);

// Coarse-grained phase-space POVM: Pi_i = integral over cell A_i of
// |x,p><x,p| dx dp / (2 pi hbar), one effect per grid cell.
PovmSet phase_space_povm(const PhaseSpaceGrid& grid, const RotorParams& params,
                         int truncation_m);

// ||sum_i effects - 1||_max restricted to the index sub-block [lo, hi]
// (inclusive); the retained-block completeness measure for truncated
// coherent-state POVMs.
double povm_block_residual(const PovmSet& set, int lo, int hi);

// Split-step spectral evolution of the quantum rotor; the time-dependent
// potential is sampled at mid-step. Throws if truncation tail mass exceeds 1e-6.
class RotorEvolver {
 public:
  RotorEvolver(const RotorParams& params, int truncation_m);
  ~RotorEvolver();
  RotorEvolver(const RotorEvolver&) = delete;
  RotorEvolver& operator=(const RotorEvolver&) = delete;

  RotorWavefunction evolve(const RotorWavefunction& psi, double t0, double dt,
                           int n_steps) const;

  // <x> (circular mean times R), <p>, and circular position spread times R.
  struct Moments {
    double mean_x;
    double mean_p;
    double spread_x;
  };
  Moments moments(const RotorWavefunction& psi) const;

 private:
  struct Impl;
  Impl* impl_;
};

RotorWavefunction evolve_rotor(const RotorWavefunction& psi,
                               const RotorParams& params, double t0, double dt,
                               int n_steps);

struct BreakdownPoint {
  double hbar_eff;
  std::optional<double> tq_spread;       // empty when censored
  std::optional<double> tq_discrepancy;
};

struct LogFit {
  double intercept = 0.0;
  double slope = 0.0;       // coefficient of ln(1/hbar_eff)
  double r_squared = 0.0;
  int n_points = 0;
};

struct BreakdownResult {
  std::vector<BreakdownPoint> points;
  LogFit fit_spread;          // t_q = A + B ln(1/hbar)
  LogFit fit_discrepancy;
  LogFit powerlaw_fit_spread; // ln t_q = A' + k ln(1/hbar)
  double lambda_max = 0.0;    // from lyapunov on the same parameters
  double t_c = 0.0;

  std::string to_json() const;
};

struct BreakdownSettings {
  // Initial packet convention across the hbar sweep: thermal (fixed momentum
  // width, delta_x = hbar/(2 dp), the chaotic log-law setup) or fixed
  // position width (the free-spreading ballistic baseline).
  enum class WidthMode { fixed_momentum_width, fixed_position_width };
  WidthMode width_mode = WidthMode::fixed_momentum_width;

  double threshold = 1.2;        // fraction of R
  double momentum_width = 0.004; // delta_p when width_mode is fixed_momentum
  double position_width = 0.05;  // delta_x when width_mode is fixed_position
  double x0 = 0.8;
  double p0 = 0.0;
  double horizon = 25.0;
  double dt = 2.0 * M_PI / 2000.0;
  int sample_every = 10;
  double p_margin = 7.5;         // truncation margin: M = p_margin / hbar_eff
};

BreakdownResult ehrenfest_breakdown(const RotorParams& params,
                                    const std::vector<double>& hbar_eff_list,
                                    const BreakdownSettings& settings);

// SI headline: t_q = t_c ln(R sqrt(m k_B T) / hbar), plus the thermal
// de Broglie length hbar / sqrt(m k_B T).
struct HeadlineResult {
  double t_q_seconds;
  double de_broglie_m;
};
HeadlineResult tq_headline(double t_c_seconds, double radius_m, double mass_kg,
                           double temperature_k);

double wrap_angle(double phi);  // into [0, 2 pi)

}  // namespace qsim::hyperion
