#pragma once

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace qsim {

using Complex = std::complex<double>;
using Vec = Eigen::VectorXcd;
using Mat = Eigen::MatrixXcd;

namespace tol {
// Algebraic identities (completeness, norm preservation, reconstruction).
inline constexpr double kAlgebraic = 1e-10;
// Quadrature-based checks (coherent-state resolutions of identity, Husimi mass).
inline constexpr double kQuadrature = 1e-6;
// Hermiticity / normalization of inputs.
inline constexpr double kHermitian = 1e-12;
inline constexpr double kNorm = 1e-12;
// Probabilities more negative than this are a genuine POVM violation,
// anything between [kProbClamp, 0) is float noise and gets clamped.
inline constexpr double kProbClamp = -1e-12;
// Below this a branch is considered unpopulated.
inline constexpr double kZeroBranch = 1e-14;
}  // namespace tol

// Thrown when a sampled outcome leads to a zero-norm conditioned state,
// i.e. the sampler proposed a branch the state does not populate.
struct ImpossibleOutcome : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Thrown when rate*dt >= 1 in a first-order jump step.
struct StepTooLarge : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Counter-seeded stream: identical (seed, stream_id) reproduces identical
// draws bit-for-bit, independent of platform stdlib. xoshiro256++ with
// splitmix64 state initialization.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t stream_id = 0);

  std::uint64_t next_u64();
  double uniform();   // [0, 1)
  double normal();    // standard normal, Box-Muller
  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_id() const { return stream_id_; }

 private:
  std::uint64_t s_[4];
  std::uint64_t seed_, stream_id_;
  bool have_cached_ = false;
  double cached_ = 0.0;
};

bool is_hermitian(const Mat& a, double tol = tol::kHermitian);
bool has_nan(const Mat& a);
bool has_nan(const Vec& v);

// exp(-i H dt) |psi> by hermitian eigendecomposition (hbar = 1).
// Rejects non-hermitian H and NaN inputs.
Vec evolve_step(const Mat& H, const Vec& psi, double dt);

// Cached eigendecomposition of a fixed hermitian H; cheap repeated stepping
// and direct evaluation of exp(-i H t) |psi0>.
class UnitaryStepper {
 public:
  explicit UnitaryStepper(const Mat& H);
  Vec step(const Vec& psi, double dt) const;     // exp(-i H dt) psi
  Vec at_time(const Vec& psi0, double t) const;  // exp(-i H t) psi0
  const Eigen::VectorXd& eigenvalues() const { return evals_; }
  const Mat& eigenvectors() const { return evecs_; }

 private:
  Eigen::VectorXd evals_;
  Mat evecs_;
};

struct PovmSet {
  enum class Kind { effects, kraus };
  std::vector<Mat> elements;
  Kind kind = Kind::effects;

  int dim() const { return elements.empty() ? 0 : int(elements[0].rows()); }
  int size() const { return int(elements.size()); }
  // Pi_i for effects, Omega_i^dag Omega_i for kraus.
  Mat effect(int i) const;
};

struct ValidationReport {
  double completeness_residual = 0.0;  // ||sum - 1||_max
  double min_probe_expectation = 0.0;  // over random probe states
  std::vector<double> projectivity_residuals;  // ||Pi^2 - Pi||_max per element
  double max_commutator_norm = 0.0;    // max_ij ||[Pi_i, Pi_j]||_max
  bool complete = false;
  bool positive = false;

  bool pass() const { return complete && positive; }
};

// Completeness, positivity (random probes), projectivity and commutator
// residuals. Throws on dimension mismatch.
ValidationReport check_povm(const PovmSet& set, double tolerance = tol::kAlgebraic,
                            int n_probes = 100, std::uint64_t probe_seed = 0x9e3779b9);

// Random normalized state, Haar-ish (iid complex gaussian, normalized).
Vec random_state(int dim, RngStream& rng);

Mat projector(const Vec& v);  // |v><v|

}  // namespace qsim
