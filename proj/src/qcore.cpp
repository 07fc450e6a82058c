#include "qsim/qcore.hpp"

#include <cmath>

namespace qsim {

namespace {

std::uint64_t splitmix64(std::uint64_t& x) {
  x += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = x;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

}  // namespace

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream_id)
    : seed_(seed), stream_id_(stream_id) {
  std::uint64_t x = seed ^ (0x6a09e667f3bcc909ULL + stream_id * 0xd1342543de82ef95ULL);
  for (auto& s : s_) s = splitmix64(x);
}

std::uint64_t RngStream::next_u64() {
  const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
  const std::uint64_t t = s_[1] << 17;
  s_[2] ^= s_[0];
  s_[3] ^= s_[1];
  s_[1] ^= s_[2];
  s_[0] ^= s_[3];
  s_[2] ^= t;
  s_[3] = rotl(s_[3], 45);
  return result;
}

double RngStream::uniform() {
  return double(next_u64() >> 11) * 0x1.0p-53;
}

double RngStream::normal() {
  if (have_cached_) {
    have_cached_ = false;
    return cached_;
  }
  double u1 = 0.0;
  while (u1 == 0.0) u1 = uniform();
  double u2 = uniform();
  double r = std::sqrt(-2.0 * std::log(u1));
  double th = 2.0 * M_PI * u2;
  cached_ = r * std::sin(th);
  have_cached_ = true;
  return r * std::cos(th);
}

bool is_hermitian(const Mat& a, double tol) {
  if (a.rows() != a.cols()) return false;
  return (a - a.adjoint()).cwiseAbs().maxCoeff() < tol;
}

bool has_nan(const Mat& a) { return !a.allFinite(); }
bool has_nan(const Vec& v) { return !v.allFinite(); }

Vec evolve_step(const Mat& H, const Vec& psi, double dt) {
  if (has_nan(H) || has_nan(psi) || !std::isfinite(dt))
    throw std::invalid_argument("evolve_step: NaN/inf in inputs");
  if (!is_hermitian(H))
    throw std::invalid_argument("evolve_step: H is not hermitian");
  UnitaryStepper stepper(H);
  return stepper.step(psi, dt);
}

UnitaryStepper::UnitaryStepper(const Mat& H) {
  if (!is_hermitian(H))
    throw std::invalid_argument("UnitaryStepper: H is not hermitian");
  Eigen::SelfAdjointEigenSolver<Mat> es(H);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("UnitaryStepper: eigendecomposition failed");
  evals_ = es.eigenvalues();
  evecs_ = es.eigenvectors();
}

Vec UnitaryStepper::step(const Vec& psi, double dt) const {
  return at_time(psi, dt);
}

Vec UnitaryStepper::at_time(const Vec& psi0, double t) const {
  Vec coeffs = evecs_.adjoint() * psi0;
  for (int k = 0; k < coeffs.size(); ++k)
    coeffs[k] *= std::exp(Complex(0.0, -evals_[k] * t));
  return evecs_ * coeffs;
}

Mat PovmSet::effect(int i) const {
  if (kind == Kind::kraus) return elements[i].adjoint() * elements[i];
  return elements[i];
}

ValidationReport check_povm(const PovmSet& set, double tolerance,
                            int n_probes, std::uint64_t probe_seed) {
  if (set.elements.empty())
    throw std::invalid_argument("check_povm: empty set");
  const int d = set.dim();
  for (const auto& e : set.elements)
    if (e.rows() != d || e.cols() != d)
      throw std::invalid_argument("check_povm: dimension mismatch");

  ValidationReport rep;
  Mat sum = Mat::Zero(d, d);
  for (int i = 0; i < set.size(); ++i) sum += set.effect(i);
  rep.completeness_residual = (sum - Mat::Identity(d, d)).cwiseAbs().maxCoeff();
  rep.complete = rep.completeness_residual < tolerance;

  RngStream rng(probe_seed, 0);
  rep.min_probe_expectation = 0.0;
  for (int p = 0; p < n_probes; ++p) {
    Vec probe = random_state(d, rng);
    for (int i = 0; i < set.size(); ++i) {
      double val = std::real(probe.dot(set.effect(i) * probe));
      rep.min_probe_expectation = std::min(rep.min_probe_expectation, val);
    }
  }
  rep.positive = rep.min_probe_expectation >= tol::kProbClamp;

  rep.projectivity_residuals.resize(set.size());
  for (int i = 0; i < set.size(); ++i) {
    Mat eff = set.effect(i);
    rep.projectivity_residuals[i] = (eff * eff - eff).cwiseAbs().maxCoeff();
  }

  rep.max_commutator_norm = 0.0;
  for (int i = 0; i < set.size(); ++i)
    for (int j = i + 1; j < set.size(); ++j) {
      Mat a = set.effect(i), b = set.effect(j);
      double c = (a * b - b * a).cwiseAbs().maxCoeff();
      rep.max_commutator_norm = std::max(rep.max_commutator_norm, c);
    }
  return rep;
}

Vec random_state(int dim, RngStream& rng) {
  Vec v(dim);
  for (int i = 0; i < dim; ++i) v[i] = Complex(rng.normal(), rng.normal());
  v.normalize();
  return v;
}

Mat projector(const Vec& v) { return v * v.adjoint(); }

}  // namespace qsim
