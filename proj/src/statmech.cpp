#include "qsim/statmech.hpp"

#include <cmath>
#include <numeric>
#include <sstream>

#include <json.hpp>

namespace qsim::statmech {

IsingLattice IsingLattice::all_up(int L, double temperature) {
  IsingLattice lat;
  lat.L = L;
  lat.temperature = temperature;
  lat.spins.assign(size_t(L) * L, 1);
  lat.validate();
  return lat;
}

IsingLattice IsingLattice::random(int L, double temperature, RngStream& rng) {
  IsingLattice lat;
  lat.L = L;
  lat.temperature = temperature;
  lat.spins.resize(size_t(L) * L);
  for (auto& s : lat.spins) s = (rng.next_u64() & 1) ? 1 : -1;
  lat.validate();
  return lat;
}

void IsingLattice::validate() const {
  if (L < 2) throw std::invalid_argument("IsingLattice: L < 2");
  if (temperature <= 0.0)
    throw std::invalid_argument("IsingLattice: temperature <= 0");
  if (int(spins.size()) != L * L)
    throw std::invalid_argument("IsingLattice: spin array size mismatch");
  for (int s : spins)
    if (s != 1 && s != -1)
      throw std::invalid_argument("IsingLattice: spin not in {-1,+1}");
}

int IsingLattice::spin(int row, int col) const {
  return spins[size_t(((row % L) + L) % L) * L + ((col % L) + L) % L];
}

int IsingLattice::neighbor_sum(int row, int col) const {
  return spin(row - 1, col) + spin(row + 1, col) + spin(row, col - 1) +
         spin(row, col + 1);
}

double IsingLattice::magnetization() const {
  double m = std::accumulate(spins.begin(), spins.end(), 0.0);
  return m / double(L * L);
}

double IsingLattice::energy() const {
  double e = 0.0;
  for (int r = 0; r < L; ++r)
    for (int c = 0; c < L; ++c)
      e -= spin(r, c) * (spin(r + 1, c) + spin(r, c + 1));
  return e;
}

double glauber_flip_prob(int spin, int neighbor_sum, double temperature) {
  if (temperature <= 0.0)
    throw std::invalid_argument("glauber_flip_prob: temperature <= 0");
  if (spin != 1 && spin != -1)
    throw std::invalid_argument("glauber_flip_prob: spin not in {-1,+1}");
  return 1.0 / (1.0 + std::exp(double(spin) * neighbor_sum / temperature));
}

std::vector<double> simulate_ising(IsingLattice& lattice, int sweeps,
                                   RngStream& rng) {
  lattice.validate();
  const int L = lattice.L;
  const int n = L * L;
  std::vector<double> magnetization;
  magnetization.reserve(sweeps);
  for (int sweep = 0; sweep < sweeps; ++sweep) {
    for (int attempt = 0; attempt < n; ++attempt) {
      int site = int(rng.next_u64() % std::uint64_t(n));
      int r = site / L, c = site % L;
      double p = glauber_flip_prob(lattice.spins[site],
                                   lattice.neighbor_sum(r, c),
                                   lattice.temperature);
      if (rng.uniform() < p) lattice.spins[site] = -lattice.spins[site];
    }
    magnetization.push_back(lattice.magnetization());
  }
  return magnetization;
}

std::vector<double> MicrocanonicalModel::thermal_values() const {
  std::vector<double> v;
  v.reserve(sector_dims.size());
  for (int d : sector_dims) v.push_back(double(d) / double(d_mc));
  return v;
}

modal::CutSpec MicrocanonicalModel::cut() const {
  modal::CutSpec c;
  c.povm = sector_povm;
  return c;
}

namespace {

PovmSet block_projectors(int d_mc, const std::vector<int>& sector_dims) {
  PovmSet set;
  set.kind = PovmSet::Kind::effects;
  int offset = 0;
  for (int d : sector_dims) {
    Mat pi = Mat::Zero(d_mc, d_mc);
    pi.block(offset, offset, d, d) = Mat::Identity(d, d);
    set.elements.push_back(pi);
    offset += d;
  }
  return set;
}

void check_sectors(int d_mc, const std::vector<int>& sector_dims) {
  if (d_mc <= 0 || d_mc > 2000)
    throw std::invalid_argument("build_microcanonical: d_mc out of (0, 2000]");
  int sum = 0;
  for (int d : sector_dims) {
    if (d <= 0) throw std::invalid_argument("build_microcanonical: sector <= 0");
    sum += d;
  }
  if (sum != d_mc)
    throw std::invalid_argument("build_microcanonical: sector dims do not sum");
}

Mat goe_block(int d, double scale, RngStream& rng) {
  Mat h = Mat::Zero(d, d);
  for (int i = 0; i < d; ++i) {
    h(i, i) = rng.normal() * std::sqrt(2.0) * scale;
    for (int j = i + 1; j < d; ++j) {
      double v = rng.normal() * scale;
      h(i, j) = v;
      h(j, i) = v;
    }
  }
  return h;
}

}  // namespace

MicrocanonicalModel build_microcanonical(int d_mc,
                                         const std::vector<int>& sector_dims,
                                         RngStream& rng) {
  check_sectors(d_mc, sector_dims);
  MicrocanonicalModel model;
  model.d_mc = d_mc;
  model.sector_dims = sector_dims;
  model.hamiltonian = goe_block(d_mc, 1.0 / std::sqrt(double(d_mc)), rng);
  model.sector_povm = block_projectors(d_mc, sector_dims);
  return model;
}

MicrocanonicalModel build_microcanonical_blocked(
    int d_mc, const std::vector<int>& sector_dims, RngStream& rng) {
  check_sectors(d_mc, sector_dims);
  MicrocanonicalModel model;
  model.d_mc = d_mc;
  model.sector_dims = sector_dims;
  model.hamiltonian = Mat::Zero(d_mc, d_mc);
  int offset = 0;
  for (int d : sector_dims) {
    model.hamiltonian.block(offset, offset, d, d) =
        goe_block(d, 1.0 / std::sqrt(double(d_mc)), rng);
    offset += d;
  }
  model.sector_povm = block_projectors(d_mc, sector_dims);
  return model;
}

ThermalSeries thermal_expectations(const MicrocanonicalModel& model,
                                   const Vec& psi0,
                                   const std::vector<double>& times) {
  if (std::abs(psi0.norm() - 1.0) > 1e-8)
    throw std::invalid_argument("thermal_expectations: psi0 not normalized");
  UnitaryStepper stepper(model.hamiltonian);
  const int k = model.sector_povm.size();
  ThermalSeries out;
  out.times = times;
  out.p.reserve(times.size());
  // sector probabilities are sums of |component|^2 over coordinate blocks
  std::vector<std::pair<int, int>> blocks;
  {
    int offset = 0;
    for (int d : model.sector_dims) {
      blocks.emplace_back(offset, d);
      offset += d;
    }
  }
  for (double t : times) {
    Vec psi = stepper.at_time(psi0, t);
    std::vector<double> p(k);
    double total = 0.0;
    for (int i = 0; i < k; ++i) {
      p[i] = psi.segment(blocks[i].first, blocks[i].second).squaredNorm();
      total += p[i];
    }
    if (std::abs(total - 1.0) > tol::kAlgebraic)
      throw std::runtime_error("thermal_expectations: probability leak");
    out.p.push_back(std::move(p));
  }
  out.time_average.assign(k, 0.0);
  size_t start = times.size() / 2;
  for (size_t n = start; n < times.size(); ++n)
    for (int i = 0; i < k; ++i) out.time_average[i] += out.p[n][i];
  size_t count = times.size() - start;
  for (auto& v : out.time_average) v /= double(count);
  return out;
}

std::string ThermalSeries::to_csv() const {
  std::ostringstream os;
  os << "t";
  if (!p.empty())
    for (size_t i = 0; i < p[0].size(); ++i) os << ",p_" << i;
  os << "\n";
  for (size_t n = 0; n < times.size(); ++n) {
    os << times[n];
    for (double v : p[n]) os << "," << v;
    os << "\n";
  }
  return os.str();
}

ErgodicityCheck bell_ergodicity_check(const MicrocanonicalModel& model,
                                      const Vec& psi0, double duration,
                                      double dt, int n_paths,
                                      std::uint64_t seed) {
  auto cut = model.cut();
  auto decomp0 = modal::local_states(cut, psi0);
  int j0 = 0;
  for (size_t i = 1; i < decomp0.probs.size(); ++i)
    if (decomp0.probs[i] > decomp0.probs[j0]) j0 = int(i);
  int steps = int(std::llround(duration / dt));
  auto table = modal::build_rate_table(model.hamiltonian, cut, psi0, dt, steps);
  std::vector<modal::ModalPath> paths;
  paths.reserve(n_paths);
  for (int p = 0; p < n_paths; ++p) {
    RngStream rng(seed, p);
    paths.push_back(modal::sample_path(table, j0, rng));
  }
  ErgodicityCheck check;
  check.report = modal::ergodicity_report(paths, model.sector_povm.size());
  check.thermal_values = model.thermal_values();
  check.start_sector = j0;
  return check;
}

std::string ErgodicityCheck::to_json() const {
  nlohmann::json j = nlohmann::json::parse(report.to_json());
  j["thermal_values"] = thermal_values;
  j["start_sector"] = start_sector;
  return j.dump(2);
}

}  // namespace qsim::statmech
