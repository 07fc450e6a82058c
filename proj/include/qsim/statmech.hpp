#pragma once

#include <vector>

#include "qsim/modal.hpp"
#include "qsim/qcore.hpp"

namespace qsim::statmech {

// L x L periodic square lattice of Ising spins, units with J = k_B = 1.
struct IsingLattice {
  int L = 16;
  double temperature = 1.0;
  std::vector<int> spins;  // row-major, entries +-1

  static IsingLattice all_up(int L, double temperature);
  static IsingLattice random(int L, double temperature, RngStream& rng);

  int spin(int row, int col) const;
  int neighbor_sum(int row, int col) const;
  double magnetization() const;  // (1/L^2) sum s
  double energy() const;         // -sum_<mu nu> s_mu s_nu
  void validate() const;
};

// p(flip) = 1 / (1 + exp(s * neighbor_sum / T)).
double glauber_flip_prob(int spin, int neighbor_sum, double temperature);

// Random-site sequential Glauber updates, L^2 attempts per sweep; returns the
// per-sweep magnetization series (after each sweep). Mutates the lattice.
std::vector<double> simulate_ising(IsingLattice& lattice, int sweeps,
                                   RngStream& rng);

// Micro-canonical subspace with fixed coordinate-block sector projectors and
// a random real-symmetric Hamiltonian whose eigenbasis is generic w.r.t. the
// sectors.
struct MicrocanonicalModel {
  int d_mc = 0;
  std::vector<int> sector_dims;
  Mat hamiltonian;
  PovmSet sector_povm;  // orthogonal projectors, kind effects

  std::vector<double> thermal_values() const;  // d_i / d_mc
  modal::CutSpec cut() const;
};

// Off-diagonal entries N(0, 1/d), diagonal N(0, 2/d): spectrum O(1).
MicrocanonicalModel build_microcanonical(int d_mc,
                                         const std::vector<int>& sector_dims,
                                         RngStream& rng);

// Same sectors but H block-diagonal in them (no cross-sector matrix elements);
// the broken-ergodicity control.
MicrocanonicalModel build_microcanonical_blocked(
    int d_mc, const std::vector<int>& sector_dims, RngStream& rng);

struct ThermalSeries {
  std::vector<double> times;
  std::vector<std::vector<double>> p;  // [time][sector]
  std::vector<double> time_average;    // over the second half of the window

  std::string to_csv() const;  // t, p_0, p_1, ...
};

// p_i(t) = <Psi(t)|Pi_i|Psi(t)> by exact eigendecomposition evolution.
ThermalSeries thermal_expectations(const MicrocanonicalModel& model,
                                   const Vec& psi0,
                                   const std::vector<double>& times);

struct ErgodicityCheck {
  modal::ErgodicityReport report;
  std::vector<double> thermal_values;  // d_i / d_mc targets
  int start_sector = 0;

  std::string to_json() const;
};

// Runs the modal jump process over the sector projectors: one shared rate
// table along the unconditioned evolution, n_paths sampled paths starting
// from the most occupied sector of psi0.
ErgodicityCheck bell_ergodicity_check(const MicrocanonicalModel& model,
                                      const Vec& psi0, double duration,
                                      double dt, int n_paths,
                                      std::uint64_t seed);

}  // namespace qsim::statmech
