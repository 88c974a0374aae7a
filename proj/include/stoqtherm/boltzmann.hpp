#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "stoqtherm/hamiltonian.hpp"
#include "stoqtherm/hbm.hpp"

namespace stoqtherm {

struct BmEdge {
  int u = 0;
  int v = 0;
  double weight = 0.0;
};

/// Pairwise energy model over bits: F(y) = -sum a_y y - sum W y1 y2.
/// Nodes 0..n_visible-1 are visible, the rest hidden.
struct BoltzmannMachine {
  int n_visible = 0;
  int n_hidden = 0;
  std::vector<double> biases;  // per node
  std::vector<BmEdge> edges;

  int nodes() const { return n_visible + n_hidden; }
  int max_degree() const;  // k'
  double energy(std::uint64_t y) const;
  void validate() const;
};

/// Three-layer Boltzmann machine: visible x (bias a), middle h (bias b),
/// deep h~ (bias c), with W between visible/middle and U between
/// middle/deep. Empty deep layer = RBM.
struct DeepBoltzmannMachine {
  Eigen::VectorXd a, b, c;
  Eigen::MatrixXd W;  // n x middle
  Eigen::MatrixXd U;  // middle x deep

  int n() const { return static_cast<int>(a.size()); }
  int middle() const { return static_cast<int>(b.size()); }
  int deep() const { return static_cast<int>(c.size()); }
  bool is_rbm() const { return deep() == 0; }
  void validate() const;
};

/// Spin model on {-1/2,+1/2}: H = -sum a_y y - sum W y1 y2.
/// hidden_spins lists the spins to marginalize over.
struct IsingModel {
  std::vector<double> fields;
  std::vector<BmEdge> edges;
  std::vector<int> hidden_spins;

  double energy_spins(std::uint64_t bits) const;  // bit b -> spin b - 1/2
};

constexpr int kMaxRbmDistributionBits = 6;
constexpr int kMaxDeepBruteForce = 22;

/// Le Roux-Bengio construction: an RBM (empty deep layer) whose normalized
/// output is within eps of pi in total variation. One hidden node per
/// assignment whose probability ratio exceeds the cutoff; at most 2^k total.
/// Requires min_x pi(x) > 0 and k <= 6.
DeepBoltzmannMachine rbm_from_distribution(const Distribution& pi, double eps);

/// Per-hyperedge RBMs assembled into a DBM: HBM visible nodes become the
/// visible layer, HBM hidden nodes the deep layer, and each hyperedge's
/// RBM hidden nodes the middle layer. Per-edge precision is lambda*delta/(4T),
/// refined when the resulting TV (when checkable) exceeds delta.
DeepBoltzmannMachine hbm_to_dbm(const HyperBoltzmannMachine& hbm, double delta);

/// log f(x) = a.x + logsumexp over the deep layer with the middle layer
/// marginalized in closed form (deep <= 22).
double dbm_log_output(const DeepBoltzmannMachine& dbm, std::uint64_t x);
double dbm_output(const DeepBoltzmannMachine& dbm, std::uint64_t x);

/// Visible distribution f(x)/sum f (n <= 14, deep <= 22).
Distribution dbm_distribution(const DeepBoltzmannMachine& dbm);

/// Spin substitution s = y - 1/2: couplings unchanged, fields shifted by
/// half the incident coupling sum, constant offset returned separately.
/// The IsingModel's hidden_spins are the BM's hidden nodes.
IsingModel bm_to_ising(const BoltzmannMachine& bm, double* offset = nullptr);
BoltzmannMachine ising_to_bm(const IsingModel& ising);

/// Boltzmann machines are HBMs: biases as 1-node hyperedges, edges as
/// 2-node hyperedges.
HyperBoltzmannMachine as_hbm(const BoltzmannMachine& bm);
BoltzmannMachine as_bm(const DeepBoltzmannMachine& dbm);

/// Joint Gibbs distribution of the BM over all nodes (visible first).
Distribution bm_joint_distribution(const BoltzmannMachine& bm);

}  // namespace stoqtherm
