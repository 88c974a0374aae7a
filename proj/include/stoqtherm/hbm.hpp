#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <utility>
#include <vector>

#include "stoqtherm/hamiltonian.hpp"
#include "stoqtherm/pseq.hpp"

namespace stoqtherm {

/// Hyperedge over an ordered node list; table indexed lexicographically
/// with nodes[0] as the most significant bit.
struct HbmEdge {
  std::vector<int> nodes;
  std::vector<double> table;
};

/// Hypergraph energy model over visible/hidden bits with output
/// f(x) = sum_h exp(-F(x,h)).
struct HyperBoltzmannMachine {
  std::vector<int> visible;  // node ids in qubit order
  std::vector<int> hidden;   // node ids
  std::vector<HbmEdge> hyperedges;

  int n() const { return static_cast<int>(visible.size()); }
  int m() const { return static_cast<int>(hidden.size()); }
  int max_edge_size() const;
  int max_edges_per_node() const;  // k'
  void validate() const;           // unique ids, finite tables, sane sizes
};

constexpr int kMaxHiddenBruteForce = 22;

HyperBoltzmannMachine empty_hbm(int n);

/// Brute-force output, summed over all 2^m hidden assignments. The result
/// is scaled: f(x) = evaluate(hbm, x) * exp(evaluate_log_scale(hbm)),
/// with the scale chosen from per-edge table minima so the sum cannot
/// overflow. Requires m <= 22.
double evaluate(const HyperBoltzmannMachine& hbm, std::uint64_t x);
double evaluate_log_scale(const HyperBoltzmannMachine& hbm);

/// probs[x] = f(x) / sum_y f(y) (n <= 14, m <= 22).
Distribution distribution(const HyperBoltzmannMachine& hbm);

/// Lemma-style update representing the action of an entrywise-positive
/// k-local matrix: the support's visible nodes become hidden, fresh visible
/// nodes replace them, and one hyperedge with table -log <x'|P|h'> ties
/// them together.
HyperBoltzmannMachine apply_p(const HyperBoltzmannMachine& hbm, const PFactor& factor);

/// Fold of apply_p over the sequence factors starting from the empty HBM;
/// represents P_T ... P_1 |+> exactly in wavefunction. Node ids are
/// canonicalized (visible 0..n-1 in qubit order, hidden n..n+m-1).
HyperBoltzmannMachine build_from_sequence(const PSequence& p);

/// Duplicate hidden nodes and hyperedges so the output becomes f(x)^2;
/// turns wavefunction precision into distribution precision.
HyperBoltzmannMachine square(const HyperBoltzmannMachine& hbm);

/// One classical term per hyperedge on n+m bits (visible bits first);
/// the Gibbs marginal over hidden bits equals distribution(hbm).
std::pair<ClassicalHamiltonian, std::vector<int>> to_classical(const HyperBoltzmannMachine& hbm);

/// Visible-only HBM with one hyperedge per classical term.
HyperBoltzmannMachine from_classical(const ClassicalHamiltonian& hc);

/// || f/||f||_2 - psi ||_2; requires psi entrywise nonnegative.
double wavefunction_distance(const HyperBoltzmannMachine& hbm, const Eigen::VectorXd& psi);
/// TV( f/sum f , |psi|^2 ).
double distribution_distance(const HyperBoltzmannMachine& hbm, const Eigen::VectorXd& psi);

/// Distribution of the squared sequence-HBM computed by the factor-chain
/// contraction (cost 2^n per factor instead of 2^m brute force); equals
/// distribution(square(build_from_sequence(p))).
Distribution chain_distribution(const PSequence& p);

/// Renumber node ids to visible 0..n-1 (qubit order), hidden n..n+m-1.
HyperBoltzmannMachine canonicalized(const HyperBoltzmannMachine& hbm);

}  // namespace stoqtherm
