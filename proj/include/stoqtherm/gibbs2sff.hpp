#pragma once

#include <Eigen/Dense>
#include <vector>

#include "stoqtherm/hamiltonian.hpp"

namespace stoqtherm {

/// Diagonal local operator over a sorted support.
struct DiagonalOperator {
  std::vector<int> support;
  Eigen::VectorXd diag;  // length 2^|support|
};

/// Result of compiling a classical Hamiltonian into a stoquastic
/// frustration-free Hamiltonian whose unique ground state is the
/// coherent Gibbs state.
struct SffCompilation {
  LocalHamiltonian h_sff;     // n terms, one per bit
  int locality_bound = 0;     // k'(k-1)+1
  int max_support_observed = 0;
  std::vector<std::vector<int>> per_qubit_supports;
};

/// Gamma_j(x) = exp((H(x) - H(x^j)) / 2), built from the terms touching
/// bit j only; acts on {j} union their supports.
DiagonalOperator gamma_operator(const ClassicalHamiltonian& hc, int j);

/// H_SFF = sum_j (Gamma_j - X_j).
SffCompilation build_sff(const ClassicalHamiltonian& hc);

}  // namespace stoqtherm
