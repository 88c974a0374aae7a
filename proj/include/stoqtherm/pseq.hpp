#pragma once

#include <Eigen/Dense>
#include <utility>
#include <vector>

#include "stoqtherm/hamiltonian.hpp"

namespace stoqtherm {

/// One entrywise-positive local factor.
struct PFactor {
  std::vector<int> support;
  Eigen::MatrixXd matrix;  // 2^|support| square, all entries > 0
};

struct PSequenceMeta {
  double delta = 0.0;      // Trotter step (0 for projector sequences)
  int repetitions = 0;     // N
  double target_eps = 0.0;
};

/// Ordered product of k-local entrywise-positive matrices driving |+>
/// toward a ground state. factors[0] is applied first.
struct PSequence {
  int n = 0;
  double alpha = 0.0;  // entrywise floor added to every factor
  PSequenceMeta meta;
  std::vector<PFactor> factors;

  void validate() const;  // every entry >= alpha * (1 - 1e-12) > 0
};

struct ConvergenceReport {
  double l2_error = 0.0;   // || psi - psi0 ||_2 against the exact oracle
  double target_eps = 0.0;
  int iterations_used = 0; // refinement rounds consumed
};

constexpr int kMaxRefinementRounds = 12;

/// Second-order imaginary-time Trotter factors e^{-delta/2 H_j} + alpha h_j
/// in palindromic order, repeated N times. Terms are first shifted by their
/// own minimum eigenvalue; the residual scalar offset is irrelevant after
/// normalization. delta, N and alpha start at the theoretical scaling and
/// are refined until the measured error against oracle.psi0 is <= eps
/// (up to kMaxRefinementRounds; the achieved error is always reported).
std::pair<PSequence, ConvergenceReport> trotter_sequence(const LocalHamiltonian& h, double eps,
                                                         const GroundSpaceReport& oracle);

/// Detectability-lemma factors Pi_j + alpha h_j (Pi_j = ground projector of
/// term j) cycled N times; requires a stoquastic frustration-free input.
std::pair<PSequence, ConvergenceReport> sff_sequence(const LocalHamiltonian& h, double eps,
                                                     const GroundSpaceReport& oracle);

/// Normalized P_T ... P_1 |start>, renormalizing after each factor.
/// The accumulated log-norm (log sqrt(Z)) is written to log_sqrt_z when given.
Eigen::VectorXd apply_sequence(const PSequence& p, const Eigen::VectorXd& start,
                               double* log_sqrt_z = nullptr);
Eigen::VectorXd apply_sequence(const PSequence& p, double* log_sqrt_z = nullptr);

/// Operator-norm error of the palindromic second-order step against the
/// exact e^{-delta H}, for each delta (dense matrix exponentials, n <= 10).
std::vector<std::pair<double, double>> trotter_error_probe(const LocalHamiltonian& h,
                                                           const std::vector<double>& deltas);

/// e^{t M} for symmetric M via eigendecomposition.
Eigen::MatrixXd expm_symmetric(const Eigen::MatrixXd& m, double t);

}  // namespace stoqtherm
