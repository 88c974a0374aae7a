#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

namespace stoqtherm {

// ---------------------------------------------------------------------------
// Domain types
// ---------------------------------------------------------------------------

/// One k-local term: a dense real symmetric matrix over the sorted support.
struct LocalTerm {
  std::vector<int> support;  // sorted, distinct qubit indices
  Eigen::MatrixXd matrix;    // 2^|support| x 2^|support|, symmetric

  Eigen::Index dim() const { return matrix.rows(); }
};

/// Sum of k-local Hermitian (real symmetric) terms on n qubits.
struct LocalHamiltonian {
  int n = 0;
  std::vector<LocalTerm> terms;

  int locality() const;           // k: max support size
  double max_term_norm() const;   // J: max term operator norm
  std::size_t term_count() const { return terms.size(); }

  /// Throws PreconditionError on asymmetric terms (1e-12 absolute),
  /// unsorted/duplicate supports, or out-of-range indices.
  void validate() const;
};

/// One diagonal term given as an energy table over the sorted support.
struct ClassicalTerm {
  std::vector<int> support;   // sorted, distinct bit indices
  std::vector<double> table;  // length 2^|support|, lexicographic
};

/// Diagonal k-local Hamiltonian as energy tables over bit assignments.
struct ClassicalHamiltonian {
  int n = 0;
  std::vector<ClassicalTerm> terms;

  int locality() const;
  int max_terms_per_bit() const;  // k'
  double energy(std::uint64_t x) const;
  void validate() const;
};

/// Probability distribution over {0,1}^n.
struct Distribution {
  int n = 0;
  Eigen::VectorXd probs;  // length 2^n, nonnegative, sums to 1
  double log_z = 0.0;     // log of the normalizing constant absorbed here

  void validate() const;  // entries >= 0, sum within 1e-10 of 1
};

/// Exact ground-space data of a LocalHamiltonian.
struct GroundSpaceReport {
  double ground_energy = 0.0;
  double gap = 0.0;             // first eigenvalue above the ground cluster - E0
  int ground_dim = 0;
  Eigen::MatrixXd ground_basis; // orthonormal columns spanning the ground space
  Eigen::VectorXd psi0;         // Pi|+> / eta, unit vector when defined
  double eta = 0.0;             // sqrt(<+|Pi|+>)
  bool psi0_defined = false;    // false when eta <= 1e-12
};

// ---------------------------------------------------------------------------
// Operations
// ---------------------------------------------------------------------------

constexpr int kMaxDenseQubits = 14;
constexpr int kMaxGibbsBits = 24;
constexpr double kDefaultDegeneracyTol = 1e-9;   // relative
constexpr double kDefaultStoquasticTol = 1e-12;

/// Full 2^n x 2^n matrix, each term tensored with the identity on its
/// complement. Throws on n > 14.
Eigen::MatrixXd assemble_dense(const LocalHamiltonian& h);

/// Termwise test: every off-diagonal entry <= tol.
bool is_stoquastic(const LocalHamiltonian& h, double tol = kDefaultStoquasticTol);

/// Full symmetric eigendecomposition; ground cluster within
/// degeneracy_tol * max(1, |E0|) of E0.
GroundSpaceReport ground_space(const LocalHamiltonian& h,
                               double degeneracy_tol = kDefaultDegeneracyTol);

/// True iff every ground-space vector has energy within tol of each
/// term's own minimum eigenvalue.
bool is_frustration_free(const LocalHamiltonian& h, double tol = 1e-9);
bool is_frustration_free(const LocalHamiltonian& h, const GroundSpaceReport& report,
                         double tol = 1e-9);

/// p(x) = exp(-H(x)) / Z, evaluated through per-term table lookups.
/// Energies are shifted by min_x H(x) before exponentiation.
Distribution gibbs_distribution(const ClassicalHamiltonian& hc);

/// Amplitudes sqrt(p(x)): the coherent Gibbs state (n <= 14).
Eigen::VectorXd coherent_gibbs_state(const ClassicalHamiltonian& hc);

/// |+>^{x n}: uniform positive amplitudes.
Eigen::VectorXd plus_state(int n);

/// H|v> accumulated over all terms (local applications, no dense matrix).
Eigen::VectorXd apply_hamiltonian(const LocalHamiltonian& h, const Eigen::VectorXd& v);

/// Smallest eigenvalue of a single term matrix.
double term_min_eigenvalue(const LocalTerm& term);

/// Total variation distance between two distributions on the same n.
double total_variation(const Distribution& p, const Distribution& q);
double total_variation(const Eigen::VectorXd& p, const Eigen::VectorXd& q);

/// Marginal over the leading `n_visible` bits (bits 0..n_visible-1 are
/// the most significant under the big-endian convention).
Distribution marginal_leading(const Distribution& p, int n_visible);

}  // namespace stoqtherm
