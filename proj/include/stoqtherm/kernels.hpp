#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <span>
#include <vector>

namespace stoqtherm {

// Data-parallel inner loops shared by the modules. Each kernel has an
// OpenMP version and a serial reference with identical per-element
// arithmetic, so results agree bit-for-bit and tests can compare them
// directly. Scalar reductions happen serially after the parallel fill
// to keep outputs independent of the thread count.

// out[x] = sum_sub M(sub(x), sub) * in(x with support bits replaced by sub).
// M is a 2^|support| square matrix over the sorted support.
void apply_local(std::span<const int> support, const Eigen::MatrixXd& M,
                 const Eigen::VectorXd& in, Eigen::VectorXd& out, int n);
void apply_local_serial(std::span<const int> support, const Eigen::MatrixXd& M,
                        const Eigen::VectorXd& in, Eigen::VectorXd& out, int n);

// Dense 2^n x 2^n embedding of a local operator (identity elsewhere),
// accumulated into `into`.
void embed_dense_add(std::span<const int> support, const Eigen::MatrixXd& M,
                     Eigen::MatrixXd& into, int n);

struct TableTerm {
  std::span<const int> support;
  std::span<const double> table;
};

// energies[x] = sum over terms of table lookup at x, for all x in [0, 2^n).
void table_energies(std::span<const TableTerm> terms, std::vector<double>& energies, int n);
void table_energies_serial(std::span<const TableTerm> terms, std::vector<double>& energies,
                           int n);

}  // namespace stoqtherm
