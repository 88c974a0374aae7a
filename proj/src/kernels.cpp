#include "stoqtherm/kernels.hpp"

#include <cassert>

#include "stoqtherm/bits.hpp"

namespace stoqtherm {

namespace {

inline double apply_local_element(std::span<const int> support, const Eigen::MatrixXd& M,
                                  const Eigen::VectorXd& in, int n, std::uint64_t x) {
  const std::uint64_t row = sub_index(x, support, n);
  const std::uint64_t subdim = std::uint64_t{1} << support.size();
  double acc = 0.0;
  for (std::uint64_t col = 0; col < subdim; ++col) {
    acc += M(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col)) *
           in(static_cast<Eigen::Index>(scatter_sub(x, col, support, n)));
  }
  return acc;
}

inline double table_energy_element(std::span<const TableTerm> terms, int n, std::uint64_t x) {
  double e = 0.0;
  for (const TableTerm& t : terms)
    e += t.table[sub_index(x, t.support, n)];
  return e;
}

}  // namespace

void apply_local(std::span<const int> support, const Eigen::MatrixXd& M,
                 const Eigen::VectorXd& in, Eigen::VectorXd& out, int n) {
  const std::int64_t dim = std::int64_t{1} << n;
  assert(in.size() == dim);
  out.resize(dim);
#pragma omp parallel for schedule(static)
  for (std::int64_t x = 0; x < dim; ++x)
    out(x) = apply_local_element(support, M, in, n, static_cast<std::uint64_t>(x));
}

void apply_local_serial(std::span<const int> support, const Eigen::MatrixXd& M,
                        const Eigen::VectorXd& in, Eigen::VectorXd& out, int n) {
  const std::int64_t dim = std::int64_t{1} << n;
  assert(in.size() == dim);
  out.resize(dim);
  for (std::int64_t x = 0; x < dim; ++x)
    out(x) = apply_local_element(support, M, in, n, static_cast<std::uint64_t>(x));
}

void embed_dense_add(std::span<const int> support, const Eigen::MatrixXd& M,
                     Eigen::MatrixXd& into, int n) {
  const std::int64_t dim = std::int64_t{1} << n;
  assert(into.rows() == dim && into.cols() == dim);
  const std::uint64_t subdim = std::uint64_t{1} << support.size();
#pragma omp parallel for schedule(static)
  for (std::int64_t x = 0; x < dim; ++x) {
    const std::uint64_t row = sub_index(static_cast<std::uint64_t>(x), support, n);
    for (std::uint64_t col = 0; col < subdim; ++col) {
      const std::uint64_t y = scatter_sub(static_cast<std::uint64_t>(x), col, support, n);
      into(x, static_cast<Eigen::Index>(y)) +=
          M(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col));
    }
  }
}

void table_energies(std::span<const TableTerm> terms, std::vector<double>& energies, int n) {
  const std::int64_t dim = std::int64_t{1} << n;
  energies.resize(static_cast<std::size_t>(dim));
#pragma omp parallel for schedule(static)
  for (std::int64_t x = 0; x < dim; ++x)
    energies[static_cast<std::size_t>(x)] =
        table_energy_element(terms, n, static_cast<std::uint64_t>(x));
}

void table_energies_serial(std::span<const TableTerm> terms, std::vector<double>& energies,
                           int n) {
  const std::int64_t dim = std::int64_t{1} << n;
  energies.resize(static_cast<std::size_t>(dim));
  for (std::int64_t x = 0; x < dim; ++x)
    energies[static_cast<std::size_t>(x)] =
        table_energy_element(terms, n, static_cast<std::uint64_t>(x));
}

}  // namespace stoqtherm
