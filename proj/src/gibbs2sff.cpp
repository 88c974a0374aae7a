#include "stoqtherm/gibbs2sff.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "stoqtherm/bits.hpp"
#include "stoqtherm/errors.hpp"

namespace stoqtherm {

DiagonalOperator gamma_operator(const ClassicalHamiltonian& hc, int j) {
  if (j < 0 || j >= hc.n) throw PreconditionError("gamma_operator: bit index out of range");

  // Support: j plus every bit sharing a term with j. Terms not touching j
  // cancel in the energy difference.
  std::set<int> bits = {j};
  std::vector<const ClassicalTerm*> touching;
  for (const auto& t : hc.terms) {
    if (std::find(t.support.begin(), t.support.end(), j) == t.support.end()) continue;
    touching.push_back(&t);
    bits.insert(t.support.begin(), t.support.end());
  }

  DiagonalOperator op;
  op.support.assign(bits.begin(), bits.end());
  const int s = static_cast<int>(op.support.size());
  const int pos_j = static_cast<int>(
      std::find(op.support.begin(), op.support.end(), j) - op.support.begin());

  const std::uint64_t dim = std::uint64_t{1} << s;
  op.diag.resize(static_cast<Eigen::Index>(dim));
  for (std::uint64_t z = 0; z < dim; ++z) {
    const std::uint64_t zf = flip_bit(z, pos_j, s);
    double diff = 0.0;  // H(z) - H(z^j), local part only
    for (const ClassicalTerm* t : touching) {
      // sub-index of the term within this operator's support
      std::uint64_t a = 0, af = 0;
      for (int b : t->support) {
        const int p = static_cast<int>(
            std::find(op.support.begin(), op.support.end(), b) - op.support.begin());
        a = (a << 1) | static_cast<std::uint64_t>(bit_of(z, p, s));
        af = (af << 1) | static_cast<std::uint64_t>(bit_of(zf, p, s));
      }
      diff += t->table[a] - t->table[af];
    }
    op.diag(static_cast<Eigen::Index>(z)) = std::exp(0.5 * diff);
  }
  return op;
}

SffCompilation build_sff(const ClassicalHamiltonian& hc) {
  hc.validate();
  SffCompilation out;
  const int k = hc.locality();
  const int kp = hc.max_terms_per_bit();
  out.locality_bound = std::max(1, kp * (k - 1) + 1);
  out.h_sff.n = hc.n;

  for (int j = 0; j < hc.n; ++j) {
    DiagonalOperator gamma = gamma_operator(hc, j);
    const int s = static_cast<int>(gamma.support.size());
    const int pos_j = static_cast<int>(
        std::find(gamma.support.begin(), gamma.support.end(), j) - gamma.support.begin());

    LocalTerm term;
    term.support = gamma.support;
    const Eigen::Index dim = Eigen::Index{1} << s;
    term.matrix = Eigen::MatrixXd::Zero(dim, dim);
    term.matrix.diagonal() = gamma.diag;
    for (std::uint64_t z = 0; z < static_cast<std::uint64_t>(dim); ++z) {
      const std::uint64_t zf = flip_bit(z, pos_j, s);
      term.matrix(static_cast<Eigen::Index>(z), static_cast<Eigen::Index>(zf)) -= 1.0;
    }
    out.max_support_observed = std::max(out.max_support_observed, s);
    out.per_qubit_supports.push_back(gamma.support);
    out.h_sff.terms.push_back(std::move(term));
  }
  return out;
}

}  // namespace stoqtherm
