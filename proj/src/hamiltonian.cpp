#include "stoqtherm/hamiltonian.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "stoqtherm/bits.hpp"
#include "stoqtherm/errors.hpp"
#include "stoqtherm/kernels.hpp"

namespace stoqtherm {

namespace {

void check_support(const std::vector<int>& support, int n, const char* what) {
  for (std::size_t i = 0; i < support.size(); ++i) {
    if (support[i] < 0 || support[i] >= n)
      throw PreconditionError(std::string(what) + ": support index out of range");
    if (i > 0 && support[i] <= support[i - 1])
      throw PreconditionError(std::string(what) + ": support not sorted/distinct");
  }
}

}  // namespace

int LocalHamiltonian::locality() const {
  std::size_t k = 0;
  for (const auto& t : terms) k = std::max(k, t.support.size());
  return static_cast<int>(k);
}

double LocalHamiltonian::max_term_norm() const {
  double j = 0.0;
  for (const auto& t : terms) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(t.matrix, Eigen::EigenvaluesOnly);
    j = std::max(j, es.eigenvalues().cwiseAbs().maxCoeff());
  }
  return j;
}

void LocalHamiltonian::validate() const {
  if (n < 0) throw PreconditionError("LocalHamiltonian: negative qubit count");
  for (const auto& t : terms) {
    check_support(t.support, n, "LocalHamiltonian");
    const Eigen::Index d = Eigen::Index{1} << t.support.size();
    if (t.matrix.rows() != d || t.matrix.cols() != d)
      throw PreconditionError("LocalHamiltonian: term matrix dimension mismatch");
    if ((t.matrix - t.matrix.transpose()).cwiseAbs().maxCoeff() > 1e-12)
      throw PreconditionError("LocalHamiltonian: term matrix not symmetric");
  }
}

int ClassicalHamiltonian::locality() const {
  std::size_t k = 0;
  for (const auto& t : terms) k = std::max(k, t.support.size());
  return static_cast<int>(k);
}

int ClassicalHamiltonian::max_terms_per_bit() const {
  std::vector<int> count(static_cast<std::size_t>(n), 0);
  for (const auto& t : terms)
    for (int b : t.support) ++count[static_cast<std::size_t>(b)];
  int k = 0;
  for (int c : count) k = std::max(k, c);
  return k;
}

double ClassicalHamiltonian::energy(std::uint64_t x) const {
  double e = 0.0;
  for (const auto& t : terms) e += t.table[sub_index(x, t.support, n)];
  return e;
}

void ClassicalHamiltonian::validate() const {
  if (n < 0) throw PreconditionError("ClassicalHamiltonian: negative bit count");
  for (const auto& t : terms) {
    check_support(t.support, n, "ClassicalHamiltonian");
    if (t.table.size() != (std::size_t{1} << t.support.size()))
      throw PreconditionError("ClassicalHamiltonian: table length mismatch");
    for (double v : t.table)
      if (!std::isfinite(v)) throw PreconditionError("ClassicalHamiltonian: non-finite energy");
  }
}

void Distribution::validate() const {
  if (probs.size() != (Eigen::Index{1} << n))
    throw PreconditionError("Distribution: length mismatch");
  if (probs.minCoeff() < 0.0) throw PreconditionError("Distribution: negative entry");
  if (std::abs(probs.sum() - 1.0) > 1e-10)
    throw PreconditionError("Distribution: not normalized");
}

Eigen::MatrixXd assemble_dense(const LocalHamiltonian& h) {
  if (h.n > kMaxDenseQubits)
    throw PreconditionError("assemble_dense: n > " + std::to_string(kMaxDenseQubits));
  h.validate();
  const Eigen::Index dim = Eigen::Index{1} << h.n;
  Eigen::MatrixXd full = Eigen::MatrixXd::Zero(dim, dim);
  for (const auto& t : h.terms) embed_dense_add(t.support, t.matrix, full, h.n);
  return full;
}

bool is_stoquastic(const LocalHamiltonian& h, double tol) {
  for (const auto& t : h.terms) {
    for (Eigen::Index r = 0; r < t.matrix.rows(); ++r)
      for (Eigen::Index c = 0; c < t.matrix.cols(); ++c)
        if (r != c && t.matrix(r, c) > tol) return false;
  }
  return true;
}

Eigen::VectorXd plus_state(int n) {
  const Eigen::Index dim = Eigen::Index{1} << n;
  return Eigen::VectorXd::Constant(dim, 1.0 / std::sqrt(static_cast<double>(dim)));
}

GroundSpaceReport ground_space(const LocalHamiltonian& h, double degeneracy_tol) {
  const Eigen::MatrixXd full = assemble_dense(h);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(full);
  const Eigen::VectorXd& evals = es.eigenvalues();
  const Eigen::Index dim = evals.size();

  GroundSpaceReport report;
  report.ground_energy = evals(0);
  const double tol_abs = degeneracy_tol * std::max(1.0, std::abs(report.ground_energy));
  Eigen::Index gdim = 1;
  while (gdim < dim && evals(gdim) <= report.ground_energy + tol_abs) ++gdim;
  report.ground_dim = static_cast<int>(gdim);
  report.gap = (gdim < dim) ? evals(gdim) - report.ground_energy : 0.0;
  report.ground_basis = es.eigenvectors().leftCols(gdim);

  const Eigen::VectorXd plus = plus_state(h.n);
  const Eigen::VectorXd coeff = report.ground_basis.transpose() * plus;
  report.eta = coeff.norm();  // eta^2 = <+|Pi|+>
  if (report.eta > 1e-12) {
    report.psi0 = (report.ground_basis * coeff) / report.eta;
    report.psi0_defined = true;
  } else {
    report.psi0 = Eigen::VectorXd::Zero(dim);
    report.psi0_defined = false;
  }
  return report;
}

Eigen::VectorXd apply_hamiltonian(const LocalHamiltonian& h, const Eigen::VectorXd& v) {
  Eigen::VectorXd acc = Eigen::VectorXd::Zero(v.size());
  Eigen::VectorXd tmp;
  for (const auto& t : h.terms) {
    apply_local(t.support, t.matrix, v, tmp, h.n);
    acc += tmp;
  }
  return acc;
}

double term_min_eigenvalue(const LocalTerm& term) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(term.matrix, Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

bool is_frustration_free(const LocalHamiltonian& h, const GroundSpaceReport& report,
                         double tol) {
  Eigen::VectorXd tmp;
  for (const auto& t : h.terms) {
    const double lambda_min = term_min_eigenvalue(t);
    for (Eigen::Index c = 0; c < report.ground_basis.cols(); ++c) {
      const Eigen::VectorXd v = report.ground_basis.col(c);
      apply_local(t.support, t.matrix, v, tmp, h.n);
      if (v.dot(tmp) - lambda_min > tol) return false;
    }
  }
  return true;
}

bool is_frustration_free(const LocalHamiltonian& h, double tol) {
  return is_frustration_free(h, ground_space(h), tol);
}

Distribution gibbs_distribution(const ClassicalHamiltonian& hc) {
  if (hc.n > kMaxGibbsBits)
    throw PreconditionError("gibbs_distribution: n > " + std::to_string(kMaxGibbsBits));
  hc.validate();

  std::vector<TableTerm> terms;
  terms.reserve(hc.terms.size());
  for (const auto& t : hc.terms) terms.push_back({t.support, t.table});
  std::vector<double> energies;
  table_energies(terms, energies, hc.n);

  const Eigen::Index dim = Eigen::Index{1} << hc.n;
  double emin = energies[0];
  for (double e : energies) emin = std::min(emin, e);

  Distribution d;
  d.n = hc.n;
  d.probs.resize(dim);
#pragma omp parallel for schedule(static)
  for (Eigen::Index x = 0; x < dim; ++x)
    d.probs(x) = std::exp(-(energies[static_cast<std::size_t>(x)] - emin));
  const double z_shifted = d.probs.sum();  // serial reduction, thread-count independent
  d.probs /= z_shifted;
  d.log_z = std::log(z_shifted) - emin;
  return d;
}

Eigen::VectorXd coherent_gibbs_state(const ClassicalHamiltonian& hc) {
  if (hc.n > kMaxDenseQubits)
    throw PreconditionError("coherent_gibbs_state: n > " + std::to_string(kMaxDenseQubits));
  const Distribution d = gibbs_distribution(hc);
  return d.probs.cwiseSqrt();
}

double total_variation(const Eigen::VectorXd& p, const Eigen::VectorXd& q) {
  if (p.size() != q.size()) throw PreconditionError("total_variation: length mismatch");
  return 0.5 * (p - q).cwiseAbs().sum();
}

double total_variation(const Distribution& p, const Distribution& q) {
  if (p.n != q.n) throw PreconditionError("total_variation: bit count mismatch");
  return total_variation(p.probs, q.probs);
}

Distribution marginal_leading(const Distribution& p, int n_visible) {
  if (n_visible < 0 || n_visible > p.n)
    throw PreconditionError("marginal_leading: bad visible count");
  const int m = p.n - n_visible;
  const Eigen::Index vis_dim = Eigen::Index{1} << n_visible;
  const Eigen::Index hid_dim = Eigen::Index{1} << m;
  Distribution out;
  out.n = n_visible;
  out.log_z = p.log_z;
  out.probs = Eigen::VectorXd::Zero(vis_dim);
  for (Eigen::Index v = 0; v < vis_dim; ++v)
    out.probs(v) = p.probs.segment(v * hid_dim, hid_dim).sum();
  return out;
}

}  // namespace stoqtherm
