#include "stoqtherm/pseq.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "stoqtherm/errors.hpp"
#include "stoqtherm/kernels.hpp"

namespace stoqtherm {

void PSequence::validate() const {
  for (const auto& f : factors) {
    if (f.matrix.minCoeff() < alpha * (1.0 - 1e-12))
      throw PreconditionError("PSequence: factor entry below alpha floor");
  }
}

Eigen::MatrixXd expm_symmetric(const Eigen::MatrixXd& m, double t) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
  return es.eigenvectors() * (t * es.eigenvalues().array()).exp().matrix().asDiagonal() *
         es.eigenvectors().transpose();
}

Eigen::VectorXd apply_sequence(const PSequence& p, const Eigen::VectorXd& start,
                               double* log_sqrt_z) {
  if (start.size() != (Eigen::Index{1} << p.n))
    throw PreconditionError("apply_sequence: start dimension mismatch");
  Eigen::VectorXd v = start;
  Eigen::VectorXd tmp;
  double log_norm = 0.0;
  for (const auto& f : p.factors) {
    apply_local(f.support, f.matrix, v, tmp, p.n);
    const double nrm = tmp.norm();
    if (!(nrm > 0.0))
      throw PreconditionError("apply_sequence: state collapsed to zero");
    v = tmp / nrm;
    log_norm += std::log(nrm);
  }
  if (log_sqrt_z) *log_sqrt_z = log_norm;
  return v;
}

Eigen::VectorXd apply_sequence(const PSequence& p, double* log_sqrt_z) {
  return apply_sequence(p, plus_state(p.n), log_sqrt_z);
}

namespace {

// Terms shifted by their own minimum eigenvalue: stoquastic and PSD, with
// the leftover scalar offset absorbed by normalization.
std::vector<LocalTerm> shifted_terms(const LocalHamiltonian& h) {
  std::vector<LocalTerm> out = h.terms;
  for (auto& t : out) {
    const double lmin = term_min_eigenvalue(t);
    t.matrix.diagonal().array() -= lmin;
  }
  return out;
}

double measure_error(const PSequence& seq, const GroundSpaceReport& oracle) {
  const Eigen::VectorXd v = apply_sequence(seq);
  return (v - oracle.psi0).norm();
}

double log_inverse(double eta, double eps) {
  return std::max(1.0, std::log(1.0 / (eta * eps)));
}

}  // namespace

std::pair<PSequence, ConvergenceReport> trotter_sequence(const LocalHamiltonian& h, double eps,
                                                         const GroundSpaceReport& oracle) {
  if (!is_stoquastic(h)) throw PreconditionError("trotter_sequence: input not stoquastic");
  if (!oracle.psi0_defined || oracle.eta <= 0.0)
    throw PreconditionError("trotter_sequence: zero overlap with |+>");
  if (oracle.gap <= 0.0) throw PreconditionError("trotter_sequence: gapless input");
  if (eps <= 0.0) throw PreconditionError("trotter_sequence: eps must be positive");

  const auto terms = shifted_terms(h);
  const std::size_t num_terms = terms.size();
  const double L = static_cast<double>(std::max<std::size_t>(num_terms, 1));
  double J = 0.0;
  for (const auto& t : terms) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(t.matrix, Eigen::EigenvaluesOnly);
    J = std::max(J, es.eigenvalues().cwiseAbs().maxCoeff());
  }
  J = std::max(J, 1e-12);

  const double eta = oracle.eta;
  const double gap = oracle.gap;
  const double lg = log_inverse(eta, eps);
  const double tau = std::log(2.0 / (eta * eps)) / gap;

  // Initial guesses from the scaling analysis, constant 1.
  double delta = std::sqrt(eta) * std::pow(L, -1.5) * std::pow(J, -1.5) * std::sqrt(gap) *
                 std::sqrt(eps) / std::sqrt(lg);
  delta = std::min(delta, tau);

  PSequence best;
  ConvergenceReport report;
  report.target_eps = eps;
  double best_err = -1.0;

  for (int round = 1; round <= kMaxRefinementRounds; ++round) {
    const int reps = static_cast<int>(std::ceil(tau / delta));
    const std::size_t total = 2 * static_cast<std::size_t>(reps) * num_terms;
    const double alpha =
        (total > 0) ? eta * eps / (10.0 * static_cast<double>(total)) : eta * eps / 10.0;

    PSequence seq;
    seq.n = h.n;
    seq.alpha = alpha;
    seq.meta = {delta, reps, eps};
    std::vector<PFactor> block(num_terms);
    for (std::size_t j = 0; j < num_terms; ++j) {
      block[j].support = terms[j].support;
      block[j].matrix = expm_symmetric(terms[j].matrix, -0.5 * delta);
      block[j].matrix.array() += alpha;
    }
    seq.factors.reserve(total);
    for (int r = 0; r < reps; ++r) {
      for (std::size_t j = num_terms; j-- > 0;) seq.factors.push_back(block[j]);
      for (std::size_t j = 0; j < num_terms; ++j) seq.factors.push_back(block[j]);
    }

    const double err = measure_error(seq, oracle);
    if (best_err < 0.0 || err < best_err) {
      best = std::move(seq);
      best_err = err;
    }
    report.iterations_used = round;
    if (best_err <= eps) break;
    delta *= 0.5;
  }
  report.l2_error = best_err;
  return {std::move(best), report};
}

std::pair<PSequence, ConvergenceReport> sff_sequence(const LocalHamiltonian& h, double eps,
                                                     const GroundSpaceReport& oracle) {
  if (!is_stoquastic(h)) throw PreconditionError("sff_sequence: input not stoquastic");
  if (oracle.gap <= 0.0) throw PreconditionError("sff_sequence: gapless input");
  if (eps <= 0.0) throw PreconditionError("sff_sequence: eps must be positive");
  if (!is_frustration_free(h, oracle))
    throw PreconditionError("sff_sequence: input not frustration-free");

  const std::size_t num_terms = h.terms.size();
  const double L = static_cast<double>(std::max<std::size_t>(num_terms, 1));
  const double J = std::max(h.max_term_norm(), 1e-12);
  const double eta = std::max(oracle.eta, std::pow(2.0, -0.5 * h.n));
  const double lg = log_inverse(eta, eps);

  // Per-term ground projectors (nonnegative entries for stoquastic terms).
  std::vector<PFactor> projectors(num_terms);
  for (std::size_t j = 0; j < num_terms; ++j) {
    const auto& t = h.terms[j];
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(t.matrix);
    const Eigen::VectorXd& ev = es.eigenvalues();
    const double tol = kDefaultDegeneracyTol * std::max(1.0, std::abs(ev(0)));
    Eigen::Index gdim = 1;
    while (gdim < ev.size() && ev(gdim) <= ev(0) + tol) ++gdim;
    const Eigen::MatrixXd basis = es.eigenvectors().leftCols(gdim);
    projectors[j].support = t.support;
    projectors[j].matrix = basis * basis.transpose();
  }

  int reps = static_cast<int>(std::ceil(L * L * J / oracle.gap * lg));
  reps = std::max(reps, 1);

  PSequence best;
  ConvergenceReport report;
  report.target_eps = eps;
  double best_err = -1.0;

  for (int round = 1; round <= kMaxRefinementRounds; ++round) {
    const std::size_t total = static_cast<std::size_t>(reps) * num_terms;
    const double alpha =
        (total > 0) ? eta * eps / (10.0 * static_cast<double>(total)) : eta * eps / 10.0;

    PSequence seq;
    seq.n = h.n;
    seq.alpha = alpha;
    seq.meta = {0.0, reps, eps};
    seq.factors.reserve(total);
    for (int r = 0; r < reps; ++r) {
      for (std::size_t j = 0; j < num_terms; ++j) {
        PFactor f = projectors[j];
        f.matrix.array() += alpha;
        seq.factors.push_back(std::move(f));
      }
    }

    const double err = measure_error(seq, oracle);
    if (best_err < 0.0 || err < best_err) {
      best = std::move(seq);
      best_err = err;
    }
    report.iterations_used = round;
    if (best_err <= eps) break;
    reps *= 2;
  }
  report.l2_error = best_err;
  return {std::move(best), report};
}

std::vector<std::pair<double, double>> trotter_error_probe(const LocalHamiltonian& h,
                                                           const std::vector<double>& deltas) {
  if (h.n > 10) throw PreconditionError("trotter_error_probe: n > 10");
  const Eigen::Index dim = Eigen::Index{1} << h.n;
  const Eigen::MatrixXd full = assemble_dense(h);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(full);

  std::vector<std::pair<double, double>> out;
  out.reserve(deltas.size());
  for (double delta : deltas) {
    const Eigen::MatrixXd exact = es.eigenvectors() *
                                  (-delta * es.eigenvalues().array()).exp().matrix().asDiagonal() *
                                  es.eigenvectors().transpose();
    Eigen::MatrixXd prod = Eigen::MatrixXd::Identity(dim, dim);
    // palindrome e^{-d/2 H_L} ... e^{-d/2 H_1} e^{-d/2 H_1} ... e^{-d/2 H_L},
    // rightmost factor applied first
    auto apply_step = [&](const LocalTerm& t) {
      Eigen::MatrixXd step = Eigen::MatrixXd::Zero(dim, dim);
      embed_dense_add(t.support, expm_symmetric(t.matrix, -0.5 * delta), step, h.n);
      prod = step * prod;
    };
    for (std::size_t j = h.terms.size(); j-- > 0;) apply_step(h.terms[j]);
    for (std::size_t j = 0; j < h.terms.size(); ++j) apply_step(h.terms[j]);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> diff(prod - exact, Eigen::EigenvaluesOnly);
    out.emplace_back(delta, diff.eigenvalues().cwiseAbs().maxCoeff());
  }
  return out;
}

}  // namespace stoqtherm
