#include "stoqtherm/boltzmann.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "stoqtherm/bits.hpp"
#include "stoqtherm/errors.hpp"

namespace stoqtherm {

namespace {

inline double softplus(double t) {
  return (t > 0.0) ? t + std::log1p(std::exp(-t)) : std::log1p(std::exp(t));
}

}  // namespace

int BoltzmannMachine::max_degree() const {
  std::vector<int> deg(static_cast<std::size_t>(nodes()), 0);
  for (const auto& e : edges) {
    ++deg[static_cast<std::size_t>(e.u)];
    ++deg[static_cast<std::size_t>(e.v)];
  }
  int k = 0;
  for (int d : deg) k = std::max(k, d);
  return k;
}

double BoltzmannMachine::energy(std::uint64_t y) const {
  const int total = nodes();
  double f = 0.0;
  for (int i = 0; i < total; ++i)
    f -= biases[static_cast<std::size_t>(i)] * bit_of(y, i, total);
  for (const auto& e : edges)
    f -= e.weight * bit_of(y, e.u, total) * bit_of(y, e.v, total);
  return f;
}

void BoltzmannMachine::validate() const {
  if (biases.size() != static_cast<std::size_t>(nodes()))
    throw PreconditionError("BoltzmannMachine: bias count mismatch");
  for (const auto& e : edges) {
    if (e.u < 0 || e.u >= nodes() || e.v < 0 || e.v >= nodes() || e.u == e.v)
      throw PreconditionError("BoltzmannMachine: bad edge");
  }
}

void DeepBoltzmannMachine::validate() const {
  if (W.rows() != a.size() || W.cols() != b.size())
    throw PreconditionError("DeepBoltzmannMachine: W dimension mismatch");
  if (U.rows() != b.size() || U.cols() != c.size())
    throw PreconditionError("DeepBoltzmannMachine: U dimension mismatch");
}

double IsingModel::energy_spins(std::uint64_t bits) const {
  const int total = static_cast<int>(fields.size());
  double h = 0.0;
  for (int i = 0; i < total; ++i)
    h -= fields[static_cast<std::size_t>(i)] * (bit_of(bits, i, total) - 0.5);
  for (const auto& e : edges)
    h -= e.weight * (bit_of(bits, e.u, total) - 0.5) * (bit_of(bits, e.v, total) - 0.5);
  return h;
}

// ---------------------------------------------------------------------------
// Le Roux-Bengio
// ---------------------------------------------------------------------------

DeepBoltzmannMachine rbm_from_distribution(const Distribution& pi, double eps) {
  const int k = pi.n;
  if (k > kMaxRbmDistributionBits)
    throw PreconditionError("rbm_from_distribution: k > " +
                            std::to_string(kMaxRbmDistributionBits));
  if (eps <= 0.0) throw PreconditionError("rbm_from_distribution: eps must be positive");
  const Eigen::Index dim = Eigen::Index{1} << k;
  if (pi.probs.minCoeff() <= 0.0)
    throw PreconditionError("rbm_from_distribution: zero-probability entry");

  const double lambda = pi.probs.minCoeff();
  const double ratio_max = pi.probs.maxCoeff() / lambda;
  const double eps_prime = std::pow(2.0, k - 1) * eps;
  const double cutoff = 1.0 + eps_prime / static_cast<double>(dim);

  std::vector<Eigen::Index> order(static_cast<std::size_t>(dim));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index l, Eigen::Index r) { return pi.probs(l) < pi.probs(r); });

  double a = 2.0 * std::log(8.0 * static_cast<double>(dim) * ratio_max * ratio_max / eps_prime);

  for (int attempt = 0; attempt < 30; ++attempt) {
    std::vector<Eigen::VectorXd> weights;
    std::vector<double> hidden_bias;
    for (Eigen::Index idx : order) {
      const double r = pi.probs(idx) / lambda;
      if (r < cutoff) continue;
      Eigen::VectorXd w(k);
      double wx = 0.0;
      for (int bpos = 0; bpos < k; ++bpos) {
        const int bit = bit_of(static_cast<std::uint64_t>(idx), bpos, k);
        w(bpos) = a * (bit - 0.5);
        wx += w(bpos) * bit;
      }
      weights.push_back(w);
      hidden_bias.push_back(-wx + std::log(r - 1.0));
    }

    DeepBoltzmannMachine rbm;
    rbm.a = Eigen::VectorXd::Zero(k);
    rbm.b = Eigen::Map<Eigen::VectorXd>(hidden_bias.data(),
                                        static_cast<Eigen::Index>(hidden_bias.size()));
    rbm.c = Eigen::VectorXd(0);
    rbm.W.resize(k, static_cast<Eigen::Index>(weights.size()));
    for (Eigen::Index j = 0; j < rbm.W.cols(); ++j)
      rbm.W.col(j) = weights[static_cast<std::size_t>(j)];
    rbm.U.resize(static_cast<Eigen::Index>(weights.size()), 0);

    const Distribution d = dbm_distribution(rbm);
    if (total_variation(d.probs, pi.probs) <= eps) return rbm;
    a *= 2.0;
  }
  throw PreconditionError("rbm_from_distribution: target precision unreachable");
}

// ---------------------------------------------------------------------------
// DBM evaluation
// ---------------------------------------------------------------------------

double dbm_log_output(const DeepBoltzmannMachine& dbm, std::uint64_t x) {
  const int n = dbm.n();
  const int mid = dbm.middle();
  const int d = dbm.deep();
  if (d > kMaxDeepBruteForce)
    throw PreconditionError("dbm_log_output: deep layer > " +
                            std::to_string(kMaxDeepBruteForce));

  double ax = 0.0;
  Eigen::VectorXd xw = Eigen::VectorXd::Zero(mid);  // x^T W + b
  for (int i = 0; i < n; ++i) {
    if (!bit_of(x, i, n)) continue;
    ax += dbm.a(i);
    xw += dbm.W.row(i).transpose();
  }
  xw += dbm.b;

  if (d == 0) {
    double sum = 0.0;
    for (int j = 0; j < mid; ++j) sum += softplus(xw(j));
    return ax + sum;
  }

  const std::uint64_t deep_dim = std::uint64_t{1} << d;
  double best = -std::numeric_limits<double>::infinity();
  std::vector<double> logs(deep_dim);
  for (std::uint64_t hd = 0; hd < deep_dim; ++hd) {
    double term = 0.0;
    Eigen::VectorXd t = xw;
    for (int q = 0; q < d; ++q) {
      if (!bit_of(hd, q, d)) continue;
      term += dbm.c(q);
      t += dbm.U.col(q);
    }
    for (int j = 0; j < mid; ++j) term += softplus(t(j));
    logs[hd] = term;
    best = std::max(best, term);
  }
  double acc = 0.0;
  for (double v : logs) acc += std::exp(v - best);
  return ax + best + std::log(acc);
}

double dbm_output(const DeepBoltzmannMachine& dbm, std::uint64_t x) {
  return std::exp(dbm_log_output(dbm, x));
}

Distribution dbm_distribution(const DeepBoltzmannMachine& dbm) {
  const int n = dbm.n();
  if (n > kMaxDenseQubits)
    throw PreconditionError("dbm_distribution: n > " + std::to_string(kMaxDenseQubits));
  const Eigen::Index dim = Eigen::Index{1} << n;
  Eigen::VectorXd logf(dim);
#pragma omp parallel for schedule(static)
  for (Eigen::Index x = 0; x < dim; ++x)
    logf(x) = dbm_log_output(dbm, static_cast<std::uint64_t>(x));
  const double top = logf.maxCoeff();
  Distribution d;
  d.n = n;
  d.probs = (logf.array() - top).exp();
  const double total = d.probs.sum();
  d.probs /= total;
  d.log_z = top + std::log(total);
  return d;
}

// ---------------------------------------------------------------------------
// HBM -> DBM
// ---------------------------------------------------------------------------

namespace {

Distribution edge_distribution(const HbmEdge& e) {
  Distribution pi;
  pi.n = static_cast<int>(e.nodes.size());
  const Eigen::Index dim = Eigen::Index{1} << pi.n;
  pi.probs.resize(dim);
  double lo = e.table[0];
  for (double v : e.table) lo = std::min(lo, v);
  for (Eigen::Index t = 0; t < dim; ++t)
    pi.probs(t) = std::exp(-(e.table[static_cast<std::size_t>(t)] - lo));
  const double z = pi.probs.sum();
  pi.probs /= z;
  pi.log_z = std::log(z) - lo;

  // Entries that underflowed to zero are clamped and folded back into the
  // normalization; the lemma needs min pi > 0.
  const double positive_min = [&] {
    double m = 1.0;
    for (Eigen::Index t = 0; t < dim; ++t)
      if (pi.probs(t) > 0.0) m = std::min(m, pi.probs(t));
    return m;
  }();
  bool clamped = false;
  for (Eigen::Index t = 0; t < dim; ++t) {
    if (pi.probs(t) <= 0.0) {
      pi.probs(t) = 1e-9 * positive_min;
      clamped = true;
    }
  }
  if (clamped) pi.probs /= pi.probs.sum();
  return pi;
}

}  // namespace

DeepBoltzmannMachine hbm_to_dbm(const HyperBoltzmannMachine& hbm, double delta) {
  hbm.validate();
  if (delta <= 0.0) throw PreconditionError("hbm_to_dbm: delta must be positive");
  const int n = hbm.n();
  const int m = hbm.m();
  const std::size_t T = hbm.hyperedges.size();

  std::vector<Distribution> pis;
  pis.reserve(T);
  double lambda = 1.0;
  for (const auto& e : hbm.hyperedges) {
    pis.push_back(edge_distribution(e));
    lambda = std::min(lambda, pis.back().probs.minCoeff());
  }

  // Node id -> layer position.
  std::vector<int> vis_ids = hbm.visible;
  std::vector<int> hid_ids = hbm.hidden;
  auto visible_pos = [&](int id) {
    auto it = std::find(vis_ids.begin(), vis_ids.end(), id);
    return (it == vis_ids.end()) ? -1 : static_cast<int>(it - vis_ids.begin());
  };
  auto hidden_pos = [&](int id) {
    auto it = std::find(hid_ids.begin(), hid_ids.end(), id);
    return (it == hid_ids.end()) ? -1 : static_cast<int>(it - hid_ids.begin());
  };

  double eps_edge = (T > 0) ? lambda * delta / (4.0 * static_cast<double>(T)) : delta;

  for (int attempt = 0; attempt < 8; ++attempt) {
    std::vector<Eigen::VectorXd> w_cols;   // middle-node weights into visible layer
    std::vector<Eigen::VectorXd> u_cols;   // middle-node weights into deep layer
    std::vector<double> mid_bias;

    for (std::size_t ei = 0; ei < T; ++ei) {
      const auto& edge = hbm.hyperedges[ei];
      const DeepBoltzmannMachine rbm_e = rbm_from_distribution(pis[ei], eps_edge);
      for (Eigen::Index j = 0; j < rbm_e.W.cols(); ++j) {
        Eigen::VectorXd wc = Eigen::VectorXd::Zero(n);
        Eigen::VectorXd uc = Eigen::VectorXd::Zero(m);
        for (int p = 0; p < static_cast<int>(edge.nodes.size()); ++p) {
          const int id = edge.nodes[static_cast<std::size_t>(p)];
          const int vp = visible_pos(id);
          if (vp >= 0)
            wc(vp) = rbm_e.W(p, j);
          else
            uc(hidden_pos(id)) = rbm_e.W(p, j);
        }
        w_cols.push_back(std::move(wc));
        u_cols.push_back(std::move(uc));
        mid_bias.push_back(rbm_e.b(j));
      }
    }

    DeepBoltzmannMachine dbm;
    dbm.a = Eigen::VectorXd::Zero(n);
    dbm.c = Eigen::VectorXd::Zero(m);
    dbm.b = Eigen::Map<Eigen::VectorXd>(mid_bias.data(),
                                        static_cast<Eigen::Index>(mid_bias.size()));
    dbm.W.resize(n, static_cast<Eigen::Index>(w_cols.size()));
    dbm.U.resize(static_cast<Eigen::Index>(u_cols.size()), m);
    for (Eigen::Index j = 0; j < dbm.W.cols(); ++j) {
      dbm.W.col(j) = w_cols[static_cast<std::size_t>(j)];
      dbm.U.row(j) = u_cols[static_cast<std::size_t>(j)].transpose();
    }

    // Verify against the HBM when the brute-force paths are in reach;
    // otherwise the construction stands on the per-edge budget.
    if (n > kMaxDenseQubits || m > kMaxHiddenBruteForce || m > kMaxDeepBruteForce) return dbm;
    const double tv = total_variation(dbm_distribution(dbm), distribution(hbm));
    if (tv <= delta) return dbm;
    eps_edge *= 0.5;
  }
  throw PreconditionError(
      "hbm_to_dbm: could not reach delta; required weight magnitude about " +
      std::to_string(2.0 * std::log(8.0 * std::pow(2.0, hbm.max_edge_size()) /
                                    (lambda * lambda * eps_edge))));
}

// ---------------------------------------------------------------------------
// Ising equivalence
// ---------------------------------------------------------------------------

IsingModel bm_to_ising(const BoltzmannMachine& bm, double* offset) {
  bm.validate();
  IsingModel ising;
  ising.fields = bm.biases;
  ising.edges = bm.edges;
  for (const auto& e : bm.edges) {
    ising.fields[static_cast<std::size_t>(e.u)] += 0.5 * e.weight;
    ising.fields[static_cast<std::size_t>(e.v)] += 0.5 * e.weight;
  }
  for (int h = 0; h < bm.n_hidden; ++h) ising.hidden_spins.push_back(bm.n_visible + h);
  if (offset) {
    double c = 0.0;
    for (double bias : bm.biases) c += 0.5 * bias;
    for (const auto& e : bm.edges) c += 0.25 * e.weight;
    *offset = -c;  // F_bm(y) = H_ising(s(y)) + offset
  }
  return ising;
}

BoltzmannMachine ising_to_bm(const IsingModel& ising) {
  BoltzmannMachine bm;
  const int total = static_cast<int>(ising.fields.size());
  bm.n_hidden = static_cast<int>(ising.hidden_spins.size());
  bm.n_visible = total - bm.n_hidden;
  bm.biases = ising.fields;
  bm.edges = ising.edges;
  for (const auto& e : ising.edges) {
    bm.biases[static_cast<std::size_t>(e.u)] -= 0.5 * e.weight;
    bm.biases[static_cast<std::size_t>(e.v)] -= 0.5 * e.weight;
  }
  return bm;
}

// ---------------------------------------------------------------------------
// Views
// ---------------------------------------------------------------------------

HyperBoltzmannMachine as_hbm(const BoltzmannMachine& bm) {
  bm.validate();
  HyperBoltzmannMachine hbm;
  for (int i = 0; i < bm.n_visible; ++i) hbm.visible.push_back(i);
  for (int h = 0; h < bm.n_hidden; ++h) hbm.hidden.push_back(bm.n_visible + h);
  for (int i = 0; i < bm.nodes(); ++i)
    hbm.hyperedges.push_back({{i}, {0.0, -bm.biases[static_cast<std::size_t>(i)]}});
  for (const auto& e : bm.edges)
    hbm.hyperedges.push_back({{e.u, e.v}, {0.0, 0.0, 0.0, -e.weight}});
  return hbm;
}

BoltzmannMachine as_bm(const DeepBoltzmannMachine& dbm) {
  dbm.validate();
  BoltzmannMachine bm;
  bm.n_visible = dbm.n();
  bm.n_hidden = dbm.middle() + dbm.deep();
  bm.biases.resize(static_cast<std::size_t>(bm.nodes()));
  for (int i = 0; i < dbm.n(); ++i) bm.biases[static_cast<std::size_t>(i)] = dbm.a(i);
  for (int j = 0; j < dbm.middle(); ++j)
    bm.biases[static_cast<std::size_t>(dbm.n() + j)] = dbm.b(j);
  for (int q = 0; q < dbm.deep(); ++q)
    bm.biases[static_cast<std::size_t>(dbm.n() + dbm.middle() + q)] = dbm.c(q);
  for (int i = 0; i < dbm.n(); ++i)
    for (int j = 0; j < dbm.middle(); ++j)
      if (dbm.W(i, j) != 0.0) bm.edges.push_back({i, dbm.n() + j, dbm.W(i, j)});
  for (int j = 0; j < dbm.middle(); ++j)
    for (int q = 0; q < dbm.deep(); ++q)
      if (dbm.U(j, q) != 0.0)
        bm.edges.push_back({dbm.n() + j, dbm.n() + dbm.middle() + q, dbm.U(j, q)});
  return bm;
}

Distribution bm_joint_distribution(const BoltzmannMachine& bm) {
  bm.validate();
  const int total = bm.nodes();
  if (total > kMaxGibbsBits)
    throw PreconditionError("bm_joint_distribution: too many nodes");
  const Eigen::Index dim = Eigen::Index{1} << total;
  Eigen::VectorXd energies(dim);
  for (Eigen::Index y = 0; y < dim; ++y)
    energies(y) = bm.energy(static_cast<std::uint64_t>(y));
  const double emin = energies.minCoeff();
  Distribution d;
  d.n = total;
  d.probs = (-(energies.array() - emin)).exp();
  const double z = d.probs.sum();
  d.probs /= z;
  d.log_z = std::log(z) - emin;
  return d;
}

}  // namespace stoqtherm
