#include "stoqtherm/hbm.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

#include "stoqtherm/bits.hpp"
#include "stoqtherm/errors.hpp"

namespace stoqtherm {

int HyperBoltzmannMachine::max_edge_size() const {
  std::size_t k = 0;
  for (const auto& e : hyperedges) k = std::max(k, e.nodes.size());
  return static_cast<int>(k);
}

int HyperBoltzmannMachine::max_edges_per_node() const {
  std::map<int, int> count;
  for (const auto& e : hyperedges)
    for (int id : e.nodes) ++count[id];
  int k = 0;
  for (const auto& [id, c] : count) k = std::max(k, c);
  return k;
}

void HyperBoltzmannMachine::validate() const {
  std::map<int, int> role;  // 0 visible, 1 hidden
  for (int id : visible) {
    if (!role.emplace(id, 0).second)
      throw PreconditionError("HBM: duplicate node id " + std::to_string(id));
  }
  for (int id : hidden) {
    if (!role.emplace(id, 1).second)
      throw PreconditionError("HBM: duplicate node id " + std::to_string(id));
  }
  for (const auto& e : hyperedges) {
    if (e.table.size() != (std::size_t{1} << e.nodes.size()))
      throw PreconditionError("HBM: table length mismatch");
    std::vector<int> seen;
    for (int id : e.nodes) {
      if (!role.count(id)) throw PreconditionError("HBM: edge references unknown node");
      if (std::find(seen.begin(), seen.end(), id) != seen.end())
        throw PreconditionError("HBM: repeated node in hyperedge");
      seen.push_back(id);
    }
    for (double v : e.table)
      if (!std::isfinite(v)) throw PreconditionError("HBM: non-finite energy");
  }
}

HyperBoltzmannMachine empty_hbm(int n) {
  HyperBoltzmannMachine hbm;
  hbm.visible.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) hbm.visible[static_cast<std::size_t>(i)] = i;
  return hbm;
}

namespace {

// Node id -> (is_hidden, position within visible-qubit order or hidden list).
struct NodeIndex {
  std::map<int, std::pair<bool, int>> pos;

  explicit NodeIndex(const HyperBoltzmannMachine& hbm) {
    for (int i = 0; i < hbm.n(); ++i) pos[hbm.visible[static_cast<std::size_t>(i)]] = {false, i};
    for (int j = 0; j < hbm.m(); ++j) pos[hbm.hidden[static_cast<std::size_t>(j)]] = {true, j};
  }
};

double edge_table_min(const HbmEdge& e) {
  double lo = e.table[0];
  for (double v : e.table) lo = std::min(lo, v);
  return lo;
}

// Total energy of one edge for a full (x, h) assignment.
inline double edge_energy(const HbmEdge& e, const NodeIndex& idx, std::uint64_t x, int n,
                          std::uint64_t h, int m) {
  const int s = static_cast<int>(e.nodes.size());
  std::uint64_t t = 0;
  for (int i = 0; i < s; ++i) {
    const auto& [is_hidden, p] = idx.pos.at(e.nodes[static_cast<std::size_t>(i)]);
    const int bit = is_hidden ? bit_of(h, p, m) : bit_of(x, p, n);
    t = (t << 1) | static_cast<std::uint64_t>(bit);
  }
  return e.table[t];
}

double evaluate_with(const HyperBoltzmannMachine& hbm, const NodeIndex& idx, std::uint64_t x,
                     double shift) {
  const int n = hbm.n();
  const int m = hbm.m();
  const std::uint64_t hdim = std::uint64_t{1} << m;
  double sum = 0.0;
  for (std::uint64_t h = 0; h < hdim; ++h) {
    double f = 0.0;
    for (const auto& e : hbm.hyperedges) f += edge_energy(e, idx, x, n, h, m);
    sum += std::exp(-(f - shift));
  }
  return sum;
}

}  // namespace

double evaluate_log_scale(const HyperBoltzmannMachine& hbm) {
  double shift = 0.0;
  for (const auto& e : hbm.hyperedges) shift += edge_table_min(e);
  return -shift;
}

double evaluate(const HyperBoltzmannMachine& hbm, std::uint64_t x) {
  if (hbm.m() > kMaxHiddenBruteForce)
    throw PreconditionError("evaluate: hidden count > " +
                            std::to_string(kMaxHiddenBruteForce) + " on the brute-force path");
  const NodeIndex idx(hbm);
  return evaluate_with(hbm, idx, x, -evaluate_log_scale(hbm));
}

Distribution distribution(const HyperBoltzmannMachine& hbm) {
  const int n = hbm.n();
  if (n > kMaxDenseQubits)
    throw PreconditionError("distribution: n > " + std::to_string(kMaxDenseQubits));
  if (hbm.m() > kMaxHiddenBruteForce)
    throw PreconditionError("distribution: hidden count > " +
                            std::to_string(kMaxHiddenBruteForce));
  const NodeIndex idx(hbm);
  const double shift = -evaluate_log_scale(hbm);
  const Eigen::Index dim = Eigen::Index{1} << n;
  Distribution d;
  d.n = n;
  d.probs.resize(dim);
#pragma omp parallel for schedule(static)
  for (Eigen::Index x = 0; x < dim; ++x)
    d.probs(x) = evaluate_with(hbm, idx, static_cast<std::uint64_t>(x), shift);
  const double total = d.probs.sum();
  if (!(total > 0.0)) throw PreconditionError("distribution: vanishing HBM output");
  d.probs /= total;
  d.log_z = std::log(total) + evaluate_log_scale(hbm);
  return d;
}

HyperBoltzmannMachine apply_p(const HyperBoltzmannMachine& hbm, const PFactor& factor) {
  const int k = static_cast<int>(factor.support.size());
  if (factor.matrix.minCoeff() <= 0.0)
    throw PreconditionError("apply_p: factor matrix has a nonpositive entry");
  for (int q : factor.support)
    if (q < 0 || q >= hbm.n()) throw PreconditionError("apply_p: support outside visible nodes");

  HyperBoltzmannMachine out = hbm;
  int next_id = 0;
  for (int id : out.visible) next_id = std::max(next_id, id + 1);
  for (int id : out.hidden) next_id = std::max(next_id, id + 1);

  // Demote the support's visible nodes, keeping their edges intact.
  std::vector<int> demoted(static_cast<std::size_t>(k));
  std::vector<int> fresh(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) {
    const int q = factor.support[static_cast<std::size_t>(i)];
    demoted[static_cast<std::size_t>(i)] = out.visible[static_cast<std::size_t>(q)];
    fresh[static_cast<std::size_t>(i)] = next_id++;
    out.visible[static_cast<std::size_t>(q)] = fresh[static_cast<std::size_t>(i)];
  }
  out.hidden.insert(out.hidden.end(), demoted.begin(), demoted.end());

  // New hyperedge on (x', h') with table -log <x'|P|h'>.
  HbmEdge e;
  e.nodes = fresh;
  e.nodes.insert(e.nodes.end(), demoted.begin(), demoted.end());
  e.table.resize(std::size_t{1} << (2 * k));
  const std::uint64_t subdim = std::uint64_t{1} << k;
  for (std::uint64_t xp = 0; xp < subdim; ++xp)
    for (std::uint64_t hp = 0; hp < subdim; ++hp)
      e.table[(xp << k) | hp] = -std::log(
          factor.matrix(static_cast<Eigen::Index>(xp), static_cast<Eigen::Index>(hp)));
  out.hyperedges.push_back(std::move(e));
  return out;
}

HyperBoltzmannMachine canonicalized(const HyperBoltzmannMachine& hbm) {
  std::map<int, int> remap;
  for (int i = 0; i < hbm.n(); ++i) remap[hbm.visible[static_cast<std::size_t>(i)]] = i;
  for (int j = 0; j < hbm.m(); ++j)
    remap[hbm.hidden[static_cast<std::size_t>(j)]] = hbm.n() + j;
  HyperBoltzmannMachine out = hbm;
  for (int i = 0; i < out.n(); ++i) out.visible[static_cast<std::size_t>(i)] = i;
  for (int j = 0; j < out.m(); ++j) out.hidden[static_cast<std::size_t>(j)] = out.n() + j;
  for (auto& e : out.hyperedges)
    for (int& id : e.nodes) id = remap.at(id);
  return out;
}

HyperBoltzmannMachine build_from_sequence(const PSequence& p) {
  HyperBoltzmannMachine hbm = empty_hbm(p.n);
  for (const auto& f : p.factors) hbm = apply_p(hbm, f);
  return canonicalized(hbm);
}

HyperBoltzmannMachine square(const HyperBoltzmannMachine& hbm) {
  HyperBoltzmannMachine out = hbm;
  int next_id = 0;
  for (int id : out.visible) next_id = std::max(next_id, id + 1);
  for (int id : out.hidden) next_id = std::max(next_id, id + 1);

  std::map<int, int> duplicate;
  for (int id : hbm.hidden) {
    duplicate[id] = next_id;
    out.hidden.push_back(next_id++);
  }
  // Every hyperedge is copied; copies reference the duplicated hidden nodes
  // so visible-only edges contribute twice (their energy doubles), which is
  // exactly what squaring the output requires.
  const std::size_t original_edges = hbm.hyperedges.size();
  for (std::size_t i = 0; i < original_edges; ++i) {
    HbmEdge copy = hbm.hyperedges[i];
    for (int& id : copy.nodes) {
      auto it = duplicate.find(id);
      if (it != duplicate.end()) id = it->second;
    }
    out.hyperedges.push_back(std::move(copy));
  }
  return out;
}

namespace {

// Reindex a table from the edge's node order to sorted-bit order.
std::vector<double> permute_table(const std::vector<double>& table,
                                  const std::vector<int>& bits) {
  const int s = static_cast<int>(bits.size());
  std::vector<int> order(static_cast<std::size_t>(s));
  for (int i = 0; i < s; ++i) order[static_cast<std::size_t>(i)] = i;
  std::sort(order.begin(), order.end(),
            [&](int a, int b) { return bits[static_cast<std::size_t>(a)] < bits[static_cast<std::size_t>(b)]; });
  // rank[i] = position of node i within the sorted support
  std::vector<int> rank(static_cast<std::size_t>(s));
  for (int r = 0; r < s; ++r) rank[static_cast<std::size_t>(order[static_cast<std::size_t>(r)])] = r;

  std::vector<double> out(table.size());
  for (std::uint64_t t = 0; t < table.size(); ++t) {
    std::uint64_t tp = 0;
    for (int i = 0; i < s; ++i) {
      const std::uint64_t bit = (t >> (s - 1 - i)) & 1u;
      tp |= bit << (s - 1 - rank[static_cast<std::size_t>(i)]);
    }
    out[tp] = table[t];
  }
  return out;
}

}  // namespace

std::pair<ClassicalHamiltonian, std::vector<int>> to_classical(
    const HyperBoltzmannMachine& hbm) {
  hbm.validate();
  const NodeIndex idx(hbm);
  const int n = hbm.n();
  ClassicalHamiltonian hc;
  hc.n = n + hbm.m();
  for (const auto& e : hbm.hyperedges) {
    std::vector<int> bits;
    bits.reserve(e.nodes.size());
    for (int id : e.nodes) {
      const auto& [is_hidden, p] = idx.pos.at(id);
      bits.push_back(is_hidden ? n + p : p);
    }
    ClassicalTerm term;
    term.table = permute_table(e.table, bits);
    term.support = bits;
    std::sort(term.support.begin(), term.support.end());
    hc.terms.push_back(std::move(term));
  }
  std::vector<int> visible_bits(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) visible_bits[static_cast<std::size_t>(i)] = i;
  return {std::move(hc), std::move(visible_bits)};
}

HyperBoltzmannMachine from_classical(const ClassicalHamiltonian& hc) {
  hc.validate();
  HyperBoltzmannMachine hbm = empty_hbm(hc.n);
  for (const auto& t : hc.terms) hbm.hyperedges.push_back({t.support, t.table});
  return hbm;
}

namespace {

Eigen::VectorXd output_vector(const HyperBoltzmannMachine& hbm) {
  const int n = hbm.n();
  if (n > kMaxDenseQubits)
    throw PreconditionError("hbm output: n > " + std::to_string(kMaxDenseQubits));
  const NodeIndex idx(hbm);
  const double shift = -evaluate_log_scale(hbm);
  const Eigen::Index dim = Eigen::Index{1} << n;
  Eigen::VectorXd f(dim);
#pragma omp parallel for schedule(static)
  for (Eigen::Index x = 0; x < dim; ++x)
    f(x) = evaluate_with(hbm, idx, static_cast<std::uint64_t>(x), shift);
  return f;
}

}  // namespace

double wavefunction_distance(const HyperBoltzmannMachine& hbm, const Eigen::VectorXd& psi) {
  if (psi.minCoeff() < -1e-12)
    throw PreconditionError(
        "wavefunction_distance: psi has negative entries; metric inapplicable");
  const Eigen::VectorXd f = output_vector(hbm);
  if (f.size() != psi.size()) throw PreconditionError("wavefunction_distance: size mismatch");
  return (f / f.norm() - psi).norm();
}

double distribution_distance(const HyperBoltzmannMachine& hbm, const Eigen::VectorXd& psi) {
  const Eigen::VectorXd f = output_vector(hbm);
  if (f.size() != psi.size()) throw PreconditionError("distribution_distance: size mismatch");
  return total_variation(Eigen::VectorXd(f / f.sum()),
                         Eigen::VectorXd(psi.cwiseProduct(psi)));
}

Distribution chain_distribution(const PSequence& p) {
  double log_sqrt_z = 0.0;
  const Eigen::VectorXd amps = apply_sequence(p, &log_sqrt_z);
  Distribution d;
  d.n = p.n;
  d.probs = amps.cwiseProduct(amps);
  d.probs /= d.probs.sum();  // amps is unit norm; renormalize away rounding
  d.log_z = 2.0 * log_sqrt_z;
  return d;
}

}  // namespace stoqtherm
