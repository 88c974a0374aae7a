#include "stoqtherm/samplers.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "stoqtherm/bits.hpp"
#include "stoqtherm/errors.hpp"

namespace stoqtherm {

void ChainConfig::validate() const {
  if (burn_in < 0 || steps <= 0 || chains < 1 || thin < 1)
    throw PreconditionError("ChainConfig: burn_in >= 0, steps/chains/thin >= 1 required");
}

Distribution SampleReport::empirical() const {
  Distribution d;
  d.n = n_visible;
  const Eigen::Index dim = Eigen::Index{1} << n_visible;
  d.probs = Eigen::VectorXd::Zero(dim);
  for (std::uint64_t s : samples) d.probs(static_cast<Eigen::Index>(s)) += 1.0;
  d.probs /= static_cast<double>(samples.size());
  return d;
}

double tv_diagnostic(const std::vector<std::uint64_t>& samples, int n_visible,
                     const Distribution& exact) {
  if (n_visible != exact.n)
    throw PreconditionError("tv_diagnostic: sample width does not match exact distribution");
  if (exact.n > kMaxDenseQubits)
    throw PreconditionError("tv_diagnostic: exact side limited to n <= 14");
  SampleReport tmp;
  tmp.n_visible = n_visible;
  tmp.samples = samples;
  return total_variation(tmp.empirical(), exact);
}

namespace {

// Per-chain sampling loop harness: chains run independently (parallel-safe),
// results are merged in chain order.
template <typename StepFn, typename InitFn, typename RecordFn>
void run_chains(const ChainConfig& cfg, InitFn init, StepFn step, RecordFn record) {
  cfg.validate();
  const int total_sweeps = cfg.burn_in + cfg.steps;
#pragma omp parallel for schedule(static)
  for (int c = 0; c < cfg.chains; ++c) {
    ChainRng rng(cfg.seed, static_cast<std::uint64_t>(c));
    auto state = init(rng, c);
    for (int sweep = 0; sweep < total_sweeps; ++sweep) {
      step(state, rng, c);
      if (sweep >= cfg.burn_in && (sweep - cfg.burn_in) % cfg.thin == 0) record(state, c);
    }
  }
}

std::uint64_t random_bits(ChainRng& rng, int n) {
  std::uint64_t x = 0;
  for (int q = 0; q < n; ++q) x = (x << 1) | static_cast<std::uint64_t>(rng.bit());
  return x;
}

}  // namespace

// ---------------------------------------------------------------------------
// Generic single-site Gibbs sampling
// ---------------------------------------------------------------------------

SampleReport gibbs_chain(const ClassicalHamiltonian& energy, const ChainConfig& cfg,
                         const std::vector<int>& visible_bits, const Distribution* exact) {
  energy.validate();
  const int nbits = energy.n;
  if (nbits <= 0) throw PreconditionError("gibbs_chain: empty system");

  std::vector<int> visible = visible_bits;
  if (visible.empty()) {
    visible.resize(static_cast<std::size_t>(nbits));
    for (int b = 0; b < nbits; ++b) visible[static_cast<std::size_t>(b)] = b;
  }
  for (int b : visible)
    if (b < 0 || b >= nbits) throw PreconditionError("gibbs_chain: bad visible bit");

  // Terms touching each bit; conditionals only consult these.
  std::vector<std::vector<const ClassicalTerm*>> touching(static_cast<std::size_t>(nbits));
  for (const auto& t : energy.terms)
    for (int b : t.support) touching[static_cast<std::size_t>(b)].push_back(&t);

  auto local_delta = [&](std::uint64_t y, int j) {
    // F(y with y_j=1) - F(y with y_j=0)
    double d = 0.0;
    const std::uint64_t y1 = with_bit(y, j, nbits, 1);
    const std::uint64_t y0 = with_bit(y, j, nbits, 0);
    for (const ClassicalTerm* t : touching[static_cast<std::size_t>(j)])
      d += t->table[sub_index(y1, t->support, nbits)] -
           t->table[sub_index(y0, t->support, nbits)];
    return d;
  };

  const int samples_per_chain = (cfg.steps + cfg.thin - 1) / cfg.thin;
  std::vector<std::vector<std::uint64_t>> per_chain(static_cast<std::size_t>(cfg.chains));
  std::vector<std::int64_t> flips(static_cast<std::size_t>(cfg.chains), 0);
  for (auto& v : per_chain) v.reserve(static_cast<std::size_t>(samples_per_chain));

  run_chains(
      cfg,
      [&](ChainRng& rng, int) { return random_bits(rng, nbits); },
      [&](std::uint64_t& y, ChainRng& rng, int c) {
        for (int scan = 0; scan < nbits; ++scan) {
          const int j = cfg.random_scan
                            ? std::min(nbits - 1, static_cast<int>(rng.uniform() * nbits))
                            : scan;
          const double p1 = 1.0 / (1.0 + std::exp(local_delta(y, j)));
          const int newbit = (rng.uniform() < p1) ? 1 : 0;
          if (newbit != bit_of(y, j, nbits)) ++flips[static_cast<std::size_t>(c)];
          y = with_bit(y, j, nbits, newbit);
        }
      },
      [&](const std::uint64_t& y, int c) {
        std::uint64_t v = 0;
        for (int b : visible) v = (v << 1) | static_cast<std::uint64_t>(bit_of(y, b, nbits));
        per_chain[static_cast<std::size_t>(c)].push_back(v);
      });

  SampleReport report;
  report.n_visible = static_cast<int>(visible.size());
  for (const auto& v : per_chain) report.samples.insert(report.samples.end(), v.begin(), v.end());
  std::int64_t total_flips = 0;
  for (std::int64_t f : flips) total_flips += f;
  report.flip_fraction = static_cast<double>(total_flips) /
                         (static_cast<double>(cfg.chains) * (cfg.burn_in + cfg.steps) * nbits);
  if (exact) report.empirical_tv = tv_diagnostic(report.samples, report.n_visible, *exact);
  return report;
}

// ---------------------------------------------------------------------------
// DBM layerwise block Gibbs
// ---------------------------------------------------------------------------

SampleReport dbm_block_gibbs(const DeepBoltzmannMachine& dbm, const ChainConfig& cfg,
                             const Distribution* exact) {
  dbm.validate();
  const int n = dbm.n();
  const int mid = dbm.middle();
  const int d = dbm.deep();
  if (n <= 0) throw PreconditionError("dbm_block_gibbs: empty visible layer");

  struct State {
    std::uint64_t x = 0;
    std::vector<int> h, hd;
  };
  auto sigmoid = [](double t) { return 1.0 / (1.0 + std::exp(-t)); };

  const int samples_per_chain = (cfg.steps + cfg.thin - 1) / cfg.thin;
  std::vector<std::vector<std::uint64_t>> per_chain(static_cast<std::size_t>(cfg.chains));
  for (auto& v : per_chain) v.reserve(static_cast<std::size_t>(samples_per_chain));

  run_chains(
      cfg,
      [&](ChainRng& rng, int) {
        State s;
        s.x = random_bits(rng, std::max(n, 1));
        s.h.resize(static_cast<std::size_t>(mid));
        s.hd.resize(static_cast<std::size_t>(d));
        for (int j = 0; j < mid; ++j) s.h[static_cast<std::size_t>(j)] = rng.bit();
        for (int q = 0; q < d; ++q) s.hd[static_cast<std::size_t>(q)] = rng.bit();
        return s;
      },
      [&](State& s, ChainRng& rng, int) {
        // middle given (visible, deep)
        for (int j = 0; j < mid; ++j) {
          double t = dbm.b(j);
          for (int i = 0; i < n; ++i)
            if (bit_of(s.x, i, n)) t += dbm.W(i, j);
          for (int q = 0; q < d; ++q)
            if (s.hd[static_cast<std::size_t>(q)]) t += dbm.U(j, q);
          s.h[static_cast<std::size_t>(j)] = (rng.uniform() < sigmoid(t)) ? 1 : 0;
        }
        // visible and deep given middle
        for (int i = 0; i < n; ++i) {
          double t = dbm.a(i);
          for (int j = 0; j < mid; ++j)
            if (s.h[static_cast<std::size_t>(j)]) t += dbm.W(i, j);
          s.x = with_bit(s.x, i, n, (rng.uniform() < sigmoid(t)) ? 1 : 0);
        }
        for (int q = 0; q < d; ++q) {
          double t = dbm.c(q);
          for (int j = 0; j < mid; ++j)
            if (s.h[static_cast<std::size_t>(j)]) t += dbm.U(j, q);
          s.hd[static_cast<std::size_t>(q)] = (rng.uniform() < sigmoid(t)) ? 1 : 0;
        }
      },
      [&](const State& s, int c) { per_chain[static_cast<std::size_t>(c)].push_back(s.x); });

  SampleReport report;
  report.n_visible = n;
  for (const auto& v : per_chain) report.samples.insert(report.samples.end(), v.begin(), v.end());
  if (exact) report.empirical_tv = tv_diagnostic(report.samples, report.n_visible, *exact);
  return report;
}

// ---------------------------------------------------------------------------
// Bravyi-Terhal walk
// ---------------------------------------------------------------------------

namespace {

// Upper bound on exp(-(H(x^j)-H(x))/2) over all x, from per-term extremes.
double max_flip_factor(const ClassicalHamiltonian& hc, int j) {
  double drop = 0.0;  // largest possible energy decrease when flipping j
  for (const auto& t : hc.terms) {
    if (std::find(t.support.begin(), t.support.end(), j) == t.support.end()) continue;
    double lo = t.table[0], hi = t.table[0];
    for (double v : t.table) {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    drop += hi - lo;
  }
  return std::exp(0.5 * drop);
}

}  // namespace

double sff_walk_safe_beta(const ClassicalHamiltonian& hc) {
  double worst = 1.0;
  for (int j = 0; j < hc.n; ++j) worst = std::max(worst, max_flip_factor(hc, j));
  return 1.0 / (static_cast<double>(hc.n) * worst);
}

SampleReport sff_walk(const ClassicalHamiltonian& hc, double beta, const ChainConfig& cfg,
                      const Distribution* exact) {
  hc.validate();
  const int n = hc.n;
  if (n <= 0) throw PreconditionError("sff_walk: empty system");
  const double safe = sff_walk_safe_beta(hc);
  if (beta <= 0.0) beta = 0.9 * safe;
  if (beta > safe)
    throw PreconditionError("sff_walk: beta too large; safe bound is " + std::to_string(safe));

  std::vector<std::vector<const ClassicalTerm*>> touching(static_cast<std::size_t>(n));
  for (const auto& t : hc.terms)
    for (int b : t.support) touching[static_cast<std::size_t>(b)].push_back(&t);
  auto flip_delta = [&](std::uint64_t x, int j) {
    double d = 0.0;
    const std::uint64_t xf = flip_bit(x, j, n);
    for (const ClassicalTerm* t : touching[static_cast<std::size_t>(j)])
      d += t->table[sub_index(xf, t->support, n)] - t->table[sub_index(x, t->support, n)];
    return d;
  };

  const int samples_per_chain = (cfg.steps + cfg.thin - 1) / cfg.thin;
  std::vector<std::vector<std::uint64_t>> per_chain(static_cast<std::size_t>(cfg.chains));
  std::vector<std::int64_t> stays(static_cast<std::size_t>(cfg.chains), 0);
  for (auto& v : per_chain) v.reserve(static_cast<std::size_t>(samples_per_chain));

  run_chains(
      cfg,
      [&](ChainRng& rng, int) { return random_bits(rng, n); },
      [&](std::uint64_t& x, ChainRng& rng, int c) {
        const double u = rng.uniform();
        double cum = 0.0;
        bool moved = false;
        for (int j = 0; j < n; ++j) {
          cum += beta * std::exp(-0.5 * flip_delta(x, j));
          if (u < cum) {
            x = flip_bit(x, j, n);
            moved = true;
            break;
          }
        }
        if (!moved) ++stays[static_cast<std::size_t>(c)];  // lazy remainder
      },
      [&](const std::uint64_t& x, int c) {
        per_chain[static_cast<std::size_t>(c)].push_back(x);
      });

  SampleReport report;
  report.n_visible = n;
  report.beta = beta;
  for (const auto& v : per_chain) report.samples.insert(report.samples.end(), v.begin(), v.end());
  std::int64_t total_stays = 0;
  for (std::int64_t s : stays) total_stays += s;
  report.laziness = static_cast<double>(total_stays) /
                    (static_cast<double>(cfg.chains) * (cfg.burn_in + cfg.steps));
  if (exact) report.empirical_tv = tv_diagnostic(report.samples, report.n_visible, *exact);
  return report;
}

Eigen::MatrixXd sff_walk_kernel(const ClassicalHamiltonian& hc, double beta) {
  if (hc.n > 12) throw PreconditionError("sff_walk_kernel: n > 12");
  const int n = hc.n;
  const Eigen::Index dim = Eigen::Index{1} << n;
  Eigen::MatrixXd kernel = Eigen::MatrixXd::Zero(dim, dim);
  for (Eigen::Index x = 0; x < dim; ++x) {
    double row = 0.0;
    for (int j = 0; j < n; ++j) {
      const std::uint64_t y = flip_bit(static_cast<std::uint64_t>(x), j, n);
      const double p =
          beta * std::exp(-0.5 * (hc.energy(y) - hc.energy(static_cast<std::uint64_t>(x))));
      kernel(x, static_cast<Eigen::Index>(y)) = p;
      row += p;
    }
    kernel(x, x) = 1.0 - row;
  }
  return kernel;
}

SampleReport sff_walk_oracle(const LocalHamiltonian& h_sff, const GroundSpaceReport& oracle,
                             double beta, const ChainConfig& cfg, const Distribution* exact) {
  if (h_sff.n > 12) throw PreconditionError("sff_walk_oracle: n > 12");
  if (!oracle.psi0_defined) throw PreconditionError("sff_walk_oracle: psi0 undefined");
  const Eigen::VectorXd& psi = oracle.psi0;
  if (psi.minCoeff() <= 1e-14 * psi.maxCoeff())
    throw PreconditionError("sff_walk_oracle: psi0 not strictly positive");

  const int n = h_sff.n;
  const Eigen::Index dim = Eigen::Index{1} << n;
  Eigen::MatrixXd g = -beta * assemble_dense(h_sff);
  g.diagonal().array() += 1.0 + beta * oracle.ground_energy;  // G = I - beta (H - E0)
  if (g.minCoeff() < -1e-12)
    throw PreconditionError("sff_walk_oracle: G has negative entries; reduce beta");

  // Row-stochastic kernel P(x -> y) = (psi_y / psi_x) G(y, x).
  Eigen::MatrixXd kernel(dim, dim);
  for (Eigen::Index x = 0; x < dim; ++x) {
    double offdiag = 0.0;
    for (Eigen::Index y = 0; y < dim; ++y) {
      if (y == x) continue;
      kernel(x, y) = std::max(0.0, psi(y) / psi(x) * g(y, x));
      offdiag += kernel(x, y);
    }
    if (offdiag > 1.0 + 1e-9)
      throw PreconditionError("sff_walk_oracle: beta too large for a lazy kernel");
    kernel(x, x) = std::max(0.0, 1.0 - offdiag);
  }

  const int samples_per_chain = (cfg.steps + cfg.thin - 1) / cfg.thin;
  std::vector<std::vector<std::uint64_t>> per_chain(static_cast<std::size_t>(cfg.chains));
  for (auto& v : per_chain) v.reserve(static_cast<std::size_t>(samples_per_chain));

  run_chains(
      cfg,
      [&](ChainRng& rng, int) { return random_bits(rng, n); },
      [&](std::uint64_t& x, ChainRng& rng, int) {
        const double u = rng.uniform();
        double cum = 0.0;
        for (Eigen::Index y = 0; y < dim; ++y) {
          cum += kernel(static_cast<Eigen::Index>(x), y);
          if (u < cum) {
            x = static_cast<std::uint64_t>(y);
            return;
          }
        }
        // numerical slack: remain at x
      },
      [&](const std::uint64_t& x, int c) {
        per_chain[static_cast<std::size_t>(c)].push_back(x);
      });

  SampleReport report;
  report.n_visible = n;
  report.beta = beta;
  for (const auto& v : per_chain) report.samples.insert(report.samples.end(), v.begin(), v.end());
  if (exact) report.empirical_tv = tv_diagnostic(report.samples, report.n_visible, *exact);
  return report;
}

}  // namespace stoqtherm
