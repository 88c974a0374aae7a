#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <random>
#include <vector>

#include "stoqtherm/boltzmann.hpp"
#include "stoqtherm/hamiltonian.hpp"

namespace stoqtherm {

// ---------------------------------------------------------------------------
// Reproducible RNG streams
// ---------------------------------------------------------------------------

/// SplitMix64; used only to derive independent substream seeds.
struct SplitMix64 {
  std::uint64_t state;
  explicit SplitMix64(std::uint64_t seed) : state(seed) {}
  std::uint64_t next() {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }
};

/// Chain i draws from mt19937_64 seeded with the (i+1)-th SplitMix64 output
/// of the master seed. Uniform doubles take the top 53 bits directly, so
/// streams are identical across standard library implementations.
class ChainRng {
 public:
  static std::uint64_t substream_seed(std::uint64_t master, std::uint64_t index) {
    SplitMix64 sm(master);
    std::uint64_t s = 0;
    for (std::uint64_t i = 0; i <= index; ++i) s = sm.next();
    return s;
  }

  ChainRng(std::uint64_t master, std::uint64_t chain_index)
      : gen_(substream_seed(master, chain_index)) {}

  double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }
  int bit() { return uniform() < 0.5 ? 0 : 1; }

 private:
  std::mt19937_64 gen_;
};

// ---------------------------------------------------------------------------
// Configuration and reports
// ---------------------------------------------------------------------------

struct ChainConfig {
  std::uint64_t seed = 1;
  int burn_in = 1000;
  int steps = 10000;  // recorded sweeps/steps after burn-in
  int chains = 1;
  int thin = 1;
  bool random_scan = false;  // gibbs_chain only; default systematic 0..N-1

  void validate() const;
};

struct SampleReport {
  int n_visible = 0;
  std::vector<std::uint64_t> samples;  // visible bitstrings, big-endian
  double empirical_tv = -1.0;          // vs exact distribution, when given
  double flip_fraction = 0.0;          // fraction of updates that changed a bit
  double laziness = 0.0;               // sff_walk: fraction of steps that stayed
  double beta = 0.0;                   // sff_walk only

  Distribution empirical() const;
};

// ---------------------------------------------------------------------------
// Samplers
// ---------------------------------------------------------------------------

/// Systematic-scan single-site Gibbs sampling over all bits of the classical
/// energy; conditionals use only the terms touching the updated bit. Samples
/// keep the bits listed in visible_bits (all bits when empty).
SampleReport gibbs_chain(const ClassicalHamiltonian& energy, const ChainConfig& cfg,
                         const std::vector<int>& visible_bits = {},
                         const Distribution* exact = nullptr);

/// Layer-alternating block Gibbs for a DBM: middle given (visible, deep),
/// then visible and deep given middle, with sigmoid conditionals.
SampleReport dbm_block_gibbs(const DeepBoltzmannMachine& dbm, const ChainConfig& cfg,
                             const Distribution* exact = nullptr);

/// Lazy single-bit-flip walk with P(x -> x^j) = beta exp(-(H(x^j)-H(x))/2);
/// stationary distribution is the Gibbs distribution of hc. beta <= 0 picks
/// the default 0.9 / (n max_j exp(D_j/2)) from per-term table extremes.
SampleReport sff_walk(const ClassicalHamiltonian& hc, double beta, const ChainConfig& cfg,
                      const Distribution* exact = nullptr);

/// Largest provably safe beta bound (before the 0.9 margin).
double sff_walk_safe_beta(const ClassicalHamiltonian& hc);

/// Explicit 2^n x 2^n transition kernel of the walk (row x -> column y).
Eigen::MatrixXd sff_walk_kernel(const ClassicalHamiltonian& hc, double beta);

/// General Bravyi-Terhal walk using exact amplitude ratios of the ground
/// state: P(x -> y) = (psi_y / psi_x) <y|G|x>, G = I - beta (H - E0).
/// Test-scale oracle variant (n <= 12); requires strictly positive psi0.
SampleReport sff_walk_oracle(const LocalHamiltonian& h_sff, const GroundSpaceReport& oracle,
                             double beta, const ChainConfig& cfg,
                             const Distribution* exact = nullptr);

/// TV between the empirical visible distribution and an exact one (n <= 14).
double tv_diagnostic(const std::vector<std::uint64_t>& samples, int n_visible,
                     const Distribution& exact);

}  // namespace stoqtherm
