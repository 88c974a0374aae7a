#pragma once

#include <string>
#include <vector>

#include "stoqtherm/boltzmann.hpp"
#include "stoqtherm/gibbs2sff.hpp"
#include "stoqtherm/hamiltonian.hpp"
#include "stoqtherm/hbm.hpp"
#include "stoqtherm/io.hpp"
#include "stoqtherm/pseq.hpp"

namespace stoqtherm {

struct PipelineOptions {
  // Truncate the constructed P-sequence to this many factors for
  // demonstration runs (0 = keep all); the reported error is always the
  // achieved one, remeasured after truncation.
  int max_factors = 0;
};

struct PipelineReport {
  std::string pipeline;
  json input_summary;            // n, L, k, Delta, eta, J
  std::vector<json> stages;      // per-stage parameters and error contributions
  std::string final_metric_kind; // "tv" or "l2"
  double final_metric = -1.0;
  double requested_eps = 0.0;
  bool verified = false;         // metric actually recomputed at desk scale
  std::string skip_reason;       // set when verification was out of reach
  json resources;
  json artifacts;                // file paths, filled by the CLI
  double wall_time_s = 0.0;      // console diagnostics only, never serialized

  bool success() const { return !verified || final_metric <= requested_eps; }
  json to_json() const;
};

// Theorem-level pipelines. Each returns every intermediate artifact so
// reports stay reproducible from files alone.

struct GibbsPipelineResult {
  PSequence pseq;
  HyperBoltzmannMachine hbm_squared;
  ClassicalHamiltonian classical;
  std::vector<int> visible_bits;
  ConvergenceReport convergence;
  GroundSpaceReport oracle;
  PipelineReport report;
};

/// Stoquastic ground state -> marginal Gibbs distribution (trotterized
/// imaginary time). Requires stoquastic input, gap > 0, eta > 1e-6.
GibbsPipelineResult pipeline_stoq_to_gibbs(const LocalHamiltonian& h, double eps,
                                           const PipelineOptions& opts = {});

/// Same through the detectability-lemma projector sequence; requires a
/// stoquastic frustration-free input with gap > 0.
GibbsPipelineResult pipeline_sff_to_gibbs(const LocalHamiltonian& h, double eps,
                                          const PipelineOptions& opts = {});

struct SffPipelineResult {
  GibbsPipelineResult gibbs;
  SffCompilation sff;
  PipelineReport report;
};

/// Stoquastic ground state -> SFF Hamiltonian whose unique ground state
/// marginalizes to it (verified only when total qubits <= 12).
SffPipelineResult pipeline_stoq_to_sff(const LocalHamiltonian& h, double eps,
                                       const PipelineOptions& opts = {});

struct BmSffResult {
  ClassicalHamiltonian classical;
  std::vector<int> visible_bits;
  SffCompilation sff;
  PipelineReport report;
};

/// Boltzmann machine distribution -> marginal of an SFF ground state.
BmSffResult pipeline_bm_to_sff(const BoltzmannMachine& bm);

struct DbmPipelineResult {
  bool has_pseq = false;
  PSequence pseq;
  HyperBoltzmannMachine hbm;  // the squared HBM (or the exact classical HBM)
  DeepBoltzmannMachine dbm;
  PipelineReport report;
};

/// Stoquastic / SFF ground-state distribution as a DBM (error budget split
/// eps/2 + eps/2 between the HBM stage and the DBM compilation).
DbmPipelineResult pipeline_stoq_to_dbm(const LocalHamiltonian& h, double eps,
                                       const PipelineOptions& opts = {});
DbmPipelineResult pipeline_sff_to_dbm(const LocalHamiltonian& h, double eps,
                                      const PipelineOptions& opts = {});

/// Classical Gibbs distribution as an RBM (empty deep layer).
DbmPipelineResult pipeline_classical_to_rbm(const ClassicalHamiltonian& hc, double eps);

/// Recompute metrics and invariants from artifact files; returns a CLI
/// exit code (0 ok, 3 verification failure, 4 schema/I-O error).
int verify_files(const std::vector<std::string>& paths, std::ostream& log);

}  // namespace stoqtherm
