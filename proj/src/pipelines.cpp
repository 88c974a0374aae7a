#include "stoqtherm/pipelines.hpp"

#include <chrono>
#include <cmath>

#include "stoqtherm/errors.hpp"

namespace stoqtherm {

json PipelineReport::to_json() const {
  json j;
  j["pipeline"] = pipeline;
  j["input"] = input_summary;
  j["stages"] = stages;
  j["final_metric"] = {{"kind", final_metric_kind},
                       {"value", final_metric},
                       {"eps", requested_eps},
                       {"verified", verified}};
  if (!skip_reason.empty()) j["final_metric"]["skip_reason"] = skip_reason;
  j["resources"] = resources;
  if (!artifacts.is_null()) j["artifacts"] = artifacts;
  return j;
}

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

json input_summary_json(const LocalHamiltonian& h, const GroundSpaceReport& oracle) {
  return {{"n", h.n},
          {"L", h.terms.size()},
          {"k", h.locality()},
          {"Delta", oracle.gap},
          {"eta", oracle.eta},
          {"J", h.max_term_norm()}};
}

void truncate_sequence(PSequence& seq, ConvergenceReport& conv, const GroundSpaceReport& oracle,
                       int max_factors) {
  if (max_factors <= 0 || static_cast<int>(seq.factors.size()) <= max_factors) return;
  seq.factors.resize(static_cast<std::size_t>(max_factors));
  conv.l2_error = (apply_sequence(seq) - oracle.psi0).norm();
}

GibbsPipelineResult gibbs_pipeline(const LocalHamiltonian& h, double eps,
                                   const PipelineOptions& opts, bool frustration_free_route) {
  const auto t0 = Clock::now();
  h.validate();
  if (!is_stoquastic(h)) throw PreconditionError("pipeline: input not stoquastic");

  GibbsPipelineResult out;
  out.oracle = ground_space(h);
  if (out.oracle.gap <= 0.0) throw PreconditionError("pipeline: gapless input");
  if (!frustration_free_route && out.oracle.eta <= 1e-6)
    throw PreconditionError("pipeline: overlap eta below 1e-6");

  auto [seq, conv] = frustration_free_route ? sff_sequence(h, eps, out.oracle)
                                            : trotter_sequence(h, eps, out.oracle);
  truncate_sequence(seq, conv, out.oracle, opts.max_factors);
  out.pseq = std::move(seq);
  out.convergence = conv;

  const HyperBoltzmannMachine unsquared = build_from_sequence(out.pseq);
  out.hbm_squared = square(unsquared);
  auto [hc, vis] = to_classical(out.hbm_squared);
  out.classical = std::move(hc);
  out.visible_bits = std::move(vis);

  // Final metric via the factor-chain evaluator: TV between the squared-HBM
  // distribution and |<x|psi0>|^2.
  const Distribution squared = chain_distribution(out.pseq);
  const Eigen::VectorXd target = out.oracle.psi0.cwiseProduct(out.oracle.psi0);
  const double tv = total_variation(squared.probs, target);

  PipelineReport& report = out.report;
  report.pipeline = frustration_free_route ? "sff_to_gibbs" : "stoq_to_gibbs";
  report.input_summary = input_summary_json(h, out.oracle);
  report.requested_eps = eps;
  report.final_metric_kind = "tv";
  report.final_metric = tv;
  report.verified = true;
  report.stages.push_back({{"name", frustration_free_route ? "sff_sequence" : "trotter_sequence"},
                           {"delta", out.pseq.meta.delta},
                           {"N", out.pseq.meta.repetitions},
                           {"alpha", out.pseq.alpha},
                           {"T", out.pseq.factors.size()},
                           {"l2_error", conv.l2_error},
                           {"refinement_rounds", conv.iterations_used},
                           {"truncated", opts.max_factors > 0}});
  report.stages.push_back({{"name", "build_from_sequence"},
                           {"hidden", unsquared.m()},
                           {"hyperedges", unsquared.hyperedges.size()}});
  report.stages.push_back(
      {{"name", "square"}, {"tv_bound_from_l2", conv.l2_error}});
  report.stages.push_back({{"name", "to_classical"}});
  report.resources = {{"hidden_nodes", out.hbm_squared.m()},
                      {"hyperedges", out.hbm_squared.hyperedges.size()},
                      {"terms", out.classical.terms.size()},
                      {"bits", out.classical.n},
                      {"locality", out.hbm_squared.max_edge_size()},
                      {"max_terms_per_bit", out.classical.max_terms_per_bit()},
                      {"bit_degree_at_most_2", out.classical.max_terms_per_bit() <= 2}};
  report.wall_time_s = seconds_since(t0);
  return out;
}

}  // namespace

GibbsPipelineResult pipeline_stoq_to_gibbs(const LocalHamiltonian& h, double eps,
                                           const PipelineOptions& opts) {
  return gibbs_pipeline(h, eps, opts, false);
}

GibbsPipelineResult pipeline_sff_to_gibbs(const LocalHamiltonian& h, double eps,
                                          const PipelineOptions& opts) {
  if (!is_frustration_free(h)) throw PreconditionError("pipeline: input not frustration-free");
  return gibbs_pipeline(h, eps, opts, true);
}

SffPipelineResult pipeline_stoq_to_sff(const LocalHamiltonian& h, double eps,
                                       const PipelineOptions& opts) {
  const auto t0 = Clock::now();
  SffPipelineResult out;
  out.gibbs = pipeline_stoq_to_gibbs(h, eps, opts);
  out.sff = build_sff(out.gibbs.classical);

  PipelineReport& report = out.report;
  report.pipeline = "stoq_to_sff";
  report.input_summary = out.gibbs.report.input_summary;
  report.requested_eps = eps;
  report.final_metric_kind = "tv";
  report.stages = out.gibbs.report.stages;
  report.stages.push_back({{"name", "build_sff"},
                           {"locality_bound", out.sff.locality_bound},
                           {"max_support_observed", out.sff.max_support_observed}});

  const int total_qubits = out.sff.h_sff.n;
  if (total_qubits <= 12) {
    const GroundSpaceReport sff_oracle = ground_space(out.sff.h_sff);
    Distribution ground_dist;
    ground_dist.n = total_qubits;
    ground_dist.probs = sff_oracle.psi0.cwiseProduct(sff_oracle.psi0);
    ground_dist.probs /= ground_dist.probs.sum();
    const Distribution visible = marginal_leading(ground_dist, h.n);
    const Eigen::VectorXd target = out.gibbs.oracle.psi0.cwiseProduct(out.gibbs.oracle.psi0);
    report.final_metric = total_variation(visible.probs, target);
    report.verified = true;
  } else {
    report.final_metric = -1.0;
    report.verified = false;
    report.skip_reason = "ground-state verification needs total qubits <= 12, got " +
                         std::to_string(total_qubits);
  }
  report.resources = out.gibbs.report.resources;
  report.resources["sff_terms"] = out.sff.h_sff.terms.size();
  report.resources["sff_locality"] = out.sff.max_support_observed;
  report.resources["sff_locality_bound_4k"] = 4 * std::max(1, h.locality());
  report.wall_time_s = seconds_since(t0);
  return out;
}

BmSffResult pipeline_bm_to_sff(const BoltzmannMachine& bm) {
  const auto t0 = Clock::now();
  bm.validate();
  BmSffResult out;
  const HyperBoltzmannMachine hbm = as_hbm(bm);
  auto [hc, vis] = to_classical(hbm);
  out.classical = std::move(hc);
  out.visible_bits = std::move(vis);
  out.sff = build_sff(out.classical);

  PipelineReport& report = out.report;
  report.pipeline = "bm_to_sff";
  report.input_summary = {{"n", bm.n_visible},
                          {"m", bm.n_hidden},
                          {"edges", bm.edges.size()},
                          {"max_degree", bm.max_degree()}};
  report.requested_eps = 1e-8;  // oracle tolerance; the mapping is exact
  report.final_metric_kind = "tv";
  report.stages.push_back({{"name", "as_hbm"}, {"hyperedges", hbm.hyperedges.size()}});
  report.stages.push_back({{"name", "to_classical"}, {"bits", out.classical.n}});
  report.stages.push_back({{"name", "build_sff"},
                           {"locality_bound", out.sff.locality_bound},
                           {"max_support_observed", out.sff.max_support_observed}});

  const int total = out.sff.h_sff.n;
  if (total <= 12) {
    const GroundSpaceReport oracle = ground_space(out.sff.h_sff);
    Distribution ground_dist;
    ground_dist.n = total;
    ground_dist.probs = oracle.psi0.cwiseProduct(oracle.psi0);
    ground_dist.probs /= ground_dist.probs.sum();
    const Distribution visible = marginal_leading(ground_dist, bm.n_visible);
    const Distribution bm_visible =
        marginal_leading(bm_joint_distribution(bm), bm.n_visible);
    report.final_metric = total_variation(visible, bm_visible);
    report.verified = true;
  } else {
    report.verified = false;
    report.skip_reason = "oracle verification needs n + m <= 12";
  }
  report.resources = {{"sff_terms", out.sff.h_sff.terms.size()},
                      {"sff_locality", out.sff.max_support_observed},
                      {"locality_bound_kprime_plus_1", bm.max_degree() + 1}};
  report.wall_time_s = seconds_since(t0);
  return out;
}

namespace {

DbmPipelineResult dbm_pipeline_quantum(const LocalHamiltonian& h, double eps,
                                       const PipelineOptions& opts, bool frustration_free_route) {
  const auto t0 = Clock::now();
  DbmPipelineResult out;
  const GibbsPipelineResult gibbs = frustration_free_route
                                        ? pipeline_sff_to_gibbs(h, eps / 2.0, opts)
                                        : pipeline_stoq_to_gibbs(h, eps / 2.0, opts);
  out.has_pseq = true;
  out.pseq = gibbs.pseq;
  out.hbm = gibbs.hbm_squared;
  out.dbm = hbm_to_dbm(out.hbm, eps / 2.0);

  PipelineReport& report = out.report;
  report.pipeline = frustration_free_route ? "sff_to_dbm" : "stoq_to_dbm";
  report.input_summary = gibbs.report.input_summary;
  report.requested_eps = eps;
  report.final_metric_kind = "tv";
  report.stages = gibbs.report.stages;
  report.stages.push_back({{"name", "hbm_to_dbm"},
                           {"delta", eps / 2.0},
                           {"middle", out.dbm.middle()},
                           {"deep", out.dbm.deep()}});

  if (out.dbm.n() <= kMaxDenseQubits && out.dbm.deep() <= 16) {
    const Distribution d = dbm_distribution(out.dbm);
    const Eigen::VectorXd target = gibbs.oracle.psi0.cwiseProduct(gibbs.oracle.psi0);
    report.final_metric = total_variation(d.probs, target);
    report.verified = true;
  } else {
    report.verified = false;
    report.skip_reason = "deep layer too large for the enumeration check";
  }
  const int k2 = out.hbm.max_edge_size();
  report.resources = {{"middle", out.dbm.middle()},
                      {"deep", out.dbm.deep()},
                      {"middle_bound", static_cast<double>(out.hbm.hyperedges.size()) *
                                           std::pow(2.0, k2)},
                      {"degree_bound", out.hbm.max_edges_per_node() * std::pow(2.0, k2)}};
  report.wall_time_s = seconds_since(t0);
  return out;
}

}  // namespace

DbmPipelineResult pipeline_stoq_to_dbm(const LocalHamiltonian& h, double eps,
                                       const PipelineOptions& opts) {
  return dbm_pipeline_quantum(h, eps, opts, false);
}

DbmPipelineResult pipeline_sff_to_dbm(const LocalHamiltonian& h, double eps,
                                      const PipelineOptions& opts) {
  if (!is_frustration_free(h)) throw PreconditionError("pipeline: input not frustration-free");
  return dbm_pipeline_quantum(h, eps, opts, true);
}

DbmPipelineResult pipeline_classical_to_rbm(const ClassicalHamiltonian& hc, double eps) {
  const auto t0 = Clock::now();
  hc.validate();
  DbmPipelineResult out;
  out.hbm = from_classical(hc);
  out.dbm = hbm_to_dbm(out.hbm, eps);

  PipelineReport& report = out.report;
  report.pipeline = "classical_to_rbm";
  report.input_summary = {{"n", hc.n},
                          {"T", hc.terms.size()},
                          {"k", hc.locality()},
                          {"kprime", hc.max_terms_per_bit()}};
  report.requested_eps = eps;
  report.final_metric_kind = "tv";
  report.stages.push_back({{"name", "from_classical"}});
  report.stages.push_back(
      {{"name", "hbm_to_dbm"}, {"delta", eps}, {"middle", out.dbm.middle()}});

  if (hc.n <= kMaxDenseQubits) {
    const Distribution d = dbm_distribution(out.dbm);
    report.final_metric = total_variation(d, gibbs_distribution(hc));
    report.verified = true;
  } else {
    report.verified = false;
    report.skip_reason = "Gibbs enumeration needs n <= 14";
  }
  const int k = std::max(1, hc.locality());
  report.resources = {{"middle", out.dbm.middle()},
                      {"deep", out.dbm.deep()},
                      {"hidden_bound_2k_T", static_cast<double>(hc.terms.size()) *
                                                std::pow(2.0, k)},
                      {"is_rbm", out.dbm.is_rbm()}};
  report.wall_time_s = seconds_since(t0);
  return out;
}

}  // namespace stoqtherm
