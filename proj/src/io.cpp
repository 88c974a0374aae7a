#include "stoqtherm/io.hpp"

#include <fstream>

#include "stoqtherm/errors.hpp"

namespace stoqtherm {

namespace {

json matrix_to_json(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

Eigen::MatrixXd matrix_from_json(const json& j, const char* what) {
  if (!j.is_array()) throw SchemaError(std::string(what) + ": matrix not an array");
  if (j.empty()) return Eigen::MatrixXd(0, 0);
  const Eigen::Index rows = static_cast<Eigen::Index>(j.size());
  const Eigen::Index cols = static_cast<Eigen::Index>(j[0].size());
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    if (!j[static_cast<std::size_t>(r)].is_array() ||
        static_cast<Eigen::Index>(j[static_cast<std::size_t>(r)].size()) != cols)
      throw SchemaError(std::string(what) + ": ragged matrix");
    for (Eigen::Index c = 0; c < cols; ++c)
      m(r, c) = j[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)].get<double>();
  }
  return m;
}

Eigen::VectorXd vector_from_json(const json& j, const char* what) {
  if (!j.is_array()) throw SchemaError(std::string(what) + ": expected an array");
  Eigen::VectorXd v(static_cast<Eigen::Index>(j.size()));
  for (Eigen::Index i = 0; i < v.size(); ++i)
    v(i) = j[static_cast<std::size_t>(i)].get<double>();
  return v;
}

json vector_to_json(const Eigen::VectorXd& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

const json& field(const json& j, const char* key, const char* what) {
  auto it = j.find(key);
  if (it == j.end()) throw SchemaError(std::string(what) + ": missing field '" + key + "'");
  return *it;
}

}  // namespace

json to_json(const LocalHamiltonian& h) {
  json terms = json::array();
  for (const auto& t : h.terms)
    terms.push_back({{"support", t.support}, {"matrix", matrix_to_json(t.matrix)}});
  return {{"n", h.n}, {"kind", "quantum"}, {"terms", std::move(terms)}};
}

json to_json(const ClassicalHamiltonian& hc) {
  json terms = json::array();
  for (const auto& t : hc.terms)
    terms.push_back({{"support", t.support}, {"table", t.table}});
  return {{"n", hc.n}, {"kind", "classical"}, {"terms", std::move(terms)}};
}

std::string hamiltonian_kind(const json& j) {
  const json& kind = field(j, "kind", "hamiltonian.json");
  if (!kind.is_string() || (kind != "quantum" && kind != "classical"))
    throw SchemaError("hamiltonian.json: kind must be 'quantum' or 'classical'");
  return kind.get<std::string>();
}

LocalHamiltonian quantum_from_json(const json& j) {
  if (hamiltonian_kind(j) != "quantum")
    throw SchemaError("hamiltonian.json: expected kind 'quantum'");
  LocalHamiltonian h;
  h.n = field(j, "n", "hamiltonian.json").get<int>();
  for (const json& tj : field(j, "terms", "hamiltonian.json")) {
    LocalTerm t;
    t.support = field(tj, "support", "term").get<std::vector<int>>();
    t.matrix = matrix_from_json(field(tj, "matrix", "term"), "term");
    h.terms.push_back(std::move(t));
  }
  h.validate();
  return h;
}

ClassicalHamiltonian classical_from_json(const json& j) {
  if (hamiltonian_kind(j) != "classical")
    throw SchemaError("hamiltonian.json: expected kind 'classical'");
  ClassicalHamiltonian hc;
  hc.n = field(j, "n", "hamiltonian.json").get<int>();
  for (const json& tj : field(j, "terms", "hamiltonian.json")) {
    ClassicalTerm t;
    t.support = field(tj, "support", "term").get<std::vector<int>>();
    t.table = field(tj, "table", "term").get<std::vector<double>>();
    hc.terms.push_back(std::move(t));
  }
  hc.validate();
  return hc;
}

json to_json(const PSequence& p) {
  json factors = json::array();
  for (const auto& f : p.factors)
    factors.push_back({{"support", f.support}, {"matrix", matrix_to_json(f.matrix)}});
  return {{"n", p.n},
          {"alpha", p.alpha},
          {"meta",
           {{"delta", p.meta.delta},
            {"N", p.meta.repetitions},
            {"target_eps", p.meta.target_eps}}},
          {"factors", std::move(factors)}};
}

PSequence psequence_from_json(const json& j) {
  PSequence p;
  p.n = field(j, "n", "psequence.json").get<int>();
  p.alpha = field(j, "alpha", "psequence.json").get<double>();
  const json& meta = field(j, "meta", "psequence.json");
  p.meta.delta = field(meta, "delta", "meta").get<double>();
  p.meta.repetitions = field(meta, "N", "meta").get<int>();
  p.meta.target_eps = field(meta, "target_eps", "meta").get<double>();
  for (const json& fj : field(j, "factors", "psequence.json")) {
    PFactor f;
    f.support = field(fj, "support", "factor").get<std::vector<int>>();
    f.matrix = matrix_from_json(field(fj, "matrix", "factor"), "factor");
    p.factors.push_back(std::move(f));
  }
  p.validate();
  return p;
}

json to_json(const HyperBoltzmannMachine& hbm_in) {
  const HyperBoltzmannMachine hbm = canonicalized(hbm_in);
  json edges = json::array();
  for (const auto& e : hbm.hyperedges)
    edges.push_back({{"nodes", e.nodes}, {"table", e.table}});
  json roles = json::array();
  for (int i = 0; i < hbm.n(); ++i) roles.push_back("visible");
  for (int i = 0; i < hbm.m(); ++i) roles.push_back("hidden");
  return {{"n", hbm.n()},
          {"m", hbm.m()},
          {"hyperedges", std::move(edges)},
          {"node_roles", std::move(roles)}};
}

HyperBoltzmannMachine hbm_from_json(const json& j) {
  HyperBoltzmannMachine hbm;
  const int n = field(j, "n", "hbm.json").get<int>();
  const int m = field(j, "m", "hbm.json").get<int>();
  const json& roles = field(j, "node_roles", "hbm.json");
  if (static_cast<int>(roles.size()) != n + m)
    throw SchemaError("hbm.json: node_roles length must be n + m");
  for (int id = 0; id < n + m; ++id) {
    const std::string role = roles[static_cast<std::size_t>(id)].get<std::string>();
    if (role == "visible")
      hbm.visible.push_back(id);
    else if (role == "hidden")
      hbm.hidden.push_back(id);
    else
      throw SchemaError("hbm.json: node role must be 'visible' or 'hidden'");
  }
  if (hbm.n() != n || hbm.m() != m)
    throw SchemaError("hbm.json: node_roles inconsistent with n, m");
  for (const json& ej : field(j, "hyperedges", "hbm.json")) {
    HbmEdge e;
    e.nodes = field(ej, "nodes", "hyperedge").get<std::vector<int>>();
    e.table = field(ej, "table", "hyperedge").get<std::vector<double>>();
    hbm.hyperedges.push_back(std::move(e));
  }
  hbm.validate();
  return hbm;
}

json to_json(const DeepBoltzmannMachine& dbm) {
  return {{"a", vector_to_json(dbm.a)},
          {"b", vector_to_json(dbm.b)},
          {"c", vector_to_json(dbm.c)},
          {"W", matrix_to_json(dbm.W)},
          {"U", matrix_to_json(dbm.U)}};
}

DeepBoltzmannMachine dbm_from_json(const json& j) {
  DeepBoltzmannMachine dbm;
  dbm.a = vector_from_json(field(j, "a", "dbm.json"), "dbm.json a");
  dbm.b = vector_from_json(field(j, "b", "dbm.json"), "dbm.json b");
  dbm.c = vector_from_json(field(j, "c", "dbm.json"), "dbm.json c");
  dbm.W = matrix_from_json(field(j, "W", "dbm.json"), "dbm.json W");
  dbm.U = matrix_from_json(field(j, "U", "dbm.json"), "dbm.json U");
  // a row-less matrix only round-trips when the source dimension was zero
  if (dbm.W.rows() == 0) dbm.W.resize(dbm.a.size(), 0);
  if (dbm.U.rows() == 0) dbm.U.resize(dbm.b.size(), 0);
  dbm.validate();
  return dbm;
}

namespace {

json bm_edges_to_json(const std::vector<BmEdge>& edges) {
  json out = json::array();
  for (const auto& e : edges) out.push_back({e.u, e.v, e.weight});
  return out;
}

std::vector<BmEdge> bm_edges_from_json(const json& j, const char* what) {
  std::vector<BmEdge> edges;
  for (const json& ej : j) {
    if (!ej.is_array() || ej.size() != 3)
      throw SchemaError(std::string(what) + ": edge must be [u, v, weight]");
    edges.push_back({ej[0].get<int>(), ej[1].get<int>(), ej[2].get<double>()});
  }
  return edges;
}

}  // namespace

json to_json(const IsingModel& ising) {
  return {{"fields", ising.fields},
          {"edges", bm_edges_to_json(ising.edges)},
          {"hidden_spins", ising.hidden_spins}};
}

IsingModel ising_from_json(const json& j) {
  IsingModel ising;
  ising.fields = field(j, "fields", "ising.json").get<std::vector<double>>();
  ising.edges = bm_edges_from_json(field(j, "edges", "ising.json"), "ising.json");
  ising.hidden_spins = field(j, "hidden_spins", "ising.json").get<std::vector<int>>();
  return ising;
}

json to_json(const BoltzmannMachine& bm) {
  return {{"n", bm.n_visible},
          {"m", bm.n_hidden},
          {"biases", bm.biases},
          {"edges", bm_edges_to_json(bm.edges)}};
}

BoltzmannMachine bm_from_json(const json& j) {
  BoltzmannMachine bm;
  bm.n_visible = field(j, "n", "bm.json").get<int>();
  bm.n_hidden = field(j, "m", "bm.json").get<int>();
  bm.biases = field(j, "biases", "bm.json").get<std::vector<double>>();
  bm.edges = bm_edges_from_json(field(j, "edges", "bm.json"), "bm.json");
  bm.validate();
  return bm;
}

json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SchemaError("cannot open " + path);
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw SchemaError(path + ": " + e.what());
  }
  return j;
}

void save_json(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw SchemaError("cannot write " + path);
  out << j.dump(1) << "\n";
}

}  // namespace stoqtherm
