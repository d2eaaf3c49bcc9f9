#pragma once

#include <string>

#include <json.hpp>

#include "lowensim/block_encoding.hpp"
#include "lowensim/hamiltonian_zoo.hpp"
#include "lowensim/lowenergy_sim.hpp"
#include "lowensim/poly_engine.hpp"

namespace lowensim {

using json = nlohmann::json;

// Operators serialize as {dim, entries: [[re, im], ...] row-major, flags}.
// nlohmann emits shortest-round-trip decimal doubles, so round-trips are
// bit-exact at double precision.
json operator_to_json(const Operator& op);
Operator operator_from_json(const json& j);

json matrix_to_json(const Matrix& m);
Matrix matrix_from_json(const json& j);

json state_to_json(const StateVector& s);
StateVector state_from_json(const json& j);

json block_encoding_to_json(const BlockEncoding& be);
BlockEncoding block_encoding_from_json(const json& j);

json lcu_to_json(const LcuSpec& lcu);
LcuSpec lcu_from_json(const json& j);

json cheb_poly_to_json(const ChebPoly& p);
ChebPoly cheb_poly_from_json(const json& j);

json trig_poly_to_json(const TrigPoly& p);

json ledger_to_json(const QueryLedger& l);
json plan_to_json(const SimPlan& p);
json report_to_json(const SimReport& r);

/// Whitespace-separated edge list: one "u v" pair per line, '#' comments.
Graph graph_from_edge_list(const std::string& path);

/// Circuit ingestion: [{name, qubits, matrix?}] with built-in H, X, Z, CNOT, T
/// single/two-qubit gates expanded onto n qubits.
std::vector<Matrix> gates_from_json(const json& j, Eigen::Index n_qubits);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

}  // namespace lowensim
