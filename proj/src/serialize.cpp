#include "lowensim/serialize.hpp"

#include <fstream>
#include <sstream>

namespace lowensim {

namespace {

json complex_matrix_entries(const Matrix& m) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j)
            rows.push_back(json::array({m(i, j).real(), m(i, j).imag()}));
    return rows;
}

Matrix complex_matrix_from_entries(const json& entries, Eigen::Index rows, Eigen::Index cols) {
    if (static_cast<Eigen::Index>(entries.size()) != rows * cols)
        throw ConfigInvalid("entry count does not match dimensions");
    Matrix m(rows, cols);
    Eigen::Index idx = 0;
    for (Eigen::Index i = 0; i < rows; ++i)
        for (Eigen::Index j = 0; j < cols; ++j) {
            const auto& e = entries[static_cast<size_t>(idx++)];
            m(i, j) = cx(e.at(0).get<double>(), e.at(1).get<double>());
        }
    return m;
}

const char* parity_name(Parity p) {
    switch (p) {
        case Parity::even: return "even";
        case Parity::odd: return "odd";
        case Parity::mixed: return "mixed";
    }
    return "?";
}

Parity parity_from_name(const std::string& s) {
    if (s == "even") return Parity::even;
    if (s == "odd") return Parity::odd;
    if (s == "mixed") return Parity::mixed;
    throw ConfigInvalid("unknown parity: " + s);
}

}  // namespace

json matrix_to_json(const Matrix& m) {
    return json{{"rows", m.rows()}, {"cols", m.cols()}, {"entries", complex_matrix_entries(m)}};
}

Matrix matrix_from_json(const json& j) {
    return complex_matrix_from_entries(j.at("entries"), j.at("rows").get<Eigen::Index>(),
                                       j.at("cols").get<Eigen::Index>());
}

json operator_to_json(const Operator& op) {
    return json{{"dim", op.dim()},
                {"entries", complex_matrix_entries(op.entries)},
                {"flags", {{"hermitian", op.hermitian}, {"psd", op.psd}}}};
}

Operator operator_from_json(const json& j) {
    const auto dim = j.at("dim").get<Eigen::Index>();
    Operator op(complex_matrix_from_entries(j.at("entries"), dim, dim));
    if (j.contains("flags")) {
        if (j["flags"].value("hermitian", false)) op.mark_hermitian();
        op.psd = j["flags"].value("psd", false);
    }
    return op;
}

json state_to_json(const StateVector& s) {
    json amps = json::array();
    for (Eigen::Index i = 0; i < s.dim(); ++i)
        amps.push_back(json::array({s.amplitudes(i).real(), s.amplitudes(i).imag()}));
    return json{{"dim", s.dim()}, {"amplitudes", amps}};
}

StateVector state_from_json(const json& j) {
    const auto dim = j.at("dim").get<Eigen::Index>();
    const auto& amps = j.at("amplitudes");
    Vector v(dim);
    for (Eigen::Index i = 0; i < dim; ++i) {
        const auto& e = amps.at(static_cast<size_t>(i));
        v(i) = cx(e.at(0).get<double>(), e.at(1).get<double>());
    }
    return StateVector(std::move(v));
}

json block_encoding_to_json(const BlockEncoding& be) {
    return json{{"unitary", matrix_to_json(be.unitary)},
                {"row_sub", be.row_sub},
                {"col_sub", be.col_sub},
                {"scale", be.scale},
                {"note", be.note}};
}

BlockEncoding block_encoding_from_json(const json& j) {
    BlockEncoding be(matrix_from_json(j.at("unitary")),
                     j.at("row_sub").get<std::vector<Eigen::Index>>(),
                     j.at("col_sub").get<std::vector<Eigen::Index>>(),
                     j.at("scale").get<double>());
    be.note = j.value("note", "");
    return be;
}

json lcu_to_json(const LcuSpec& lcu) {
    json terms = json::array();
    for (size_t l = 0; l < lcu.betas.size(); ++l)
        terms.push_back(json{{"beta", lcu.betas[l]}, {"unitary", matrix_to_json(lcu.unitaries[l])}});
    return json{{"terms", terms}, {"beta_sum", lcu.beta_sum()}};
}

LcuSpec lcu_from_json(const json& j) {
    LcuSpec lcu;
    for (const auto& term : j.at("terms")) {
        lcu.betas.push_back(term.at("beta").get<double>());
        lcu.unitaries.push_back(matrix_from_json(term.at("unitary")));
    }
    lcu.validate();
    return lcu;
}

json cheb_poly_to_json(const ChebPoly& p) {
    json coeffs = json::array();
    for (Eigen::Index k = 0; k < p.coeffs.size(); ++k)
        coeffs.push_back(json::array({p.coeffs(k).real(), p.coeffs(k).imag()}));
    return json{{"basis", "chebyshev"},
                {"parity", parity_name(p.parity)},
                {"coeffs", coeffs},
                {"normalized", p.normalized},
                {"certificates",
                 {{"grid_points", p.cert.grid_points},
                  {"sup_error", p.cert.sup_error},
                  {"weight", p.cert.weight}}}};
}

ChebPoly cheb_poly_from_json(const json& j) {
    if (j.value("basis", "chebyshev") != std::string("chebyshev"))
        throw ConfigInvalid("expected a chebyshev-basis polynomial");
    ChebPoly p;
    const auto& coeffs = j.at("coeffs");
    p.coeffs = Vector::Zero(static_cast<Eigen::Index>(coeffs.size()));
    for (size_t k = 0; k < coeffs.size(); ++k)
        p.coeffs(static_cast<Eigen::Index>(k)) =
            cx(coeffs[k].at(0).get<double>(), coeffs[k].at(1).get<double>());
    p.parity = parity_from_name(j.value("parity", "mixed"));
    p.normalized = j.value("normalized", false);
    if (j.contains("certificates")) {
        p.cert.grid_points = j["certificates"].value("grid_points", 0);
        p.cert.sup_error = j["certificates"].value("sup_error", 0.0);
        p.cert.weight = j["certificates"].value("weight", 0.0);
    }
    return p;
}

json trig_poly_to_json(const TrigPoly& p) {
    json coeffs = json::array();
    for (Eigen::Index k = 0; k < p.coeffs.size(); ++k)
        coeffs.push_back(json::array({p.coeffs(k).real(), p.coeffs(k).imag()}));
    return json{{"basis", "fourier"},
                {"M", p.big_m},
                {"base_freq", p.base_freq},
                {"coeffs", coeffs},
                {"certificates",
                 {{"grid_points", p.cert.grid_points},
                  {"sup_error", p.cert.sup_error},
                  {"weight", p.weight_l1}}}};
}

json ledger_to_json(const QueryLedger& l) {
    return json{{"encoding_uses", l.encoding_uses},
                {"degree_cos", l.degree_cos},
                {"degree_sin", l.degree_sin},
                {"amplification_factor", l.amplification_factor},
                {"notes", l.notes}};
}

json plan_to_json(const SimPlan& p) {
    return json{{"t", p.t},          {"delta", p.delta},
                {"lambda", p.lambda}, {"eps", p.eps},
                {"gamma", p.gamma},   {"regime", regime_name(p.regime)},
                {"predicted_degree", p.predicted_degree}};
}

json report_to_json(const SimReport& r) {
    return json{{"overlap", r.overlap},
                {"residual_norm", r.residual_norm},
                {"leakage", r.leakage},
                {"plan", plan_to_json(r.plan)},
                {"ledger", ledger_to_json(r.ledger)}};
}

Graph graph_from_edge_list(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigInvalid("cannot open edge list: " + path);
    Graph g;
    std::string line;
    Eigen::Index max_vertex = -1;
    while (std::getline(in, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        std::istringstream ls(line);
        Eigen::Index u, v;
        if (ls >> u >> v) {
            if (u < 0 || v < 0) throw ConfigInvalid("negative vertex index");
            g.edges.emplace_back(std::min(u, v), std::max(u, v));
            max_vertex = std::max({max_vertex, u, v});
        }
    }
    g.n = max_vertex + 1;
    if (g.edges.empty()) throw ConfigInvalid("edge list is empty");
    return g;
}

namespace {

Matrix builtin_gate(const std::string& name) {
    const double s = 1.0 / std::sqrt(2.0);
    if (name == "H") {
        Matrix m(2, 2);
        m << s, s, s, -s;
        return m;
    }
    if (name == "X") {
        Matrix m(2, 2);
        m << 0, 1, 1, 0;
        return m;
    }
    if (name == "Z") {
        Matrix m(2, 2);
        m << 1, 0, 0, -1;
        return m;
    }
    if (name == "T") {
        Matrix m = Matrix::Identity(2, 2);
        m(1, 1) = std::exp(cx(0.0, std::acos(-1.0) / 4.0));
        return m;
    }
    if (name == "CNOT") {
        // Control is the first listed qubit (low bit), target the second.
        Matrix m = Matrix::Zero(4, 4);
        m(0, 0) = m(2, 2) = m(3, 1) = m(1, 3) = 1.0;
        return m;
    }
    throw ConfigInvalid("unknown gate name: " + name);
}

Matrix expand_gate(const Matrix& gate, const std::vector<Eigen::Index>& qubits,
                   Eigen::Index n_qubits) {
    const Eigen::Index dim = Eigen::Index(1) << n_qubits;
    const Eigen::Index k = static_cast<Eigen::Index>(qubits.size());
    if (gate.rows() != (Eigen::Index(1) << k))
        throw ConfigInvalid("gate dimension does not match its qubit count");
    for (Eigen::Index q : qubits)
        if (q < 0 || q >= n_qubits) throw ConfigInvalid("gate qubit out of range");

    Matrix full = Matrix::Zero(dim, dim);
    for (Eigen::Index col = 0; col < dim; ++col) {
        Eigen::Index sub_col = 0;
        for (Eigen::Index b = 0; b < k; ++b)
            sub_col |= ((col >> qubits[static_cast<size_t>(b)]) & 1) << b;
        for (Eigen::Index sub_row = 0; sub_row < gate.rows(); ++sub_row) {
            const cx amp = gate(sub_row, sub_col);
            if (std::abs(amp) == 0.0) continue;
            Eigen::Index row = col;
            for (Eigen::Index b = 0; b < k; ++b) {
                const Eigen::Index q = qubits[static_cast<size_t>(b)];
                row = (row & ~(Eigen::Index(1) << q)) | (((sub_row >> b) & 1) << q);
            }
            full(row, col) += amp;
        }
    }
    return full;
}

}  // namespace

std::vector<Matrix> gates_from_json(const json& j, Eigen::Index n_qubits) {
    std::vector<Matrix> out;
    for (const auto& g : j) {
        Matrix base;
        if (g.contains("matrix")) base = matrix_from_json(g.at("matrix"));
        else base = builtin_gate(g.at("name").get<std::string>());
        const auto qubits = g.at("qubits").get<std::vector<Eigen::Index>>();
        out.push_back(expand_gate(base, qubits, n_qubits));
    }
    return out;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigInvalid("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ExperimentFailed("cannot write file: " + path);
    out << content;
}

}  // namespace lowensim
