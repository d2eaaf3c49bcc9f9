#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <fstream>

#include "lowensim/rng.hpp"
#include "lowensim/serialize.hpp"

using namespace lowensim;

TEST_CASE("operator JSON round trip is bit exact") {
    Operator h(random_hermitian(6, 31));
    h.mark_hermitian();
    const json j = operator_to_json(h);
    // Through text, as a file would.
    Operator back = operator_from_json(json::parse(j.dump()));
    CHECK(back.hermitian);
    for (Eigen::Index i = 0; i < 6; ++i)
        for (Eigen::Index k = 0; k < 6; ++k) {
            CHECK(back.entries(i, k).real() == h.entries(i, k).real());
            CHECK(back.entries(i, k).imag() == h.entries(i, k).imag());
        }
}

TEST_CASE("state and block-encoding round trips") {
    StateVector s = StateVector::normalized(random_hermitian(5, 7).col(0));
    StateVector s2 = state_from_json(json::parse(state_to_json(s).dump()));
    CHECK((s.amplitudes - s2.amplitudes).cwiseAbs().maxCoeff() == 0.0);

    BlockEncoding be = dilation_encoding(Matrix(0.5 * random_unitary(4, 3)));
    BlockEncoding be2 = block_encoding_from_json(json::parse(block_encoding_to_json(be).dump()));
    CHECK((be.unitary - be2.unitary).cwiseAbs().maxCoeff() == 0.0);
    CHECK(be.row_sub == be2.row_sub);
    CHECK(be.col_sub == be2.col_sub);
    CHECK(be.scale == be2.scale);
}

TEST_CASE("polynomial serialization carries certificates") {
    ChebPoly p = jacobi_anger(3.0, 1e-3, TrigKind::sin);
    json j = cheb_poly_to_json(p);
    CHECK(j["basis"] == "chebyshev");
    CHECK(j["parity"] == "odd");
    CHECK(j["certificates"]["grid_points"].get<Eigen::Index>() == p.cert.grid_points);
    ChebPoly p2 = cheb_poly_from_json(j);
    CHECK(p2.degree() == p.degree());
    CHECK((p2.coeffs - p.coeffs).cwiseAbs().maxCoeff() == 0.0);
    CHECK(p2.normalized);
}

TEST_CASE("lcu round trip validates") {
    LcuSpec lcu = grover_lcu(4, 2);
    LcuSpec back = lcu_from_json(json::parse(lcu_to_json(lcu).dump()));
    CHECK(back.betas == lcu.betas);
    CHECK(back.beta_sum() == doctest::Approx(lcu.beta_sum()));
}

TEST_CASE("edge list ingestion") {
    const std::string path = "test_edges.tmp";
    {
        std::ofstream out(path);
        out << "# a triangle plus a pendant edge\n0 1\n1 2\n2 0\n2 3\n";
    }
    Graph g = graph_from_edge_list(path);
    CHECK(g.n == 4);
    CHECK(g.edges.size() == 4);
    CHECK(g.degree(2) == 3);
    std::remove(path.c_str());
}

TEST_CASE("gate list ingestion with built-ins and custom matrices") {
    json gates = json::array();
    gates.push_back(json{{"name", "H"}, {"qubits", {0}}});
    gates.push_back(json{{"name", "CNOT"}, {"qubits", {0, 1}}});
    json custom = json{{"qubits", {1}},
                       {"matrix", matrix_to_json(Matrix(Matrix::Identity(2, 2)))}};
    gates.push_back(custom);
    std::vector<Matrix> mats = gates_from_json(gates, 2);
    REQUIRE(mats.size() == 3);
    for (const auto& m : mats) {
        CHECK(m.rows() == 4);
        CHECK(is_unitary(m));
    }
    // H on qubit 0 then CNOT(0 -> 1) sends |00> to a Bell state.
    Vector v = Vector::Zero(4);
    v(0) = 1.0;
    v = mats[1] * (mats[0] * v);
    CHECK(std::abs(v(0) - cx(1.0 / std::sqrt(2.0), 0)) < 1e-12);
    CHECK(std::abs(v(3) - cx(1.0 / std::sqrt(2.0), 0)) < 1e-12);
}
