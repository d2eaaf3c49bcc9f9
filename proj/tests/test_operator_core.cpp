#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "lowensim/hamiltonian_zoo.hpp"
#include "lowensim/operator_core.hpp"
#include "lowensim/rng.hpp"

using namespace lowensim;

namespace {

Operator random_hermitian_op(Eigen::Index n, unsigned long long seed) {
    Operator op(random_hermitian(n, seed));
    op.mark_hermitian();
    return op;
}

}  // namespace

TEST_CASE("spectral decomposition of a diagonal matrix sorts eigenvalues") {
    Matrix m = Matrix::Zero(3, 3);
    m(0, 0) = 3.0;
    m(1, 1) = 1.0;
    m(2, 2) = 2.0;
    Operator op(m);
    op.mark_hermitian();
    SpectralDecomp sd = spectral_decompose(op);
    CHECK(sd.eigenvalues(0) == doctest::Approx(1.0));
    CHECK(sd.eigenvalues(1) == doctest::Approx(2.0));
    CHECK(sd.eigenvalues(2) == doctest::Approx(3.0));
}

TEST_CASE("grover spectrum: {0, 2/sqrt(N)} plus (N-2)-fold 1 + 1/sqrt(N)") {
    const Eigen::Index n = 4;
    SpectralDecomp sd = spectral_decompose(grover_hamiltonian(n, 2));
    CHECK(std::abs(sd.eigenvalues(0)) < 1e-12);
    CHECK(sd.eigenvalues(1) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(sd.eigenvalues(2) == doctest::Approx(1.5).epsilon(1e-12));
    CHECK(sd.eigenvalues(3) == doctest::Approx(1.5).epsilon(1e-12));
}

TEST_CASE("random 8x8 reconstruction against the direct residual") {
    Operator h = random_hermitian_op(8, 11);
    SpectralDecomp sd = spectral_decompose(h);
    const double recon = (sd.reconstruct() - h.entries).cwiseAbs().maxCoeff();
    const double residual =
        (h.entries * sd.eigenvectors -
         sd.eigenvectors * sd.eigenvalues.asDiagonal().toDenseMatrix().cast<cx>())
            .cwiseAbs()
            .maxCoeff();
    CHECK(recon <= 1e-10 * h.entries.norm());
    CHECK(residual <= 1e-10 * h.entries.norm());
    Matrix gram = sd.eigenvectors.adjoint() * sd.eigenvectors;
    gram.diagonal().array() -= cx(1.0, 0.0);
    CHECK(gram.cwiseAbs().maxCoeff() <= 1e-10);
}

TEST_CASE("spectral_decompose rejects a non-Hermitian matrix") {
    Matrix m = Matrix::Zero(2, 2);
    m(0, 1) = 1.0;
    CHECK_THROWS_AS(spectral_decompose(Operator(m)), NotHermitian);
}

TEST_CASE("exact evolution basics") {
    SUBCASE("zero generator gives the identity") {
        Operator u = exact_evolution(Operator::zero(3), 2.7);
        CHECK((u.entries - Matrix::Identity(3, 3)).cwiseAbs().maxCoeff() < 1e-14);
    }
    SUBCASE("diag(0,1) at t = pi flips the phase") {
        Matrix m = Matrix::Zero(2, 2);
        m(1, 1) = 1.0;
        Operator op(m);
        op.mark_hermitian();
        Operator u = exact_evolution(op, std::acos(-1.0));
        CHECK(std::abs(u.entries(0, 0) - cx(1, 0)) < 1e-12);
        CHECK(std::abs(u.entries(1, 1) - cx(-1, 0)) < 1e-12);
    }
}

TEST_CASE("grover rotation reaches the marked state at t = (pi/2) sqrt(N)") {
    const Eigen::Index n = 16;
    const Eigen::Index x = 5;
    Operator h = grover_hamiltonian(n, x);
    const double t = 0.5 * std::acos(-1.0) * std::sqrt(double(n));
    Vector evolved = exact_evolution(h, t).entries * StateVector::uniform(n).amplitudes;
    CHECK(std::norm(evolved(x)) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("low-energy projector") {
    SUBCASE("rank-1 on diag(0,1,2) at Delta = 0.5") {
        Matrix m = Matrix::Zero(3, 3);
        m(1, 1) = 1.0;
        m(2, 2) = 2.0;
        Operator op(m);
        op.mark_hermitian();
        Operator p = low_energy_projector(op, 0.5);
        CHECK(std::abs(p.entries(0, 0) - cx(1, 0)) < 1e-12);
        CHECK(p.entries.cwiseAbs().sum() == doctest::Approx(1.0).epsilon(1e-10));
        CHECK((p.entries * p.entries - p.entries).cwiseAbs().maxCoeff() < 1e-10);
    }
    SUBCASE("grover N=16: rank-2 subspace containing |s>") {
        const Eigen::Index n = 16;
        Operator h = grover_hamiltonian(n, 3);
        Operator p = low_energy_projector(h, 2.0 / std::sqrt(double(n)));
        CHECK(std::abs(p.entries.trace().real() - 2.0) < 1e-10);
        Vector s = StateVector::uniform(n).amplitudes;
        CHECK((p.entries * s - s).norm() < 1e-10);
    }
    SUBCASE("empty subspace is the zero operator") {
        Operator h = Operator::identity(4);
        Operator p = low_energy_projector(h, 0.5);
        CHECK(p.entries.cwiseAbs().maxCoeff() == 0.0);
    }
}

TEST_CASE("project_to_low_energy") {
    Operator h = random_hermitian_op(6, 77);
    SpectralDecomp sd = spectral_decompose(h);
    // Shift so the spectrum starts at zero.
    Operator shifted(Matrix(h.entries - sd.eigenvalues(0) * Matrix::Identity(6, 6)));
    shifted.mark_hermitian();
    sd = spectral_decompose(shifted);

    SUBCASE("a state already inside the subspace is unchanged") {
        StateVector psi(sd.eigenvectors.col(0));
        StateVector out = project_to_low_energy(psi, shifted, sd.eigenvalues(1) * 0.5);
        CHECK(std::abs(std::abs(psi.amplitudes.dot(out.amplitudes)) - 1.0) < 1e-12);
    }
    SUBCASE("an orthogonal state raises EmptyProjection") {
        StateVector psi(sd.eigenvectors.col(5));
        CHECK_THROWS_AS(project_to_low_energy(psi, shifted, sd.eigenvalues(1) * 0.5),
                        EmptyProjection);
    }
}

TEST_CASE("evolution group properties on random instances") {
    for (unsigned long long seed : {1ULL, 2ULL, 3ULL}) {
        Operator h = random_hermitian_op(12, derive_seed(900, seed));
        const double t = 0.3 + 0.2 * double(seed), s = 1.1;

        Operator fwd = exact_evolution(h, t);
        Operator bwd = exact_evolution(h, -t);
        CHECK((fwd.entries * bwd.entries - Matrix::Identity(12, 12)).cwiseAbs().maxCoeff() <
              1e-10);

        Operator sum = exact_evolution(h, s + t);
        CHECK((sum.entries - exact_evolution(h, s).entries * fwd.entries).cwiseAbs().maxCoeff() <
              1e-10);

        // Projector commutes with the evolution.
        Operator proj = low_energy_projector(h, 0.0 + spectral_decompose(h).eigenvalues(6));
        CHECK((proj.entries * fwd.entries - fwd.entries * proj.entries).cwiseAbs().maxCoeff() <
              1e-10);

        // Energy conservation along the trajectory.
        StateVector psi = StateVector::normalized(random_hermitian(12, seed + 5).col(0));
        const double e0 = (psi.amplitudes.adjoint() * h.entries * psi.amplitudes)(0).real();
        Vector evolved = fwd.entries * psi.amplitudes;
        const double e1 = (evolved.adjoint() * h.entries * evolved)(0).real();
        CHECK(std::abs(e0 - e1) < 1e-9);
    }
}

TEST_CASE("unitarity of exact evolution") {
    Operator h = random_hermitian_op(32, 123);
    Operator u = exact_evolution(h, 1.7);
    CHECK(is_unitary(u.entries));
}
