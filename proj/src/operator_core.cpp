#include "lowensim/operator_core.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

namespace lowensim {

double hermiticity_defect(const Matrix& m) {
    return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

bool is_unitary(const Matrix& m, double tol) {
    if (m.rows() != m.cols()) return false;
    Matrix g = m.adjoint() * m;
    g.diagonal().array() -= cx(1.0, 0.0);
    return g.cwiseAbs().maxCoeff() <= tol;
}

Operator& Operator::mark_hermitian() {
    const double defect = hermiticity_defect(entries);
    if (defect > tol_symmetry)
        throw NotHermitian("symmetry defect " + std::to_string(defect));
    hermitian = true;
    return *this;
}

Operator& Operator::mark_psd() {
    if (!hermitian) mark_hermitian();
    Eigen::SelfAdjointEigenSolver<Matrix> es(entries, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -tol_spectral)
        throw DomainError("operator is not PSD, min eigenvalue " +
                          std::to_string(es.eigenvalues().minCoeff()));
    psd = true;
    return *this;
}

Operator Operator::identity(Eigen::Index n) {
    Operator op(Matrix::Identity(n, n));
    op.hermitian = true;
    op.psd = true;
    return op;
}

Operator Operator::zero(Eigen::Index n) {
    Operator op(Matrix::Zero(n, n));
    op.hermitian = true;
    op.psd = true;
    return op;
}

StateVector::StateVector(Vector v) : amplitudes(std::move(v)) {
    const double n = amplitudes.norm();
    if (std::abs(n - 1.0) > tol_norm)
        throw DomainError("state norm " + std::to_string(n) + " is not 1 within 1e-12");
}

StateVector StateVector::normalized(Vector v) {
    const double n = v.norm();
    if (n < tol_norm) throw DomainError("cannot normalize a (near-)zero vector");
    return StateVector(v / n);
}

StateVector StateVector::basis_state(Eigen::Index n, Eigen::Index k) {
    Vector v = Vector::Zero(n);
    v(k) = 1.0;
    return StateVector(std::move(v));
}

StateVector StateVector::uniform(Eigen::Index n) {
    return StateVector(Vector::Constant(n, cx(1.0 / std::sqrt(double(n)), 0.0)));
}

SpectralDecomp spectral_decompose(const Operator& h) {
    if (!h.hermitian) {
        if (hermiticity_defect(h.entries) > tol_symmetry)
            throw NotHermitian("spectral_decompose requires a Hermitian operator");
    }
    Eigen::SelfAdjointEigenSolver<Matrix> es(h.entries);
    if (es.info() != Eigen::Success)
        throw SolverFailure("SelfAdjointEigenSolver did not converge");
    return SpectralDecomp{es.eigenvalues(), es.eigenvectors()};
}

Operator exact_evolution(const Operator& h, double t) {
    SpectralDecomp sd = spectral_decompose(h);
    Vector phases(sd.eigenvalues.size());
    for (Eigen::Index j = 0; j < phases.size(); ++j)
        phases(j) = std::exp(cx(0.0, -t * sd.eigenvalues(j)));
    Operator u(sd.eigenvectors * phases.asDiagonal() * sd.eigenvectors.adjoint());
    return u;
}

Vector exact_evolution_apply(const SpectralDecomp& sd, double t, const Vector& v) {
    Vector w = sd.eigenvectors.adjoint() * v;
    for (Eigen::Index j = 0; j < w.size(); ++j)
        w(j) *= std::exp(cx(0.0, -t * sd.eigenvalues(j)));
    return sd.eigenvectors * w;
}

Operator low_energy_projector(const Operator& h, double delta) {
    if (delta < 0) throw DomainError("low_energy_projector requires delta >= 0");
    SpectralDecomp sd = spectral_decompose(h);
    Matrix p = Matrix::Zero(h.dim(), h.dim());
    for (Eigen::Index j = 0; j < sd.eigenvalues.size(); ++j) {
        if (sd.eigenvalues(j) <= delta)
            p += sd.eigenvectors.col(j) * sd.eigenvectors.col(j).adjoint();
    }
    Operator op(std::move(p));
    op.hermitian = true;
    op.psd = true;
    return op;
}

StateVector project_to_low_energy(const StateVector& psi, const Operator& h, double delta) {
    Operator proj = low_energy_projector(h, delta);
    Vector v = proj.entries * psi.amplitudes;
    if (v.norm() <= 1e-12)
        throw EmptyProjection("state has no support on energies <= " + std::to_string(delta));
    return StateVector::normalized(std::move(v));
}

double low_energy_leakage(const StateVector& psi, const Operator& h, double delta) {
    Operator proj = low_energy_projector(h, delta);
    Vector v = psi.amplitudes - proj.entries * psi.amplitudes;
    return v.norm();
}

}  // namespace lowensim
