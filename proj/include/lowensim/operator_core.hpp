#pragma once

#include <Eigen/Dense>
#include <complex>

#include "lowensim/errors.hpp"

namespace lowensim {

using cx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

// Structural tolerances. tol_symmetry guards Hermiticity flags, tol_spectral
// everything derived from an eigendecomposition. Double precision at
// dim <= 4096 leaves several digits of headroom over both.
inline constexpr double tol_symmetry = 1e-12;
inline constexpr double tol_spectral = 1e-10;
inline constexpr double tol_norm = 1e-12;
inline constexpr int max_dim = 4096;

/// Dense complex square matrix with Hermiticity/PSD metadata.
struct Operator {
    Matrix entries;
    bool hermitian = false;
    bool psd = false;

    Operator() = default;
    explicit Operator(Matrix m) : entries(std::move(m)) {
        if (entries.rows() != entries.cols())
            throw ShapeMismatch("Operator must be square, got " +
                                std::to_string(entries.rows()) + "x" +
                                std::to_string(entries.cols()));
        if (entries.rows() > max_dim)
            throw TooLarge("Operator dim " + std::to_string(entries.rows()) +
                           " exceeds cap " + std::to_string(max_dim));
    }

    Eigen::Index dim() const { return entries.rows(); }

    /// Checks max |M[i][j] - conj(M[j][i])| and sets the flag on success.
    Operator& mark_hermitian();
    /// Requires Hermitian; checks min eigenvalue >= -1e-10 and sets the flag.
    Operator& mark_psd();

    static Operator identity(Eigen::Index n);
    static Operator zero(Eigen::Index n);
};

/// Normalized complex vector; construction enforces ||psi|| = 1 within 1e-12.
struct StateVector {
    Vector amplitudes;

    StateVector() = default;
    explicit StateVector(Vector v);

    Eigen::Index dim() const { return amplitudes.size(); }

    /// Normalizes an arbitrary nonzero vector.
    static StateVector normalized(Vector v);
    static StateVector basis_state(Eigen::Index n, Eigen::Index k);
    static StateVector uniform(Eigen::Index n);
};

/// Ascending eigenvalues and the unitary of column eigenvectors.
struct SpectralDecomp {
    Eigen::VectorXd eigenvalues;
    Matrix eigenvectors;

    Matrix reconstruct() const {
        return eigenvectors * eigenvalues.asDiagonal().toDenseMatrix().cast<cx>() *
               eigenvectors.adjoint();
    }
};

double hermiticity_defect(const Matrix& m);
bool is_unitary(const Matrix& m, double tol = tol_spectral);

/// Exact dense eigendecomposition; the oracle behind every spectral check.
SpectralDecomp spectral_decompose(const Operator& h);

/// e^{-itH} through the eigendecomposition; unitary within 1e-10.
Operator exact_evolution(const Operator& h, double t);
Vector exact_evolution_apply(const SpectralDecomp& sd, double t, const Vector& v);

/// Projector onto the span of eigenvectors with eigenvalue <= delta.
/// An empty subspace yields the zero operator.
Operator low_energy_projector(const Operator& h, double delta);

/// Pi_delta |psi> / ||Pi_delta |psi>||; throws EmptyProjection below 1e-12.
StateVector project_to_low_energy(const StateVector& psi, const Operator& h, double delta);

/// ||(1 - Pi_delta)|psi>||, the leakage outside the low-energy subspace.
double low_energy_leakage(const StateVector& psi, const Operator& h, double delta);

}  // namespace lowensim
