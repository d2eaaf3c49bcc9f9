#pragma once

#include <string>
#include <vector>

#include "lowensim/operator_core.hpp"

namespace lowensim {

/// Unitary on an enlarged space plus the row/column subspace descriptors that
/// carve out the encoded operator: encoded = scale * U[row_sub, col_sub].
/// Index lists replace qubit-register phrasing so non-power-of-two dimensions
/// work throughout.
struct BlockEncoding {
    Matrix unitary;
    std::vector<Eigen::Index> row_sub;
    std::vector<Eigen::Index> col_sub;
    double scale = 1.0;

    // Queries to the encoding this one was built from, per application.
    // Constructors set it (e.g. one controlled-T use for the A-from-T build).
    int input_queries = 0;
    std::string note;

    BlockEncoding() = default;
    BlockEncoding(Matrix u, std::vector<Eigen::Index> rows, std::vector<Eigen::Index> cols,
                  double scl = 1.0);

    Eigen::Index space_dim() const { return unitary.rows(); }
    Eigen::Index block_rows() const { return static_cast<Eigen::Index>(row_sub.size()); }
    Eigen::Index block_cols() const { return static_cast<Eigen::Index>(col_sub.size()); }

    /// Raw sub-block without the scale factor.
    Matrix block() const;

    /// Full unitarity check is O(Q^3); above `full_check_dim` the constructor
    /// falls back to seeded probe vectors. Tests call this with force_full.
    bool verify_unitary(bool force_full = false, double tol = tol_spectral) const;

    static constexpr Eigen::Index full_check_dim = 256;
};

/// H = sum_l beta_l U_l with beta_l > 0; SELECT/PREPARE semantics.
struct LcuSpec {
    std::vector<double> betas;
    std::vector<Matrix> unitaries;

    double beta_sum() const;
    void validate() const;
};

/// scale * U[row_sub, col_sub] as a dense (possibly rectangular) matrix.
Matrix extract_block(const BlockEncoding& be);

/// Max-abs deviation between the encoded block and `target`. The caller
/// compares against its own tolerance; `tol` is echoed for log lines only.
double verify_block_encoding(const BlockEncoding& be, const Matrix& target, double tol);

/// PREPARE^dagger . SELECT . PREPARE with the ancilla padded to a power of
/// two; PREPARE completes the sqrt(beta_l/beta) column by deterministic
/// Gram-Schmidt against the standard basis. scale = sum beta_l.
BlockEncoding lcu_to_block_encoding(const LcuSpec& lcu);

/// Exact single-step unitary dilation of an arbitrary matrix with norm <= 1.
/// Rows are padded to max(m, n) so the column subspace always embeds in the
/// row subspace, which the gap-amplification assembly relies on.
BlockEncoding dilation_encoding(const Matrix& a);

struct AFromTResult {
    BlockEncoding v;        // encodes A = ((T^dag + 1)/2) Pi, scale 1
    double shift_f = 0.0;   // H - F = lambda2 * A^dag A
    double lambda2 = 0.0;   // = 2 lambda
};

/// Lemma-style conversion T -> V. The raw block of `t` is read as
/// H' = (H - energy_shift)/lambda; one controlled-T^dagger per application.
AFromTResult a_from_block_encoded_T(const BlockEncoding& t, double lambda,
                                    double energy_shift = 0.0);

/// Converse conversion V -> T: block encodes H' = A^dag A - 1 = (H - lambda)/lambda,
/// built from V, V^dagger and the row-subspace reflection.
BlockEncoding t_from_block_encoded_A(const BlockEncoding& v, double lambda);

/// Block encoding of the gap-amplified Hermitian [[0, A^dag],[A, 0]] (the
/// square-padded A), together with the maps between C^N and the block space.
struct SgaEncoding {
    BlockEncoding be;                           // unitary on 4Q, Hermitian 2M block
    Eigen::Index m = 0;                         // rows of the padded square A
    Eigen::Index n = 0;                         // original column dimension
    std::vector<Eigen::Index> state_positions;  // C^N coordinates inside the 2M block

    Matrix hermitian_block() const { return extract_block(be); }
    Vector embed(const Vector& psi) const;
    Vector restrict(const Vector& block_vec) const;
};

SgaEncoding sga_block_encoding(const BlockEncoding& v);

struct GapAmpTerm {
    double lambda_l = 0.0;
    BlockEncoding encoding;
};

struct AssembledEncoding {
    BlockEncoding be;     // encodes A = sum_l sqrt(lambda_l/lambda) |l> x A_l
    double lambda = 0.0;  // sum_l lambda_l
};

/// Lemma-style reduction of a (lambda, L) presentation to a single encoding:
/// controlled select over terms composed with the preparation map G.
AssembledEncoding assemble_gap_amplifiable(const std::vector<GapAmpTerm>& terms);

/// Deterministic completion of a unit column to a full unitary.
Matrix complete_to_unitary(const Vector& first_column);

}  // namespace lowensim
