#include "lowensim/svt_engine.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <cmath>

namespace lowensim {

namespace {

Vector eval_on_spectrum(const ChebPoly& p, const Eigen::VectorXd& xs) {
    Vector out(xs.size());
    for (Eigen::Index i = 0; i < xs.size(); ++i) out(i) = p.eval(xs(i));
    return out;
}

}  // namespace

SvtResult apply_svt(const BlockEncoding& be, const ChebPoly& p) {
    if (!p.normalized)
        throw UnnormalizedPolynomial("apply_svt needs |p| <= 1 certified on [-1,1]");
    if (p.parity == Parity::mixed)
        throw MixedParity("apply_svt needs a parity-definite polynomial");

    SvtResult res;
    res.ledger.encoding_uses = p.degree();
    res.ledger.amplification_factor = 1;
    res.ledger.notes = "apply_svt(degree=" + std::to_string(p.degree()) + ")";

    Matrix block = be.block();
    const bool square = (be.row_sub == be.col_sub);
    if (square && hermiticity_defect(block) <= 1e-9) {
        Eigen::SelfAdjointEigenSolver<Matrix> es(block);
        Vector vals = eval_on_spectrum(p, es.eigenvalues());
        res.op = es.eigenvectors() * vals.asDiagonal() * es.eigenvectors().adjoint();
        return res;
    }

    // Singular-value transform. Even p acts on the right factor of the polar
    // decomposition, odd p keeps the directional factor: p(x) = x q(x^2)
    // gives U p(S) W^dag.
    Eigen::JacobiSVD<Matrix> svd(block, Eigen::ComputeThinU | Eigen::ComputeThinV);
    Vector vals = eval_on_spectrum(p, svd.singularValues());
    if (p.parity == Parity::even) {
        res.op = svd.matrixV() * vals.asDiagonal() * svd.matrixV().adjoint();
    } else {
        res.op = svd.matrixU() * vals.asDiagonal() * svd.matrixV().adjoint();
    }
    return res;
}

Matrix walk_chebyshev(const BlockEncoding& be, int k) {
    if (k < 0) throw DomainError("k must be nonnegative");
    const Matrix& u = be.unitary;
    if (hermiticity_defect(u) > tol_spectral)
        throw NotSelfInverse("walk needs U = U^dagger; use apply_svt instead");
    if (be.row_sub != be.col_sub)
        throw NotSelfInverse("walk needs matching row/column subspaces");
    Matrix block = be.block();
    if (hermiticity_defect(block) > tol_spectral)
        throw NotSelfInverse("walk needs a Hermitian block");

    const Eigen::Index q = u.rows();
    Vector refl = Vector::Constant(q, cx(-1.0, 0.0));
    for (Eigen::Index r : be.row_sub) refl(r) = 1.0;

    Matrix walk = refl.asDiagonal() * u;  // R U
    Matrix pow = Matrix::Identity(q, q);
    for (int i = 0; i < k; ++i) pow = walk * pow;

    const Eigen::Index m = be.block_rows();
    Matrix out(m, m);
    for (Eigen::Index i = 0; i < m; ++i)
        for (Eigen::Index j = 0; j < m; ++j)
            out(i, j) = pow(be.row_sub[static_cast<size_t>(i)], be.row_sub[static_cast<size_t>(j)]);

    // Tie the walk to degree-based accounting: it must agree with T_k(block).
    SvtResult direct = apply_svt(be, ChebPoly::chebyshev_t(k));
    const double dev = (out - direct.op).cwiseAbs().maxCoeff();
    if (dev > 1e-9)
        throw SolverFailure("walk/T_k mismatch " + std::to_string(dev));
    return out;
}

SvtResult lcu_combine_evolution(const Matrix& cos_part, const Matrix& sin_part,
                                const QueryLedger& ledger_cos, const QueryLedger& ledger_sin) {
    if (cos_part.rows() != sin_part.rows() || cos_part.cols() != sin_part.cols())
        throw DimMismatch("cos/sin parts differ in shape");
    SvtResult res;
    res.op = cos_part - cx(0.0, 1.0) * sin_part;
    res.ledger.degree_cos = ledger_cos.encoding_uses;
    res.ledger.degree_sin = ledger_sin.encoding_uses;
    res.ledger.amplification_factor = 3;
    res.ledger.encoding_uses =
        res.ledger.amplification_factor * (res.ledger.degree_cos + res.ledger.degree_sin);
    res.ledger.notes = "cos - i sin LCU; amplification tracked, not simulated";
    return res;
}

}  // namespace lowensim
