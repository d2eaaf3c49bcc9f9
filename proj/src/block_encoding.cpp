#include "lowensim/block_encoding.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <random>

namespace lowensim {

namespace {

void check_sub(const std::vector<Eigen::Index>& sub, Eigen::Index q, const char* name) {
    if (sub.empty()) throw ShapeMismatch(std::string(name) + " subspace is empty");
    Eigen::Index prev = -1;
    for (Eigen::Index i : sub) {
        if (i <= prev) throw ShapeMismatch(std::string(name) + " indices must be strictly increasing");
        if (i < 0 || i >= q) throw ShapeMismatch(std::string(name) + " index out of range");
        prev = i;
    }
}

std::vector<Eigen::Index> iota_sub(Eigen::Index n, Eigen::Index offset = 0) {
    std::vector<Eigen::Index> s(static_cast<size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i) s[static_cast<size_t>(i)] = offset + i;
    return s;
}

Eigen::Index next_pow2(Eigen::Index n) {
    Eigen::Index p = 1;
    while (p < n) p <<= 1;
    return p;
}

// Hermitian PSD square root via eigendecomposition, with clamping of the
// slightly negative eigenvalues roundoff produces for contractions.
Matrix psd_sqrt(const Matrix& m) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(m);
    Eigen::VectorXd ev = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    return es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().adjoint();
}

}  // namespace

BlockEncoding::BlockEncoding(Matrix u, std::vector<Eigen::Index> rows,
                             std::vector<Eigen::Index> cols, double scl)
    : unitary(std::move(u)), row_sub(std::move(rows)), col_sub(std::move(cols)), scale(scl) {
    if (unitary.rows() != unitary.cols()) throw NotUnitary("encoding matrix is not square");
    check_sub(row_sub, unitary.rows(), "row");
    check_sub(col_sub, unitary.rows(), "col");
    if (scale <= 0.0) throw DomainError("block-encoding scale must be positive");
    if (!verify_unitary())
        throw NotUnitary("encoding matrix fails the unitarity check at 1e-10");
}

Matrix BlockEncoding::block() const {
    Matrix b(block_rows(), block_cols());
    for (Eigen::Index i = 0; i < b.rows(); ++i)
        for (Eigen::Index j = 0; j < b.cols(); ++j)
            b(i, j) = unitary(row_sub[static_cast<size_t>(i)], col_sub[static_cast<size_t>(j)]);
    return b;
}

bool BlockEncoding::verify_unitary(bool force_full, double tol) const {
    const Eigen::Index q = unitary.rows();
    if (force_full || q <= full_check_dim) {
        Matrix g = unitary.adjoint() * unitary;
        g.diagonal().array() -= cx(1.0, 0.0);
        return g.cwiseAbs().maxCoeff() <= tol;
    }
    // Probe check: ||U^dag U v - v|| over seeded random vectors.
    std::mt19937_64 gen(0x5eedULL + static_cast<unsigned long long>(q));
    std::normal_distribution<double> nd;
    for (int rep = 0; rep < 8; ++rep) {
        Vector v(q);
        for (Eigen::Index i = 0; i < q; ++i) v(i) = cx(nd(gen), nd(gen));
        v.normalize();
        Vector w = unitary.adjoint() * (unitary * v) - v;
        if (w.norm() > tol * std::sqrt(double(q))) return false;
    }
    return true;
}

double LcuSpec::beta_sum() const {
    double s = 0.0;
    for (double b : betas) s += b;
    return s;
}

void LcuSpec::validate() const {
    if (betas.empty() || betas.size() != unitaries.size())
        throw ShapeMismatch("LCU needs matching, nonempty betas/unitaries");
    const Eigen::Index n = unitaries.front().rows();
    for (size_t l = 0; l < betas.size(); ++l) {
        if (betas[l] <= 0.0) throw DomainError("LCU coefficients must be positive");
        if (unitaries[l].rows() != n || unitaries[l].cols() != n)
            throw ShapeMismatch("LCU unitaries must share one dimension");
        if (!is_unitary(unitaries[l]))
            throw NotUnitary("LCU term " + std::to_string(l) + " is not unitary");
    }
}

Matrix extract_block(const BlockEncoding& be) {
    return be.scale * be.block();
}

double verify_block_encoding(const BlockEncoding& be, const Matrix& target, double /*tol*/) {
    if (target.rows() != be.block_rows() || target.cols() != be.block_cols())
        throw DimMismatch("target is " + std::to_string(target.rows()) + "x" +
                          std::to_string(target.cols()) + ", block is " +
                          std::to_string(be.block_rows()) + "x" + std::to_string(be.block_cols()));
    return (extract_block(be) - target).cwiseAbs().maxCoeff();
}

Matrix complete_to_unitary(const Vector& first_column) {
    const Eigen::Index d = first_column.size();
    if (std::abs(first_column.norm() - 1.0) > 1e-9)
        throw DomainError("column to complete must be a unit vector");
    Matrix u(d, d);
    u.col(0) = first_column;
    Eigen::Index filled = 1;
    for (Eigen::Index k = 0; k < d && filled < d; ++k) {
        Vector w = Vector::Zero(d);
        w(k) = 1.0;
        for (Eigen::Index j = 0; j < filled; ++j) w -= u.col(j).dot(w) * u.col(j);
        // Re-orthogonalize once; classical GS alone drifts at 1e-8 scale.
        for (Eigen::Index j = 0; j < filled; ++j) w -= u.col(j).dot(w) * u.col(j);
        const double nrm = w.norm();
        if (nrm > 1e-8) u.col(filled++) = w / nrm;
    }
    if (filled != d) throw SolverFailure("Gram-Schmidt completion came up short");
    return u;
}

BlockEncoding lcu_to_block_encoding(const LcuSpec& lcu) {
    lcu.validate();
    const Eigen::Index l_terms = static_cast<Eigen::Index>(lcu.betas.size());
    const Eigen::Index l_pad = next_pow2(l_terms);
    const Eigen::Index n = lcu.unitaries.front().rows();
    const double beta = lcu.beta_sum();

    Vector prep_col = Vector::Zero(l_pad);
    for (Eigen::Index l = 0; l < l_terms; ++l)
        prep_col(l) = std::sqrt(lcu.betas[static_cast<size_t>(l)] / beta);
    Matrix prepare = complete_to_unitary(prep_col);

    const Eigen::Index q = l_pad * n;
    Matrix u = Matrix::Zero(q, q);
    // (PREPARE^dag x 1) SELECT (PREPARE x 1), ancilla-major indexing.
    for (Eigen::Index l = 0; l < l_pad; ++l) {
        const Matrix& term = (l < l_terms) ? lcu.unitaries[static_cast<size_t>(l)]
                                           : Matrix(Matrix::Identity(n, n));
        for (Eigen::Index a = 0; a < l_pad; ++a)
            for (Eigen::Index b = 0; b < l_pad; ++b) {
                const cx w = std::conj(prepare(l, a)) * prepare(l, b);
                if (std::abs(w) == 0.0) continue;
                u.block(a * n, b * n, n, n) += w * term;
            }
    }
    BlockEncoding be(std::move(u), iota_sub(n), iota_sub(n), beta);
    be.input_queries = 1;
    be.note = "lcu(L=" + std::to_string(l_terms) + ")";
    return be;
}

BlockEncoding dilation_encoding(const Matrix& a) {
    const Eigen::Index m = a.rows(), n = a.cols();
    const Eigen::Index d = std::max(m, n);
    Matrix asq = Matrix::Zero(d, d);
    asq.topLeftCorner(m, n) = a;

    Eigen::JacobiSVD<Matrix> svd(asq);
    const double top = svd.singularValues().size() ? svd.singularValues()(0) : 0.0;
    if (top > 1.0 + tol_spectral)
        throw NormExceeded("dilation needs ||A|| <= 1, got " + std::to_string(top));

    Matrix gram_r = Matrix::Identity(d, d) - asq * asq.adjoint();
    Matrix gram_c = Matrix::Identity(d, d) - asq.adjoint() * asq;
    Matrix u(2 * d, 2 * d);
    u.topLeftCorner(d, d) = asq;
    u.topRightCorner(d, d) = psd_sqrt(gram_r);
    u.bottomLeftCorner(d, d) = psd_sqrt(gram_c);
    u.bottomRightCorner(d, d) = -asq.adjoint();

    BlockEncoding be(std::move(u), iota_sub(d), iota_sub(n), 1.0);
    be.note = "dilation";
    return be;
}

AFromTResult a_from_block_encoded_T(const BlockEncoding& t, double lambda, double energy_shift) {
    if (lambda <= 0.0) throw DomainError("lambda must be positive");
    if (t.row_sub != t.col_sub)
        throw ShapeMismatch("a_from_block_encoded_T expects a square Hermitian-block encoding");
    {
        Matrix hp = t.block();
        if (hermiticity_defect(hp) > 1e-9)
            throw NotHermitian("encoded block of T is not Hermitian");
        Eigen::SelfAdjointEigenSolver<Matrix> es(hp, Eigen::EigenvaluesOnly);
        if (es.eigenvalues().minCoeff() < -1.0 - 1e-9 || es.eigenvalues().maxCoeff() > 1.0 + 1e-9)
            throw DomainError("encoded H' must have eigenvalues in [-1, 1]");
    }

    const Eigen::Index q = t.space_dim();
    const Matrix td = t.unitary.adjoint();
    Matrix u = Matrix::Zero(2 * q, 2 * q);
    // (H x 1)(|0><0| x T^dag + |1><1| x 1)(H x 1): every quadrant is an LCU of
    // T^dag with the identity.
    u.topLeftCorner(q, q) = 0.5 * (td + Matrix::Identity(q, q));
    u.topRightCorner(q, q) = 0.5 * (td - Matrix::Identity(q, q));
    u.bottomLeftCorner(q, q) = 0.5 * (td - Matrix::Identity(q, q));
    u.bottomRightCorner(q, q) = 0.5 * (td + Matrix::Identity(q, q));

    std::vector<Eigen::Index> rows = iota_sub(q);
    std::vector<Eigen::Index> cols = t.col_sub;  // ancilla-0 block keeps raw indices

    AFromTResult out;
    out.v = BlockEncoding(std::move(u), std::move(rows), std::move(cols), 1.0);
    out.v.input_queries = 1;  // one controlled-T^dagger per application
    out.v.note = "a_from_T";
    out.shift_f = energy_shift - lambda;
    out.lambda2 = 2.0 * lambda;
    return out;
}

BlockEncoding t_from_block_encoded_A(const BlockEncoding& v, double lambda) {
    if (lambda <= 0.0) throw DomainError("lambda must be positive");
    {
        Eigen::JacobiSVD<Matrix> svd(v.block());
        const double top = svd.singularValues().size() ? svd.singularValues()(0) : 0.0;
        if (top > 1.0 + tol_spectral)
            throw NormExceeded("encoded A must satisfy ||A|| <= 1, got " + std::to_string(top));
    }
    const Eigen::Index q = v.space_dim();
    Vector upe = Vector::Constant(q, cx(-1.0, 0.0));  // U_{P'} = 2P' - 1
    for (Eigen::Index r : v.row_sub) upe(r) = 1.0;

    // (X x 1)(1 x V^dag) Vtilde (1 x V) with Vtilde = |+><+| x U_{P'} + |-><-| x 1:
    // quadrant (a', a) of Vtilde is (U_{P'} + (-1)^{a+a'} 1)/2.
    const Matrix& vu = v.unitary;
    Matrix vdu = vu.adjoint();
    Matrix p_plus = Matrix::Zero(q, q);   // V^dag (U+1)/2 V
    Matrix p_minus = Matrix::Zero(q, q);  // V^dag (U-1)/2 V
    {
        Matrix scaled = upe.asDiagonal() * vu;  // U_{P'} V
        Matrix vduv = vdu * scaled;             // V^dag U_{P'} V
        p_plus = 0.5 * (vduv + Matrix::Identity(q, q));
        p_minus = 0.5 * (vduv - Matrix::Identity(q, q));
    }
    Matrix u = Matrix::Zero(2 * q, 2 * q);
    u.topLeftCorner(q, q) = p_minus;    // after the ancilla flip
    u.topRightCorner(q, q) = p_plus;
    u.bottomLeftCorner(q, q) = p_plus;
    u.bottomRightCorner(q, q) = p_minus;

    BlockEncoding t(std::move(u), v.col_sub, v.col_sub, 1.0);
    t.input_queries = 2;  // one controlled-V and one controlled-V^dagger
    t.note = "t_from_A(lambda=" + std::to_string(lambda) + ")";
    return t;
}

Vector SgaEncoding::embed(const Vector& psi) const {
    if (psi.size() != static_cast<Eigen::Index>(state_positions.size()))
        throw DimMismatch("state dimension does not match the encoding");
    Vector out = Vector::Zero(2 * m);
    for (Eigen::Index j = 0; j < psi.size(); ++j)
        out(state_positions[static_cast<size_t>(j)]) = psi(j);
    return out;
}

Vector SgaEncoding::restrict(const Vector& block_vec) const {
    if (block_vec.size() != 2 * m) throw DimMismatch("block vector has wrong dimension");
    Vector out(static_cast<Eigen::Index>(state_positions.size()));
    for (Eigen::Index j = 0; j < out.size(); ++j)
        out(j) = block_vec(state_positions[static_cast<size_t>(j)]);
    return out;
}

SgaEncoding sga_block_encoding(const BlockEncoding& v) {
    if (std::abs(v.scale - 1.0) > 1e-12)
        throw DomainError("gap amplification expects a scale-1 encoding of A");
    // The column subspace must sit inside the row subspace so the square
    // zero-padded A is a genuine sub-block.
    std::vector<Eigen::Index> positions;
    positions.reserve(v.col_sub.size());
    for (Eigen::Index c : v.col_sub) {
        auto it = std::lower_bound(v.row_sub.begin(), v.row_sub.end(), c);
        if (it == v.row_sub.end() || *it != c)
            throw ShapeMismatch("column subspace must embed in the row subspace; "
                                "pad the encoding so M >= N");
        positions.push_back(static_cast<Eigen::Index>(it - v.row_sub.begin()));
    }

    const Eigen::Index q = v.space_dim();
    Vector up = Vector::Constant(q, cx(-1.0, 0.0));  // U_{P''} = 2P'' - 1
    for (Eigen::Index c : v.col_sub) up(c) = 1.0;

    const Matrix& vu = v.unitary;
    Matrix vd = vu.adjoint();
    Matrix pvd = vd;  // P'' V^dag
    for (Eigen::Index r = 0; r < q; ++r)
        if (up(r).real() < 0) pvd.row(r).setZero();
    Matrix vp = vu;  // V P''
    for (Eigen::Index c = 0; c < q; ++c)
        if (up(c).real() < 0) vp.col(c).setZero();
    Matrix half_m_vd = 0.5 * ((up.asDiagonal() * vd) - vd);  // (U-1)V^dag / 2
    Matrix half_v_m = 0.5 * ((vu * up.asDiagonal()) - vu);   // V (U-1) / 2

    // Layout |j>|b>|q>, j the doubling qubit, b the LCU ancilla.
    Matrix u = Matrix::Zero(4 * q, 4 * q);
    u.block(0 * q, 2 * q, q, q) = pvd;        // (j=0,b=0) <- (1,0)
    u.block(0 * q, 3 * q, q, q) = half_m_vd;  // (0,0) <- (1,1)
    u.block(1 * q, 2 * q, q, q) = half_m_vd;  // (0,1) <- (1,0)
    u.block(1 * q, 3 * q, q, q) = pvd;        // (0,1) <- (1,1)
    u.block(2 * q, 0 * q, q, q) = vp;         // (1,0) <- (0,0)
    u.block(2 * q, 1 * q, q, q) = half_v_m;   // (1,0) <- (0,1)
    u.block(3 * q, 0 * q, q, q) = half_v_m;   // (1,1) <- (0,0)
    u.block(3 * q, 1 * q, q, q) = vp;         // (1,1) <- (0,1)

    const Eigen::Index m = static_cast<Eigen::Index>(v.row_sub.size());
    std::vector<Eigen::Index> sub;
    sub.reserve(2 * v.row_sub.size());
    for (Eigen::Index r : v.row_sub) sub.push_back(r);                // (j=0, b=0)
    for (Eigen::Index r : v.row_sub) sub.push_back(2 * q + r);        // (j=1, b=0)

    SgaEncoding out;
    out.be = BlockEncoding(std::move(u), sub, sub, 1.0);
    out.be.input_queries = 2;  // one controlled-V, one controlled-V^dagger
    out.be.note = "sga";
    out.m = m;
    out.n = static_cast<Eigen::Index>(v.col_sub.size());
    out.state_positions = std::move(positions);  // live in the j=0 half
    return out;
}

AssembledEncoding assemble_gap_amplifiable(const std::vector<GapAmpTerm>& terms) {
    if (terms.empty()) throw ShapeMismatch("need at least one term");
    const Eigen::Index l_terms = static_cast<Eigen::Index>(terms.size());
    const Eigen::Index q = terms.front().encoding.space_dim();
    for (const auto& t : terms) {
        if (t.lambda_l <= 0.0) throw DomainError("lambda_l must be positive");
        if (t.encoding.space_dim() != q || t.encoding.row_sub != terms.front().encoding.row_sub ||
            t.encoding.col_sub != terms.front().encoding.col_sub)
            throw ShapeMismatch("all term encodings must share shape and subspaces");
        if (std::abs(t.encoding.scale - 1.0) > 1e-12)
            throw DomainError("term encodings must have scale 1");
    }
    double lambda = 0.0;
    for (const auto& t : terms) lambda += t.lambda_l;

    const Eigen::Index l_pad = next_pow2(l_terms);
    Vector g_col = Vector::Zero(l_pad);
    for (Eigen::Index l = 0; l < l_terms; ++l)
        g_col(l) = std::sqrt(terms[static_cast<size_t>(l)].lambda_l / lambda);
    Matrix g = complete_to_unitary(g_col);

    Matrix u = Matrix::Zero(l_pad * q, l_pad * q);
    for (Eigen::Index l = 0; l < l_pad; ++l) {
        const Matrix& vl = (l < l_terms) ? terms[static_cast<size_t>(l)].encoding.unitary
                                         : Matrix(Matrix::Identity(q, q));
        for (Eigen::Index b = 0; b < l_pad; ++b) {
            if (std::abs(g(l, b)) == 0.0) continue;
            u.block(l * q, b * q, q, q) = g(l, b) * vl;
        }
    }

    std::vector<Eigen::Index> rows;
    rows.reserve(terms.front().encoding.row_sub.size() * static_cast<size_t>(l_terms));
    for (Eigen::Index l = 0; l < l_terms; ++l)
        for (Eigen::Index r : terms.front().encoding.row_sub) rows.push_back(l * q + r);
    std::vector<Eigen::Index> cols = terms.front().encoding.col_sub;  // l = 0 block

    AssembledEncoding out;
    out.be = BlockEncoding(std::move(u), std::move(rows), std::move(cols), 1.0);
    out.be.input_queries = 1;  // one controlled-W per application
    out.be.note = "assembled(L=" + std::to_string(l_terms) + ")";
    out.lambda = lambda;
    return out;
}

}  // namespace lowensim
