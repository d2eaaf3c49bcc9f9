#pragma once

#include <string>

#include "lowensim/block_encoding.hpp"
#include "lowensim/poly_engine.hpp"

namespace lowensim {

/// Exact accounting of (controlled) encoding applications. Degree-based
/// entries come straight from QSVT's degree = queries rule; the
/// amplification factor is the conventional LCU success-amplification
/// constant, tracked rather than simulated.
struct QueryLedger {
    long long encoding_uses = 0;
    long long degree_cos = 0;
    long long degree_sin = 0;
    int amplification_factor = 3;
    std::string notes;
};

struct SvtResult {
    Matrix op;
    QueryLedger ledger;
};

/// Applies a parity-definite, normalized polynomial to the encoded block.
/// Hermitian blocks go through the spectral decomposition; rectangular blocks
/// apply p to singular values (even: W p(S) W^dag on the column space, odd:
/// U p(S) W^dag). encoding_uses equals the polynomial degree, always.
SvtResult apply_svt(const BlockEncoding& be, const ChebPoly& p);

/// Qubitization walk cross-check for self-inverse Hermitian encodings:
/// computes Pi (R U)^k Pi with R the reflection about the encoding subspace,
/// checks it equals T_k(block) within 1e-9, and returns it. Uses exactly k
/// encoding applications.
Matrix walk_chebyshev(const BlockEncoding& be, int k);

/// cos_part - i sin_part, with the combined ledger: degrees recorded
/// separately and encoding_uses = amplification_factor * (d_cos + d_sin).
SvtResult lcu_combine_evolution(const Matrix& cos_part, const Matrix& sin_part,
                                const QueryLedger& ledger_cos, const QueryLedger& ledger_sin);

}  // namespace lowensim
