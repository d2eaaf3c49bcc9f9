#include "lowensim/hamiltonian_zoo.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>
#include <set>

#include "lowensim/log.hpp"

namespace lowensim {

namespace {

Matrix kron(const Matrix& a, const Matrix& b) {
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

Matrix embed_factor(const Matrix& op, Eigen::Index k, Eigen::Index n_factors, Eigen::Index n) {
    Matrix out = Matrix::Identity(1, 1);
    for (Eigen::Index i = 0; i < n_factors; ++i)
        out = kron(out, i == k ? op : Matrix(Matrix::Identity(n, n)));
    return out;
}

double operator_norm(const Matrix& m) {
    Eigen::JacobiSVD<Matrix> svd(m);
    return svd.singularValues().size() ? svd.singularValues()(0) : 0.0;
}

}  // namespace

// ---------------------------------------------------------------------------
// GapAmpHamiltonian
// ---------------------------------------------------------------------------

void GapAmpHamiltonian::audit(double tol) const {
    if (lambdas.size() != a_ops.size())
        throw ShapeMismatch("term count mismatch in gap-amplifiable audit");
    Matrix sum = Matrix::Zero(h.dim(), h.dim());
    for (size_t l = 0; l < a_ops.size(); ++l) {
        if (operator_norm(a_ops[l]) > 1.0 + tol_spectral)
            throw CertificationFailed("||A_l|| > 1 for term " + std::to_string(l));
        sum += lambdas[l] * (a_ops[l].adjoint() * a_ops[l]);
    }
    const double dev = (sum - h.entries).cwiseAbs().maxCoeff();
    if (dev > tol)
        throw CertificationFailed("H != sum lambda_l A_l^dag A_l, deviation " +
                                  std::to_string(dev));
    const double total = std::accumulate(lambdas.begin(), lambdas.end(), 0.0);
    if (total > lambda + tol_spectral)
        throw CertificationFailed("sum lambda_l exceeds recorded lambda");
    Eigen::SelfAdjointEigenSolver<Matrix> es(h.entries, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -tol)
        throw CertificationFailed("assembled Hamiltonian is not PSD");
}

AssembledEncoding GapAmpHamiltonian::assemble() const {
    if (encodings.size() != lambdas.size())
        throw ShapeMismatch("instance lacks per-term encodings");
    std::vector<GapAmpTerm> terms;
    terms.reserve(lambdas.size());
    for (size_t l = 0; l < lambdas.size(); ++l) terms.push_back({lambdas[l], encodings[l]});
    return assemble_gap_amplifiable(terms);
}

// ---------------------------------------------------------------------------
// Grover
// ---------------------------------------------------------------------------

Operator grover_hamiltonian(Eigen::Index n_items, Eigen::Index marked) {
    if (n_items < 2) throw DomainError("need N >= 2");
    if (marked < 0 || marked >= n_items) throw DomainError("marked index out of range");
    const double nu = 1.0 / std::sqrt(double(n_items));
    Matrix h = (1.0 + nu) * Matrix::Identity(n_items, n_items);
    h(marked, marked) -= 1.0;
    h -= Matrix::Constant(n_items, n_items, cx(1.0 / double(n_items), 0.0));
    Operator op(std::move(h));
    op.mark_hermitian();
    op.psd = true;  // spectrum {0, 2/sqrt(N), 1 + 1/sqrt(N)}
    return op;
}

LcuSpec grover_lcu(Eigen::Index n_items, Eigen::Index marked) {
    const double nu = 1.0 / std::sqrt(double(n_items));
    Matrix u2 = Matrix::Identity(n_items, n_items);
    u2(marked, marked) = -1.0;
    Matrix u3 = Matrix::Identity(n_items, n_items) -
                Matrix::Constant(n_items, n_items, cx(2.0 / double(n_items), 0.0));
    LcuSpec lcu;
    lcu.betas = {nu, 0.5, 0.5};
    lcu.unitaries = {Matrix::Identity(n_items, n_items), std::move(u2), std::move(u3)};
    return lcu;
}

GroverGaFamily::GroverGaFamily(Eigen::Index n_items, std::vector<Eigen::Index> marked)
    : n_(n_items), marked_(std::move(marked)) {
    if (marked_.empty()) throw DomainError("need K >= 1 marked items");
    for (Eigen::Index x : marked_)
        if (x < 0 || x >= n_) throw DomainError("marked index out of range");
}

double GroverGaFamily::lambda_total() const {
    const double nu = 1.0 / std::sqrt(double(n_));
    return double(k_copies()) * (1.0 + nu) * (1.0 + nu);
}

double GroverGaFamily::delta_low_energy() const {
    return 4.0 * double(k_copies()) / double(n_);
}

Operator GroverGaFamily::factor_hamiltonian(Eigen::Index k) const {
    Operator hx = grover_hamiltonian(n_, marked_[static_cast<size_t>(k)]);
    Operator sq(Matrix(hx.entries * hx.entries));
    sq.hermitian = true;
    sq.psd = true;
    return sq;
}

Matrix GroverGaFamily::factor_a(Eigen::Index k) const {
    const double nu = 1.0 / std::sqrt(double(n_));
    return grover_hamiltonian(n_, marked_[static_cast<size_t>(k)]).entries / (1.0 + nu);
}

const SpectralDecomp& GroverGaFamily::factor_decomp(Eigen::Index k) const {
    std::lock_guard<std::mutex> lock(cache_mutex_);
    auto it = factor_cache_.find(k);
    if (it == factor_cache_.end())
        it = factor_cache_.emplace(k, spectral_decompose(factor_hamiltonian(k))).first;
    return it->second;
}

Vector GroverGaFamily::evolve_factor(Eigen::Index k, double t, const Vector& v) const {
    return exact_evolution_apply(factor_decomp(k), t, v);
}

cx GroverGaFamily::tensor_overlap(const std::vector<Vector>& bras, const std::vector<Vector>& kets,
                                  double t) const {
    if (static_cast<Eigen::Index>(bras.size()) != k_copies() || bras.size() != kets.size())
        throw ShapeMismatch("need one bra and one ket per factor");
    cx amp = 1.0;
    for (Eigen::Index k = 0; k < k_copies(); ++k) {
        Vector evolved = evolve_factor(k, t, kets[static_cast<size_t>(k)]);
        amp *= bras[static_cast<size_t>(k)].dot(evolved);
    }
    return amp;
}

GapAmpHamiltonian GroverGaFamily::materialize() const {
    const Eigen::Index k_n = k_copies();
    double full_dim = std::pow(double(n_), double(k_n));
    if (full_dim > double(max_dim))
        throw TooLarge("N^K = " + std::to_string(full_dim) + " exceeds the dense cap");
    const Eigen::Index dim = static_cast<Eigen::Index>(full_dim + 0.5);

    GapAmpHamiltonian out;
    const double nu = 1.0 / std::sqrt(double(n_));
    const double lam_term = (1.0 + nu) * (1.0 + nu);
    Matrix h = Matrix::Zero(dim, dim);
    for (Eigen::Index k = 0; k < k_n; ++k) {
        Matrix a_full = embed_factor(factor_a(k), k, k_n, n_);
        h += lam_term * (a_full.adjoint() * a_full);
        out.lambdas.push_back(lam_term);
        out.a_ops.push_back(a_full);

        // A_k is itself a three-term LCU with coefficients summing to one.
        LcuSpec base = grover_lcu(n_, marked_[static_cast<size_t>(k)]);
        LcuSpec full;
        for (size_t j = 0; j < base.betas.size(); ++j) {
            full.betas.push_back(base.betas[j] / (1.0 + nu));
            full.unitaries.push_back(embed_factor(base.unitaries[j], k, k_n, n_));
        }
        out.encodings.push_back(lcu_to_block_encoding(full));
        out.encodings.back().scale = 1.0;  // coefficients sum to exactly 1
    }
    out.lambda = lam_term * double(k_n);
    out.h = Operator(std::move(h));
    out.h.mark_hermitian();
    out.h.psd = true;
    return out;
}

GroverGaFamily grover_ga_family(Eigen::Index n_items, std::vector<Eigen::Index> marked) {
    return GroverGaFamily(n_items, std::move(marked));
}

// ---------------------------------------------------------------------------
// Expander
// ---------------------------------------------------------------------------

Eigen::Index Graph::degree(Eigen::Index v) const {
    Eigen::Index d = 0;
    for (const auto& [a, b] : edges) d += (a == v) + (b == v);
    return d;
}

bool Graph::is_regular(Eigen::Index* d_out) const {
    if (n == 0) return false;
    const Eigen::Index d = degree(0);
    for (Eigen::Index v = 1; v < n; ++v)
        if (degree(v) != d) return false;
    if (d_out) *d_out = d;
    return true;
}

bool Graph::is_connected() const {
    if (n == 0) return false;
    std::vector<std::vector<Eigen::Index>> adj(static_cast<size_t>(n));
    for (const auto& [a, b] : edges) {
        adj[static_cast<size_t>(a)].push_back(b);
        adj[static_cast<size_t>(b)].push_back(a);
    }
    std::vector<bool> seen(static_cast<size_t>(n), false);
    std::vector<Eigen::Index> stack{0};
    seen[0] = true;
    Eigen::Index count = 1;
    while (!stack.empty()) {
        Eigen::Index v = stack.back();
        stack.pop_back();
        for (Eigen::Index w : adj[static_cast<size_t>(v)]) {
            if (!seen[static_cast<size_t>(w)]) {
                seen[static_cast<size_t>(w)] = true;
                ++count;
                stack.push_back(w);
            }
        }
    }
    return count == n;
}

Matrix Graph::adjacency() const {
    Matrix a = Matrix::Zero(n, n);
    for (const auto& [u, v] : edges) {
        a(u, v) += 1.0;
        a(v, u) += 1.0;
    }
    return a;
}

double Graph::lambda2() const {
    Eigen::SelfAdjointEigenSolver<Matrix> es(adjacency(), Eigen::EigenvaluesOnly);
    return es.eigenvalues()(n - 2);
}

Graph complete_graph(Eigen::Index n) {
    Graph g;
    g.n = n;
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = i + 1; j < n; ++j) g.edges.emplace_back(i, j);
    return g;
}

Graph random_regular_graph(Eigen::Index n, Eigen::Index d, unsigned long long seed) {
    if (d < 3) throw DomainError("need degree >= 3");
    if ((n * d) % 2 != 0 || d >= n) throw DomainError("no d-regular graph on n vertices");
    std::mt19937_64 gen(seed);

    Graph best;
    double best_l2 = std::numeric_limits<double>::infinity();
    for (int attempt = 0; attempt < 64; ++attempt) {
        // Pairing model: d stubs per vertex, random perfect matching.
        std::vector<Eigen::Index> stubs;
        stubs.reserve(static_cast<size_t>(n * d));
        for (Eigen::Index v = 0; v < n; ++v)
            for (Eigen::Index i = 0; i < d; ++i) stubs.push_back(v);
        std::shuffle(stubs.begin(), stubs.end(), gen);
        std::set<std::pair<Eigen::Index, Eigen::Index>> edge_set;
        bool simple = true;
        for (size_t i = 0; i + 1 < stubs.size(); i += 2) {
            Eigen::Index a = stubs[i], b = stubs[i + 1];
            if (a == b) { simple = false; break; }
            auto e = std::minmax(a, b);
            if (!edge_set.insert({e.first, e.second}).second) { simple = false; break; }
        }
        if (!simple) continue;
        Graph g;
        g.n = n;
        g.edges.assign(edge_set.begin(), edge_set.end());
        if (!g.is_connected()) continue;
        const double l2 = g.lambda2();
        if (l2 <= double(d) / 2.0) return g;
        if (l2 < best_l2) {
            best_l2 = l2;
            best = g;
        }
    }
    if (best.n == 0) throw SolverFailure("failed to sample a simple connected regular graph");
    log_info("random_regular_graph: lambda2 = " + std::to_string(best_l2) + " > d/2 = " +
             std::to_string(double(d) / 2.0) + " (unavoidable at small degree); using best sample");
    return best;
}

namespace {

// Greedy edge coloring; adjacent edges conflict, so <= 2d-1 colors suffice.
std::vector<Eigen::Index> greedy_edge_coloring(const Graph& g, Eigen::Index* n_colors) {
    std::vector<Eigen::Index> color(g.edges.size(), -1);
    Eigen::Index used = 0;
    for (size_t e = 0; e < g.edges.size(); ++e) {
        std::set<Eigen::Index> taken;
        for (size_t f = 0; f < e; ++f) {
            const bool adjacent = g.edges[e].first == g.edges[f].first ||
                                  g.edges[e].first == g.edges[f].second ||
                                  g.edges[e].second == g.edges[f].first ||
                                  g.edges[e].second == g.edges[f].second;
            if (adjacent) taken.insert(color[f]);
        }
        Eigen::Index c = 0;
        while (taken.count(c)) ++c;
        color[e] = c;
        used = std::max(used, c + 1);
    }
    *n_colors = used;
    return color;
}

}  // namespace

StateVector ExpanderInstance::ground_state() const {
    const Eigen::Index n = ham.h.dim();
    Vector v = Vector::Constant(n, cx(1.0 / std::sqrt(2.0 * double(n - 1)), 0.0));
    v(marked) = 1.0 / std::sqrt(2.0);
    return StateVector::normalized(std::move(v));
}

ExpanderInstance expander_ga_hamiltonian(const Graph& graph, Eigen::Index marked) {
    Eigen::Index d = 0;
    if (!graph.is_regular(&d)) throw NotRegular("graph is not regular");
    if (d < 3) throw NotRegular("need degree >= 3");
    if (!graph.is_connected()) throw Disconnected("graph is not connected");
    const Eigen::Index n = graph.n;
    if (marked < 0 || marked >= n) throw DomainError("marked vertex out of range");

    const double l2 = graph.lambda2();
    const bool expansion_ok = l2 <= double(d) / 2.0;
    if (!expansion_ok)
        log_info("expander_ga_hamiltonian: lambda2 = " + std::to_string(l2) +
                 " exceeds d/2; certificates below are checked directly");

    auto amplitude = [&](Eigen::Index v) {
        return v == marked ? 1.0 / std::sqrt(double(d) * double(n - 1))
                           : 1.0 / std::sqrt(double(d));
    };

    Eigen::Index n_colors = 0;
    std::vector<Eigen::Index> color = greedy_edge_coloring(graph, &n_colors);
    if (n_colors > 2 * d - 1) throw SolverFailure("edge coloring exceeded 2d-1 colors");

    GapAmpHamiltonian out;
    std::vector<Matrix> proj(static_cast<size_t>(n_colors), Matrix::Zero(n, n));
    Matrix h = Matrix::Zero(n, n);
    for (size_t e = 0; e < graph.edges.size(); ++e) {
        const auto [y, z] = graph.edges[e];
        Vector vec = Vector::Zero(n);
        vec(y) = amplitude(y);
        vec(z) = -amplitude(z);
        Matrix pi_e = vec * vec.adjoint() / vec.squaredNorm();
        proj[static_cast<size_t>(color[e])] += pi_e;
        h += pi_e;
    }
    for (Eigen::Index l = 0; l < n_colors; ++l) {
        out.lambdas.push_back(1.0);
        out.a_ops.push_back(proj[static_cast<size_t>(l)]);
        // Each color class is a projector, hence the two-term LCU
        // (1 + reflection)/2 block-encodes it exactly.
        LcuSpec lcu;
        lcu.betas = {0.5, 0.5};
        lcu.unitaries = {Matrix::Identity(n, n),
                         Matrix(2.0 * proj[static_cast<size_t>(l)] - Matrix::Identity(n, n))};
        out.encodings.push_back(lcu_to_block_encoding(lcu));
        out.encodings.back().scale = 1.0;
    }
    out.lambda = double(n_colors);
    out.h = Operator(std::move(h));
    out.h.mark_hermitian();
    out.h.psd = true;

    ExpanderInstance inst;
    inst.ham = std::move(out);
    inst.marked = marked;
    inst.graph = graph;

    // Certificates by exact diagonalization; these are the content of the
    // construction, so failures are fatal.
    SpectralDecomp sd = spectral_decompose(inst.ham.h);
    inst.certs.ground_energy = sd.eigenvalues(0);
    inst.certs.spectral_gap = sd.eigenvalues(1);
    inst.certs.colors = n_colors;
    inst.certs.adjacency_lambda2 = l2;
    inst.certs.expansion_ok = expansion_ok;

    Vector phi0 = inst.ground_state().amplitudes;
    Vector numeric = sd.eigenvectors.col(0);
    const cx phase = phi0.dot(numeric);
    if (std::abs(phase) > 1e-12) numeric *= std::conj(phase) / std::abs(phase);
    inst.certs.ground_state_deviation = (numeric - phi0).norm();

    // psi_1 = sqrt((1+nu)/2)|x> + sqrt((1-nu)/2)|perp>, nu = 1/sqrt(N)
    const double nu_s = 1.0 / std::sqrt(double(n));
    Vector psi1 = Vector::Constant(
        n, cx(std::sqrt((1.0 - nu_s) / 2.0) / std::sqrt(double(n - 1)), 0.0));
    psi1(marked) = std::sqrt((1.0 + nu_s) / 2.0);
    psi1.normalize();
    inst.certs.psi1_overlap_sq = std::norm(psi1.dot(phi0));

    if (inst.certs.ground_energy > 1e-10)
        throw CertificationFailed("expander ground energy " +
                                  std::to_string(inst.certs.ground_energy));
    if (inst.certs.spectral_gap < 1.0 / (4.0 * double(n)))
        throw CertificationFailed("expander gap " + std::to_string(inst.certs.spectral_gap) +
                                  " below 1/(4N)");
    if (inst.certs.ground_state_deviation > 1e-8)
        throw CertificationFailed("expander ground state deviates by " +
                                  std::to_string(inst.certs.ground_state_deviation));
    return inst;
}

// ---------------------------------------------------------------------------
// Two-level
// ---------------------------------------------------------------------------

GapAmpHamiltonian two_level_theta(double theta, double theta_m) {
    if (!(theta >= 0.0 && theta <= theta_m && theta_m <= std::numbers::pi / 2.0))
        throw DomainError("need 0 <= theta <= theta_M <= pi/2");
    Matrix a = Matrix::Zero(2, 2);
    a(0, 0) = std::sin(theta);
    a(1, 1) = std::sin(theta_m);

    GapAmpHamiltonian out;
    out.lambda = 1.0;
    out.lambdas = {1.0};
    out.a_ops = {a};
    // diag(sin, sin) = (U + U^dag)/2 for phases at pi/2 - theta.
    Matrix u = Matrix::Zero(2, 2);
    u(0, 0) = std::exp(cx(0.0, std::numbers::pi / 2.0 - theta));
    u(1, 1) = std::exp(cx(0.0, std::numbers::pi / 2.0 - theta_m));
    LcuSpec lcu;
    lcu.betas = {0.5, 0.5};
    lcu.unitaries = {u, u.adjoint()};
    out.encodings.push_back(lcu_to_block_encoding(lcu));
    out.encodings.back().scale = 1.0;
    out.h = Operator(Matrix(a.adjoint() * a));
    out.h.mark_hermitian();
    out.h.psd = true;
    return out;
}

// ---------------------------------------------------------------------------
// Clock
// ---------------------------------------------------------------------------

Eigen::Index ClockSpec::n_qubits() const {
    if (gates.empty()) throw DomainError("clock spec needs at least one gate");
    Eigen::Index dim = gates.front().rows();
    Eigen::Index n = 0;
    while ((Eigen::Index(1) << n) < dim) ++n;
    return n;
}

Matrix ClockSpec::padded_gate(Eigen::Index x) const {
    const Eigen::Index dim = gates.front().rows();
    const Eigen::Index g_count = g();
    if (x < 1 || x > g_prime()) throw DomainError("gate index out of range");
    if (x <= c1 * g_count || x > (c1 + 1) * g_count) return Matrix::Identity(dim, dim);
    return gates[static_cast<size_t>(x - c1 * g_count - 1)];
}

void ClockSpec::validate() const {
    if (gates.empty()) throw DomainError("clock spec needs gates");
    if (c1 < 2 || c2 < 2 || c1 % 2 != 0 || c2 % 2 != 0)
        throw DomainError("c1, c2 must be even and >= 2");
    const Eigen::Index dim = gates.front().rows();
    if ((Eigen::Index(1) << n_qubits()) != dim)
        throw DomainError("gate dimension is not a power of two");
    if (n_qubits() > 6) throw TooLarge("clock circuits support at most 6 qubits");
    for (const auto& gate : gates)
        if (gate.rows() != dim || gate.cols() != dim || !is_unitary(gate))
            throw NotUnitary("clock gates must be unitaries of equal dimension");
}

ClockHamiltonian clock_hamiltonian(const ClockSpec& spec) {
    spec.validate();
    const Eigen::Index gp = spec.g_prime();
    if (gp > max_dim) throw TooLarge("G' = " + std::to_string(gp) + " exceeds the dense cap");

    Matrix chain = Matrix::Zero(gp, gp);
    for (Eigen::Index x = 0; x < gp; ++x) {
        const Eigen::Index prev = (x + gp - 1) % gp;
        chain(x, x) += 1.0;
        chain(prev, prev) += 1.0;
        chain(x, prev) -= 1.0;
        chain(prev, x) -= 1.0;
    }
    ClockHamiltonian out;
    out.spec = spec;
    out.chain = Operator(std::move(chain));
    out.chain.mark_hermitian();
    out.chain.psd = true;
    return out;
}

Eigen::VectorXd ClockHamiltonian::closed_form_eigenvalues() const {
    const Eigen::Index gp = spec.g_prime();
    Eigen::VectorXd ev(gp);
    for (Eigen::Index k = 0; k < gp; ++k)
        ev(k) = 2.0 * (1.0 - std::cos(2.0 * std::numbers::pi * double(k) / double(gp)));
    std::sort(ev.data(), ev.data() + gp);
    return ev;
}

std::vector<Vector> ClockHamiltonian::history_states() const {
    const Eigen::Index dim = Eigen::Index(1) << spec.n_qubits();
    std::vector<Vector> h(static_cast<size_t>(spec.g_prime()));
    Vector cur = Vector::Zero(dim);
    cur(0) = 1.0;
    h[0] = cur;
    for (Eigen::Index j = 1; j < spec.g_prime(); ++j) {
        cur = spec.padded_gate(j) * cur;
        h[static_cast<size_t>(j)] = cur;
    }
    return h;
}

GapAmpHamiltonian ClockHamiltonian::chain_gap_amplifiable() const {
    const Eigen::Index gp = spec.g_prime();
    Matrix x_shift = Matrix::Zero(gp, gp);  // X|x> = |x-1>, cyclic
    for (Eigen::Index x = 0; x < gp; ++x) x_shift((x + gp - 1) % gp, x) = 1.0;
    Matrix a = 0.5 * (Matrix::Identity(gp, gp) - x_shift);

    GapAmpHamiltonian out;
    out.lambda = 4.0;
    out.lambdas = {4.0};
    out.a_ops = {a};
    LcuSpec lcu;
    lcu.betas = {0.5, 0.5};
    lcu.unitaries = {Matrix::Identity(gp, gp), Matrix(-x_shift)};
    out.encodings.push_back(lcu_to_block_encoding(lcu));
    out.encodings.back().scale = 1.0;
    out.h = chain;
    return out;
}

Wavepacket gaussian_wavepacket(const WavepacketSpec& wp, const ClockSpec& clock) {
    clock.validate();
    const Eigen::Index gp = clock.g_prime();
    const Eigen::Index support_hi = clock.c1 * clock.g();
    if (wp.x0 <= 0 || wp.x0 > support_hi) throw DomainError("x0 must sit inside [1, c1 G]");
    if (!(wp.sigma_hat > 0.0)) throw DomainError("sigma_hat must be positive");

    const double sigma = wp.sigma_hat * double(wp.x0);
    const double p0 = wp.p0_hat / double(wp.x0);

    double norm2 = 0.0;
    for (Eigen::Index x = 0; x <= support_hi; ++x) {
        const double dx = double(x - wp.x0);
        norm2 += std::exp(-dx * dx / (sigma * sigma));
    }
    const double eta = 1.0 / std::sqrt(norm2);

    Vector psi = Vector::Zero(gp);
    for (Eigen::Index x = 0; x <= support_hi; ++x) {
        const double dx = double(x - wp.x0);
        psi(x) = eta * std::exp(-dx * dx / (2.0 * sigma * sigma)) *
                 std::exp(cx(0.0, p0 * double(x)));
    }

    Wavepacket out;
    out.eta = eta;
    // Hopping quadratic form <psi|H|psi> = sum_x |psi(x) - psi(x-1)|^2 over
    // the periodic chain.
    double energy = 0.0;
    for (Eigen::Index x = 0; x < gp; ++x) {
        const cx diff = psi(x) - psi((x + gp - 1) % gp);
        energy += std::norm(diff);
    }
    out.energy = energy;
    out.state = StateVector::normalized(std::move(psi));
    return out;
}

// ---------------------------------------------------------------------------
// Generic random instances
// ---------------------------------------------------------------------------

Matrix random_hermitian(Eigen::Index n, unsigned long long seed) {
    std::mt19937_64 gen(seed);
    std::normal_distribution<double> nd;
    Matrix m(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) m(i, j) = cx(nd(gen), nd(gen));
    return Matrix(0.5 * (m + m.adjoint()));
}

Matrix random_unitary(Eigen::Index n, unsigned long long seed) {
    std::mt19937_64 gen(seed);
    std::normal_distribution<double> nd;
    Matrix m(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) m(i, j) = cx(nd(gen), nd(gen));
    Eigen::HouseholderQR<Matrix> qr(m);
    Matrix q = qr.householderQ();
    Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (Eigen::Index i = 0; i < n; ++i) {
        const cx d = r(i, i);
        q.col(i) *= (std::abs(d) > 0 ? d / std::abs(d) : cx(1.0, 0.0));
    }
    return q;
}

GapAmpHamiltonian random_psd_instance(Eigen::Index m, Eigen::Index n, double lambda,
                                      unsigned long long seed) {
    if (lambda <= 0.0) throw DomainError("lambda must be positive");
    std::mt19937_64 gen(seed);
    std::normal_distribution<double> nd;
    Matrix a(m, n);
    for (Eigen::Index i = 0; i < m; ++i)
        for (Eigen::Index j = 0; j < n; ++j) a(i, j) = cx(nd(gen), nd(gen));
    const double top = operator_norm(a);
    a /= top * 1.02;  // strict contraction

    GapAmpHamiltonian out;
    out.lambda = lambda;
    out.lambdas = {lambda};
    out.a_ops = {a};
    out.encodings.push_back(dilation_encoding(a));
    out.h = Operator(Matrix(lambda * (a.adjoint() * a)));
    out.h.mark_hermitian();
    out.h.psd = true;
    return out;
}

}  // namespace lowensim
