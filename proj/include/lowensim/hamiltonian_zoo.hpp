#pragma once

#include <map>
#include <mutex>
#include <optional>
#include <vector>

#include "lowensim/block_encoding.hpp"
#include "lowensim/operator_core.hpp"

namespace lowensim {

/// H = sum_l lambda_l A_l^dag A_l with ||A_l|| <= 1; keeps the dense factors,
/// their scale-1 block encodings, and the assembled Hamiltonian together so
/// every instance can be audited and fed to the simulation pipeline.
struct GapAmpHamiltonian {
    double lambda = 0.0;  // sum of lambda_l
    std::vector<double> lambdas;
    std::vector<Matrix> a_ops;
    std::vector<BlockEncoding> encodings;
    Operator h;
    std::optional<Matrix> assembled_a;

    /// Checks H = sum lambda_l A_l^dag A_l within 1e-10, ||A_l|| <= 1 + 1e-10,
    /// and PSD; throws CertificationFailed otherwise.
    void audit(double tol = tol_spectral) const;

    /// Single block encoding of A = sum_l sqrt(lambda_l/lambda)|l> x A_l.
    AssembledEncoding assemble() const;
};

// --- Grover ------------------------------------------------------------------

/// H_x = (1 + 1/sqrt(N)) 1 - |x><x| - |s><s|; spectrum {0, 2/sqrt(N),
/// (1+1/sqrt(N)) x (N-2)}.
Operator grover_hamiltonian(Eigen::Index n_items, Eigen::Index marked);

/// The three-term LCU presentation H_x = (1/sqrt N) U1 + (1/2) U2(x) + (1/2) U3.
LcuSpec grover_lcu(Eigen::Index n_items, Eigen::Index marked);

/// K-fold tensor family of squared Grover Hamiltonians. Per-factor dynamics
/// are memoized; the N^K-dimensional operator is materialized only on request.
class GroverGaFamily {
  public:
    GroverGaFamily(Eigen::Index n_items, std::vector<Eigen::Index> marked);

    Eigen::Index n_items() const { return n_; }
    Eigen::Index k_copies() const { return static_cast<Eigen::Index>(marked_.size()); }
    double lambda_total() const;              // K (1 + 1/sqrt N)^2
    double delta_low_energy() const;          // 4K/N
    const std::vector<Eigen::Index>& marked() const { return marked_; }

    /// (H_{x_k})^2 on one factor.
    Operator factor_hamiltonian(Eigen::Index k) const;
    /// A_k = H_{x_k}/(1 + 1/sqrt N) on one factor.
    Matrix factor_a(Eigen::Index k) const;

    /// e^{-it (H_{x_k})^2} applied to one factor state; propagators memoized.
    Vector evolve_factor(Eigen::Index k, double t, const Vector& v) const;

    /// <prod_k bra_k| e^{-itH} |prod_k ket_k> without materializing N^K.
    cx tensor_overlap(const std::vector<Vector>& bras, const std::vector<Vector>& kets,
                      double t) const;

    /// Full (lambda_K, K)-gap-amplifiable presentation on C^{N^K};
    /// throws TooLarge past the dense cap.
    GapAmpHamiltonian materialize() const;

  private:
    Eigen::Index n_;
    std::vector<Eigen::Index> marked_;
    mutable std::mutex cache_mutex_;
    mutable std::map<Eigen::Index, SpectralDecomp> factor_cache_;
    const SpectralDecomp& factor_decomp(Eigen::Index k) const;
};

GroverGaFamily grover_ga_family(Eigen::Index n_items, std::vector<Eigen::Index> marked);

// --- Expander ----------------------------------------------------------------

struct Graph {
    Eigen::Index n = 0;
    std::vector<std::pair<Eigen::Index, Eigen::Index>> edges;

    Eigen::Index degree(Eigen::Index v) const;
    bool is_regular(Eigen::Index* d = nullptr) const;
    bool is_connected() const;
    Matrix adjacency() const;
    /// Second-largest adjacency eigenvalue.
    double lambda2() const;
};

Graph complete_graph(Eigen::Index n);

/// Random d-regular graph by the pairing model, resampled until simple and
/// connected; among a few candidates the one with the best spectral expansion
/// wins, with a warning when lambda2 > d/2 (unavoidable for small d).
Graph random_regular_graph(Eigen::Index n, Eigen::Index d, unsigned long long seed);

struct ExpanderCertificates {
    double ground_energy = 0.0;
    double spectral_gap = 0.0;
    double ground_state_deviation = 0.0;  // || |phi_0> - (|x>+|perp>)/sqrt2 ||
    double psi1_overlap_sq = 0.0;         // |<psi_1|phi_0>|^2
    Eigen::Index colors = 0;
    double adjacency_lambda2 = 0.0;
    bool expansion_ok = false;
};

struct ExpanderInstance {
    GapAmpHamiltonian ham;
    ExpanderCertificates certs;
    Eigen::Index marked = 0;
    Graph graph;

    StateVector ground_state() const;  // (|x> + |perp>)/sqrt(2)
};

/// Frustration-free search Hamiltonian over a d-regular graph: edge
/// projectors grouped by greedy edge-coloring into <= 2d-1 projector terms.
/// Ground energy 0, gap >= 1/(4N) certified by exact diagonalization.
ExpanderInstance expander_ga_hamiltonian(const Graph& graph, Eigen::Index marked);

// --- Two-level ---------------------------------------------------------------

/// A_theta = diag(sin theta, sin theta_M), H = A^dag A, lambda = 1,
/// Delta = sin^2 theta_M.
GapAmpHamiltonian two_level_theta(double theta, double theta_m);

// --- Clock -------------------------------------------------------------------

struct ClockSpec {
    std::vector<Matrix> gates;  // the G nontrivial gates, each on n qubits
    Eigen::Index c1 = 2;
    Eigen::Index c2 = 2;

    Eigen::Index n_qubits() const;
    Eigen::Index g() const { return static_cast<Eigen::Index>(gates.size()); }
    Eigen::Index g_prime() const { return (c1 + c2) * g(); }
    /// V_x for x in [1, G']: identity padding around the gate block.
    Matrix padded_gate(Eigen::Index x) const;
    void validate() const;
};

struct ClockHamiltonian {
    ClockSpec spec;
    Operator chain;  // G'-dimensional periodic tight-binding form W^dag H W

    Eigen::VectorXd closed_form_eigenvalues() const;  // 2(1 - cos(2 pi k / G'))
    /// |h_j> = V_j ... V_1 |0^n> for j = 0 .. G'-1.
    std::vector<Vector> history_states() const;
    /// H_FP = 4 A^dag A with A = (1 - X)/2; the (lambda = 4, L = 1) form.
    GapAmpHamiltonian chain_gap_amplifiable() const;
};

ClockHamiltonian clock_hamiltonian(const ClockSpec& spec);

struct WavepacketSpec {
    Eigen::Index x0 = 0;
    double sigma_hat = 1.0;
    double p0_hat = 1.0;  // sign sets the propagation direction
};

struct Wavepacket {
    StateVector state;  // on the G'-dimensional chain
    double energy = 0.0;
    double eta = 0.0;
};

/// psi(x) = eta exp[-(x-x0)^2/(2 sigma^2) + i p0 x] on [0, c1 G], zero
/// elsewhere; sigma = sigma_hat x0, p0 = p0_hat / x0. The energy certificate
/// is the hopping quadratic form sum_x |psi(x) - psi(x-1)|^2.
Wavepacket gaussian_wavepacket(const WavepacketSpec& wp, const ClockSpec& clock);

// --- Generic -----------------------------------------------------------------

/// Random (lambda, 1) instance: H = lambda A^dag A for a random contraction A
/// (m x n), encoded by unitary dilation.
GapAmpHamiltonian random_psd_instance(Eigen::Index m, Eigen::Index n, double lambda,
                                      unsigned long long seed);

Matrix random_unitary(Eigen::Index n, unsigned long long seed);
Matrix random_hermitian(Eigen::Index n, unsigned long long seed);

}  // namespace lowensim
