#include "lowensim/lowenergy_sim.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

#include "lowensim/degree_constants.hpp"
#include "lowensim/log.hpp"

namespace lowensim {

const char* regime_name(Regime r) {
    switch (r) {
        case Regime::time_dominated: return "time_dominated";
        case Regime::intermediate: return "intermediate";
        case Regime::error_dominated: return "error_dominated";
    }
    return "?";
}

SimPlan choose_gamma(double t, double delta, double lambda, double eps) {
    if (!(eps > 0.0) || eps >= 1.0) throw DomainError("need eps in (0,1)");
    if (!(delta > 0.0) || delta > lambda * (1.0 + 1e-12))
        throw DomainError("need 0 < Delta <= lambda");
    if (t * delta < eps)
        throw PreconditionViolated("t*Delta = " + std::to_string(t * delta) + " < eps = " +
                                   std::to_string(eps) + "; the identity suffices at no queries");
    const double raw = std::log(1.0 / eps) / t;
    SimPlan plan;
    plan.t = t;
    plan.delta = delta;
    plan.lambda = lambda;
    plan.eps = eps;
    plan.gamma = std::max(delta, std::min(lambda, raw));
    plan.regime = (raw <= delta)      ? Regime::time_dominated
                  : (raw >= lambda)   ? Regime::error_dominated
                                      : Regime::intermediate;
    plan.predicted_degree = static_cast<long long>(
        std::ceil(degree_constants::c1 * t * std::sqrt(lambda * plan.gamma) +
                  degree_constants::c2 * std::sqrt(lambda / plan.gamma) * std::log(1.0 / eps)));
    return plan;
}

namespace {

SimPlan plan_with_override(double t, double delta, double lambda, double eps,
                           std::optional<double> gamma_override) {
    SimPlan plan = choose_gamma(t, delta, lambda, eps);
    if (gamma_override) {
        const double g = *gamma_override;
        if (g < delta - 1e-12 || g > lambda * (1.0 + 1e-12))
            throw DomainError("Gamma override must satisfy Delta <= Gamma <= lambda");
        plan.gamma = g;
        plan.predicted_degree = static_cast<long long>(
            std::ceil(degree_constants::c1 * t * std::sqrt(lambda * g) +
                      degree_constants::c2 * std::sqrt(lambda / g) * std::log(1.0 / eps)));
    }
    return plan;
}

double check_leakage(const StateVector& psi, const Operator& h, double delta, double eps,
                     bool allow_leakage) {
    const double leak = low_energy_leakage(psi, h, delta);
    if (leak <= 1e-8) return leak;
    if (!allow_leakage)
        throw StateNotLowEnergy("||(1 - Pi_Delta) psi|| = " + std::to_string(leak));
    if (leak > eps)
        throw StateNotLowEnergy("leakage " + std::to_string(leak) +
                                " exceeds eps; guarantee would be vacuous");
    log_info("accepting leaky state; guarantee degrades to 1 - eps - 2*" + std::to_string(leak));
    return leak;
}

}  // namespace

SimReport simulate_low_energy(const BlockEncoding& v_of_a, double lambda, double t, double delta,
                              double eps, const StateVector& psi,
                              std::optional<double> gamma_override, bool allow_leakage) {
    if (lambda <= 0.0) throw DomainError("lambda must be positive");
    Matrix a = extract_block(v_of_a);
    if (psi.dim() != a.cols()) throw DimMismatch("state dimension does not match encoding");
    Operator h(Matrix(lambda * (a.adjoint() * a)));
    h.mark_hermitian();
    h.psd = true;

    SimReport report;
    report.plan = plan_with_override(t, delta, lambda, eps, gamma_override);
    report.leakage = check_leakage(psi, h, delta, eps, allow_leakage);

    // Polynomial budget: cos and sin each contribute at most 2*(eps/4) on the
    // tracked window, so the combined operator deviates by <= eps on S_Gamma.
    const double eps_poly = 0.25 * eps;
    SgaEncoding sga = sga_block_encoding(v_of_a);
    auto [p_cos, p_sin] = low_energy_evolution_polys(t, lambda, report.plan.gamma, eps_poly);

    SvtResult cos_part = apply_svt(sga.be, p_cos);
    SvtResult sin_part = apply_svt(sga.be, p_sin);
    SvtResult combined = lcu_combine_evolution(cos_part.op, sin_part.op, cos_part.ledger,
                                               sin_part.ledger);
    report.ledger = combined.ledger;
    report.ledger.notes += "; sga uses " + std::to_string(sga.be.input_queries) +
                           " V-queries per application";

    Vector out = sga.restrict(combined.op * sga.embed(psi.amplitudes));
    Vector exact = exact_evolution_apply(spectral_decompose(h), t, psi.amplitudes);
    report.overlap = std::abs(exact.dot(out));
    report.residual_norm = (out - exact).norm();
    report.final_state = std::move(out);
    return report;
}

SimReport simulate_low_energy_t_input(const BlockEncoding& t_enc, double lambda,
                                      double energy_shift, double t, double delta, double eps,
                                      const StateVector& psi,
                                      std::optional<double> gamma_override, bool allow_leakage) {
    AFromTResult conv = a_from_block_encoded_T(t_enc, lambda, energy_shift);
    // H - F = 2 lambda A^dag A; the F shift is a global phase on the evolution
    // and the overlap is phase-insensitive, so simulate the A form with the
    // shifted low-energy cutoff.
    const double delta_ga = delta - conv.shift_f;
    SimReport report = simulate_low_energy(conv.v, conv.lambda2, t, delta_ga, eps, psi,
                                           gamma_override, allow_leakage);
    report.ledger.notes += "; T-entry: " + std::to_string(conv.v.input_queries) +
                           " T-queries per V application, F = " + std::to_string(conv.shift_f);
    return report;
}

SimReport baseline_qsp(const BlockEncoding& be_h_over_lambda, double t, double lambda, double eps,
                       const StateVector& psi) {
    if (lambda <= 0.0) throw DomainError("lambda must be positive");
    if (be_h_over_lambda.row_sub != be_h_over_lambda.col_sub)
        throw ShapeMismatch("baseline needs a square Hermitian-block encoding");
    Matrix block = be_h_over_lambda.block();
    if (hermiticity_defect(block) > 1e-9) throw NotHermitian("encoded H/lambda is not Hermitian");
    {
        Eigen::SelfAdjointEigenSolver<Matrix> es(block, Eigen::EigenvaluesOnly);
        if (es.eigenvalues().minCoeff() < -1.0 - 1e-9 ||
            es.eigenvalues().maxCoeff() > 1.0 + 1e-9)
            throw DomainError("encoded H/lambda must have eigenvalues in [-1,1]");
    }
    if (psi.dim() != block.cols()) throw DimMismatch("state dimension mismatch");

    SimReport report;
    report.plan.t = t;
    report.plan.lambda = lambda;
    report.plan.eps = eps;
    report.plan.gamma = lambda;
    report.plan.regime = Regime::error_dominated;

    const double tl = t * lambda;
    const double eps_poly = 0.25 * eps;
    Vector out;
    if (tl == 0.0) {
        report.ledger.notes = "qsp baseline, t = 0";
        out = psi.amplitudes;
    } else {
        ChebPoly p_cos = jacobi_anger(tl, eps_poly, TrigKind::cos);
        ChebPoly p_sin = jacobi_anger(tl, eps_poly, TrigKind::sin);
        SvtResult cos_part = apply_svt(be_h_over_lambda, p_cos);
        SvtResult sin_part = apply_svt(be_h_over_lambda, p_sin);
        SvtResult combined =
            lcu_combine_evolution(cos_part.op, sin_part.op, cos_part.ledger, sin_part.ledger);
        report.ledger = combined.ledger;
        report.ledger.notes = "qsp baseline at t*lambda = " + std::to_string(tl);
        out = combined.op * psi.amplitudes;
    }

    Operator h(Matrix(lambda * block));
    h.mark_hermitian();
    Vector exact = exact_evolution_apply(spectral_decompose(h), t, psi.amplitudes);
    report.overlap = std::abs(exact.dot(out));
    report.residual_norm = (out - exact).norm();
    report.final_state = std::move(out);
    report.plan.delta = lambda;  // no low-energy assumption in the baseline
    return report;
}

RandomTimeProjectionResult random_time_projection(const Operator& h, const StateVector& psi,
                                                  double alpha) {
    if (!(alpha > 0.0)) throw DomainError("alpha must be positive");
    SpectralDecomp sd = spectral_decompose(h);
    const Eigen::Index n = h.dim();
    if (n < 2 || sd.eigenvalues(1) - sd.eigenvalues(0) < 1e-12)
        throw DegenerateGroundState("random-time projection needs a unique ground state");

    const double tau = alpha * double(n);
    constexpr int quad_points = 4096;

    // Characteristic function of the uniform distribution over the midpoints
    // T_i = (i + 1/2) tau / n_q: a geometric sum with closed form
    // e^{-i w tau / 2} sin(w tau / 2) / (n_q sin(w tau / (2 n_q))).
    auto phi = [&](double w) -> cx {
        if (w == 0.0) return 1.0;
        const double half = 0.5 * w * tau;
        const double denom = double(quad_points) * std::sin(half / double(quad_points));
        if (std::abs(denom) < 1e-300) return std::exp(cx(0.0, -half));
        return std::exp(cx(0.0, -half)) * std::sin(half) / denom;
    };

    Vector psi_eig = sd.eigenvectors.adjoint() * psi.amplitudes;
    Matrix rho_eig(n, n);
    double sup_phi = 0.0;
    for (Eigen::Index j = 0; j < n; ++j) {
        for (Eigen::Index k = 0; k < n; ++k) {
            const cx damp = phi(sd.eigenvalues(j) - sd.eigenvalues(k));
            rho_eig(j, k) = psi_eig(j) * std::conj(psi_eig(k)) * damp;
        }
        if (j >= 1) sup_phi = std::max(sup_phi, std::abs(phi(sd.eigenvalues(j))));
    }

    RandomTimeProjectionResult out;
    out.channel_output = sd.eigenvectors * rho_eig * sd.eigenvectors.adjoint();
    out.ground_state_prob = rho_eig(0, 0).real();
    out.char_bound = 8.0 / alpha;
    out.measured_char_sup = sup_phi;
    out.spectral_gap = sd.eigenvalues(1) - sd.eigenvalues(0);
    return out;
}

ClockPropagationResult clock_propagation_fidelity(const ClockSpec& clock, const WavepacketSpec& wp,
                                                  double t_hat,
                                                  std::optional<double> delta_coeff) {
    ClockHamiltonian ch = clock_hamiltonian(clock);
    Wavepacket packet = gaussian_wavepacket(wp, clock);

    ClockPropagationResult out;
    out.wavepacket_energy = packet.energy;
    out.t = t_hat * double(wp.x0) * double(wp.x0);

    StateVector chain_state = packet.state;
    if (delta_coeff) {
        const double g = double(clock.g());
        out.applied_delta = *delta_coeff / (g * g);
        chain_state = project_to_low_energy(chain_state, ch.chain, out.applied_delta);
    }

    SpectralDecomp sd = spectral_decompose(ch.chain);
    Vector evolved = exact_evolution_apply(sd, out.t, chain_state.amplitudes);

    // rho_n(t) = tr_clock |state(t)><state(t)| in the history-state frame:
    // the full state is sum_x psi_t(x) |h_x>|x>, so the n-qubit marginal is
    // sum_x |psi_t(x)|^2 |h_x><h_x|.
    std::vector<Vector> history = ch.history_states();
    const Eigen::Index dim = Eigen::Index(1) << clock.n_qubits();
    Matrix rho = Matrix::Zero(dim, dim);
    for (Eigen::Index x = 0; x < ch.spec.g_prime(); ++x) {
        const double p = std::norm(evolved(x));
        if (p == 0.0) continue;
        rho += p * (history[static_cast<size_t>(x)] * history[static_cast<size_t>(x)].adjoint());
    }

    const Vector& target = history[static_cast<size_t>((clock.c1 + 1) * clock.g())];
    Matrix diff = target * target.adjoint() - rho;
    Eigen::SelfAdjointEigenSolver<Matrix> es(diff, Eigen::EigenvaluesOnly);
    out.trace_distance = 0.5 * es.eigenvalues().cwiseAbs().sum();
    out.circuit_fidelity = (target.adjoint() * rho * target)(0, 0).real();
    return out;
}

}  // namespace lowensim
