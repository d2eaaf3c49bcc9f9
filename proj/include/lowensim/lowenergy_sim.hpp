#pragma once

#include <optional>
#include <string>

#include "lowensim/hamiltonian_zoo.hpp"
#include "lowensim/svt_engine.hpp"

namespace lowensim {

enum class Regime { time_dominated, intermediate, error_dominated };

const char* regime_name(Regime r);

struct SimPlan {
    double t = 0.0;
    double delta = 0.0;
    double lambda = 0.0;
    double eps = 0.0;
    double gamma = 0.0;
    Regime regime = Regime::time_dominated;
    long long predicted_degree = 0;
};

struct SimReport {
    double overlap = 0.0;        // |<psi| Pi U^dag Pi e^{-itH} |psi>|
    double residual_norm = 0.0;  // ||(Pi U Pi - e^{-itH}) psi|| up to known global phase
    QueryLedger ledger;
    SimPlan plan;
    double leakage = 0.0;  // ||(1 - Pi_Delta) psi|| accepted under the leakage policy
    Vector final_state;    // Pi U Pi |psi>
};

/// Gamma = clamp(log(1/eps)/t) into [Delta, lambda]; reproduces all three
/// regime choices and is continuous across their boundaries. The predicted
/// degree uses the frozen calibration constants.
SimPlan choose_gamma(double t, double delta, double lambda, double eps);

/// Full pipeline from a block encoding of A with H = lambda A^dag A:
/// gap-amplified encoding -> evolution polynomials at the planned Gamma ->
/// SVT for cos and sin -> LCU combination -> fidelity against exact
/// evolution. psi must be in S_Delta up to 1e-8 unless allow_leakage, in
/// which case leakage up to eps is tolerated and reported.
SimReport simulate_low_energy(const BlockEncoding& v_of_a, double lambda, double t, double delta,
                              double eps, const StateVector& psi,
                              std::optional<double> gamma_override = std::nullopt,
                              bool allow_leakage = false);

/// Same pipeline entered through a block encoding T of H' = (H - energy_shift)/lambda;
/// converts to the A form (H - F = 2 lambda A^dag A) and simulates that.
SimReport simulate_low_energy_t_input(const BlockEncoding& t_enc, double lambda,
                                      double energy_shift, double t, double delta, double eps,
                                      const StateVector& psi,
                                      std::optional<double> gamma_override = std::nullopt,
                                      bool allow_leakage = false);

/// Generic-QSP baseline: Jacobi-Anger polynomials at effective time t*lambda
/// applied through a block encoding of H/lambda, combined via the same LCU.
SimReport baseline_qsp(const BlockEncoding& be_h_over_lambda, double t, double lambda, double eps,
                       const StateVector& psi);

struct RandomTimeProjectionResult {
    Matrix channel_output;    // N(|psi><psi|) in the computational basis
    double ground_state_prob = 0.0;
    double char_bound = 0.0;  // 8/alpha
    double measured_char_sup = 0.0;
    double spectral_gap = 0.0;
};

/// Ground-state projection by random time evolution: averages
/// e^{-iTH} rho e^{iTH} over T drawn from the 4096 midpoints of
/// [0, alpha * dim]; the discrete characteristic function is evaluated in
/// closed form per eigenvalue pair.
RandomTimeProjectionResult random_time_projection(const Operator& h, const StateVector& psi,
                                                  double alpha);

struct ClockPropagationResult {
    double trace_distance = 0.0;    // (1/2)||U|0><0|U^dag - rho_n(t)||_1
    double circuit_fidelity = 0.0;  // <0|U^dag rho_n(t) U|0>
    double wavepacket_energy = 0.0;
    double applied_delta = 0.0;     // low-energy cutoff if projection requested
    double t = 0.0;
};

/// Evolves the wavepacket on the G'-chain, decodes through the history
/// states, and compares the n-qubit marginal against the circuit output.
/// When delta_coeff is given the wavepacket is first projected onto chain
/// energies <= delta_coeff / G^2.
ClockPropagationResult clock_propagation_fidelity(const ClockSpec& clock, const WavepacketSpec& wp,
                                                  double t_hat,
                                                  std::optional<double> delta_coeff = std::nullopt);

}  // namespace lowensim
