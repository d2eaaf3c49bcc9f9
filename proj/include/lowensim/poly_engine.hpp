#pragma once

#include <optional>
#include <utility>

#include "lowensim/operator_core.hpp"

namespace lowensim {

enum class Parity { even, odd, mixed };

enum class TrigKind { cos, sin };

/// Grid-certificate record attached to emitted polynomials so every bound is
/// reproducible: which grid, what sup error, what coefficient weight.
struct PolyCertificates {
    Eigen::Index grid_points = 0;
    double sup_error = 0.0;
    double weight = 0.0;
};

/// Chebyshev-basis polynomial, parity-tagged. coeffs(k) multiplies T_k.
struct ChebPoly {
    Parity parity = Parity::mixed;
    Vector coeffs;           // complex, but real-valued throughout the pipeline
    bool normalized = false; // |P| <= 1 + 1e-9 certified on [-1,1]
    PolyCertificates cert;

    int degree() const;
    bool is_real(double tol = 1e-12) const;

    cx eval(double x) const;  // Clenshaw
    Eigen::VectorXcd eval_many(const Eigen::VectorXd& xs) const;

    /// Sets parity from the zero pattern of the coefficients (1e-12).
    void infer_parity();

    static ChebPoly constant(cx value);
    static ChebPoly chebyshev_t(int k);
    static ChebPoly product(const ChebPoly& a, const ChebPoly& b);
    /// out += alpha * p
    static void accumulate(Vector& acc, const ChebPoly& p, cx alpha);
};

/// Complex Fourier series sum_m c_m e^{i pi m y / 2} over m in [-M, M],
/// stored as coeffs(m + M). base_freq is the frequency in the original x
/// variable, pi/(2(r+delta)).
struct TrigPoly {
    Vector coeffs;
    int big_m = 0;
    double base_freq = 0.0;
    double weight_l1 = 0.0;
    PolyCertificates cert;

    cx eval_y(double y) const;
};

struct TrigSquareForm {
    TrigKind kind = TrigKind::cos;
    double t = 0.0;
    double lambda = 0.0;
    double eval(double x) const;  // cos(t lambda x^2) or sin(t lambda x^2)
};

/// Local Taylor data for f on [-(r+delta), r+delta]. Coefficients are stored
/// in the rescaled variable y = x/(r+delta), i.e. b_k = a_k (r+delta)^k, which
/// keeps them representable when the a_k are not.
struct TaylorSeries {
    Vector bcoeffs;
    double r = 0.0;
    double delta = 0.0;
    double weight_bound = 0.0;  // B; +inf if out of double range
    double log_weight_bound = 0.0;
    bool truncated = false;
    int truncation_k = 0;
    double certified_tail = 0.0;
    std::optional<TrigSquareForm> form;  // closed form for g when known

    double b_weight_l1() const;
    double log_b_weight_l1() const;
    /// g(y) = f((r+delta) y); closed form when available, series sum otherwise.
    cx eval_g(double y) const;
};

/// Taylor series of cos(t lambda x^2) or sin(t lambda x^2) about 0, truncated
/// once terms fall below 1e-18 * B in the rescaled coefficient scale.
/// B is recorded exactly as cosh / sinh(t lambda (r+delta)^2).
TaylorSeries taylor_trig_square(double t, double lambda, TrigKind kind, double r, double delta);

/// Keeps the first K = ceil((2(r+delta)/delta) log(12B/eps)) coefficients and
/// records the certified tail bound exp(-K delta/(2(r+delta))) B <= eps/12.
TaylorSeries truncate_taylor(const TaylorSeries& s, double eps);

/// Low-weight Fourier approximation of the truncated series on
/// y in [-1+delta', 1-delta'], delta' = delta/(2(r+delta)). Coefficients come
/// from an l1-bounded least-squares fit (Lawson-refined) on a Chebyshev-density
/// grid; the sup-error and weight certificates are re-checked on an
/// independent 4096-point grid.
TrigPoly fourier_from_taylor(const TaylorSeries& s, double eps);

/// Jacobi-Anger Chebyshev expansion of cos(tx) / sin(tx), rescaled by
/// 1/(1+eps/2) so |P| <= 1. Degree is exactly 2R (cos) or 2R+1 (sin) for
/// R = floor(r(e|t|/2, 5 eps/8) / 2), where the internal target eps/2 accounts
/// for the rescale doubling the raw error.
ChebPoly jacobi_anger(double t, double eps, TrigKind kind);

/// Solves (u/x)^x = xi for x >= u, to 1e-12 residual.
double jacobi_anger_rate(double u, double xi);

/// Even polynomial with |P| <= eps off [-r-delta, r+delta], |P-1| <= eps on
/// [-r+delta, r-delta], |P| <= 1 on [-1,1]; all three certified on an
/// 8192-point grid. One degree-doubling retry on certification failure.
ChebPoly rectangle_poly(double r, double delta, double eps);

/// The composite pair (P_cos, P_sin) approximating cos(t lambda x^2) and
/// sin(t lambda x^2) to 2*eps on |x| <= sqrt(Gamma/lambda), bounded by 1 on
/// [-1,1]. r = delta = sqrt(Gamma/lambda); each polynomial is the product of
/// the Fourier-Chebyshev stage with a rectangle mask, rescaled by 1/(1+eps).
std::pair<ChebPoly, ChebPoly> low_energy_evolution_polys(double t, double lambda, double gamma,
                                                         double eps);

/// Numerical companion to the trigonometric-degree lower bound: smallest K
/// such that a degree-K trig polynomial has |P| <= 1 on (-pi, pi] and
/// |e^{-it sin^2 theta} - P| <= eps on [-theta_m, theta_m]. Bisection over K
/// with an inner Lawson minimax solve; the proven floor sqrt(2t)/pi is checked
/// against the result, not assumed.
int min_trig_degree_probe(double t, double eps, double theta_m);

/// Grid sup-norms used by every certificate; grids have >= 8 points per unit
/// polynomial degree with a floor of min_points.
double grid_sup_abs(const ChebPoly& p, double lo, double hi, Eigen::Index min_points = 1024);
Eigen::Index certificate_grid_size(int degree, Eigen::Index min_points = 1024);

}  // namespace lowensim
