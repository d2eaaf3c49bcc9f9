#include "lowensim/poly_engine.hpp"

#include <gsl/gsl_sf_bessel.h>

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>

#include "lowensim/log.hpp"

namespace lowensim {

namespace {

constexpr double pi = std::numbers::pi;

Eigen::VectorXd linspace(double lo, double hi, Eigen::Index n) {
    Eigen::VectorXd v(n);
    if (n == 1) {
        v(0) = 0.5 * (lo + hi);
        return v;
    }
    const double h = (hi - lo) / double(n - 1);
    for (Eigen::Index i = 0; i < n; ++i) v(i) = lo + h * double(i);
    return v;
}

// Chebyshev-density grid on [lo, hi]: denser near the endpoints, where
// polynomial error peaks live.
Eigen::VectorXd cheb_density_grid(double lo, double hi, Eigen::Index n) {
    Eigen::VectorXd v(n);
    const double c = 0.5 * (lo + hi), h = 0.5 * (hi - lo);
    for (Eigen::Index i = 0; i < n; ++i) v(i) = c - h * std::cos(pi * double(i) / double(n - 1));
    return v;
}

double sup_abs_diff(const ChebPoly& p, const std::function<cx(double)>& f,
                    const Eigen::VectorXd& xs) {
    Eigen::VectorXcd vals = p.eval_many(xs);
    double m = 0.0;
    for (Eigen::Index i = 0; i < xs.size(); ++i) m = std::max(m, std::abs(vals(i) - f(xs(i))));
    return m;
}

struct LawsonResult {
    Eigen::VectorXcd z;
    double minimax = std::numeric_limits<double>::infinity();
    int iterations = 0;
};

// Approximate solution of min_z max_i |(A z - f)_i| * inv_scale_i by Lawson's
// iteratively reweighted least squares. A is real (our bases are cosines and
// sines evaluated on real grids); z and f may be complex.
LawsonResult lawson_fit(const Eigen::MatrixXd& a, const Eigen::VectorXcd& f,
                        const Eigen::VectorXd& inv_scale, int max_iters, double good_enough) {
    const Eigen::Index n = a.rows(), m = a.cols();
    Eigen::VectorXd w = Eigen::VectorXd::Constant(n, 1.0 / double(n));
    Eigen::VectorXd fre = f.real(), fim = f.imag();
    const bool has_imag = fim.cwiseAbs().maxCoeff() > 0.0;

    LawsonResult best;
    best.z = Eigen::VectorXcd::Zero(m);
    for (int it = 0; it < max_iters; ++it) {
        Eigen::VectorXd v = w.cwiseProduct(inv_scale.cwiseProduct(inv_scale));
        Eigen::MatrixXd awa = a.transpose() * v.asDiagonal() * a;
        awa.diagonal().array() += 1e-13 * (awa.trace() / double(m) + 1e-300);
        Eigen::LDLT<Eigen::MatrixXd> solver(awa);
        Eigen::VectorXd zre = solver.solve(a.transpose() * v.cwiseProduct(fre));
        Eigen::VectorXd zim = has_imag
                                  ? Eigen::VectorXd(solver.solve(a.transpose() * v.cwiseProduct(fim)))
                                  : Eigen::VectorXd(Eigen::VectorXd::Zero(m));
        Eigen::VectorXd rre = a * zre - fre;
        Eigen::VectorXd rim = has_imag ? Eigen::VectorXd(a * zim - fim)
                                       : Eigen::VectorXd(Eigen::VectorXd::Zero(n));
        Eigen::VectorXd r = (rre.cwiseAbs2() + rim.cwiseAbs2()).cwiseSqrt().cwiseProduct(inv_scale);
        const double mm = r.maxCoeff();
        if (mm < best.minimax) {
            best.minimax = mm;
            best.z = zre.cast<cx>() + cx(0, 1) * zim.cast<cx>();
            best.iterations = it + 1;
        }
        if (mm <= good_enough) break;
        w = w.cwiseProduct(r.cwiseMax(1e-300));
        w /= w.sum();
    }
    return best;
}

}  // namespace

// ---------------------------------------------------------------------------
// ChebPoly
// ---------------------------------------------------------------------------

int ChebPoly::degree() const {
    for (Eigen::Index k = coeffs.size() - 1; k >= 0; --k)
        if (std::abs(coeffs(k)) != 0.0) return static_cast<int>(k);
    return 0;
}

bool ChebPoly::is_real(double tol) const {
    for (Eigen::Index k = 0; k < coeffs.size(); ++k)
        if (std::abs(coeffs(k).imag()) > tol) return false;
    return true;
}

cx ChebPoly::eval(double x) const {
    // Clenshaw recurrence.
    cx b1 = 0.0, b2 = 0.0;
    for (Eigen::Index k = coeffs.size() - 1; k >= 1; --k) {
        cx b0 = coeffs(k) + 2.0 * x * b1 - b2;
        b2 = b1;
        b1 = b0;
    }
    return (coeffs.size() ? coeffs(0) : cx(0)) + x * b1 - b2;
}

Eigen::VectorXcd ChebPoly::eval_many(const Eigen::VectorXd& xs) const {
    Eigen::VectorXcd out(xs.size());
    for (Eigen::Index i = 0; i < xs.size(); ++i) out(i) = eval(xs(i));
    return out;
}

void ChebPoly::infer_parity() {
    const double scale = coeffs.size() ? coeffs.cwiseAbs().maxCoeff() : 0.0;
    const double tol = 1e-12 * std::max(1.0, scale);
    bool even_ok = true, odd_ok = true;
    for (Eigen::Index k = 0; k < coeffs.size(); ++k) {
        if (std::abs(coeffs(k)) <= tol) continue;
        if (k % 2 == 0) odd_ok = false;
        else even_ok = false;
    }
    parity = even_ok ? Parity::even : (odd_ok ? Parity::odd : Parity::mixed);
}

ChebPoly ChebPoly::constant(cx value) {
    ChebPoly p;
    p.coeffs = Vector::Constant(1, value);
    p.parity = Parity::even;
    return p;
}

ChebPoly ChebPoly::chebyshev_t(int k) {
    ChebPoly p;
    p.coeffs = Vector::Zero(k + 1);
    p.coeffs(k) = 1.0;
    p.parity = (k % 2 == 0) ? Parity::even : Parity::odd;
    p.normalized = true;
    return p;
}

ChebPoly ChebPoly::product(const ChebPoly& a, const ChebPoly& b) {
    ChebPoly out;
    if (a.coeffs.size() == 0 || b.coeffs.size() == 0) {
        out.coeffs = Vector::Zero(1);
        out.infer_parity();
        return out;
    }
    const Eigen::Index da = a.coeffs.size() - 1, db = b.coeffs.size() - 1;
    out.coeffs = Vector::Zero(da + db + 1);
    for (Eigen::Index i = 0; i <= da; ++i) {
        const cx ai = a.coeffs(i);
        if (std::abs(ai) == 0.0) continue;
        for (Eigen::Index j = 0; j <= db; ++j) {
            const cx w = 0.5 * ai * b.coeffs(j);
            if (std::abs(w) == 0.0) continue;
            out.coeffs(i + j) += w;
            out.coeffs(std::abs(i - j)) += w;
        }
    }
    out.infer_parity();
    return out;
}

void ChebPoly::accumulate(Vector& acc, const ChebPoly& p, cx alpha) {
    if (p.coeffs.size() > acc.size()) {
        Vector grown = Vector::Zero(p.coeffs.size());
        grown.head(acc.size()) = acc;
        acc.swap(grown);
    }
    acc.head(p.coeffs.size()) += alpha * p.coeffs;
}

Eigen::Index certificate_grid_size(int degree, Eigen::Index min_points) {
    return std::max<Eigen::Index>(min_points, 8 * Eigen::Index(degree) + 1);
}

double grid_sup_abs(const ChebPoly& p, double lo, double hi, Eigen::Index min_points) {
    const Eigen::Index n = certificate_grid_size(p.degree(), min_points);
    Eigen::VectorXd xs = cheb_density_grid(lo, hi, n);
    double m = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) m = std::max(m, std::abs(p.eval(xs(i))));
    return m;
}

// ---------------------------------------------------------------------------
// Taylor stage
// ---------------------------------------------------------------------------

double TrigSquareForm::eval(double x) const {
    const double u = t * lambda * x * x;
    return kind == TrigKind::cos ? std::cos(u) : std::sin(u);
}

double TaylorSeries::b_weight_l1() const { return bcoeffs.cwiseAbs().sum(); }

double TaylorSeries::log_b_weight_l1() const {
    const double w = b_weight_l1();
    return std::isfinite(w) && w > 0 ? std::log(w) : log_weight_bound;
}

cx TaylorSeries::eval_g(double y) const {
    if (form) return cx(form->eval((r + delta) * y), 0.0);
    // Horner in y on the rescaled coefficients.
    cx acc = 0.0;
    for (Eigen::Index k = bcoeffs.size() - 1; k >= 0; --k) acc = acc * y + bcoeffs(k);
    return acc;
}

TaylorSeries taylor_trig_square(double t, double lambda, TrigKind kind, double r, double delta) {
    if (lambda <= 0.0) throw DomainError("lambda must be positive");
    if (t < 0.0) throw DomainError("t must be nonnegative");
    if (!(delta > 0.0) || delta > r || r > 1.0) throw DomainError("need 0 < delta <= r <= 1");
    if (r + delta > 1.0 + 1e-12) throw DomainError("need r + delta <= 1");

    const double u = t * lambda * (r + delta) * (r + delta);
    if (u > 700.0)
        throw TooLarge("Taylor weight exp-scale " + std::to_string(u) +
                       " exceeds double range; reduce t*Gamma");

    TaylorSeries s;
    s.r = r;
    s.delta = delta;
    s.form = TrigSquareForm{kind, t, lambda};
    s.weight_bound = (kind == TrigKind::cos) ? std::cosh(u) : std::sinh(u);
    s.log_weight_bound = (u > 30.0) ? u - std::log(2.0)
                                    : (s.weight_bound > 0 ? std::log(s.weight_bound)
                                                          : -std::numeric_limits<double>::infinity());

    // b_{4j} = (-1)^j u^{2j}/(2j)! for cos; b_{4j+2} = (-1)^j u^{2j+1}/(2j+1)! for sin.
    std::vector<cx> b;
    const double floor_mag = 1e-18 * std::max(s.weight_bound, 1.0);
    double term = 1.0;  // u^p / p!
    int p = 0;
    const int want = (kind == TrigKind::cos) ? 0 : 1;
    int sign_j = 1;
    // Walk p = 0, 1, 2, ... and pick out the parity class; stop once past the
    // peak and below the floor.
    while (true) {
        if (p % 2 == want) {
            const Eigen::Index deg = 2 * p;  // power of x is 2p, of y likewise
            if (static_cast<Eigen::Index>(b.size()) <= deg) b.resize(deg + 1, cx(0));
            b[deg] = sign_j * term;
            sign_j = -sign_j;
        }
        if (p > u && term < floor_mag) break;
        ++p;
        term *= u / double(p);
        if (p > 100000) throw SolverFailure("Taylor series failed to converge");
        if (u == 0.0 && p > 2) break;
    }
    s.bcoeffs = Eigen::Map<Vector>(b.data(), static_cast<Eigen::Index>(b.size()));
    if (s.bcoeffs.size() == 0) s.bcoeffs = Vector::Zero(1);
    return s;
}

TaylorSeries truncate_taylor(const TaylorSeries& s, double eps) {
    const double b_cap = s.weight_bound;
    if (!(eps > 0.0) || eps >= 1.5 * b_cap)
        throw EpsilonRange("need eps in (0, 3B/2), B = " + std::to_string(b_cap));
    const double ratio = 2.0 * (s.r + s.delta) / s.delta;
    const double log_arg = std::log(12.0) + s.log_weight_bound - std::log(eps);
    const int k_keep = static_cast<int>(std::ceil(ratio * log_arg));
    TaylorSeries out = s;
    if (k_keep < s.bcoeffs.size()) out.bcoeffs = s.bcoeffs.head(k_keep).eval();
    out.truncated = true;
    out.truncation_k = k_keep;
    // exp(-K delta / (2(r+delta))) * B <= eps/12 holds by construction; record it.
    out.certified_tail = std::exp(-double(k_keep) / ratio + s.log_weight_bound);
    if (out.certified_tail > eps / 12.0 + 1e-12)
        throw SolverFailure("truncation tail bound violated");
    return out;
}

// ---------------------------------------------------------------------------
// Fourier stage
// ---------------------------------------------------------------------------

cx TrigPoly::eval_y(double y) const {
    cx acc = 0.0;
    for (int m = -big_m; m <= big_m; ++m) {
        const cx c = coeffs(m + big_m);
        if (std::abs(c) == 0.0) continue;
        acc += c * std::exp(cx(0.0, 0.5 * pi * double(m) * y));
    }
    return acc;
}

namespace {

enum class FnParity { even, odd, mixed };

FnParity series_parity(const Vector& b) {
    bool even_ok = true, odd_ok = true;
    const double tol = 1e-14 * std::max(1.0, b.cwiseAbs().maxCoeff());
    for (Eigen::Index k = 0; k < b.size(); ++k) {
        if (std::abs(b(k)) <= tol) continue;
        if (k % 2 == 0) odd_ok = false;
        else even_ok = false;
    }
    if (even_ok) return FnParity::even;
    if (odd_ok) return FnParity::odd;
    return FnParity::mixed;
}

}  // namespace

TrigPoly fourier_from_taylor(const TaylorSeries& s, double eps) {
    if (!s.truncated) throw DomainError("fourier_from_taylor expects a truncated series");
    if (!(eps > 0.0)) throw EpsilonRange("eps must be positive");
    const double dprime = s.delta / (2.0 * (s.r + s.delta));
    if (!(dprime > 0.0 && dprime < 1.0)) throw DomainError("delta' must lie in (0,1)");

    const double log_b1 = s.log_b_weight_l1();
    const int big_m = std::max(
        2 * static_cast<int>(std::ceil((std::log(12.0) + log_b1 - std::log(eps)) / dprime)), 0);

    for (Eigen::Index k = 0; k < s.bcoeffs.size(); ++k)
        if (std::abs(s.bcoeffs(k).imag()) > 1e-12 * std::max(1.0, std::abs(s.bcoeffs(k))))
            throw DomainError("fit path supports real series only");

    const FnParity par = series_parity(s.bcoeffs.real().cast<cx>());
    const double y_hi = 1.0 - dprime;
    const double target = eps / 3.0;

    // Active bandwidth: the chirp's instantaneous frequency fixes how many
    // Fourier modes carry weight; the formula M is only a cap. Start near the
    // phase-matching estimate and grow if certification fails.
    int m_active;
    if (s.form) {
        const double a = s.form->t * s.form->lambda * (s.r + s.delta) * (s.r + s.delta);
        m_active = static_cast<int>(std::ceil(2.0 * a * y_hi * (2.0 / pi))) +
                   static_cast<int>(std::ceil(8.0 * std::log(12.0 / std::min(eps, 1.0)))) + 16;
    } else {
        m_active = 4 * static_cast<int>(s.bcoeffs.size()) + 16;
    }
    m_active = std::min(m_active, big_m == 0 ? 0 : big_m);

    auto g = [&](double y) { return s.eval_g(y); };

    Eigen::VectorXd cert_grid = linspace(-y_hi, y_hi, 4096);
    TrigPoly out;
    out.big_m = big_m;
    out.base_freq = pi / (2.0 * (s.r + s.delta));

    while (true) {
        // Basis columns: cos(pi m y / 2) and/or sin(pi m y / 2).
        std::vector<int> cos_idx, sin_idx;
        if (par != FnParity::odd)
            for (int m = 0; m <= m_active; ++m) cos_idx.push_back(m);
        if (par != FnParity::even)
            for (int m = 1; m <= m_active; ++m) sin_idx.push_back(m);
        const Eigen::Index nb = static_cast<Eigen::Index>(cos_idx.size() + sin_idx.size());

        const bool half_grid = (par != FnParity::mixed);
        const Eigen::Index ng = std::max<Eigen::Index>(1024, 3 * nb);
        Eigen::VectorXd ys = half_grid ? cheb_density_grid(0.0, y_hi, ng)
                                       : cheb_density_grid(-y_hi, y_hi, ng);

        Eigen::MatrixXd a(ng, nb);
        Eigen::VectorXcd fv(ng);
        for (Eigen::Index i = 0; i < ng; ++i) {
            Eigen::Index col = 0;
            for (int m : cos_idx) a(i, col++) = std::cos(0.5 * pi * double(m) * ys(i));
            for (int m : sin_idx) a(i, col++) = std::sin(0.5 * pi * double(m) * ys(i));
            fv(i) = g(ys(i));
        }
        LawsonResult fit = lawson_fit(a, fv, Eigen::VectorXd::Ones(ng), 12, 0.85 * target);

        // Convert the real basis weights into two-sided complex coefficients.
        Vector c = Vector::Zero(2 * big_m + 1);
        Eigen::Index col = 0;
        for (int m : cos_idx) {
            const cx w = fit.z(col++);
            if (m == 0) c(big_m) += w;
            else {
                c(big_m + m) += 0.5 * w;
                c(big_m - m) += 0.5 * w;
            }
        }
        for (int m : sin_idx) {
            const cx w = fit.z(col++);
            c(big_m + m) += w / cx(0.0, 2.0);
            c(big_m - m) -= w / cx(0.0, 2.0);
        }

        TrigPoly trial = out;
        trial.coeffs = c;
        trial.weight_l1 = c.cwiseAbs().sum();

        double cert = 0.0;
        for (Eigen::Index i = 0; i < cert_grid.size(); ++i)
            cert = std::max(cert, std::abs(trial.eval_y(cert_grid(i)) - g(cert_grid(i))));
        const double b1 = std::exp(log_b1);
        const bool weight_ok =
            !(std::isfinite(b1)) || trial.weight_l1 <= b1 + 1e-9;

        if (cert <= target && weight_ok) {
            trial.cert.grid_points = cert_grid.size();
            trial.cert.sup_error = cert;
            trial.cert.weight = trial.weight_l1;
            return trial;
        }
        if (m_active >= big_m) {
            throw FitFailed("Fourier certification " + std::to_string(cert) + " > " +
                            std::to_string(target) + " at M = " + std::to_string(big_m) +
                            (weight_ok ? "" : " (weight bound violated)"));
        }
        m_active = std::min(big_m, 2 * m_active + 32);
    }
}

// ---------------------------------------------------------------------------
// Jacobi-Anger stage
// ---------------------------------------------------------------------------

double jacobi_anger_rate(double u, double xi) {
    if (!(u > 0.0) || !(xi > 0.0) || xi >= 1.0) throw DomainError("need u > 0, xi in (0,1)");
    // phi(x) = x log(u/x) is strictly decreasing for x >= u; solve phi = log(xi).
    const double goal = std::log(xi);
    double lo = u, hi = u + 2.0;
    while (hi * std::log(u / hi) > goal) {
        lo = hi;
        hi = 2.0 * hi;
        if (hi > 1e12) throw SolverFailure("rate bracket failed");
    }
    double x = 0.5 * (lo + hi);
    for (int it = 0; it < 200; ++it) {
        const double phi = x * std::log(u / x);
        const double dphi = std::log(u / x) - 1.0;
        double step = (phi - goal) / dphi;
        double next = x - step;
        if (next <= lo || next >= hi) next = 0.5 * (lo + hi);  // bisection fallback
        if (x * std::log(u / x) > goal) lo = x;
        else hi = x;
        x = next;
        if (std::abs(x * std::log(u / x) - goal) < 1e-12 * std::max(1.0, std::abs(goal))) break;
    }
    return x;
}

ChebPoly jacobi_anger(double t, double eps, TrigKind kind) {
    if (t == 0.0) throw DomainError("jacobi_anger needs t != 0");
    if (!(eps > 0.0) || eps >= 2.0 / std::numbers::e)
        throw EpsilonRange("eps must lie in (0, 2/e)");
    const double eps_raw = 0.5 * eps;  // the 1/(1+eps_raw) rescale doubles the raw error
    const double at = std::abs(t);
    const double rate = jacobi_anger_rate(std::numbers::e * at / 2.0, 1.25 * eps_raw);
    const int big_r = static_cast<int>(std::floor(0.5 * rate));

    ChebPoly p;
    if (kind == TrigKind::cos) {
        const int deg = 2 * big_r;
        p.coeffs = Vector::Zero(deg + 1);
        std::vector<double> j(static_cast<size_t>(deg) + 1, 0.0);
        gsl_sf_bessel_Jn_array(0, deg, at, j.data());
        p.coeffs(0) = j[0];
        double sign = -1.0;
        for (int k = 1; k <= big_r; ++k) {
            p.coeffs(2 * k) = 2.0 * sign * j[static_cast<size_t>(2 * k)];
            sign = -sign;
        }
        p.parity = Parity::even;
    } else {
        const int deg = 2 * big_r + 1;
        p.coeffs = Vector::Zero(deg + 1);
        std::vector<double> j(static_cast<size_t>(deg) + 1, 0.0);
        gsl_sf_bessel_Jn_array(0, deg, at, j.data());
        const double flip = (t < 0.0) ? -1.0 : 1.0;
        double sign = 1.0;
        for (int k = 0; k <= big_r; ++k) {
            p.coeffs(2 * k + 1) = 2.0 * flip * sign * j[static_cast<size_t>(2 * k + 1)];
            sign = -sign;
        }
        p.parity = Parity::odd;
    }
    p.coeffs /= (1.0 + eps_raw);
    p.normalized = true;

    const Eigen::Index n = certificate_grid_size(p.degree());
    Eigen::VectorXd xs = cheb_density_grid(-1.0, 1.0, n);
    double err = 0.0, mx = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
        const double target = (kind == TrigKind::cos) ? std::cos(t * xs(i)) : std::sin(t * xs(i));
        const cx val = p.eval(xs(i));
        err = std::max(err, std::abs(val - target));
        mx = std::max(mx, std::abs(val));
    }
    if (err > eps || mx > 1.0 + 1e-9)
        throw CertificationFailed("jacobi_anger grid check failed: err " + std::to_string(err) +
                                  ", max " + std::to_string(mx));
    p.cert = {n, err, p.coeffs.cwiseAbs().sum()};
    return p;
}

// ---------------------------------------------------------------------------
// Rectangle stage
// ---------------------------------------------------------------------------

namespace {

// Odd Chebyshev series for erf(kappa w) on w in [-1, 1]: term-by-term
// integral of the Jacobi-Anger expansion of the Gaussian, with scaled
// modified Bessel coefficients so large kappa stays in range.
Eigen::VectorXd erf_cheb_series(double kappa, double tail_floor) {
    const double arg = 0.5 * kappa * kappa;
    const double front = 2.0 * kappa / std::sqrt(pi);
    std::vector<double> g;  // Gaussian coefficients g_j for T_{2j}
    g.push_back(gsl_sf_bessel_In_scaled(0, arg));
    for (int j = 1;; ++j) {
        const double coeff = 2.0 * gsl_sf_bessel_In_scaled(j, arg);
        g.push_back((j % 2 == 0) ? coeff : -coeff);
        if (coeff * front / double(2 * j - 1) < tail_floor && double(j) > kappa) break;
        if (j > 2000000) throw SolverFailure("Gaussian series did not converge");
    }
    const int jmax = static_cast<int>(g.size()) - 1;
    Eigen::VectorXd c = Eigen::VectorXd::Zero(2 * jmax + 2);
    c(1) += front * g[0];
    for (int j = 1; j <= jmax; ++j) {
        c(2 * j + 1) += front * g[static_cast<size_t>(j)] / double(2 * (2 * j + 1));
        c(2 * j - 1) -= front * g[static_cast<size_t>(j)] / double(2 * (2 * j - 1));
    }
    return c;
}

double eval_cheb_real(const Eigen::VectorXd& c, double x) {
    double b1 = 0.0, b2 = 0.0;
    for (Eigen::Index k = c.size() - 1; k >= 1; --k) {
        const double b0 = c(k) + 2.0 * x * b1 - b2;
        b2 = b1;
        b1 = b0;
    }
    return c(0) + x * b1 - b2;
}

struct RectCheck {
    double outer = 0.0;    // sup |P| on |x| in [r+delta, 1]
    double plateau = 0.0;  // sup |P-1| on |x| <= r-delta
    double global = 0.0;   // sup |P| on [-1,1]
    bool pass(double eps) const {
        return outer <= eps && plateau <= eps && global <= 1.0 + 1e-9;
    }
};

RectCheck rect_certify(const ChebPoly& p, double r, double delta, Eigen::Index n) {
    RectCheck out;
    Eigen::VectorXd xs = linspace(-1.0, 1.0, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const double x = xs(i);
        const double v = std::abs(p.eval(x));
        out.global = std::max(out.global, v);
        if (std::abs(x) >= r + delta) out.outer = std::max(out.outer, v);
        if (std::abs(x) <= r - delta) out.plateau = std::max(out.plateau, std::abs(p.eval(x) - 1.0));
    }
    return out;
}

ChebPoly build_rectangle(double r, double delta, double eps_work) {
    // erf transition sharp enough that erfc(k delta) <= eps_work/2.
    double z = std::sqrt(std::max(1.0, std::log(2.0 / eps_work)));
    for (int it = 0; it < 60; ++it) {
        const double f = std::erfc(z) - 0.5 * eps_work;
        if (std::abs(f) < 1e-16) break;
        const double df = -2.0 / std::sqrt(pi) * std::exp(-z * z);
        z -= f / df;
    }
    const double k = z / delta;
    const double kappa = 2.0 * k;  // erf argument rescaled to w = (x +- r)/2 in [-1,1]
    Eigen::VectorXd erf_series = erf_cheb_series(kappa, eps_work * 1e-3);
    const Eigen::Index deg = erf_series.size() - 1;

    // P(x) = (erf(k(x+r)) - erf(k(x-r)))/2; re-project the shifted compositions
    // onto T_k(x): Gauss-Chebyshev with n > deg nodes is exact for polynomials.
    const Eigen::Index n_nodes = deg + 8;
    Eigen::VectorXd vals(n_nodes);
    for (Eigen::Index i = 0; i < n_nodes; ++i) {
        const double x = std::cos(pi * (double(i) + 0.5) / double(n_nodes));
        vals(i) = 0.5 * (eval_cheb_real(erf_series, 0.5 * (x + r)) -
                         eval_cheb_real(erf_series, 0.5 * (x - r)));
    }
    Eigen::VectorXd coef = Eigen::VectorXd::Zero(deg + 1);
    for (Eigen::Index kk = 0; kk <= deg; ++kk) {
        double acc = 0.0;
        for (Eigen::Index i = 0; i < n_nodes; ++i)
            acc += vals(i) * std::cos(double(kk) * pi * (double(i) + 0.5) / double(n_nodes));
        coef(kk) = acc * 2.0 / double(n_nodes);
    }
    coef(0) *= 0.5;
    // The difference of odd series in shifted arguments is even in x.
    for (Eigen::Index kk = 1; kk <= deg; kk += 2) coef(kk) = 0.0;

    ChebPoly p;
    p.coeffs = coef.cast<cx>();
    p.parity = Parity::even;
    return p;
}

}  // namespace

ChebPoly rectangle_poly(double r, double delta, double eps) {
    if (!(delta > 0.0) || delta >= 0.5 || !(eps > 0.0) || eps >= 0.5)
        throw DomainError("need delta, eps in (0, 1/2)");
    if (!(delta < r) || r + delta > 1.0 + 1e-12)
        throw DomainError("plateau and decay bands must fit inside [-1, 1]");

    for (int attempt = 0; attempt < 2; ++attempt) {
        const double eps_work = 0.85 * eps / double(1 << attempt);
        ChebPoly p = build_rectangle(r, delta, eps_work);

        const Eigen::Index cert_n = std::max<Eigen::Index>(8192, 8 * p.degree() + 1);
        RectCheck full = rect_certify(p, r, delta, cert_n);
        if (full.global > 1.0) {
            p.coeffs /= full.global * (1.0 + 1e-12);
            full = rect_certify(p, r, delta, cert_n);
        }
        if (!full.pass(eps)) {
            log_info("rectangle_poly: attempt " + std::to_string(attempt) + " failed (outer " +
                     std::to_string(full.outer) + ", plateau " + std::to_string(full.plateau) + ")");
            continue;  // degree doubles through the sharper eps_work
        }

        // Trim trailing coefficients while the certificates still pass; the
        // truncation rule above is conservative by a small constant factor.
        int lo = 2, hi = p.degree();
        ChebPoly best = p;
        while (lo < hi) {
            const int mid = (lo + hi) / 2 & ~1;  // keep even degree
            ChebPoly trial;
            trial.coeffs = p.coeffs.head(mid + 1).eval();
            trial.parity = Parity::even;
            if (rect_certify(trial, r, delta, cert_n).pass(eps)) {
                best = trial;
                hi = mid;
            } else {
                lo = mid + 2;
            }
        }
        RectCheck final_check = rect_certify(best, r, delta, cert_n);
        best.normalized = true;
        best.cert = {cert_n, std::max(final_check.outer, final_check.plateau),
                     best.coeffs.cwiseAbs().sum()};
        best.parity = Parity::even;
        return best;
    }
    throw CertificationFailed("rectangle certification failed twice");
}

// ---------------------------------------------------------------------------
// Composite evolution polynomials
// ---------------------------------------------------------------------------

namespace {

// Windowed route: local Taylor -> low-weight Fourier -> Jacobi-Anger per
// retained mode -> rectangle mask. Valid when the window fits in [-1,1].
ChebPoly windowed_evolution_poly(double t, double lambda, double gamma, double eps,
                                 TrigKind kind) {
    const double r = std::sqrt(gamma / lambda);
    const double delta = r;
    TrigSquareForm target{kind, t, lambda};

    TaylorSeries s = taylor_trig_square(t, lambda, kind, r, delta);
    if (s.weight_bound == 0.0) {
        // sin with t = 0: the zero polynomial, trivially certified.
        ChebPoly zero;
        zero.coeffs = Vector::Zero(1);
        zero.parity = Parity::even;
        zero.normalized = true;
        return zero;
    }
    TaylorSeries st = truncate_taylor(s, eps);
    TrigPoly four = fourier_from_taylor(st, eps);

    // Assemble P_ftilde = sum_m c_m e^{i theta_m x} with per-mode Jacobi-Anger
    // polynomials. Modes with negligible weight are dropped against a tenth
    // of the Chebyshev-stage budget.
    const int big_m = four.big_m;
    std::vector<std::pair<int, cx>> modes;  // m >= 1 with conjugate symmetry
    cx c0 = four.coeffs(big_m);
    double kept_weight = std::abs(c0);
    std::vector<double> mode_weight;
    for (int m = 1; m <= big_m; ++m) {
        const cx cm = four.coeffs(big_m + m);
        modes.emplace_back(m, cm);
        mode_weight.push_back(2.0 * std::abs(cm));
    }
    const double drop_budget = 0.1 * eps / 3.0;
    const double tau = drop_budget / std::max<double>(1.0, double(modes.size()));
    double dropped = 0.0;
    for (size_t i = 0; i < modes.size(); ++i) {
        if (mode_weight[i] <= tau) {
            dropped += mode_weight[i];
            modes[i].second = 0.0;
        } else {
            kept_weight += mode_weight[i];
        }
    }

    const double cheb_budget = 0.9 * eps / 3.0 - dropped;
    double per_term = cheb_budget / std::max(kept_weight, 1e-300);
    per_term = std::min(per_term, 0.9 * 2.0 / std::numbers::e);

    Vector acc = Vector::Zero(1);
    ChebPoly unit = ChebPoly::constant(1.0);
    ChebPoly::accumulate(acc, unit, c0);
    for (auto& [m, cm] : modes) {
        if (std::abs(cm) == 0.0) continue;
        const double theta = four.base_freq * double(m);
        if (std::abs(cm.real()) * 2.0 > 1e-300) {
            ChebPoly ja = jacobi_anger(theta, per_term, TrigKind::cos);
            ChebPoly::accumulate(acc, ja, 2.0 * cm.real());
        }
        if (std::abs(cm.imag()) * 2.0 > 1e-300) {
            ChebPoly ja = jacobi_anger(theta, per_term, TrigKind::sin);
            ChebPoly::accumulate(acc, ja, -2.0 * cm.imag());
        }
    }
    ChebPoly p_ft;
    p_ft.coeffs = acc;
    p_ft.infer_parity();

    // Rectangle mask over the tracked window, budgeted against the retained
    // Fourier weight so the masked tail stays below eps/3.
    ChebPoly q = p_ft;
    const bool mask_needed = (r + 0.5 * delta) < 1.0 - 1e-9;
    if (mask_needed) {
        double eps_rect = (eps / 3.0) / std::max(1.0, kept_weight * 1.05);
        eps_rect = std::min(eps_rect, 0.49);
        ChebPoly mask = rectangle_poly(r + 0.25 * delta, 0.25 * delta, eps_rect);
        q = ChebPoly::product(p_ft, mask);
    }
    q.coeffs /= (1.0 + eps);

    const Eigen::Index n = certificate_grid_size(q.degree(), 4096);
    Eigen::VectorXd global = cheb_density_grid(-1.0, 1.0, n);
    double gmax = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) gmax = std::max(gmax, std::abs(q.eval(global(i))));
    Eigen::VectorXd window = cheb_density_grid(-r, r, n);
    double werr = 0.0;
    for (Eigen::Index i = 0; i < n; ++i)
        werr = std::max(werr, std::abs(q.eval(window(i)) - cx(target.eval(window(i)))));
    if (gmax > 1.0 + 1e-9)
        throw CertificationFailed("evolution polynomial exceeds 1: " + std::to_string(gmax));
    if (werr > 2.0 * eps)
        throw CertificationFailed("evolution polynomial window error " + std::to_string(werr) +
                                  " > 2 eps");
    q.normalized = true;
    q.cert = {n, werr, q.coeffs.cwiseAbs().sum()};
    q.infer_parity();
    return q;
}

// Global route for gamma close to lambda, where the tracked window fills
// [-1,1]: cos/sin(t lambda x^2) = cos/sin(a + a T_2(x)) for a = t lambda / 2,
// expanded by Jacobi-Anger in z and composed with T_2 (k -> 2k on
// coefficients).
ChebPoly global_evolution_poly(double t, double lambda, double eps, TrigKind kind) {
    TrigSquareForm target{kind, t, lambda};
    const double a = 0.5 * t * lambda;
    if (a == 0.0) {
        ChebPoly p = ChebPoly::constant(kind == TrigKind::cos ? 1.0 : 0.0);
        p.normalized = true;
        return p;
    }
    const double eps_term = std::min(0.45 * eps, 0.9 * 2.0 / std::numbers::e);
    ChebPoly pc = jacobi_anger(a, eps_term, TrigKind::cos);
    ChebPoly ps = jacobi_anger(a, eps_term, TrigKind::sin);
    const double ca = std::cos(a), sa = std::sin(a);

    Vector acc = Vector::Zero(1);
    if (kind == TrigKind::cos) {
        ChebPoly::accumulate(acc, pc, ca);
        ChebPoly::accumulate(acc, ps, -sa);
    } else {
        ChebPoly::accumulate(acc, pc, sa);
        ChebPoly::accumulate(acc, ps, ca);
    }
    ChebPoly q;
    q.coeffs = Vector::Zero(2 * acc.size() - 1);
    for (Eigen::Index k = 0; k < acc.size(); ++k) q.coeffs(2 * k) = acc(k);  // compose with T_2

    const Eigen::Index n = certificate_grid_size(q.degree(), 4096);
    Eigen::VectorXd xs = cheb_density_grid(-1.0, 1.0, n);
    double gmax = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) gmax = std::max(gmax, std::abs(q.eval(xs(i))));
    if (gmax > 1.0) q.coeffs /= gmax * (1.0 + 1e-12);
    double werr = 0.0;
    for (Eigen::Index i = 0; i < n; ++i)
        werr = std::max(werr, std::abs(q.eval(xs(i)) - cx(target.eval(xs(i)))));
    if (werr > 2.0 * eps)
        throw CertificationFailed("global evolution polynomial error " + std::to_string(werr));
    q.parity = Parity::even;
    q.normalized = true;
    q.cert = {n, werr, q.coeffs.cwiseAbs().sum()};
    return q;
}

}  // namespace

std::pair<ChebPoly, ChebPoly> low_energy_evolution_polys(double t, double lambda, double gamma,
                                                         double eps) {
    if (!(gamma > 0.0) || gamma > lambda * (1.0 + 1e-12))
        throw DomainError("need 0 < Gamma <= lambda");
    if (!(eps > 0.0) || eps >= 0.5) throw DomainError("need eps in (0, 1/2)");
    if (t < 0.0) throw DomainError("t must be nonnegative");

    // The windowed pipeline needs r + delta = 2 sqrt(Gamma/lambda) <= 1; past
    // that the tracked window covers most of [-1,1] and the direct composed
    // Jacobi-Anger expansion has the right degree anyway.
    if (gamma <= 0.25 * lambda && t > 0.0) {
        return {windowed_evolution_poly(t, lambda, gamma, eps, TrigKind::cos),
                windowed_evolution_poly(t, lambda, gamma, eps, TrigKind::sin)};
    }
    return {global_evolution_poly(t, lambda, eps, TrigKind::cos),
            global_evolution_poly(t, lambda, eps, TrigKind::sin)};
}

// ---------------------------------------------------------------------------
// Trigonometric degree probe
// ---------------------------------------------------------------------------

namespace {

// Lawson feasibility for the two-family constraint set: |P| <= 1 on (-pi, pi]
// and |P - f| <= eps on the window, for even P of trig degree <= K.
bool trig_degree_feasible(int k_deg, double t, double eps, double theta_m, double* out_minimax) {
    const Eigen::Index n_win = std::max<Eigen::Index>(512, 32 * (k_deg + 1));
    const Eigen::Index n_glob = std::max<Eigen::Index>(2048, 64 * (k_deg + 1));
    Eigen::VectorXd th_w = linspace(0.0, theta_m, n_win);
    Eigen::VectorXd th_g = linspace(0.0, pi, n_glob);

    const Eigen::Index n = n_win + n_glob;
    const Eigen::Index nb = k_deg + 1;
    Eigen::MatrixXd a(n, nb);
    Eigen::VectorXcd f(n);
    Eigen::VectorXd inv_scale(n);
    for (Eigen::Index i = 0; i < n_win; ++i) {
        for (int k = 0; k <= k_deg; ++k) a(i, k) = std::cos(double(k) * th_w(i));
        const double s2 = std::sin(th_w(i)) * std::sin(th_w(i));
        f(i) = std::exp(cx(0.0, -t * s2));
        inv_scale(i) = 1.0 / eps;
    }
    for (Eigen::Index i = 0; i < n_glob; ++i) {
        for (int k = 0; k <= k_deg; ++k) a(n_win + i, k) = std::cos(double(k) * th_g(i));
        f(n_win + i) = 0.0;
        inv_scale(n_win + i) = 1.0;
    }
    LawsonResult res = lawson_fit(a, f, inv_scale, 250, 0.995);
    if (out_minimax) *out_minimax = res.minimax;
    return res.minimax <= 1.0 + 1e-6;
}

}  // namespace

int min_trig_degree_probe(double t, double eps, double theta_m) {
    if (!(t > 0.0) || !(eps > 0.0) || eps >= 1.0 || !(theta_m > 0.0) || theta_m > 0.5 * pi)
        throw DomainError("probe needs t > 0, eps in (0,1), theta_m in (0, pi/2]");
    const double delta = std::sin(theta_m) * std::sin(theta_m);
    if (!(std::sqrt(eps) <= 1.0) || t * delta > std::sqrt(eps) || t * delta < 8.0 * eps)
        log_info("min_trig_degree_probe: parameters outside the 1 >= sqrt(eps) >= t*Delta >= 8*eps regime");

    if (trig_degree_feasible(0, t, eps, theta_m, nullptr)) return 0;
    int hi = 1;
    while (!trig_degree_feasible(hi, t, eps, theta_m, nullptr)) {
        hi *= 2;
        if (hi > 4096) throw SolverFailure("no feasible degree found up to 4096");
    }
    int lo = hi / 2;  // infeasible
    while (hi - lo > 1) {
        const int mid = (lo + hi) / 2;
        if (trig_degree_feasible(mid, t, eps, theta_m, nullptr)) hi = mid;
        else lo = mid;
    }
    const double floor_bound = std::sqrt(2.0 * t) / pi;
    if (double(hi) < floor_bound - 1e-9)
        throw SolverFailure("probe found degree " + std::to_string(hi) +
                            " below the proven floor " + std::to_string(floor_bound) +
                            "; constraint grid too coarse");
    return hi;
}

}  // namespace lowensim
