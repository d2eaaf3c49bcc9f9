#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "lowensim/poly_engine.hpp"

using namespace lowensim;

namespace {

double grid_err_vs(const ChebPoly& p, const std::function<double(double)>& f, double lo, double hi,
                   Eigen::Index n) {
    double m = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
        const double x = lo + (hi - lo) * double(i) / double(n - 1);
        m = std::max(m, std::abs(p.eval(x) - cx(f(x), 0.0)));
    }
    return m;
}

}  // namespace

TEST_CASE("taylor_trig_square") {
    SUBCASE("t = 0, cos: the series is {1} with B = 1") {
        TaylorSeries s = taylor_trig_square(0.0, 1.0, TrigKind::cos, 0.5, 0.5);
        CHECK(s.weight_bound == doctest::Approx(1.0));
        CHECK(std::abs(s.bcoeffs(0) - cx(1, 0)) < 1e-15);
        CHECK(s.bcoeffs.cwiseAbs().sum() == doctest::Approx(1.0));
    }
    SUBCASE("t = 0, sin: the zero series") {
        TaylorSeries s = taylor_trig_square(0.0, 1.0, TrigKind::sin, 0.5, 0.5);
        CHECK(s.weight_bound == 0.0);
        CHECK(s.bcoeffs.cwiseAbs().maxCoeff() == 0.0);
    }
    SUBCASE("t = lambda = 1, r = delta = 0.5: B = cosh(1) and the weight honors it") {
        TaylorSeries s = taylor_trig_square(1.0, 1.0, TrigKind::cos, 0.5, 0.5);
        CHECK(s.weight_bound == doctest::Approx(std::cosh(1.0)).epsilon(1e-12));
        CHECK(s.b_weight_l1() <= s.weight_bound + 1e-9);
        // The sin companion is bounded by sinh.
        TaylorSeries ss = taylor_trig_square(1.0, 1.0, TrigKind::sin, 0.5, 0.5);
        CHECK(ss.weight_bound == doctest::Approx(std::sinh(1.0)).epsilon(1e-12));
        CHECK(ss.b_weight_l1() <= ss.weight_bound + 1e-9);
    }
    SUBCASE("r + delta > 1 is rejected") {
        CHECK_THROWS_AS(taylor_trig_square(1.0, 1.0, TrigKind::cos, 0.9, 0.5), DomainError);
    }
}

TEST_CASE("truncate_taylor") {
    TaylorSeries s = taylor_trig_square(0.0, 1.0, TrigKind::cos, 0.5, 0.5);  // B = 1
    SUBCASE("K from the displayed formula: ceil(4 log 100) = 19") {
        TaylorSeries t = truncate_taylor(s, 0.12);
        CHECK(t.truncation_k == 19);
        CHECK(t.truncated);
        // Series shorter than K stays unchanged.
        CHECK(t.bcoeffs.size() == s.bcoeffs.size());
        CHECK(t.certified_tail <= 0.12 / 12.0 + 1e-12);
    }
    SUBCASE("eps = 2B is out of range") { CHECK_THROWS_AS(truncate_taylor(s, 2.0), EpsilonRange); }
    SUBCASE("a real truncation certifies its tail numerically") {
        TaylorSeries big = taylor_trig_square(3.0, 1.0, TrigKind::cos, 0.5, 0.5);
        TaylorSeries t = truncate_taylor(big, 1e-3);
        // Compare the truncated series against the closed form on the kept window.
        double worst = 0.0;
        for (int i = 0; i <= 200; ++i) {
            const double y = -0.75 + 1.5 * double(i) / 200.0;  // |y| <= 1 - delta'
            cx acc = 0.0;
            for (Eigen::Index k = t.bcoeffs.size() - 1; k >= 0; --k) acc = acc * y + t.bcoeffs(k);
            worst = std::max(worst, std::abs(acc - cx(std::cos(3.0 * y * y), 0.0)));
        }
        CHECK(worst <= 1e-3 / 12.0 + 1e-9);
    }
}

TEST_CASE("fourier_from_taylor") {
    SUBCASE("constant series pins c_0 = 1") {
        TaylorSeries s = truncate_taylor(taylor_trig_square(0.0, 1.0, TrigKind::cos, 0.5, 0.5), 0.1);
        TrigPoly f = fourier_from_taylor(s, 0.1);
        CHECK(std::abs(f.coeffs(f.big_m) - cx(1, 0)) < 1e-9);
        CHECK(f.weight_l1 <= 1.0 + 1e-9);
        const int expect_m =
            2 * static_cast<int>(std::ceil(4.0 * std::log(12.0 * 1.0 / 0.1)));
        CHECK(f.big_m == expect_m);
    }
    SUBCASE("g(y) = y on delta' = 0.25: both certificates, re-checked on a 10x grid") {
        TaylorSeries s;
        s.r = 0.5;
        s.delta = 0.5;
        s.bcoeffs = Vector::Zero(2);
        s.bcoeffs(1) = 1.0;
        s.weight_bound = 1.0;
        s.log_weight_bound = 0.0;
        s.truncated = true;
        const double eps = 0.1;
        TrigPoly f = fourier_from_taylor(s, eps);
        CHECK(f.weight_l1 <= 1.0 + 1e-9);
        double worst = 0.0;
        for (int i = 0; i <= 40960; ++i) {
            const double y = -0.75 + 1.5 * double(i) / 40960.0;
            worst = std::max(worst, std::abs(f.eval_y(y) - cx(y, 0.0)));
        }
        CHECK(worst <= eps / 3.0);
    }
    SUBCASE("truncated cos(x^2) series: M matches the formula and the certificate holds") {
        const double eps = 1e-3;
        TaylorSeries s = truncate_taylor(taylor_trig_square(1.0, 1.0, TrigKind::cos, 0.5, 0.5), eps);
        TrigPoly f = fourier_from_taylor(s, eps);
        const int expect_m = 2 * static_cast<int>(std::ceil(
                                     4.0 * std::log(12.0 * s.b_weight_l1() / eps)));
        CHECK(f.big_m == expect_m);
        double worst = 0.0;
        for (int i = 0; i <= 40960; ++i) {
            const double y = -0.75 + 1.5 * double(i) / 40960.0;
            worst = std::max(worst, std::abs(f.eval_y(y) - cx(std::cos(y * y), 0.0)));
        }
        CHECK(worst <= eps / 3.0);
        CHECK(f.weight_l1 <= s.b_weight_l1() + 1e-9);
    }
}

TEST_CASE("jacobi_anger") {
    SUBCASE("sin at t = 1: odd polynomial, 1e-3 grid accuracy, pinned degree") {
        ChebPoly p = jacobi_anger(1.0, 1e-3, TrigKind::sin);
        CHECK(p.parity == Parity::odd);
        CHECK(grid_err_vs(p, [](double x) { return std::sin(x); }, -1.0, 1.0, 20001) <= 1e-3);
        const double rate = jacobi_anger_rate(std::numbers::e / 2.0, 1.25 * 0.5e-3);
        CHECK(p.degree() == 2 * static_cast<int>(std::floor(0.5 * rate)) + 1);
    }
    SUBCASE("cos at small t: leading coefficient approaches 1") {
        ChebPoly p = jacobi_anger(1e-3, 1e-4, TrigKind::cos);
        CHECK(std::abs(p.coeffs(0)) > 0.99);
    }
    SUBCASE("degree grows with t") {
        CHECK(jacobi_anger(10.0, 1e-4, TrigKind::cos).degree() >=
              jacobi_anger(5.0, 1e-4, TrigKind::cos).degree());
    }
    SUBCASE("normalization holds after rescale") {
        ChebPoly p = jacobi_anger(12.0, 1e-2, TrigKind::cos);
        CHECK(p.normalized);
        CHECK(grid_sup_abs(p, -1.0, 1.0) <= 1.0 + 1e-9);
    }
    SUBCASE("epsilon range") {
        CHECK_THROWS_AS(jacobi_anger(1.0, 1.0, TrigKind::cos), EpsilonRange);
        CHECK_THROWS_AS(jacobi_anger(0.0, 1e-3, TrigKind::cos), DomainError);
    }
    SUBCASE("negative time flips the sine") {
        ChebPoly p = jacobi_anger(-2.0, 1e-6, TrigKind::sin);
        CHECK(grid_err_vs(p, [](double x) { return std::sin(-2.0 * x); }, -1.0, 1.0, 4001) <= 1e-6);
    }
}

TEST_CASE("rectangle_poly") {
    const double r = 0.5, delta = 0.2, eps = 0.1;
    ChebPoly p = rectangle_poly(r, delta, eps);
    CHECK(p.parity == Parity::even);
    CHECK(p.normalized);

    SUBCASE("three grid conditions") {
        double outer = 0.0, plateau = 0.0, global = 0.0;
        for (int i = 0; i <= 8192; ++i) {
            const double x = -1.0 + 2.0 * double(i) / 8192.0;
            const double v = std::abs(p.eval(x));
            global = std::max(global, v);
            if (std::abs(x) >= r + delta) outer = std::max(outer, v);
            if (std::abs(x) <= r - delta)
                plateau = std::max(plateau, std::abs(p.eval(x) - cx(1, 0)));
        }
        CHECK(outer <= eps);
        CHECK(plateau <= eps);
        CHECK(global <= 1.0 + 1e-9);
    }
    SUBCASE("plateau center and tails") {
        CHECK(std::abs(p.eval(0.0) - cx(1, 0)) <= eps);
        CHECK(std::abs(p.eval(1.0)) <= eps);
        CHECK(std::abs(p.eval(-1.0)) <= eps);
    }
    SUBCASE("parameter domain") {
        CHECK_THROWS_AS(rectangle_poly(0.5, 0.6, 0.1), DomainError);
        CHECK_THROWS_AS(rectangle_poly(0.9, 0.2, 0.1), DomainError);
    }
}

TEST_CASE("low_energy_evolution_polys") {
    SUBCASE("t -> 0 limit: cos ~ mask, sin ~ 0 on the window") {
        auto [pc, ps] = low_energy_evolution_polys(1e-6, 1.0, 0.05, 1e-3);
        const double r = std::sqrt(0.05);
        CHECK(grid_err_vs(pc, [](double) { return 1.0; }, -r, r, 2001) <= 2e-3);
        CHECK(grid_err_vs(ps, [](double) { return 0.0; }, -r, r, 2001) <= 2e-3);
    }
    SUBCASE("t = 20, lambda = 1, Gamma = 0.05, eps = 1e-3") {
        const double t = 20.0, lambda = 1.0, gamma = 0.05, eps = 1e-3;
        auto [pc, ps] = low_energy_evolution_polys(t, lambda, gamma, eps);
        const double r = std::sqrt(gamma / lambda);
        CHECK(grid_err_vs(pc, [&](double x) { return std::cos(t * lambda * x * x); }, -r, r,
                          20001) <= 2.0 * eps);
        CHECK(grid_err_vs(ps, [&](double x) { return std::sin(t * lambda * x * x); }, -r, r,
                          20001) <= 2.0 * eps);
        CHECK(grid_sup_abs(pc, -1.0, 1.0) <= 1.0 + 1e-9);
        CHECK(grid_sup_abs(ps, -1.0, 1.0) <= 1.0 + 1e-9);
        CHECK(pc.parity == Parity::even);
        CHECK(ps.parity == Parity::even);

        // Degree against the complexity expression with the recorded constant.
        const double expr = t * std::sqrt(lambda * gamma) +
                            std::sqrt(lambda / gamma) * std::log(1.0 / eps);
        const double c_recorded = 16.0;
        CHECK(double(pc.degree()) <= c_recorded * expr);
        CHECK(double(ps.degree()) <= c_recorded * expr);
    }
    SUBCASE("Gamma = lambda: degree within a constant factor of plain Jacobi-Anger") {
        const double t = 30.0, lambda = 1.0, eps = 1e-3;
        auto [pc, ps] = low_energy_evolution_polys(t, lambda, lambda, eps);
        ChebPoly ja = jacobi_anger(t * lambda, eps, TrigKind::cos);
        CHECK(double(pc.degree()) <= 3.0 * double(ja.degree()));
        CHECK(double(ps.degree()) <= 3.0 * double(ja.degree()));
        const double r = 1.0;
        CHECK(grid_err_vs(pc, [&](double x) { return std::cos(t * lambda * x * x); }, -r, r,
                          20001) <= 2.0 * eps);
    }
}

TEST_CASE("min_trig_degree_probe") {
    SUBCASE("a window where the constant suffices gives K* = 0") {
        CHECK(min_trig_degree_probe(1e-4, 1e-2, 0.1) == 0);
    }
    SUBCASE("t = 100 sits at or above the proven floor ceil(sqrt(200)/pi) = 5") {
        const double t = 100.0, eps = 0.01;
        const double tdelta = 0.95 * std::sqrt(eps);
        const double theta_m = std::asin(std::sqrt(tdelta / t));
        const int k_star = min_trig_degree_probe(t, eps, theta_m);
        CHECK(k_star >= 5);
    }
    SUBCASE("doubling t grows the degree by roughly sqrt(2)") {
        const double eps = 0.01;
        auto run = [&](double t) {
            const double tdelta = 0.95 * std::sqrt(eps);
            return min_trig_degree_probe(t, eps, std::asin(std::sqrt(tdelta / t)));
        };
        const int k1 = run(100.0), k2 = run(200.0);
        const double ratio = double(k2) / double(k1);
        CHECK(ratio >= 1.2);
        CHECK(ratio <= 2.2);
    }
}

TEST_CASE("chebyshev utilities") {
    SUBCASE("product identity T_2 * T_3 = (T_5 + T_1)/2") {
        ChebPoly p = ChebPoly::product(ChebPoly::chebyshev_t(2), ChebPoly::chebyshev_t(3));
        CHECK(std::abs(p.coeffs(5) - cx(0.5, 0)) < 1e-15);
        CHECK(std::abs(p.coeffs(1) - cx(0.5, 0)) < 1e-15);
        CHECK(p.parity == Parity::odd);
    }
    SUBCASE("clenshaw evaluation matches cos(k acos x)") {
        ChebPoly t7 = ChebPoly::chebyshev_t(7);
        for (double x : {-0.9, -0.3, 0.0, 0.4, 0.99}) {
            CHECK(std::abs(t7.eval(x) - cx(std::cos(7.0 * std::acos(x)), 0)) < 1e-12);
        }
    }
}
