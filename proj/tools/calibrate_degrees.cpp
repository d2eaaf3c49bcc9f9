// Fits the c1, c2 constants of the predicted-degree formula
//   degree ~ c1 * t * sqrt(lambda Gamma) + c2 * sqrt(lambda/Gamma) * log(1/eps)
// against measured composite cos+sin degrees over a reference grid, and
// prints the values frozen in include/lowensim/degree_constants.hpp.

#include <Eigen/Dense>
#include <cstdio>
#include <vector>

#include "lowensim/poly_engine.hpp"

int main() {
    using namespace lowensim;

    struct Point {
        double t, lambda, gamma, eps;
    };
    std::vector<Point> grid;
    for (double tg : {10.0, 20.0, 40.0, 80.0})
        for (double gl : {1.0 / 64.0, 1.0 / 16.0, 1.0 / 4.0})
            for (double eps : {1e-2, 1e-3, 1e-6}) {
                const double lambda = 1.0, gamma = gl;
                grid.push_back({tg / gamma, lambda, gamma, eps});
            }

    Eigen::MatrixXd a(static_cast<Eigen::Index>(grid.size()), 2);
    Eigen::VectorXd y(static_cast<Eigen::Index>(grid.size()));
    for (size_t i = 0; i < grid.size(); ++i) {
        const auto& p = grid[i];
        auto [pc, ps] = low_energy_evolution_polys(p.t, p.lambda, p.gamma, 0.25 * p.eps);
        const double deg = double(pc.degree() + ps.degree());
        a(static_cast<Eigen::Index>(i), 0) = p.t * std::sqrt(p.lambda * p.gamma);
        a(static_cast<Eigen::Index>(i), 1) = std::sqrt(p.lambda / p.gamma) * std::log(1.0 / p.eps);
        y(static_cast<Eigen::Index>(i)) = deg;
        std::printf("t=%-8g gamma=%-8g eps=%-8g degree=%7.0f\n", p.t, p.gamma, p.eps, deg);
    }
    Eigen::Vector2d c = (a.transpose() * a).ldlt().solve(a.transpose() * y);
    Eigen::VectorXd resid = a * c - y;
    std::printf("\nfitted c1 = %.4f, c2 = %.4f (max rel resid %.3f)\n", c(0), c(1),
                (resid.cwiseQuotient(y)).cwiseAbs().maxCoeff());
    std::printf("update include/lowensim/degree_constants.hpp accordingly\n");
    return 0;
}
