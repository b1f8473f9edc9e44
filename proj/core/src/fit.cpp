#include "hartree/fit.hpp"

#include "hartree/error.hpp"

#include <Eigen/Dense>

#include <cmath>

namespace hartree {

LinearFit least_squares(const std::vector<std::vector<double>>& columns, const std::vector<double>& y) {
    const std::size_t m = y.size(), k = columns.size();
    if (k == 0 || m < k) throw DomainError("least squares needs at least as many rows as unknowns");
    Eigen::MatrixXd A(m, k);
    Eigen::VectorXd b(m);
    for (std::size_t i = 0; i < m; ++i) {
        b(i) = y[i];
        for (std::size_t j = 0; j < k; ++j) {
            if (columns[j].size() != m) throw ConfigError("least squares column length mismatch");
            A(i, j) = columns[j][i];
        }
    }
    const Eigen::VectorXd x = A.colPivHouseholderQr().solve(b);
    LinearFit f;
    f.coef.assign(x.data(), x.data() + k);
    f.residual = std::sqrt((A * x - b).squaredNorm() / double(m));
    return f;
}

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2) throw DomainError("line fit needs two or more points");
    const std::vector<double> ones(x.size(), 1.0);
    const auto f = least_squares({ones, x}, y);
    return {f.coef[1], f.coef[0], f.residual, x.size()};
}

} // namespace hartree
