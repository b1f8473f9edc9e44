#pragma once
// Unweighted ordinary least squares.

#include <cstddef>
#include <vector>

namespace hartree {

struct LineFit {
    double slope = 0;
    double intercept = 0;
    double residual = 0; // root mean square
    std::size_t count = 0;
};

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

struct LinearFit {
    std::vector<double> coef;
    double residual = 0; // root mean square
};

// y ~ sum_k coef_k columns_k
LinearFit least_squares(const std::vector<std::vector<double>>& columns, const std::vector<double>& y);

} // namespace hartree
