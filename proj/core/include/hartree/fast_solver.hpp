#pragma once

#include "hartree/grids.hpp"

#include <memory>
#include <vector>

namespace hartree {

namespace detail {
class DstLines;
}

// Direct solver for (K + sigma M) x = b on two-axis grids (planar d = 2 or
// axisymmetric d = 3): sine transform along axis 0, tridiagonal solves across.
class SeparableSolver {
public:
    SeparableSolver(std::shared_ptr<const CartesianGrid> grid, double sigma);
    ~SeparableSolver();
    SeparableSolver(SeparableSolver&&) noexcept;
    SeparableSolver& operator=(SeparableSolver&&) noexcept;

    void solve(const double* b, double* x) const;
    double sigma() const { return sigma_; }
    const CartesianGrid& grid() const { return *grid_; }

private:
    std::shared_ptr<const CartesianGrid> grid_;
    double sigma_ = 0;
    std::unique_ptr<detail::DstLines> dst_;
    std::vector<double> lower_;   // -b_{j-1/2}, per j
    std::vector<double> cprime_;  // Thomas factors, layout j * n0 + p
    std::vector<double> dinv_;
};

} // namespace hartree
