#include "hartree/fast_solver.hpp"

#include "fft.hpp"
#include "hartree/error.hpp"

#include <cmath>
#include <numbers>

namespace hartree {

using std::numbers::pi;

SeparableSolver::SeparableSolver(std::shared_ptr<const CartesianGrid> grid, double sigma)
    : grid_(std::move(grid)), sigma_(sigma) {
    const CartesianGrid& g = *grid_;
    if (g.axes() != 2) throw ConfigError("separable solver needs a two-axis grid");
    const int n0 = g.n[0], n1 = g.n[1];
    dst_ = std::make_unique<detail::DstLines>(n0, n1);

    // Axial coefficient a_j, faces b_{j+1/2}, masses m_j.
    std::vector<double> a(n1), bup(n1), bdn(n1), m(n1);
    for (int j = 0; j < n1; ++j) {
        if (g.geometry == Geometry::axisymmetric) {
            a[j] = 2 * pi * (j + 0.5) * g.h;
            bup[j] = 2 * pi * (j + 1) * g.h;
            bdn[j] = 2 * pi * j * g.h;
        } else {
            a[j] = bup[j] = bdn[j] = 1.0;
        }
        m[j] = g.node_volume(j);
    }
    lower_.resize(n1);
    for (int j = 0; j < n1; ++j) lower_[j] = -bdn[j];

    cprime_.assign(std::size_t(n0) * n1, 0.0);
    dinv_.assign(std::size_t(n0) * n1, 0.0);
    for (int p = 0; p < n0; ++p) {
        const double lam = 2.0 - 2.0 * std::cos((p + 1) * pi / (n0 + 1));
        double cprev = 0;
        for (int j = 0; j < n1; ++j) {
            const double diag = lam * a[j] + bup[j] + bdn[j] + sigma * m[j];
            const double den = diag - (j > 0 ? lower_[j] * cprev : 0.0);
            if (!(std::abs(den) > 0)) throw ConfigError("singular separable system");
            const double upper = j + 1 < n1 ? -bup[j] : 0.0;
            dinv_[std::size_t(j) * n0 + p] = 1.0 / den;
            cprev = upper / den;
            cprime_[std::size_t(j) * n0 + p] = cprev;
        }
    }
}

SeparableSolver::~SeparableSolver() = default;
SeparableSolver::SeparableSolver(SeparableSolver&&) noexcept = default;
SeparableSolver& SeparableSolver::operator=(SeparableSolver&&) noexcept = default;

void SeparableSolver::solve(const double* b, double* x) const {
    const CartesianGrid& g = *grid_;
    const int n0 = g.n[0], n1 = g.n[1];
    const std::size_t total = std::size_t(n0) * n1;
    std::vector<double> y(b, b + total);
    dst_->execute(y.data());
    // Forward sweep, vectorized over modes p.
    for (int j = 0; j < n1; ++j) {
        double* yj = y.data() + std::size_t(j) * n0;
        const double* dinv = dinv_.data() + std::size_t(j) * n0;
        if (j == 0) {
            for (int p = 0; p < n0; ++p) yj[p] *= dinv[p];
        } else {
            const double* ym = yj - n0;
            const double lo = lower_[j];
            for (int p = 0; p < n0; ++p) yj[p] = (yj[p] - lo * ym[p]) * dinv[p];
        }
    }
    for (int j = n1 - 2; j >= 0; --j) {
        double* yj = y.data() + std::size_t(j) * n0;
        const double* yp = yj + n0;
        const double* cp = cprime_.data() + std::size_t(j) * n0;
        for (int p = 0; p < n0; ++p) yj[p] -= cp[p] * yp[p];
    }
    dst_->execute(y.data());
    const double scale = 1.0 / (2.0 * (n0 + 1));
    for (std::size_t i = 0; i < total; ++i) x[i] = y[i] * scale;
}

} // namespace hartree
