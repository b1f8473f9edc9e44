#include "hartree/eigen.hpp"

#include "hartree/error.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <random>

namespace hartree {

GridHamiltonian::GridHamiltonian(std::shared_ptr<const CartesianGrid> grid, std::vector<double> potential)
    : grid_(std::move(grid)), V_(std::move(potential)), mass_(grid_->mass()) {
    if (V_.size() != grid_->size()) throw ConfigError("potential length does not match the grid");
}

void GridHamiltonian::apply(const double* x, double* y) const {
    stiffness_apply(*grid_, x, y);
    for (std::size_t i = 0; i < V_.size(); ++i) y[i] += mass_[i] * V_[i] * x[i];
}

double GridHamiltonian::rayleigh(const std::vector<double>& x) const {
    std::vector<double> ax(x.size());
    apply(x.data(), ax.data());
    double num = 0, den = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        num += x[i] * ax[i];
        den += mass_[i] * x[i] * x[i];
    }
    return num / den;
}

double GridHamiltonian::residual_norm(const std::vector<double>& x, double lambda) const {
    std::vector<double> ax(x.size());
    apply(x.data(), ax.data());
    double s = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double r = ax[i] - lambda * mass_[i] * x[i];
        s += r * r / mass_[i];
    }
    return std::sqrt(s);
}

namespace {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;

void apply_block(const GridHamiltonian& H, const Mat& X, Mat& AX) {
    AX.resize(X.rows(), X.cols());
    for (Eigen::Index j = 0; j < X.cols(); ++j) H.apply(X.col(j).data(), AX.col(j).data());
}

// X^T M Y
Mat mgram(const Mat& X, const Vec& m, const Mat& Y) { return X.transpose() * (m.asDiagonal() * Y); }

// Removes the M-projection of W onto the M-orthonormal X, twice.
void morth_against(Mat& W, const Mat& X, const Vec& m) {
    if (X.cols() == 0 || W.cols() == 0) return;
    for (int pass = 0; pass < 2; ++pass) W -= X * mgram(X, m, W);
}

// Coefficients C with (S C)^T M (S C) = I, dropping near-dependent directions.
Mat svqb(const Mat& G, double drop) {
    const Eigen::Index n = G.rows();
    Vec dinv(n);
    for (Eigen::Index i = 0; i < n; ++i) dinv(i) = G(i, i) > 0 ? 1.0 / std::sqrt(G(i, i)) : 0.0;
    const Mat Gs = dinv.asDiagonal() * G * dinv.asDiagonal();
    Eigen::SelfAdjointEigenSolver<Mat> es(Gs);
    const Vec& lam = es.eigenvalues();
    const double top = lam.maxCoeff();
    std::vector<Eigen::Index> keep;
    for (Eigen::Index i = 0; i < n; ++i)
        if (lam(i) > drop * top) keep.push_back(i);
    Mat C(n, Eigen::Index(keep.size()));
    for (std::size_t k = 0; k < keep.size(); ++k)
        C.col(Eigen::Index(k)) = dinv.asDiagonal() * es.eigenvectors().col(keep[k]) / std::sqrt(lam(keep[k]));
    return C;
}

void project_block(const CartesianGrid& g, Parity p, Mat& X) {
    for (Eigen::Index j = 0; j < X.cols(); ++j) project_parity(g, p, X.col(j).data());
}

} // namespace

EigenResult lobpcg(const GridHamiltonian& H, const SeparableSolver& preconditioner, const EigenOptions& opt,
                   const std::vector<std::vector<double>>& guess) {
    if (opt.nev < 1 || opt.block < opt.nev) throw ConfigError("eigen block must hold the wanted pairs");
    if (!(opt.tol > 0) || opt.max_iter < 1) throw ConfigError("invalid eigensolver tolerance or iteration cap");
    const CartesianGrid& g = H.grid();
    if (!(preconditioner.grid() == g)) throw ConfigError("preconditioner lives on a different grid");
    const Eigen::Index N = Eigen::Index(g.size()), b = opt.block;
    const Vec m = Eigen::Map<const Vec>(H.mass().data(), N);

    Mat X(N, b);
    std::mt19937_64 rng(opt.seed);
    std::normal_distribution<double> normal;
    for (Eigen::Index j = 0; j < b; ++j) {
        if (std::size_t(j) < guess.size()) {
            if (guess[j].size() != std::size_t(N)) throw ConfigError("eigen guess length mismatch");
            X.col(j) = Eigen::Map<const Vec>(guess[j].data(), N);
        } else {
            for (Eigen::Index i = 0; i < N; ++i) X(i, j) = normal(rng);
            // Smooth the random column so it carries little high-frequency energy.
            Vec sm(N);
            preconditioner.solve(X.col(j).data(), sm.data());
            X.col(j) = sm;
        }
    }
    project_block(g, opt.parity, X);

    Mat AX, W, AW, P(N, 0), AP(N, 0), R(N, b);
    {
        const Mat C = svqb(mgram(X, m, X), 1e-14);
        X = X * C;
        apply_block(H, X, AX);
        Eigen::SelfAdjointEigenSolver<Mat> es(X.transpose() * AX);
        const Eigen::Index k = std::min<Eigen::Index>(b, X.cols());
        X = X * es.eigenvectors().leftCols(k);
        AX = AX * es.eigenvectors().leftCols(k);
        if (k < opt.nev) throw ConfigError("eigen start block is rank deficient");
    }

    EigenResult out;
    Vec theta(X.cols());
    for (int it = 0; it <= opt.max_iter; ++it) {
        const Eigen::Index k = X.cols();
        for (Eigen::Index j = 0; j < k; ++j) theta(j) = X.col(j).dot(AX.col(j));
        R = AX - (m.asDiagonal() * X) * theta.head(k).asDiagonal();
        std::vector<double> res(static_cast<std::size_t>(k));
        bool done = true;
        for (Eigen::Index j = 0; j < k; ++j) {
            res[std::size_t(j)] = std::sqrt((R.col(j).array().square() / m.array()).sum());
            if (j < opt.nev && !(res[std::size_t(j)] <= opt.tol)) done = false;
        }
        out.iterations = it;
        out.residuals.assign(res.begin(), res.begin() + opt.nev);
        if (done) {
            out.converged = true;
            break;
        }
        if (it == opt.max_iter) break;

        W.resize(N, k);
        for (Eigen::Index j = 0; j < k; ++j) preconditioner.solve(R.col(j).data(), W.col(j).data());
        project_block(g, opt.parity, W);
        morth_against(W, X, m);
        morth_against(P, X, m);

        Mat S(N, k + W.cols() + P.cols());
        S << X, W, P;
        const Mat C = svqb(mgram(S, m, S), 1e-15);
        Mat Q = S * C;
        Mat AQ;
        apply_block(H, Q, AQ);
        Mat Ah = Q.transpose() * AQ;
        Ah = 0.5 * (Ah + Ah.transpose());
        Eigen::SelfAdjointEigenSolver<Mat> es(Ah);
        const Eigen::Index kk = std::min<Eigen::Index>(b, Q.cols());
        const Mat Z = es.eigenvectors().leftCols(kk);
        const Mat Y = C * Z; // coefficients on S
        X = Q * Z;
        AX = AQ * Z;
        const Eigen::Index tail = S.cols() - k;
        if (tail > 0) {
            P = S.rightCols(tail) * Y.bottomRows(tail);
        } else {
            P.resize(N, 0);
        }
        if (X.cols() < opt.nev) throw NonconvergenceError("eigen block collapsed", out.residuals);
    }

    const Eigen::Index k = std::min<Eigen::Index>(opt.nev, X.cols());
    for (Eigen::Index j = 0; j < k; ++j) {
        std::vector<double> v(X.col(j).data(), X.col(j).data() + N);
        out.values.push_back(X.col(j).dot(AX.col(j)));
        out.vectors.push_back(std::move(v));
    }
    return out;
}

} // namespace hartree
