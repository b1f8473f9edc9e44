#include "fft.hpp"

#include <algorithm>
#include <functional>
#include <numeric>

namespace hartree::detail {

std::mutex& fftw_planner_mutex() {
    static std::mutex m;
    return m;
}

namespace {
constexpr unsigned kFlags = FFTW_ESTIMATE | FFTW_UNALIGNED;
}

DstLines::DstLines(int n, int howmany) : n_(n), howmany_(howmany) {
    std::vector<double> scratch(std::size_t(n) * howmany);
    fftw_r2r_kind kind = FFTW_RODFT00;
    std::lock_guard<std::mutex> lock(fftw_planner_mutex());
    plan_ = FftwPlan(fftw_plan_many_r2r(1, &n, howmany, scratch.data(), nullptr, 1, n,
                                        scratch.data(), nullptr, 1, n, &kind, kFlags));
}

void dst_nd(const std::vector<int>& dims, std::vector<double>& data) {
    // FFTW wants the slowest dimension first.
    std::vector<int> rev(dims.rbegin(), dims.rend());
    std::vector<fftw_r2r_kind> kinds(dims.size(), FFTW_RODFT00);
    FftwPlan plan;
    {
        std::lock_guard<std::mutex> lock(fftw_planner_mutex());
        plan = FftwPlan(fftw_plan_r2r(int(rev.size()), rev.data(), data.data(), data.data(),
                                      kinds.data(), kFlags));
    }
    fftw_execute_r2r(plan.get(), data.data(), data.data());
}

RealFft::RealFft(const std::vector<int>& dims) : dims_(dims) {
    real_size_ = std::accumulate(dims.begin(), dims.end(), std::size_t{1}, std::multiplies<>());
    complex_size_ = real_size_ / dims[0] * (dims[0] / 2 + 1);
    std::vector<int> rev(dims.rbegin(), dims.rend());
    std::vector<double> r(real_size_);
    std::vector<std::complex<double>> c(complex_size_);
    auto* cp = reinterpret_cast<fftw_complex*>(c.data());
    std::lock_guard<std::mutex> lock(fftw_planner_mutex());
    fwd_ = FftwPlan(fftw_plan_dft_r2c(int(rev.size()), rev.data(), r.data(), cp, kFlags));
    bwd_ = FftwPlan(fftw_plan_dft_c2r(int(rev.size()), rev.data(), cp, r.data(), kFlags));
}

void RealFft::forward(double* in, std::complex<double>* out) const {
    fftw_execute_dft_r2c(fwd_.get(), in, reinterpret_cast<fftw_complex*>(out));
}

void RealFft::backward(std::complex<double>* in, double* out) const {
    fftw_execute_dft_c2r(bwd_.get(), reinterpret_cast<fftw_complex*>(in), out);
}

} // namespace hartree::detail
