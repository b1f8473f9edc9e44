#pragma once
// Thin RAII layer over FFTW. Planning is serialized; execution is reentrant.

#include <fftw3.h>

#include <complex>
#include <mutex>
#include <vector>

namespace hartree::detail {

std::mutex& fftw_planner_mutex();

class FftwPlan {
public:
    FftwPlan() = default;
    explicit FftwPlan(fftw_plan p) : plan_(p) {}
    FftwPlan(const FftwPlan&) = delete;
    FftwPlan& operator=(const FftwPlan&) = delete;
    FftwPlan(FftwPlan&& o) noexcept : plan_(o.plan_) { o.plan_ = nullptr; }
    FftwPlan& operator=(FftwPlan&& o) noexcept {
        if (this != &o) {
            reset();
            plan_ = o.plan_;
            o.plan_ = nullptr;
        }
        return *this;
    }
    ~FftwPlan() { reset(); }

    fftw_plan get() const { return plan_; }
    explicit operator bool() const { return plan_ != nullptr; }

private:
    void reset() {
        if (plan_) {
            std::lock_guard<std::mutex> lock(fftw_planner_mutex());
            fftw_destroy_plan(plan_);
            plan_ = nullptr;
        }
    }
    fftw_plan plan_ = nullptr;
};

// In-place DST-I (RODFT00) of `howmany` contiguous lines of length n.
// Unnormalized: applying twice multiplies by 2(n+1).
class DstLines {
public:
    DstLines() = default;
    DstLines(int n, int howmany);
    void execute(double* data) const { fftw_execute_r2r(plan_.get(), data, data); }
    int n() const { return n_; }
    int howmany() const { return howmany_; }

private:
    int n_ = 0, howmany_ = 0;
    FftwPlan plan_;
};

// Multidimensional DST-I over dims (dims[0] contiguous). Unnormalized.
void dst_nd(const std::vector<int>& dims, std::vector<double>& data);

// Real-to-complex / complex-to-real transforms on a padded box
// (dims[0] contiguous).
class RealFft {
public:
    RealFft() = default;
    explicit RealFft(const std::vector<int>& dims);
    std::size_t real_size() const { return real_size_; }
    std::size_t complex_size() const { return complex_size_; }
    void forward(double* in, std::complex<double>* out) const;
    void backward(std::complex<double>* in, double* out) const;
    const std::vector<int>& dims() const { return dims_; }

private:
    std::vector<int> dims_;
    std::size_t real_size_ = 0, complex_size_ = 0;
    FftwPlan fwd_, bwd_;
};

} // namespace hartree::detail
