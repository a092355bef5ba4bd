#include "fft_util.hpp"

#include <algorithm>
#include <cstring>
#include <mutex>

namespace fanbeam::detail {

namespace {
std::mutex g_planner_mutex; // the FFTW planner is not thread-safe
}

RowFft::RowFft(int n) : n_(n) {
    real_ = fftw_alloc_real(static_cast<std::size_t>(n_));
    cplx_ = fftw_alloc_complex(static_cast<std::size_t>(n_ / 2 + 1));
    std::lock_guard<std::mutex> lk(g_planner_mutex);
    fwd_ = fftw_plan_dft_r2c_1d(n_, real_, cplx_, FFTW_ESTIMATE);
    inv_ = fftw_plan_dft_c2r_1d(n_, cplx_, real_, FFTW_ESTIMATE);
}

RowFft::~RowFft() {
    std::lock_guard<std::mutex> lk(g_planner_mutex);
    fftw_destroy_plan(fwd_);
    fftw_destroy_plan(inv_);
    fftw_free(real_);
    fftw_free(cplx_);
}

void RowFft::forward(const double* in, std::complex<double>* out) {
    std::memcpy(real_, in, sizeof(double) * static_cast<std::size_t>(n_));
    fftw_execute(fwd_);
    // std::complex<double> is layout-compatible with fftw_complex
    std::memcpy(reinterpret_cast<double*>(out), cplx_,
                sizeof(fftw_complex) * static_cast<std::size_t>(n_ / 2 + 1));
}

void RowFft::inverse(const std::complex<double>* in, double* out) {
    std::memcpy(cplx_, in, sizeof(fftw_complex) * static_cast<std::size_t>(n_ / 2 + 1));
    fftw_execute(inv_);
    const double scale = 1.0 / n_;
    for (int i = 0; i < n_; ++i) out[i] = real_[i] * scale;
}

} // namespace fanbeam::detail
