#ifndef FANBEAM_SRC_FFT_UTIL_HPP
#define FANBEAM_SRC_FFT_UTIL_HPP

#include <complex>
#include <vector>

#include <fftw3.h>

namespace fanbeam::detail {

// Real <-> half-complex 1-D transforms of a fixed power-of-two size backed by
// FFTW. Each instance owns its buffers; the FFTW planner is serialized
// internally, so instances can be created and used from worker threads.
// Plans use FFTW_ESTIMATE for run-to-run reproducibility.
class RowFft {
public:
    explicit RowFft(int n);
    ~RowFft();
    RowFft(const RowFft&) = delete;
    RowFft& operator=(const RowFft&) = delete;

    int size() const { return n_; }
    int spectrum_size() const { return n_ / 2 + 1; }

    // in: n real samples; out: n/2+1 complex bins
    void forward(const double* in, std::complex<double>* out);
    // in: n/2+1 complex bins; out: n real samples, scaled by 1/n
    void inverse(const std::complex<double>* in, double* out);

private:
    int n_;
    double* real_;
    fftw_complex* cplx_;
    fftw_plan fwd_;
    fftw_plan inv_;
};

} // namespace fanbeam::detail

#endif
