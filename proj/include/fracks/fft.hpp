#pragma once

#include <complex>
#include <mutex>
#include <stdexcept>
#include <vector>

#include <fftw3.h>

#include "fracks/grid.hpp"

namespace fracks {

using Spectrum = std::vector<std::complex<double>>;

namespace detail {

// FFTW's planner is not thread-safe; execution is. Plans are created with
// FFTW_ESTIMATE (pure table lookup at these sizes) under a global mutex.
inline std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

inline void run_dft(const Grid& g, std::complex<double>* in, std::complex<double>* out, int sign) {
    static_assert(sizeof(std::complex<double>) == sizeof(fftw_complex));
    int dims[3] = {g.n, g.n, g.n};
    fftw_plan plan;
    {
        std::lock_guard<std::mutex> lock(planner_mutex());
        plan = fftw_plan_dft(g.d, dims, reinterpret_cast<fftw_complex*>(in),
                             reinterpret_cast<fftw_complex*>(out), sign, FFTW_ESTIMATE);
    }
    if (!plan) throw std::runtime_error("fft: planner failed");
    fftw_execute(plan);
    {
        std::lock_guard<std::mutex> lock(planner_mutex());
        fftw_destroy_plan(plan);
    }
}

}  // namespace detail

// Unnormalized forward transform of a real field.
inline Spectrum fft_forward(const Field& f) {
    Spectrum in(f.values.size());
    for (std::size_t i = 0; i < in.size(); ++i) in[i] = f.values[i];
    Spectrum out(in.size());
    detail::run_dft(f.grid, in.data(), out.data(), FFTW_FORWARD);
    return out;
}

// Inverse transform (scaled by 1/N), returning the real part. If `residue_tol`
// is positive, the relative imaginary residue is checked against it.
inline Field fft_inverse(const Grid& g, Spectrum spec, double residue_tol = -1.0) {
    Spectrum out(spec.size());
    detail::run_dft(g, spec.data(), out.data(), FFTW_BACKWARD);
    const double inv_n = 1.0 / static_cast<double>(g.size());
    Field f(g);
    double max_re = 0.0, max_im = 0.0;
    for (std::size_t i = 0; i < out.size(); ++i) {
        const double re = out[i].real() * inv_n;
        f.values[i] = re;
        max_re = std::max(max_re, std::abs(re));
        max_im = std::max(max_im, std::abs(out[i].imag()) * inv_n);
    }
    if (residue_tol > 0.0 && max_im > residue_tol * std::max(max_re, 1e-300))
        throw std::runtime_error("fft_inverse: imaginary residue exceeds tolerance");
    return f;
}

}  // namespace fracks
