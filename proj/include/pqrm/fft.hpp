// fft.hpp: RAII wrapper around a pair of FFTW plans of fixed size

#pragma once

#include <complex>
#include <memory>
#include <mutex>
#include <stdexcept>

#include <Eigen/Dense>
#include <fftw3.h>

namespace pqrm {

namespace detail {
// The FFTW planner is not re-entrant; plan execution is.
inline std::mutex& fftw_planner_mutex() {
    static std::mutex m;
    return m;
}
}  // namespace detail

/// Unnormalized forward (e^{-i...}) and backward (e^{+i...}) transforms.
/// Plans are created once with FFTW_ESTIMATE | FFTW_UNALIGNED so execution
/// is deterministic and safe from any thread on any buffer.
class Fft {
public:
    explicit Fft(int n) : n_(n) {
        if (n < 1) throw std::invalid_argument("FFT size must be positive");
        Eigen::VectorXcd a(n), b(n);
        auto* in = reinterpret_cast<fftw_complex*>(a.data());
        auto* out = reinterpret_cast<fftw_complex*>(b.data());
        std::lock_guard lock(detail::fftw_planner_mutex());
        constexpr unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
        fwd_ = fftw_plan_dft_1d(n, in, out, FFTW_FORWARD, flags);
        bwd_ = fftw_plan_dft_1d(n, in, out, FFTW_BACKWARD, flags);
        if (!fwd_ || !bwd_) throw std::runtime_error("FFTW planning failed");
    }
    ~Fft() {
        std::lock_guard lock(detail::fftw_planner_mutex());
        fftw_destroy_plan(fwd_);
        fftw_destroy_plan(bwd_);
    }
    Fft(const Fft&) = delete;
    Fft& operator=(const Fft&) = delete;

    int size() const { return n_; }

    void forward(const Eigen::VectorXcd& in, Eigen::VectorXcd& out) const { execute(fwd_, in, out); }
    void backward(const Eigen::VectorXcd& in, Eigen::VectorXcd& out) const { execute(bwd_, in, out); }

private:
    void execute(fftw_plan plan, const Eigen::VectorXcd& in, Eigen::VectorXcd& out) const {
        if (in.size() != n_) throw std::invalid_argument("FFT input has wrong length");
        if (in.data() == out.data()) throw std::invalid_argument("FFT plans are out-of-place");
        out.resize(n_);
        // fftw_execute_dft never writes to `in` for out-of-place plans.
        fftw_execute_dft(plan, reinterpret_cast<fftw_complex*>(const_cast<std::complex<double>*>(in.data())),
                         reinterpret_cast<fftw_complex*>(out.data()));
    }

    int n_;
    fftw_plan fwd_ = nullptr;
    fftw_plan bwd_ = nullptr;
};

}  // namespace pqrm
