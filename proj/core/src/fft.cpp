#include "dbeam/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <stdexcept>

namespace dbeam::fft {
namespace {

// FFTW planning is not thread-safe; execution with the new-array interface is,
// provided buffers share the alignment the plan was created with. All buffers
// come from fftw_malloc, so alignment is uniform.
std::mutex g_plan_mutex;

struct PlanPair {
    fftw_plan fwd = nullptr;
    fftw_plan inv = nullptr;
};

fftw_plan get_plan(std::size_t n, int sign) {
    static std::map<std::size_t, PlanPair> cache;
    std::lock_guard<std::mutex> lock(g_plan_mutex);
    auto& entry = cache[n];
    fftw_plan& p = (sign == FFTW_FORWARD) ? entry.fwd : entry.inv;
    if (!p) {
        fftw_complex* in = fftw_alloc_complex(n);
        fftw_complex* out = fftw_alloc_complex(n);
        p = fftw_plan_dft_1d(static_cast<int>(n), in, out, sign, FFTW_ESTIMATE);
        fftw_free(in);
        fftw_free(out);
        if (!p) throw std::runtime_error("fftw plan creation failed");
    }
    return p;
}

std::vector<std::complex<double>> transform(
    const std::vector<std::complex<double>>& x, int sign) {
    const std::size_t n = x.size();
    if (n == 0) throw std::invalid_argument("fft: empty input");
    fftw_complex* in = fftw_alloc_complex(n);
    fftw_complex* out = fftw_alloc_complex(n);
    for (std::size_t i = 0; i < n; ++i) {
        in[i][0] = x[i].real();
        in[i][1] = x[i].imag();
    }
    fftw_execute_dft(get_plan(n, sign), in, out);
    std::vector<std::complex<double>> y(n);
    const double scale = (sign == FFTW_BACKWARD) ? 1.0 / static_cast<double>(n) : 1.0;
    for (std::size_t i = 0; i < n; ++i)
        y[i] = std::complex<double>(out[i][0] * scale, out[i][1] * scale);
    fftw_free(in);
    fftw_free(out);
    return y;
}

} // namespace

std::vector<std::complex<double>> fft(const std::vector<std::complex<double>>& x) {
    return transform(x, FFTW_FORWARD);
}

std::vector<std::complex<double>> ifft(const std::vector<std::complex<double>>& x) {
    return transform(x, FFTW_BACKWARD);
}

std::size_t next_pow2(std::size_t n) {
    std::size_t p = 1;
    while (p < n) p <<= 1;
    return p;
}

} // namespace dbeam::fft
