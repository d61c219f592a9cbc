#include "ssns/fourier.hpp"

#include <fftw3.h>

#include <map>
#include <memory>
#include <mutex>

#include "ssns/errors.hpp"

namespace ssns::fourier {
namespace {

// FFTW planning is not thread-safe; execution through the new-array interface is.
struct Plans {
    fftw_plan r2c = nullptr;
    fftw_plan c2r = nullptr;

    explicit Plans(int n) {
        const std::size_t real_size = static_cast<std::size_t>(n) * n * n;
        const std::size_t complex_size = static_cast<std::size_t>(n) * n * (n / 2 + 1);
        double* r = fftw_alloc_real(real_size);
        fftw_complex* c = fftw_alloc_complex(complex_size);
        const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
        r2c = fftw_plan_dft_r2c_3d(n, n, n, r, c, flags);
        c2r = fftw_plan_dft_c2r_3d(n, n, n, c, r, flags);
        fftw_free(r);
        fftw_free(c);
        if (!r2c || !c2r) throw NumericError("fftw: plan creation failed");
    }
    ~Plans() {
        fftw_destroy_plan(r2c);
        fftw_destroy_plan(c2r);
    }
    Plans(const Plans&) = delete;
    Plans& operator=(const Plans&) = delete;
};

const Plans& plans_for(int n) {
    static std::mutex mutex;
    static std::map<int, std::unique_ptr<Plans>> cache;
    std::lock_guard lock(mutex);
    auto& slot = cache[n];
    if (!slot) slot = std::make_unique<Plans>(n);
    return *slot;
}

}  // namespace

Coeffs forward(const Grid& grid, std::span<const double> values) {
    if (values.size() != grid.size()) throw DimensionError("fft: array size does not match grid");
    const Plans& p = plans_for(grid.n());
    Coeffs out(grid.spectral_size());
    // r2c leaves its input intact, so the const_cast is safe.
    fftw_execute_dft_r2c(p.r2c, const_cast<double*>(values.data()),
                         reinterpret_cast<fftw_complex*>(out.data()));
    return out;
}

std::vector<double> inverse(const Grid& grid, const Coeffs& coeffs) {
    if (coeffs.size() != grid.spectral_size())
        throw DimensionError("fft: coefficient count does not match grid");
    const Plans& p = plans_for(grid.n());
    Coeffs scratch = coeffs;  // c2r destroys its input
    std::vector<double> out(grid.size());
    fftw_execute_dft_c2r(p.c2r, reinterpret_cast<fftw_complex*>(scratch.data()), out.data());
    const double norm = 1.0 / static_cast<double>(grid.size());
    for (double& v : out) v *= norm;
    return out;
}

void dealias(const Grid& grid, Coeffs& coeffs) {
    if (grid.dealias_fraction() >= 1.0) return;
    for_each_mode(grid, [&](std::size_t idx, int k1, int k2, int k3) {
        if (!grid.in_dealias_band(k1) || !grid.in_dealias_band(k2) || !grid.in_dealias_band(k3))
            coeffs[idx] = 0.0;
    });
}

}  // namespace ssns::fourier
