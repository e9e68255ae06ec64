#pragma once

#include <cstddef>
#include <string_view>

namespace gazedist::kernels {

// Data-parallel inner loops used by the heatmap and classifier code.
// Scalar reference implementations always exist; an AVX2 variant is
// selected at process start when the CPU supports it. The two variants
// are equivalence-tested against each other.
struct Ops {
    // dst[i] = sum_k taps[k] * src[i + k], i in [0, n)
    void (*conv1d_valid)(const double* src, double* dst, std::size_t n,
                         const double* taps, std::size_t ntaps);
    // y[i] += a * x[i]
    void (*axpy)(double a, const double* x, double* y, std::size_t n);
    // x[i] *= a
    void (*scale)(double a, double* x, std::size_t n);
    double (*max)(const double* x, std::size_t n);
    double (*sum)(const double* x, std::size_t n);
    // sum_i (a[i] - b[i])^2
    double (*sqdist)(const double* a, const double* b, std::size_t n);
};

/// Kernels chosen for this CPU (AVX2 when available, scalar otherwise).
const Ops& dispatch();

/// Portable reference kernels, used directly by equivalence tests.
const Ops& scalar();

/// AVX2 kernels, or nullptr when the CPU lacks AVX2.
const Ops* avx2();

/// Name of the active variant ("avx2" or "scalar").
std::string_view active_variant();

}  // namespace gazedist::kernels
