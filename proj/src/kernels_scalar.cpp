#include "gazedist/kernels.hpp"

namespace gazedist::kernels {
namespace {

void conv1d_valid_scalar(const double* src, double* dst, std::size_t n,
                         const double* taps, std::size_t ntaps) {
    for (std::size_t i = 0; i < n; ++i) {
        double acc = 0.0;
        for (std::size_t k = 0; k < ntaps; ++k) acc += taps[k] * src[i + k];
        dst[i] = acc;
    }
}

void axpy_scalar(double a, const double* x, double* y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

void scale_scalar(double a, double* x, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) x[i] *= a;
}

double max_scalar(const double* x, std::size_t n) {
    double m = x[0];
    for (std::size_t i = 1; i < n; ++i)
        if (x[i] > m) m = x[i];
    return m;
}

double sum_scalar(const double* x, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += x[i];
    return acc;
}

double sqdist_scalar(const double* a, const double* b, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double d = a[i] - b[i];
        acc += d * d;
    }
    return acc;
}

}  // namespace

const Ops& scalar() {
    static const Ops ops{conv1d_valid_scalar, axpy_scalar, scale_scalar,
                         max_scalar, sum_scalar, sqdist_scalar};
    return ops;
}

}  // namespace gazedist::kernels
