#include "gazedist/kernels.hpp"

namespace gazedist::kernels {

const Ops* avx2_ops_impl();  // defined in kernels_avx2.cpp

const Ops* avx2() {
#if defined(__x86_64__) || defined(_M_X64)
    if (__builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma"))
        return avx2_ops_impl();
#endif
    return nullptr;
}

const Ops& dispatch() {
    static const Ops* chosen = [] {
        if (const Ops* v = avx2()) return v;
        return &scalar();
    }();
    return *chosen;
}

std::string_view active_variant() {
    return &dispatch() == &scalar() ? "scalar" : "avx2";
}

}  // namespace gazedist::kernels
