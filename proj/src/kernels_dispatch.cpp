#include "tripod/kernels.hpp"

namespace tripod::kernels {

#if defined(TRIPOD_HAVE_AVX2)
const Kernels* avx2_kernels_impl(); // defined in kernels_avx2.cpp
#endif

const Kernels* avx2_or_null() {
#if defined(TRIPOD_HAVE_AVX2)
    if (__builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma"))
        return avx2_kernels_impl();
#endif
    return nullptr;
}

const Kernels& active() {
    static const Kernels* chosen = [] {
        if (const Kernels* k = avx2_or_null())
            return k;
        return &scalar();
    }();
    return *chosen;
}

} // namespace tripod::kernels
