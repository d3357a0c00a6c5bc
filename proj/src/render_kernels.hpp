#pragma once

// Shared contract between the scalar and SIMD escape-time row kernels.
// Both must produce bit-identical iteration counts: they use the same
// operation order, no FMA contraction, and scalar libm for exp/sin/cos.

namespace escaping::render::detail {

struct KernelParams {
    int family = 0;  // 0: A * e^(K z), 1: A * (e^(K z) + e^(-K z))
    double K = 1.0;
    double Ar = 0.0, Ai = 0.0;
    double esc2 = 1e12;  // squared escape modulus
    int horizon = 0;
};

void escape_row_scalar(const KernelParams& p, const double* zr0, const double* zi0, int n,
                       int* out_iters);

#if defined(__x86_64__) || defined(_M_X64)
void escape_row_avx2(const KernelParams& p, const double* zr0, const double* zi0, int n,
                     int* out_iters);
#endif

}  // namespace escaping::render::detail
