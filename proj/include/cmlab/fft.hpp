#pragma once
// Unnormalised complex DFT on std::vector storage, FFTW backed.
// Plans are created once per (size, direction) and shared; execution
// goes through the new-array interface so concurrent callers are safe.

#include "cmlab/grid.hpp"

namespace cm::fft {

// out_k = sum_j in_j exp(-2 pi i jk/n)
void forward(const cplx* in, cplx* out, int n);
// out_j = sum_k in_k exp(+2 pi i jk/n)   (no 1/n)
void backward(const cplx* in, cplx* out, int n);

inline cvec forward(const cvec& in)
{
    cvec out(in.size());
    forward(in.data(), out.data(), static_cast<int>(in.size()));
    return out;
}

inline cvec backward(const cvec& in)
{
    cvec out(in.size());
    backward(in.data(), out.data(), static_cast<int>(in.size()));
    return out;
}

}  // namespace cm::fft
