//==============================================================================
// fft.cpp
// FFTW plan cache.  Plans are built with FFTW_ESTIMATE | FFTW_UNALIGNED so
// that one plan serves any std::vector buffer and results do not depend on
// planner timing.
//==============================================================================

#include "cmlab/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <utility>

namespace cm::fft {
namespace {

std::mutex planner_mutex;
std::map<std::pair<int, int>, fftw_plan> plans;

fftw_plan get_plan(int n, int sign)
{
    std::lock_guard<std::mutex> lock(planner_mutex);
    auto key = std::make_pair(n, sign);
    auto it = plans.find(key);
    if (it != plans.end()) return it->second;

    fftw_complex* a = fftw_alloc_complex(n);
    fftw_complex* b = fftw_alloc_complex(n);
    fftw_plan p = fftw_plan_dft_1d(n, a, b, sign, FFTW_ESTIMATE | FFTW_UNALIGNED);
    fftw_free(a);
    fftw_free(b);
    plans.emplace(key, p);
    return p;
}

void run(const cplx* in, cplx* out, int n, int sign)
{
    fftw_plan p = get_plan(n, sign);
    // FFTW does not write to the input of an out-of-place c2c plan
    auto* src = reinterpret_cast<fftw_complex*>(const_cast<cplx*>(in));
    fftw_execute_dft(p, src, reinterpret_cast<fftw_complex*>(out));
}

}  // namespace

void forward(const cplx* in, cplx* out, int n) { run(in, out, n, FFTW_FORWARD); }
void backward(const cplx* in, cplx* out, int n) { run(in, out, n, FFTW_BACKWARD); }

}  // namespace cm::fft
