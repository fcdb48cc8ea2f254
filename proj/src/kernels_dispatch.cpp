// Copyright 2026 The cvteleport Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cvtele/kernels.hpp"

#include <atomic>
#include <stdexcept>

namespace cvtele::kernels {

extern const KernelTable kScalarTable;
#ifdef CVTELE_HAVE_AVX2_SOURCES
extern const KernelTable kAvx2Table;
#endif

namespace {

bool cpu_has_avx2() {
#if defined(CVTELE_HAVE_AVX2_SOURCES) && (defined(__x86_64__) || defined(_M_X64))
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

Backend detect_backend() {
    return cpu_has_avx2() ? Backend::avx2 : Backend::scalar;
}

std::atomic<Backend> g_backend{detect_backend()};

const KernelTable& table_for_checked(Backend b) {
    switch (b) {
        case Backend::scalar:
            return kScalarTable;
        case Backend::avx2:
#ifdef CVTELE_HAVE_AVX2_SOURCES
            return kAvx2Table;
#else
            break;
#endif
    }
    throw std::invalid_argument("kernel backend not built into this binary");
}

inline const KernelTable& active() {
    return table_for_checked(g_backend.load(std::memory_order_relaxed));
}

}  // namespace

Backend active_backend() {
    return g_backend.load(std::memory_order_relaxed);
}

bool backend_available(Backend b) {
    switch (b) {
        case Backend::scalar:
            return true;
        case Backend::avx2:
            return cpu_has_avx2();
    }
    return false;
}

void set_backend(Backend b) {
    if (!backend_available(b)) {
        throw std::invalid_argument("kernel backend unavailable: " + backend_name(b));
    }
    g_backend.store(b, std::memory_order_relaxed);
}

std::string backend_name(Backend b) {
    switch (b) {
        case Backend::scalar:
            return "scalar";
        case Backend::avx2:
            return "avx2";
    }
    return "unknown";
}

const KernelTable* table_for(Backend b) {
    switch (b) {
        case Backend::scalar:
            return &kScalarTable;
        case Backend::avx2:
#ifdef CVTELE_HAVE_AVX2_SOURCES
            return &kAvx2Table;
#else
            return nullptr;
#endif
    }
    return nullptr;
}

cplx cdotc(const cplx* u, const cplx* v, std::size_t n) { return active().cdotc(u, v, n); }
cplx dotu(const cplx* u, const cplx* v, std::size_t n) { return active().dotu(u, v, n); }
cplx wdotc(const double* w, const cplx* u, const cplx* v, std::size_t n) {
    return active().wdotc(w, u, v, n);
}
double weighted_abs2(const double* w, const cplx* v, std::size_t n) {
    return active().weighted_abs2(w, v, n);
}
double abs2_sum(const cplx* v, std::size_t n) { return active().abs2_sum(v, n); }
void axpy(cplx a, const cplx* x, cplx* y, std::size_t n) { active().axpy(a, x, y, n); }
void axpy_conj(cplx a, const cplx* x, cplx* y, std::size_t n) { active().axpy_conj(a, x, y, n); }

void matvec(const cplx* a, const cplx* x, cplx* y, std::size_t dim) {
    const KernelTable& t = active();
    for (std::size_t m = 0; m < dim; ++m) {
        y[m] = t.dotu(a + m * dim, x, dim);
    }
}

}  // namespace cvtele::kernels
