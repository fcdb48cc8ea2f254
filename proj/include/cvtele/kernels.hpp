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

#ifndef CVTELE_KERNELS_HPP
#define CVTELE_KERNELS_HPP

#include <complex>
#include <cstddef>
#include <string>

namespace cvtele::kernels {

using cplx = std::complex<double>;

/// Arithmetic backends. `scalar` is the portable reference; `avx2` is
/// dispatched to automatically when the CPU supports AVX2+FMA.
enum class Backend { scalar, avx2 };

Backend active_backend();
bool backend_available(Backend b);
/// Override the dispatched backend (used by the equivalence tests).
/// Throws std::invalid_argument if the backend is not available.
void set_backend(Backend b);
std::string backend_name(Backend b);

/// Function table implemented once per backend. All kernels accumulate in a
/// fixed lane/order scheme, so results are reproducible run to run for a
/// given backend.
struct KernelTable {
  // sum_i conj(u_i) * v_i
  cplx (*cdotc)(const cplx* u, const cplx* v, std::size_t n);
  // sum_i u_i * v_i
  cplx (*dotu)(const cplx* u, const cplx* v, std::size_t n);
  // sum_i w_i * u_i * conj(v_i), w real
  cplx (*wdotc)(const double* w, const cplx* u, const cplx* v, std::size_t n);
  // sum_i w_i * |v_i|^2, w real
  double (*weighted_abs2)(const double* w, const cplx* v, std::size_t n);
  // sum_i |v_i|^2
  double (*abs2_sum)(const cplx* v, std::size_t n);
  // y_i += a * x_i
  void (*axpy)(cplx a, const cplx* x, cplx* y, std::size_t n);
  // y_i += a * conj(x_i)
  void (*axpy_conj)(cplx a, const cplx* x, cplx* y, std::size_t n);
};

/// Table for an explicit backend (test access); null entries when unbuilt.
const KernelTable* table_for(Backend b);

// Dispatched entry points.
cplx cdotc(const cplx* u, const cplx* v, std::size_t n);
cplx dotu(const cplx* u, const cplx* v, std::size_t n);
cplx wdotc(const double* w, const cplx* u, const cplx* v, std::size_t n);
double weighted_abs2(const double* w, const cplx* v, std::size_t n);
double abs2_sum(const cplx* v, std::size_t n);
void axpy(cplx a, const cplx* x, cplx* y, std::size_t n);
void axpy_conj(cplx a, const cplx* x, cplx* y, std::size_t n);

/// y = A * x with A row-major dim x dim.
void matvec(const cplx* a, const cplx* x, cplx* y, std::size_t dim);

}  // namespace cvtele::kernels

#endif
