// Copyright 2026 The EdgeSpec Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>

#include "edgespec/kernels.hpp"

#if defined(__x86_64__) || defined(_M_X64)
#define EDGESPEC_HAVE_AVX2_VARIANT 1
#else
#define EDGESPEC_HAVE_AVX2_VARIANT 0
#endif

#if defined(__aarch64__) || defined(_M_ARM64)
#define EDGESPEC_HAVE_NEON_VARIANT 1
#else
#define EDGESPEC_HAVE_NEON_VARIANT 0
#endif

namespace edgespec::kernels {

namespace scalar {
double dot(const double* a, const double* b, std::size_t n);
double squared_distance(const double* a, const double* b, std::size_t n);
void axpy(double alpha, const double* x, double* y, std::size_t n);
}  // namespace scalar

#if EDGESPEC_HAVE_AVX2_VARIANT
namespace avx2 {
double dot(const double* a, const double* b, std::size_t n);
double squared_distance(const double* a, const double* b, std::size_t n);
void axpy(double alpha, const double* x, double* y, std::size_t n);
}  // namespace avx2
#endif

#if EDGESPEC_HAVE_NEON_VARIANT
namespace neon {
double dot(const double* a, const double* b, std::size_t n);
double squared_distance(const double* a, const double* b, std::size_t n);
void axpy(double alpha, const double* x, double* y, std::size_t n);
}  // namespace neon
#endif

}  // namespace edgespec::kernels
