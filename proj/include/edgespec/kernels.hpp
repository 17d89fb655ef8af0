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

// Dense f64 kernels behind the toy models.
//
// Every reduction follows one canonical order: four interleaved partial sums
// over full blocks of four elements (lane j takes indices i = j mod 4), folded
// as (l0 + l2) + (l1 + l3), followed by the tail added left to right. The
// scalar reference spells that order out; the AVX2 and NEON variants reproduce
// it lane for lane, so every ISA returns bit-identical results.

#include <cstddef>
#include <span>
#include <string_view>

namespace edgespec::kernels {

enum class Isa { kScalar, kAvx2, kNeon };

std::string_view isa_name(Isa isa);

// True when the variant was compiled in and the running CPU supports it.
bool isa_supported(Isa isa);

// Best supported ISA, unless overridden by set_isa() or the
// EDGESPEC_KERNELS environment variable ("scalar", "avx2", "neon").
Isa active_isa();

// Throws std::invalid_argument if the ISA is not supported here.
void set_isa(Isa isa);

Isa parse_isa(std::string_view name);

double dot(std::span<const double> a, std::span<const double> b);

// Sum of (a[i] - b[i])^2.
double squared_distance(std::span<const double> a, std::span<const double> b);

// y += alpha * x
void axpy(double alpha, std::span<const double> x, std::span<double> y);

// y = W x for a row-major rows x cols matrix W.
void gemv(std::span<const double> w, std::size_t rows, std::size_t cols,
          std::span<const double> x, std::span<double> y);

// Per-ISA entry points, exposed for equivalence tests and benchmarks. Calling
// a variant the CPU lacks is undefined; check isa_supported() first.
struct KernelTable {
  double (*dot)(const double* a, const double* b, std::size_t n);
  double (*squared_distance)(const double* a, const double* b, std::size_t n);
  void (*axpy)(double alpha, const double* x, double* y, std::size_t n);
};

const KernelTable& table_for(Isa isa);

}  // namespace edgespec::kernels
