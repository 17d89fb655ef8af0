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

#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <string>

#include "kernel_variants.hpp"

namespace edgespec::kernels {

namespace {

constexpr KernelTable kScalarTable{&scalar::dot, &scalar::squared_distance, &scalar::axpy};
#if EDGESPEC_HAVE_AVX2_VARIANT
constexpr KernelTable kAvx2Table{&avx2::dot, &avx2::squared_distance, &avx2::axpy};
#endif
#if EDGESPEC_HAVE_NEON_VARIANT
constexpr KernelTable kNeonTable{&neon::dot, &neon::squared_distance, &neon::axpy};
#endif

Isa detect_best() {
#if EDGESPEC_HAVE_AVX2_VARIANT
  if (isa_supported(Isa::kAvx2)) return Isa::kAvx2;
#endif
#if EDGESPEC_HAVE_NEON_VARIANT
  return Isa::kNeon;
#endif
  return Isa::kScalar;
}

Isa initial_isa() {
  if (const char* env = std::getenv("EDGESPEC_KERNELS"); env != nullptr && *env != '\0') {
    const Isa requested = parse_isa(env);
    if (!isa_supported(requested)) {
      throw std::invalid_argument(std::string("EDGESPEC_KERNELS requests unsupported ISA: ") + env);
    }
    return requested;
  }
  return detect_best();
}

std::atomic<Isa>& current() {
  static std::atomic<Isa> isa{initial_isa()};
  return isa;
}

const KernelTable& active_table() { return table_for(current().load(std::memory_order_relaxed)); }

}  // namespace

std::string_view isa_name(Isa isa) {
  switch (isa) {
    case Isa::kScalar:
      return "scalar";
    case Isa::kAvx2:
      return "avx2";
    case Isa::kNeon:
      return "neon";
  }
  return "unknown";
}

Isa parse_isa(std::string_view name) {
  if (name == "scalar") return Isa::kScalar;
  if (name == "avx2") return Isa::kAvx2;
  if (name == "neon") return Isa::kNeon;
  throw std::invalid_argument("unknown kernel ISA: " + std::string(name));
}

bool isa_supported(Isa isa) {
  switch (isa) {
    case Isa::kScalar:
      return true;
    case Isa::kAvx2:
#if EDGESPEC_HAVE_AVX2_VARIANT && (defined(__GNUC__) || defined(__clang__))
      return __builtin_cpu_supports("avx2");
#else
      return false;
#endif
    case Isa::kNeon:
      return EDGESPEC_HAVE_NEON_VARIANT != 0;
  }
  return false;
}

Isa active_isa() { return current().load(std::memory_order_relaxed); }

void set_isa(Isa isa) {
  if (!isa_supported(isa)) {
    throw std::invalid_argument("kernel ISA not supported on this CPU: " + std::string(isa_name(isa)));
  }
  current().store(isa, std::memory_order_relaxed);
}

const KernelTable& table_for(Isa isa) {
  switch (isa) {
#if EDGESPEC_HAVE_AVX2_VARIANT
    case Isa::kAvx2:
      return kAvx2Table;
#endif
#if EDGESPEC_HAVE_NEON_VARIANT
    case Isa::kNeon:
      return kNeonTable;
#endif
    default:
      return kScalarTable;
  }
}

double dot(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw std::invalid_argument("dot: length mismatch");
  return active_table().dot(a.data(), b.data(), a.size());
}

double squared_distance(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw std::invalid_argument("squared_distance: length mismatch");
  return active_table().squared_distance(a.data(), b.data(), a.size());
}

void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  if (x.size() != y.size()) throw std::invalid_argument("axpy: length mismatch");
  active_table().axpy(alpha, x.data(), y.data(), x.size());
}

void gemv(std::span<const double> w, std::size_t rows, std::size_t cols,
          std::span<const double> x, std::span<double> y) {
  if (w.size() != rows * cols || x.size() != cols || y.size() != rows) {
    throw std::invalid_argument("gemv: shape mismatch");
  }
  const KernelTable& t = active_table();
  for (std::size_t r = 0; r < rows; ++r) y[r] = t.dot(w.data() + r * cols, x.data(), cols);
}

}  // namespace edgespec::kernels
