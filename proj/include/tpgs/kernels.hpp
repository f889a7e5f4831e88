/*
Copyright 2026 The tpgsolve authors

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
*/

#ifndef TPGS_KERNELS_HPP
#define TPGS_KERNELS_HPP

#include <cstddef>
#include <string_view>

// Dense double-precision kernels backing retrieval. A scalar reference
// implementation always exists; an AVX2 variant is selected at runtime when
// the host supports it. The two variants agree exactly on integer-valued
// inputs and to rounding error otherwise (the vector path reassociates the
// accumulation but never fuses multiply-adds).
namespace tpgs::kernels {

enum class Kind { Scalar, Avx2 };

std::string_view kind_name(Kind kind);

bool supported(Kind kind);
Kind best_supported();
Kind active();
// Throws std::invalid_argument when the host lacks the requested variant.
void select(Kind kind);

// Dispatched entry points.
double dot(const double* a, const double* b, std::size_t n);
double squared_norm(const double* a, std::size_t n);
// Cosine similarity; 0 when either vector has zero norm.
double cosine(const double* a, const double* b, std::size_t n);

// Reference implementations, always available (used as test oracles).
double dot_scalar(const double* a, const double* b, std::size_t n);

}  // namespace tpgs::kernels

#endif  // TPGS_KERNELS_HPP
