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

#include "tpgs/kernels.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace tpgs::kernels {

#if defined(TPGS_HAVE_X86_INTRIN)
double dot_avx2(const double* a, const double* b, std::size_t n);  // kernels_avx2.cpp
#endif

namespace {

bool host_has_avx2() {
#if defined(TPGS_HAVE_X86_INTRIN) && defined(__GNUC__)
    return __builtin_cpu_supports("avx2") != 0;
#else
    return false;
#endif
}

using DotFn = double (*)(const double*, const double*, std::size_t);

struct Dispatch {
    Kind kind;
    DotFn dot;
};

Dispatch make_dispatch(Kind kind) {
    switch (kind) {
        case Kind::Scalar:
            return Dispatch{Kind::Scalar, &dot_scalar};
        case Kind::Avx2:
#if defined(TPGS_HAVE_X86_INTRIN)
            return Dispatch{Kind::Avx2, &dot_avx2};
#else
            break;
#endif
    }
    throw std::invalid_argument("kernel variant not compiled in: " +
                                std::string(kind_name(kind)));
}

Dispatch& dispatch() {
    static Dispatch current = make_dispatch(best_supported());
    return current;
}

}  // namespace

std::string_view kind_name(Kind kind) {
    switch (kind) {
        case Kind::Scalar: return "scalar";
        case Kind::Avx2: return "avx2";
    }
    return "unknown";
}

bool supported(Kind kind) {
    switch (kind) {
        case Kind::Scalar: return true;
        case Kind::Avx2: return host_has_avx2();
    }
    return false;
}

Kind best_supported() {
    return host_has_avx2() ? Kind::Avx2 : Kind::Scalar;
}

Kind active() {
    return dispatch().kind;
}

void select(Kind kind) {
    if (!supported(kind)) {
        throw std::invalid_argument("kernel variant unsupported on this host: " +
                                    std::string(kind_name(kind)));
    }
    dispatch() = make_dispatch(kind);
}

double dot(const double* a, const double* b, std::size_t n) {
    return dispatch().dot(a, b, n);
}

double squared_norm(const double* a, std::size_t n) {
    return dispatch().dot(a, a, n);
}

double cosine(const double* a, const double* b, std::size_t n) {
    const double na = squared_norm(a, n);
    const double nb = squared_norm(b, n);
    if (na == 0.0 || nb == 0.0) return 0.0;
    return dot(a, b, n) / (std::sqrt(na) * std::sqrt(nb));
}

double dot_scalar(const double* a, const double* b, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += a[i] * b[i];
    return acc;
}

}  // namespace tpgs::kernels
