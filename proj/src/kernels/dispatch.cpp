// SPDX-FileCopyrightText: (c) 2026 The prunekit Authors
//
// SPDX-License-Identifier: Apache-2.0

#include <atomic>
#include <cstdlib>
#include <string>
#include <string_view>

#include "kernels_internal.hpp"
#include "prunekit/error.hpp"

namespace prunekit::kernels {
namespace {

constexpr KernelTable kScalar{Backend::Scalar, &scalar::count_runs, &scalar::moments};
#if defined(PRUNEKIT_HAVE_AVX2)
constexpr KernelTable kAvx2{Backend::Avx2, &avx2::count_runs, &avx2::moments};
#endif
#if defined(PRUNEKIT_HAVE_NEON)
constexpr KernelTable kNeon{Backend::Neon, &neon::count_runs, &neon::moments};
#endif

// -1: none forced, else static_cast<int>(Backend)
std::atomic<int> g_forced{-1};

bool cpu_supports(Backend backend) {
    switch (backend) {
        case Backend::Scalar:
            return true;
        case Backend::Avx2:
#if defined(PRUNEKIT_HAVE_AVX2)
            return __builtin_cpu_supports("avx2");
#else
            return false;
#endif
        case Backend::Neon:
#if defined(PRUNEKIT_HAVE_NEON)
            return true;
#else
            return false;
#endif
    }
    return false;
}

const KernelTable& best() {
    static const KernelTable& chosen = [&]() -> const KernelTable& {
        auto backends = available_backends();
        return table_for(backends.back());
    }();
    return chosen;
}

}  // namespace

std::string_view to_string(Backend backend) noexcept {
    switch (backend) {
        case Backend::Scalar: return "scalar";
        case Backend::Avx2: return "avx2";
        case Backend::Neon: return "neon";
    }
    return "scalar";
}

const KernelTable& scalar_table() noexcept { return kScalar; }

std::vector<Backend> available_backends() {
    std::vector<Backend> out{Backend::Scalar};
    for (Backend b : {Backend::Avx2, Backend::Neon}) {
        if (cpu_supports(b)) out.push_back(b);
    }
    return out;
}

const KernelTable& table_for(Backend backend) {
    if (!cpu_supports(backend)) {
        throw Error(ErrorKind::OutOfRange, "kernel backend " + std::string(to_string(backend)) + " not available");
    }
    switch (backend) {
#if defined(PRUNEKIT_HAVE_AVX2)
        case Backend::Avx2: return kAvx2;
#endif
#if defined(PRUNEKIT_HAVE_NEON)
        case Backend::Neon: return kNeon;
#endif
        default: return kScalar;
    }
}

const KernelTable& active() {
    if (int forced = g_forced.load(); forced >= 0) return table_for(static_cast<Backend>(forced));
    if (const char* env = std::getenv("PRUNEKIT_SIMD")) {
        const std::string_view v(env);
        if (v == "scalar") return kScalar;
        if (v == "avx2") return table_for(Backend::Avx2);
        if (v == "neon") return table_for(Backend::Neon);
    }
    return best();
}

void force_backend(Backend backend) {
    table_for(backend);
    g_forced.store(static_cast<int>(backend));
}

void clear_forced_backend() noexcept { g_forced.store(-1); }

}  // namespace prunekit::kernels
