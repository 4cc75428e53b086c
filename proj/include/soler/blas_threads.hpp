#pragma once

#include <dlfcn.h>

namespace soler {

/// Pin the BLAS backend to single-threaded mode when the caller runs its own
/// worker pool. Resolved dynamically so the reference-LAPACK fallback (which
/// has no such knob) still links.
inline void set_blas_threads(int n) {
  using Fn = void (*)(int);
  if (auto* f = reinterpret_cast<Fn>(
          dlsym(RTLD_DEFAULT, "openblas_set_num_threads")))
    f(n);
}

}  // namespace soler
