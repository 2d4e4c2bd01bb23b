#pragma once

#include <functional>

namespace evofam {

// Thread count from the EVOFAM_THREADS environment variable; 1 when unset or
// unparsable.
int configured_thread_count();

// Runs f(i) for i in [0, n) across the given number of threads (0 = use the
// configured count).  Each index writes only its own output slot, so results
// are bit-identical regardless of the thread count or evaluation order.
void parallel_for(int n, const std::function<void(int)>& f, int threads = 0);

}  // namespace evofam
