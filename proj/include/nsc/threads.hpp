#pragma once

namespace nsc {

// Pins the OpenMP worker count. 0 picks --threads from the NSC_THREADS
// environment variable, falling back to the hardware default.
void set_thread_count(int threads);
int thread_count();

}  // namespace nsc
