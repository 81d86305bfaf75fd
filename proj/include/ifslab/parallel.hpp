#pragma once

#include <cstddef>
#include <functional>

namespace ifslab {

/// Worker cap for library parallel loops. 0 means hardware concurrency.
/// The initial value comes from IFSLAB_THREADS when set.
void set_thread_count(unsigned n);
unsigned thread_count();

/// Runs body(i) for i in [0, n). Nested calls run serially on the calling thread.
/// The first exception thrown by any body is rethrown after all workers stop.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

} // namespace ifslab
