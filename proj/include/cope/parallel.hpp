#pragma once

#include <functional>

namespace cope {

// Runs task(i) for i in [0, n_tasks) on up to `workers` threads. Tasks
// must be independent; determinism is the caller's job (write to
// index-addressed slots). If several tasks throw, the exception from the
// lowest index is rethrown so failures are reproducible regardless of
// scheduling.
void parallel_tasks(int workers, int n_tasks, const std::function<void(int)>& task);

}  // namespace cope
