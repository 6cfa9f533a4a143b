#pragma once
// Small shared helpers: label multisets and the level-snapshot thread pool.

#include <functional>
#include <vector>

#include "gv/fock.hpp"

namespace gv {

// Sorted multisets of n labels (drawn from the sorted `labels`) with sum k2 <= max_w2.
void for_multisets(const std::vector<Label>& labels, int n, int max_w2,
                   const std::function<void(const std::vector<Label>&)>& cb);

// requested > 0, else the GV_WORKERS environment variable, else hardware concurrency.
int worker_count(int requested);

// Runs f(i) for i in [0, n) on `workers` threads; rethrows the first failure.
void parallel_for(int n, int workers, const std::function<void(int)>& f);

}  // namespace gv
