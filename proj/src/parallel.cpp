#include "gv/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>

namespace gv {

void for_multisets(const std::vector<Label>& labels, int n, int max_w2,
                   const std::function<void(const std::vector<Label>&)>& cb) {
  std::vector<Label> cur;
  std::function<void(std::size_t, int)> rec = [&](std::size_t start, int w) {
    if (static_cast<int>(cur.size()) == n) {
      cb(cur);
      return;
    }
    for (std::size_t i = start; i < labels.size(); ++i) {
      if (w + labels[i].k2 > max_w2) continue;
      cur.push_back(labels[i]);
      rec(i, w + labels[i].k2);
      cur.pop_back();
    }
  };
  rec(0, 0);
}

int worker_count(int requested) {
  if (requested > 0) return requested;
  if (const char* e = std::getenv("GV_WORKERS")) {
    int v = std::atoi(e);
    if (v > 0) return v;
  }
  unsigned h = std::thread::hardware_concurrency();
  return h ? static_cast<int>(h) : 1;
}

void parallel_for(int n, int workers, const std::function<void(int)>& f) {
  workers = std::max(1, std::min(workers, n));
  if (workers == 1) {
    for (int i = 0; i < n; ++i) f(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr err;
  std::mutex mu;
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (;;) {
        int i = next++;
        if (i >= n) return;
        try {
          f(i);
        } catch (...) {
          std::lock_guard<std::mutex> lk(mu);
          if (!err) err = std::current_exception();
          next = n;
        }
      }
    });
  for (auto& t : pool) t.join();
  if (err) std::rethrow_exception(err);
}

}  // namespace gv
