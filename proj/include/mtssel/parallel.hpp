#pragma once

#include <cstddef>
#include <exception>
#include <mutex>
#include <optional>

#include <omp.h>

namespace mtssel {

inline void set_num_threads(int threads) { omp_set_num_threads(threads < 1 ? 1 : threads); }
inline int max_threads() { return omp_get_max_threads(); }

/// Collects exceptions thrown inside an OpenMP region and rethrows the one
/// from the lowest task index, so the reported error does not depend on
/// scheduling.
class TaskErrors {
public:
  void capture(std::size_t index) {
    std::lock_guard lock(mutex_);
    if (!index_ || index < *index_) {
      index_ = index;
      error_ = std::current_exception();
    }
  }
  void rethrow() const {
    if (error_) std::rethrow_exception(error_);
  }

private:
  std::mutex mutex_;
  std::optional<std::size_t> index_;
  std::exception_ptr error_;
};

} // namespace mtssel
