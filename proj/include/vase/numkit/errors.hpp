#pragma once

#include <cmath>
#include <exception>
#include <mutex>
#include <span>
#include <stdexcept>
#include <string>

namespace vase {

// Precondition failure on caller-supplied data (sizes, ranges, modes).
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Numerical failure detected mid-computation (overflow, NaN propagation).
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline void require(bool cond, const std::string& msg) {
  if (!cond) throw InvalidArgument(msg);
}

// Dimension checks name what mismatched and both lengths.
inline void check_length(const char* what, std::size_t actual, std::size_t expected) {
  if (actual != expected) {
    throw InvalidArgument(std::string(what) + ": expected length " +
                          std::to_string(expected) + ", got " + std::to_string(actual));
  }
}

inline void ensure_finite(std::span<const double> xs, const char* what) {
  for (double x : xs) {
    if (!std::isfinite(x)) {
      throw NumericError(std::string(what) + ": non-finite value produced");
    }
  }
}

inline void ensure_finite(double x, const char* what) {
  if (!std::isfinite(x)) {
    throw NumericError(std::string(what) + ": non-finite value produced");
  }
}

// Exceptions may not escape an OpenMP region; loop bodies run through this
// guard and the first captured exception is rethrown afterwards.
class ParallelExceptionGuard {
 public:
  template <typename F>
  void run(F&& f) noexcept {
    try {
      f();
    } catch (...) {
      const std::lock_guard<std::mutex> lock(mu_);
      if (!ptr_) ptr_ = std::current_exception();
    }
  }

  void rethrow() {
    if (ptr_) std::rethrow_exception(ptr_);
  }

 private:
  std::mutex mu_;
  std::exception_ptr ptr_;
};

}  // namespace vase
