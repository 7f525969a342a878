#include "bcov/scalar.hpp"

#include <cstdlib>
#include <string>
#include <thread>

namespace bcov {

namespace {
std::recursive_mutex& precision_mutex() {
  static std::recursive_mutex m;
  return m;
}
}  // namespace

PrecisionGuard::PrecisionGuard(unsigned digits10)
    : lock_(precision_mutex()), saved_(MpReal::default_precision()) {
  MpReal::default_precision(digits10);
}

PrecisionGuard::~PrecisionGuard() { MpReal::default_precision(saved_); }

unsigned thread_count() {
  unsigned n = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("BCOV_KIT_THREADS")) {
    try {
      long v = std::stol(env);
      if (v >= 1) n = std::min<unsigned>(n, static_cast<unsigned>(v));
    } catch (...) {
    }
  }
  return n;
}

}  // namespace bcov
