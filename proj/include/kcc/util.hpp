#ifndef KCC_UTIL_HPP
#define KCC_UTIL_HPP

#include <cstdint>
#include <cstdio>
#include <functional>
#include <string>
#include <string_view>

namespace kcc {

inline std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t h = 0xcbf29ce484222325ULL) {
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

inline std::string to_hex(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

// Shortest decimal form that round-trips a double; used for all CSV output so
// repeated runs are byte-identical.
inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  double back = 0.0;
  std::sscanf(buf, "%lf", &back);
  for (int prec = 1; prec < 17; ++prec) {
    char shorter[40];
    std::snprintf(shorter, sizeof(shorter), "%.*g", prec, v);
    std::sscanf(shorter, "%lf", &back);
    if (back == v) return shorter;
  }
  return buf;
}

// Runs fn(0..count-1) on a small thread pool. Each index writes only its own
// output slot, so results do not depend on scheduling.
void parallel_for(int count, const std::function<void(int)>& fn, int threads = 0);

}  // namespace kcc

#endif
