#ifndef SDW_CORE_HPP
#define SDW_CORE_HPP

#include <atomic>
#include <bit>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace sdw {

using cplx = std::complex<double>;

inline constexpr double pi = 3.141592653589793238462643383279502884;

static_assert(std::endian::native == std::endian::little,
              "binary file formats assume a little-endian host");

// Configuration / precondition violations (CLI exit code 2).
struct config_error : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Malformed or inconsistent input data (CLI exit code 3).
struct data_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline void require(bool cond, const std::string& msg) {
  if (!cond) throw config_error(msg);
}

// splitmix64 finalizer; the mixing core of the counter-based generator.
inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Counter-based Gaussian stream: every (key, counter) pair maps to one
// N(0,1) pair independently of evaluation order, so parallel runs are
// reproducible at any worker count.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t key) : key_(key) {}

  // Realization r of a seeded experiment gets its own key.
  static CounterRng for_realization(std::uint64_t seed, std::uint64_t r) {
    return CounterRng(seed ^ r);
  }

  void normal_pair(std::uint64_t counter, double& z0, double& z1) const {
    const std::uint64_t a = mix64(mix64(key_) ^ (2 * counter));
    const std::uint64_t b = mix64(mix64(key_ + 0x6a09e667f3bcc909ULL) ^ (2 * counter + 1));
    const double u1 = (static_cast<double>(a >> 11) + 0.5) * 0x1p-53;
    const double u2 = (static_cast<double>(b >> 11) + 0.5) * 0x1p-53;
    const double rad = std::sqrt(-2.0 * std::log(u1));
    z0 = rad * std::cos(2.0 * pi * u2);
    z1 = rad * std::sin(2.0 * pi * u2);
  }

  double uniform(std::uint64_t counter) const {
    const std::uint64_t a = mix64(mix64(key_) ^ counter);
    return (static_cast<double>(a >> 11) + 0.5) * 0x1p-53;
  }

 private:
  std::uint64_t key_;
};

// Runs body(i) for i in [0, n). Results must be written to per-index slots;
// any reduction happens afterwards in index order, so the outcome does not
// depend on the worker count.
inline void parallel_for(std::size_t n, int jobs, const std::function<void(std::size_t)>& body) {
  if (jobs <= 0) jobs = static_cast<int>(std::thread::hardware_concurrency());
  if (jobs <= 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= n) return;
      body(i);
    }
  };
  std::vector<std::thread> pool;
  const int n_threads = static_cast<int>(std::min<std::size_t>(jobs, n));
  pool.reserve(n_threads);
  for (int t = 0; t < n_threads; ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
}

}  // namespace sdw

#endif  // SDW_CORE_HPP
