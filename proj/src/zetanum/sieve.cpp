#include <algorithm>
#include <cmath>
#include <mutex>
#include <string>

#include "zfr/error.hpp"
#include "zfr/zetanum.hpp"

namespace zfr::zetanum {

namespace {

// Euler's linear sieve: every composite is crossed out exactly once, by its
// smallest prime factor.
std::vector<std::uint32_t> linear_sieve_primes(std::size_t N) {
  std::vector<bool> composite(N + 1, false);
  std::vector<std::uint32_t> primes;
  primes.reserve(N > 100 ? static_cast<std::size_t>(1.3 * N / std::log(static_cast<double>(N))) : 32);
  for (std::size_t i = 2; i <= N; ++i) {
    if (!composite[i]) primes.push_back(static_cast<std::uint32_t>(i));
    for (std::uint32_t p : primes) {
      const std::size_t ip = i * p;
      if (ip > N) break;
      composite[ip] = true;
      if (i % p == 0) break;
    }
  }
  return primes;
}

void check_size(std::size_t N, std::size_t cap) {
  if (N < 2) fail(ErrorCode::InvalidArgument, "sieve size must be >= 2");
  if (N > cap)
    fail(ErrorCode::CapacityError, "sieve size " + std::to_string(N) + " exceeds the cap " + std::to_string(cap));
  if (N > 0xFFFFFFFFull) fail(ErrorCode::CapacityError, "sieve size exceeds 32-bit indexing");
}

template <class T, class Make>
std::shared_ptr<const T> grow_shared(std::mutex& m, std::shared_ptr<const T>& current, std::size_t N,
                                     std::size_t cap, Make make) {
  check_size(N, cap);
  std::lock_guard lock(m);
  if (current && current->N() >= N) return current;
  std::size_t target = N;
  if (current) target = std::max(N, std::min(cap, 2 * current->N()));
  current = std::make_shared<const T>(make(target));
  return current;
}

}  // namespace

double VonMangoldtTable::psi(std::size_t x) const {
  if (x > N()) fail(ErrorCode::InvalidArgument, "psi argument exceeds the table size");
  long double s = 0.0L;
  for (std::size_t n = 2; n <= x; ++n) s += values_[n];
  return static_cast<double>(s);
}

VonMangoldtTable von_mangoldt(std::size_t N, std::size_t cap) {
  check_size(N, cap);
  VonMangoldtTable t;
  t.values_.assign(N + 1, 0.0);
  for (std::uint32_t p : linear_sieve_primes(N)) {
    const double lp = std::log(static_cast<double>(p));
    for (std::size_t q = p; q <= N; q *= p) {
      t.values_[q] = lp;
      if (q > N / p) break;
    }
  }
  return t;
}

std::shared_ptr<const VonMangoldtTable> shared_von_mangoldt(std::size_t N, std::size_t cap) {
  static std::mutex m;
  static std::shared_ptr<const VonMangoldtTable> current;
  return grow_shared(m, current, N, cap, [](std::size_t n) { return von_mangoldt(n, n); });
}

PrimePowerList::PrimePowerList(std::size_t N) : N_(N) {
  check_size(N, N);
  for (std::uint32_t p : linear_sieve_primes(N)) {
    const double lp = std::log(static_cast<double>(p));
    for (std::size_t q = p; q <= N; q *= p) {
      entries_.push_back({static_cast<std::uint32_t>(q), lp, std::log(static_cast<double>(q))});
      if (q > N / p) break;
    }
  }
  std::sort(entries_.begin(), entries_.end(), [](const PrimePower& a, const PrimePower& b) { return a.n < b.n; });
}

std::size_t PrimePowerList::count_upto(std::size_t x) const {
  auto it = std::upper_bound(entries_.begin(), entries_.end(), x,
                             [](std::size_t v, const PrimePower& e) { return v < e.n; });
  return static_cast<std::size_t>(it - entries_.begin());
}

double PrimePowerList::psi(std::size_t x) const {
  if (x > N_) fail(ErrorCode::InvalidArgument, "psi argument exceeds the prime power list");
  const std::size_t c = count_upto(x);
  long double s = 0.0L;
  for (std::size_t i = 0; i < c; ++i) s += entries_[i].log_p;
  return static_cast<double>(s);
}

std::shared_ptr<const PrimePowerList> shared_prime_powers(std::size_t N, std::size_t cap) {
  static std::mutex m;
  static std::shared_ptr<const PrimePowerList> current;
  return grow_shared(m, current, N, cap, [](std::size_t n) { return PrimePowerList(n); });
}

}  // namespace zfr::zetanum
