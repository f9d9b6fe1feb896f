#pragma once

// Quadrature shared by the mollifier and zeta modules: a fixed-order
// Gauss-Legendre rule for smooth integrands and a globally adaptive
// Gauss-Kronrod (7/15) integrator with an embedded error estimate.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <queue>
#include <type_traits>
#include <vector>

namespace zfr::quad {

struct GaussLegendreRule {
  std::vector<double> nodes;    // on [-1, 1]
  std::vector<double> weights;
};

/// Nodes/weights by Newton iteration on P_n. Cached per order by the callers.
GaussLegendreRule gauss_legendre(std::size_t order);

/// Process-wide 24-point rule.
const GaussLegendreRule& gauss_legendre_24();

template <class F>
auto fixed_gauss(const GaussLegendreRule& rule, F&& f, double a, double b) {
  using R = std::invoke_result_t<F&, double>;
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (a + b);
  R sum{};
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) sum += rule.weights[i] * f(mid + half * rule.nodes[i]);
  return sum * half;
}

template <class R>
struct QuadResult {
  R value{};
  double error = 0.0;  // estimated absolute error
  std::size_t panels = 0;
  bool converged = false;
};

namespace detail {

inline constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.0};
inline constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

template <class R>
struct Panel {
  double a, b;
  R value;
  double error;
  bool operator<(const Panel& o) const { return error < o.error; }
};

template <class F>
auto kronrod15(F& f, double a, double b) {
  using R = std::invoke_result_t<F&, double>;
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  const R fc = f(c);
  R kron = fc * kWgk[7];
  R gauss = fc * kWg[3];
  double abs_sum = std::abs(fc) * kWgk[7];
  for (std::size_t j = 0; j < 7; ++j) {
    const double dx = h * kXgk[j];
    const R f1 = f(c - dx);
    const R f2 = f(c + dx);
    kron += kWgk[j] * (f1 + f2);
    abs_sum += kWgk[j] * (std::abs(f1) + std::abs(f2));
    if (j % 2 == 1) gauss += kWg[j / 2] * (f1 + f2);
  }
  kron *= h;
  gauss *= h;
  const double err = std::abs(kron - gauss) + 50.0 * std::numeric_limits<double>::epsilon() * std::abs(h) * abs_sum;
  return Panel<R>{a, b, kron, err};
}

}  // namespace detail

/// Globally adaptive G7/K15: bisects the panel with the largest error
/// estimate until the summed estimate is below max(abs_tol, rel_tol*|I|).
template <class F>
auto adaptive_gk15(F&& f, double a, double b, double abs_tol, double rel_tol = 0.0,
                   std::size_t max_panels = 20000) {
  using R = std::invoke_result_t<F&, double>;
  QuadResult<R> out;
  if (a == b) {
    out.converged = true;
    return out;
  }
  std::priority_queue<detail::Panel<R>> heap;
  heap.push(detail::kronrod15(f, a, b));
  R total = heap.top().value;
  double err = heap.top().error;
  while (err > std::max(abs_tol, rel_tol * std::abs(total)) && heap.size() < max_panels) {
    auto worst = heap.top();
    heap.pop();
    const double m = 0.5 * (worst.a + worst.b);
    auto left = detail::kronrod15(f, worst.a, m);
    auto right = detail::kronrod15(f, m, worst.b);
    total += left.value + right.value - worst.value;
    err += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
  }
  // Re-sum from the panels to drop accumulated update rounding.
  R sum{};
  double esum = 0.0;
  out.panels = heap.size();
  while (!heap.empty()) {
    sum += heap.top().value;
    esum += heap.top().error;
    heap.pop();
  }
  out.value = sum;
  out.error = esum;
  out.converged = esum <= std::max(abs_tol, rel_tol * std::abs(sum));
  return out;
}

}  // namespace zfr::quad
