#include "sp3hex/fem/quadrature.hpp"

#include "sp3hex/error.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace sp3hex::fem {
namespace {

void add_orbit3(TriangleRule& rule, double a, double w) {
  // (a, b, b) and permutations, b = (1 - a) / 2; barycentric (l0, l1, l2) -> (x, y) = (l1, l2).
  const double b = 0.5 * (1.0 - a);
  const std::array<std::array<double, 3>, 3> bary{{{a, b, b}, {b, a, b}, {b, b, a}}};
  for (const auto& l : bary) {
    rule.points.push_back({l[1], l[2]});
    rule.weights.push_back(0.5 * w);
  }
}

void add_orbit6(TriangleRule& rule, double a, double b, double w) {
  const double c = 1.0 - a - b;
  const std::array<std::array<double, 3>, 6> bary{
      {{a, b, c}, {a, c, b}, {b, a, c}, {b, c, a}, {c, a, b}, {c, b, a}}};
  for (const auto& l : bary) {
    rule.points.push_back({l[1], l[2]});
    rule.weights.push_back(0.5 * w);
  }
}

TriangleRule make_degree1() {
  TriangleRule r;
  r.degree = 1;
  r.points.push_back({1.0 / 3.0, 1.0 / 3.0});
  r.weights.push_back(0.5);
  return r;
}

TriangleRule make_degree2() {
  TriangleRule r;
  r.degree = 2;
  add_orbit3(r, 2.0 / 3.0, 1.0 / 3.0);
  return r;
}

// Dunavant (1985), 6 points.
TriangleRule make_degree4() {
  TriangleRule r;
  r.degree = 4;
  add_orbit3(r, 0.108103018168070, 0.223381589678011);
  add_orbit3(r, 0.816847572980459, 0.109951743655322);
  return r;
}

// Dunavant (1985), 12 points.
TriangleRule make_degree6() {
  TriangleRule r;
  r.degree = 6;
  add_orbit3(r, 0.501426509658179, 0.116786275726379);
  add_orbit3(r, 0.873821971016996, 0.050844906370207);
  add_orbit6(r, 0.053145049844817, 0.310352451033784, 0.082851075618374);
  return r;
}

}  // namespace

const TriangleRule& symmetric_triangle_rule(int degree) {
  static const TriangleRule r1 = make_degree1();
  static const TriangleRule r2 = make_degree2();
  static const TriangleRule r4 = make_degree4();
  static const TriangleRule r6 = make_degree6();
  if (degree <= 1) return r1;
  if (degree == 2) return r2;
  if (degree <= 4) return r4;
  if (degree <= 6) return r6;
  throw Error(ErrorCode::invalid_argument,
              "no symmetric triangle rule of degree " + std::to_string(degree));
}

LineRule gauss_legendre(int n) {
  if (n < 1) throw Error(ErrorCode::invalid_argument, "Gauss-Legendre needs n >= 1");
  // P_n(x) and P_n'(x) by the three-term recurrence.
  auto legendre = [n](double x) {
    double p0 = 1.0;
    double p1 = x;
    for (int k = 2; k <= n; ++k) {
      const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = pk;
    }
    const double dp = n * (p0 - x * p1) / (1.0 - x * x);
    return std::array<double, 2>{p1, dp};
  };

  LineRule rule;
  rule.degree = 2 * n - 1;
  rule.points.resize(static_cast<std::size_t>(n));
  rule.weights.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    for (int it = 0; it < 100; ++it) {
      const auto [p, dp] = legendre(x);
      const double dx = p / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const double dp = legendre(x)[1];
    rule.points[static_cast<std::size_t>(i)] = 0.5 * (1.0 - x);
    rule.weights[static_cast<std::size_t>(i)] = 1.0 / ((1.0 - x * x) * dp * dp);
  }
  return rule;
}

TriangleRule collapsed_triangle_rule(int n) {
  const LineRule g = gauss_legendre(n);
  TriangleRule rule;
  rule.degree = 2 * n - 2;
  for (std::size_t i = 0; i < g.points.size(); ++i) {
    const double u = g.points[i];
    for (std::size_t j = 0; j < g.points.size(); ++j) {
      const double v = g.points[j];
      rule.points.push_back({u, (1.0 - u) * v});
      rule.weights.push_back(g.weights[i] * g.weights[j] * (1.0 - u));
    }
  }
  return rule;
}

}  // namespace sp3hex::fem
