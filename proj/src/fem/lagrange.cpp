#include "sp3hex/fem/lagrange.hpp"

#include "sp3hex/error.hpp"
#include "sp3hex/fem/quadrature.hpp"

#include <string>

namespace sp3hex::fem {
namespace {

constexpr double kBaryGrad[3][2] = {{-1.0, -1.0}, {1.0, 0.0}, {0.0, 1.0}};

// Factor prod_{s<m} (p*l - s)/(s+1) and its derivative with respect to l.
std::array<double, 2> factor(int p, int m, double l) {
  double value = 1.0;
  double deriv = 0.0;
  for (int s = 0; s < m; ++s) {
    const double term = (p * l - s) / (s + 1.0);
    const double dterm = p / (s + 1.0);
    deriv = deriv * term + value * dterm;
    value *= term;
  }
  return {value, deriv};
}

}  // namespace

LagrangeTriangle::LagrangeTriangle(int degree) : degree_(degree) {
  if (degree < 1 || degree > 3) {
    throw Error(ErrorCode::invalid_argument,
                "Lagrange degree must be 1, 2 or 3, got " + std::to_string(degree));
  }
  const int p = degree;
  nodes_ = {{p, 0, 0}, {0, p, 0}, {0, 0, p}};
  for (int t = 1; t < p; ++t) nodes_.push_back({p - t, t, 0});
  for (int t = 1; t < p; ++t) nodes_.push_back({0, p - t, t});
  for (int t = 1; t < p; ++t) nodes_.push_back({t, 0, p - t});
  for (int i1 = 1; i1 < p; ++i1) {
    for (int i2 = 1; i1 + i2 < p; ++i2) nodes_.push_back({p - i1 - i2, i1, i2});
  }

  const auto n = static_cast<std::size_t>(dofs());
  mass_.assign(n * n, 0.0);
  sxx_.assign(n * n, 0.0);
  sxy_.assign(n * n, 0.0);
  syy_.assign(n * n, 0.0);
  integrals_.assign(n, 0.0);

  const TriangleRule& rule = symmetric_triangle_rule(2 * p);
  std::vector<double> phi(n);
  std::vector<std::array<double, 2>> grad(n);
  for (std::size_t q = 0; q < rule.points.size(); ++q) {
    const auto [x, y] = rule.points[q];
    const double w = rule.weights[q];
    for (std::size_t i = 0; i < n; ++i) {
      phi[i] = value(static_cast<int>(i), x, y);
      grad[i] = gradient(static_cast<int>(i), x, y);
    }
    for (std::size_t i = 0; i < n; ++i) {
      integrals_[i] += w * phi[i];
      for (std::size_t j = 0; j < n; ++j) {
        mass_[i * n + j] += w * phi[i] * phi[j];
        sxx_[i * n + j] += w * grad[i][0] * grad[j][0];
        sxy_[i * n + j] += w * grad[i][0] * grad[j][1];
        syy_[i * n + j] += w * grad[i][1] * grad[j][1];
      }
    }
  }

  // Products like w * a * b are not commutative in floating point; mirror the
  // lower triangle so the symmetric reference matrices are exactly symmetric.
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      mass_[j * n + i] = mass_[i * n + j];
      sxx_[j * n + i] = sxx_[i * n + j];
      syy_[j * n + i] = syy_[i * n + j];
    }
  }

  const LineRule line = gauss_legendre(p + 1);
  const auto ne = static_cast<std::size_t>(p + 1);
  edge_mass_.assign(ne * ne, 0.0);
  for (std::size_t q = 0; q < line.points.size(); ++q) {
    for (std::size_t i = 0; i < ne; ++i) {
      const double li = lagrange_1d(p, static_cast<int>(i), line.points[q]);
      for (std::size_t j = 0; j < ne; ++j) {
        edge_mass_[i * ne + j] += line.weights[q] * li * lagrange_1d(p, static_cast<int>(j), line.points[q]);
      }
    }
  }
  for (std::size_t i = 0; i < ne; ++i) {
    for (std::size_t j = 0; j < i; ++j) edge_mass_[j * ne + i] = edge_mass_[i * ne + j];
  }
}

std::array<double, 2> LagrangeTriangle::node_point(int k) const {
  const auto& m = nodes_[static_cast<std::size_t>(k)];
  return {static_cast<double>(m[1]) / degree_, static_cast<double>(m[2]) / degree_};
}

double LagrangeTriangle::value(int k, double x, double y) const {
  const auto& m = nodes_[static_cast<std::size_t>(k)];
  const double l[3] = {1.0 - x - y, x, y};
  double v = 1.0;
  for (int c = 0; c < 3; ++c) v *= factor(degree_, m[static_cast<std::size_t>(c)], l[c])[0];
  return v;
}

std::array<double, 2> LagrangeTriangle::gradient(int k, double x, double y) const {
  const auto& m = nodes_[static_cast<std::size_t>(k)];
  const double l[3] = {1.0 - x - y, x, y};
  std::array<double, 2> f[3];
  for (int c = 0; c < 3; ++c) f[c] = factor(degree_, m[static_cast<std::size_t>(c)], l[c]);
  std::array<double, 2> g{0.0, 0.0};
  for (int c = 0; c < 3; ++c) {
    const double others = f[(c + 1) % 3][0] * f[(c + 2) % 3][0];
    g[0] += f[c][1] * others * kBaryGrad[c][0];
    g[1] += f[c][1] * others * kBaryGrad[c][1];
  }
  return g;
}

std::vector<int> LagrangeTriangle::edge_nodes(int e) const {
  static constexpr int kEdgeVertices[3][2] = {{0, 1}, {1, 2}, {2, 0}};
  std::vector<int> out;
  out.push_back(kEdgeVertices[e][0]);
  for (int t = 0; t < degree_ - 1; ++t) out.push_back(3 + e * (degree_ - 1) + t);
  out.push_back(kEdgeVertices[e][1]);
  return out;
}

const LagrangeTriangle& lagrange_element(int degree) {
  static const LagrangeTriangle p1(1);
  static const LagrangeTriangle p2(2);
  static const LagrangeTriangle p3(3);
  switch (degree) {
    case 1: return p1;
    case 2: return p2;
    case 3: return p3;
    default:
      throw Error(ErrorCode::invalid_argument,
                  "Lagrange degree must be 1, 2 or 3, got " + std::to_string(degree));
  }
}

double lagrange_1d(int degree, int k, double t) {
  double v = 1.0;
  const double tk = static_cast<double>(k) / degree;
  for (int j = 0; j <= degree; ++j) {
    if (j == k) continue;
    const double tj = static_cast<double>(j) / degree;
    v *= (t - tj) / (tk - tj);
  }
  return v;
}

}  // namespace sp3hex::fem
