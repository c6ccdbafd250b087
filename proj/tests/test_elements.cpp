#include "sp3hex/fem/lagrange.hpp"

#include <gtest/gtest.h>

#include <numeric>

using namespace sp3hex::fem;

TEST(Lagrange, NodalProperty) {
  for (int p = 1; p <= 3; ++p) {
    const auto& el = lagrange_element(p);
    EXPECT_EQ(el.dofs(), (p + 1) * (p + 2) / 2);
    for (int i = 0; i < el.dofs(); ++i) {
      const auto x = el.node_point(i);
      for (int j = 0; j < el.dofs(); ++j) {
        EXPECT_NEAR(el.value(j, x[0], x[1]), i == j ? 1.0 : 0.0, 1e-14);
      }
    }
  }
}

TEST(Lagrange, PartitionOfUnity) {
  for (int p = 1; p <= 3; ++p) {
    const auto& el = lagrange_element(p);
    for (auto [x, y] : {std::pair{0.1, 0.2}, {0.33, 0.5}, {0.7, 0.05}}) {
      double s = 0.0;
      double gx = 0.0;
      double gy = 0.0;
      for (int i = 0; i < el.dofs(); ++i) {
        s += el.value(i, x, y);
        gx += el.gradient(i, x, y)[0];
        gy += el.gradient(i, x, y)[1];
      }
      EXPECT_NEAR(s, 1.0, 1e-14);
      EXPECT_NEAR(gx, 0.0, 1e-12);
      EXPECT_NEAR(gy, 0.0, 1e-12);
    }
  }
}

TEST(Lagrange, GradientMatchesFiniteDifference) {
  const auto& el = lagrange_element(3);
  const double h = 1e-6;
  for (int i = 0; i < el.dofs(); ++i) {
    const auto g = el.gradient(i, 0.2, 0.3);
    EXPECT_NEAR(g[0], (el.value(i, 0.2 + h, 0.3) - el.value(i, 0.2 - h, 0.3)) / (2 * h), 1e-7);
    EXPECT_NEAR(g[1], (el.value(i, 0.2, 0.3 + h) - el.value(i, 0.2, 0.3 - h)) / (2 * h), 1e-7);
  }
}

TEST(Lagrange, P1ReferenceMatrices) {
  const auto& el = lagrange_element(1);
  // Reference triangle area 1/2: mass = (1/24)[[2,1,1],[1,2,1],[1,1,2]].
  const double m[9] = {2, 1, 1, 1, 2, 1, 1, 1, 2};
  for (int k = 0; k < 9; ++k) EXPECT_NEAR(el.mass()[static_cast<std::size_t>(k)], m[k] / 24.0, 1e-16);
  // Stiffness of the unit right triangle: 1/2 [[2,-1,-1],[-1,1,0],[-1,0,1]].
  const double s[9] = {2, -1, -1, -1, 1, 0, -1, 0, 1};
  for (std::size_t k = 0; k < 9; ++k) {
    const double v = el.stiffness_xx()[k] + el.stiffness_yy()[k];
    EXPECT_NEAR(v, s[k] / 2.0, 1e-15);
  }
  const double e[4] = {2, 1, 1, 2};
  for (std::size_t k = 0; k < 4; ++k) EXPECT_NEAR(el.edge_mass()[k], e[k] / 6.0, 1e-15);
}

TEST(Lagrange, MassSumsToArea) {
  for (int p = 1; p <= 3; ++p) {
    const auto& el = lagrange_element(p);
    const double total = std::accumulate(el.mass().begin(), el.mass().end(), 0.0);
    EXPECT_NEAR(total, 0.5, 1e-15);
    const double ints = std::accumulate(el.basis_integrals().begin(), el.basis_integrals().end(), 0.0);
    EXPECT_NEAR(ints, 0.5, 1e-15);
    const double edge = std::accumulate(el.edge_mass().begin(), el.edge_mass().end(), 0.0);
    EXPECT_NEAR(edge, 1.0, 1e-15);
  }
}

TEST(Lagrange, P2MassAnalytic) {
  // Vertex-vertex entries of the P2 mass matrix on the reference triangle: 6/360 diagonal, -1/360 off.
  const auto& el = lagrange_element(2);
  const auto& m = el.mass();
  EXPECT_NEAR(m[0], 6.0 / 360.0, 1e-16);
  EXPECT_NEAR(m[1], -1.0 / 360.0, 1e-16);
  // Edge-edge: 32/360 diagonal, 16/360 off; vertex against the opposite edge: -4/360.
  EXPECT_NEAR(m[3 * 6 + 3], 32.0 / 360.0, 1e-15);
  EXPECT_NEAR(m[3 * 6 + 4], 16.0 / 360.0, 1e-15);
  EXPECT_NEAR(m[0 * 6 + 4], -4.0 / 360.0, 1e-16);
}

TEST(Lagrange, EdgeNodes) {
  const auto& el = lagrange_element(3);
  EXPECT_EQ(el.edge_nodes(0), (std::vector<int>{0, 3, 4, 1}));
  EXPECT_EQ(el.edge_nodes(1), (std::vector<int>{1, 5, 6, 2}));
  EXPECT_EQ(el.edge_nodes(2), (std::vector<int>{2, 7, 8, 0}));
  EXPECT_ANY_THROW((void)lagrange_element(4));
}
