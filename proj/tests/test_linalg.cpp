#include "sp3hex/error.hpp"
#include "sp3hex/linalg/eigs.hpp"
#include "sp3hex/linalg/matrix_market.hpp"
#include "sp3hex/linalg/sparse_lu.hpp"

#include <Eigen/Dense>
#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <sstream>

using namespace sp3hex;
using namespace sp3hex::linalg;

namespace {

SparseMatrix dense_to_sparse(const Eigen::MatrixXd& d) {
  std::vector<Triplet> t;
  for (int i = 0; i < d.rows(); ++i) {
    for (int j = 0; j < d.cols(); ++j) {
      if (d(i, j) != 0.0) t.push_back({i, j, d(i, j)});
    }
  }
  return from_triplets(static_cast<int>(d.rows()), static_cast<int>(d.cols()), t);
}

Eigen::MatrixXd random_sparse(int n, double density, std::mt19937& rng, double diag) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::uniform_real_distribution<double> p(0.0, 1.0);
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i == j || p(rng) < density) a(i, j) = u(rng);
    }
    a(i, i) += diag;
  }
  return a;
}

}  // namespace

TEST(SparseLu, Identity) {
  const SparseLu lu(identity_matrix(5));
  const std::vector<double> b{1, 2, 3, 4, 5};
  std::vector<double> x(5);
  lu.solve(b, x);
  EXPECT_EQ(x, b);
}

TEST(SparseLu, Permutation) {
  const SparseMatrix a = from_triplets(2, 2, {{0, 1, 1.0}, {1, 0, 1.0}});
  const SparseLu lu(a);
  const std::vector<double> b{1, 2};
  std::vector<double> x(2);
  lu.solve(b, x);
  EXPECT_EQ(x, (std::vector<double>{2, 1}));
}

TEST(SparseLu, RandomSpdResidual) {
  std::mt19937 rng(11);
  const Eigen::MatrixXd r = random_sparse(100, 0.03, rng, 0.0);
  const Eigen::MatrixXd spd = r * r.transpose() + Eigen::MatrixXd::Identity(100, 100);
  const SparseMatrix a = dense_to_sparse(spd);
  const SparseLu lu(a);
  std::vector<double> b(100);
  std::uniform_real_distribution<double> u(-1, 1);
  for (auto& v : b) v = u(rng);
  std::vector<double> x(100), ax(100);
  lu.solve(b, x);
  spmv(a, x, ax);
  double r2 = 0, b2 = 0;
  for (int i = 0; i < 100; ++i) {
    r2 += (ax[i] - b[i]) * (ax[i] - b[i]);
    b2 += b[i] * b[i];
  }
  EXPECT_LE(std::sqrt(r2 / b2), 1e-12);
}

TEST(SparseLu, SingularReportsPivot) {
  const SparseMatrix a = from_triplets(3, 3, {{0, 0, 1.0}, {1, 1, 1.0}, {2, 0, 1.0}, {2, 2, 0.0}});
  try {
    SparseLu lu(a);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::singular_matrix);
    EXPECT_NE(std::string(e.what()).find("pivot"), std::string::npos);
  }
}

TEST(Eigs, DiagonalNearestShift) {
  const SparseMatrix a = from_triplets(3, 3, {{0, 0, 1.0}, {1, 1, 2.0}, {2, 2, 3.0}});
  EigsOptions opt;
  opt.nev = 1;
  const auto r = eigs(a, identity_matrix(3), opt);
  ASSERT_EQ(r.eigenvalues.size(), 1u);
  EXPECT_NEAR(r.eigenvalues[0].real(), 1.0, 1e-14);
  EXPECT_LT(r.residuals[0], 1e-14);
}

TEST(Eigs, RotationGivesConjugatePair) {
  const SparseMatrix a = from_triplets(2, 2, {{0, 1, 1.0}, {1, 0, -1.0}});
  EigsOptions opt;
  opt.nev = 2;
  opt.sigma = 0.5;
  opt.which = Which::smallest_real;
  const auto r = eigs(a, identity_matrix(2), opt);
  ASSERT_EQ(r.eigenvalues.size(), 2u);
  EXPECT_NEAR(r.eigenvalues[0].real(), 0.0, 1e-14);
  EXPECT_NEAR(r.eigenvalues[0].imag(), -1.0, 1e-14);
  EXPECT_NEAR(r.eigenvalues[1].imag(), 1.0, 1e-14);
  for (std::size_t i = 0; i < 2; ++i) {
    EXPECT_NEAR(std::abs(r.eigenvectors[0][i] - std::conj(r.eigenvectors[1][i])), 0.0, 1e-15);
  }
}

class RandomGeneralized : public ::testing::TestWithParam<int> {};

TEST_P(RandomGeneralized, MatchesDenseOracle) {
  std::mt19937 rng(static_cast<unsigned>(GetParam()));
  const int n = 150;
  const Eigen::MatrixXd ad = random_sparse(n, 0.04, rng, 0.0);
  Eigen::MatrixXd bd = random_sparse(n, 0.02, rng, 0.0);
  bd = bd * bd.transpose() + Eigen::MatrixXd::Identity(n, n);
  const SparseMatrix a = dense_to_sparse(ad);
  const SparseMatrix b = dense_to_sparse(bd);

  EigsOptions opt;
  opt.nev = 8;
  opt.sigma = 0.1;
  const auto r = eigs(a, b, opt);
  EXPECT_TRUE(r.all_converged);

  const Eigen::MatrixXcd oracle_values = (bd.inverse() * ad).eigenvalues();
  std::vector<Complex> ev(oracle_values.data(), oracle_values.data() + n);
  std::sort(ev.begin(), ev.end(), [&](Complex x, Complex y) { return std::abs(x - opt.sigma) < std::abs(y - opt.sigma); });

  ASSERT_GE(r.eigenvalues.size(), 8u);
  // The returned set is the nev (plus a possible conjugate) nearest the shift.
  for (const auto& lambda : r.eigenvalues) {
    double best = 1e300;
    for (std::size_t k = 0; k < r.eigenvalues.size() + 1 && k < ev.size(); ++k) best = std::min(best, std::abs(ev[k] - lambda));
    EXPECT_LE(best, 1e-8 * std::max(1.0, std::abs(lambda)));
  }
  // Conjugate closure and verified residuals.
  for (std::size_t i = 0; i < r.eigenvalues.size(); ++i) {
    EXPECT_LE(r.residuals[i], opt.tol);
    if (r.eigenvalues[i].imag() != 0.0) {
      const bool found = std::any_of(r.eigenvalues.begin(), r.eigenvalues.end(),
                                     [&](Complex z) { return std::abs(z - std::conj(r.eigenvalues[i])) <= 1e-12 * std::abs(z); });
      EXPECT_TRUE(found);
    }
    EXPECT_NEAR(backward_error(a, b, r.eigenvalues[i], r.eigenvectors[i]), r.residuals[i], 1e-15);
  }
}

INSTANTIATE_TEST_SUITE_P(Seeds, RandomGeneralized, ::testing::Values(1, 2, 3, 4, 5));

TEST(Eigs, SeedEigenvectorConvergesImmediately) {
  std::mt19937 rng(3);
  const int n = 60;
  Eigen::MatrixXd ad = random_sparse(n, 0.05, rng, 0.0);
  ad = ad + ad.transpose().eval();
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(ad);
  // Eigenvalue nearest zero.
  int best = 0;
  for (int i = 0; i < n; ++i) {
    if (std::abs(es.eigenvalues()[i]) < std::abs(es.eigenvalues()[best])) best = i;
  }
  EigsOptions opt;
  opt.nev = 1;
  opt.verify_multiplicity = false;
  opt.seed.assign(es.eigenvectors().col(best).data(), es.eigenvectors().col(best).data() + n);
  const auto r = eigs(dense_to_sparse(ad), identity_matrix(n), opt);
  EXPECT_EQ(r.restarts, 0);
  EXPECT_NEAR(r.eigenvalues[0].real(), es.eigenvalues()[best], 1e-10);
}

TEST(Eigs, RestartBudgetDoesNotChangeConvergedValues) {
  std::mt19937 rng(5);
  const int n = 200;
  const SparseMatrix a = dense_to_sparse(random_sparse(n, 0.03, rng, 0.5));
  const SparseMatrix b = identity_matrix(n);
  EigsOptions opt;
  opt.nev = 6;
  const auto r1 = eigs(a, b, opt);
  opt.max_restarts += 5;
  const auto r2 = eigs(a, b, opt);
  ASSERT_EQ(r1.eigenvalues.size(), r2.eigenvalues.size());
  for (std::size_t i = 0; i < r1.eigenvalues.size(); ++i) {
    EXPECT_LE(std::abs(r1.eigenvalues[i] - r2.eigenvalues[i]), opt.tol * std::abs(r1.eigenvalues[i]));
  }
}

TEST(Eigs, RepeatedEigenvalueFoundFromSymmetricSeed) {
  // diag(1, 2, 2, 3, ...) with the all-ones seed: the Krylov space alone sees one copy of 2.
  const int n = 50;
  std::vector<Triplet> t;
  for (int i = 0; i < n; ++i) t.push_back({i, i, i < 1 ? 1.0 : (i < 3 ? 2.0 : 1.0 + i)});
  const SparseMatrix a = from_triplets(n, n, t);
  EigsOptions opt;
  opt.nev = 3;
  opt.which = Which::smallest_real;
  const auto r = eigs(a, identity_matrix(n), opt);
  ASSERT_EQ(r.eigenvalues.size(), 3u);
  EXPECT_NEAR(r.eigenvalues[0].real(), 1.0, 1e-12);
  EXPECT_NEAR(r.eigenvalues[1].real(), 2.0, 1e-12);
  EXPECT_NEAR(r.eigenvalues[2].real(), 2.0, 1e-12);
}

TEST(Eigs, Ordering) {
  EXPECT_EQ(parse_which("nearest-shift"), Which::nearest_shift);
  EXPECT_EQ(parse_which("largest-real"), Which::largest_real);
  EXPECT_THROW((void)parse_which("largest-magnitude"), Error);
}

TEST(MatrixMarket, RoundTrip) {
  const SparseMatrix a = from_triplets(3, 4, {{0, 0, 1.5}, {1, 3, -2.0 / 3.0}, {2, 1, 1e-300}});
  std::stringstream s;
  write_matrix_market(s, a);
  const SparseMatrix b = read_matrix_market(s);
  EXPECT_TRUE(same_pattern(a, b));
  EXPECT_EQ(a.values, b.values);
}

TEST(MatrixMarket, SymmetricExpansion) {
  std::stringstream s("%%MatrixMarket matrix coordinate real symmetric\n% c\n2 2 2\n1 1 4\n2 1 -1\n");
  const SparseMatrix a = read_matrix_market(s);
  EXPECT_EQ(a.at(0, 1), -1.0);
  EXPECT_EQ(a.at(1, 0), -1.0);
  std::stringstream bad("%%MatrixMarket matrix array real general\n");
  EXPECT_THROW((void)read_matrix_market(bad), Error);
}
