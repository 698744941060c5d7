#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <random>

#include "sarinf/error.hpp"
#include "sarinf/graph.hpp"
#include "sarinf/workload.hpp"

using namespace sarinf;

namespace {

Eigen::MatrixXd mat(std::initializer_list<std::initializer_list<double>> rows) {
  Eigen::MatrixXd m(static_cast<Eigen::Index>(rows.size()),
                    static_cast<Eigen::Index>(rows.begin()->size()));
  Eigen::Index i = 0;
  for (const auto& r : rows) {
    Eigen::Index j = 0;
    for (double v : r) m(i, j++) = v;
    ++i;
  }
  return m;
}

}  // namespace

TEST_CASE("build_adjacency pairs consecutive nodes") {
  const std::vector<int> path{1, 2, 2, 3};
  CHECK(build_adjacency(path, 3).entries() == mat({{0, 1, 0}, {1, 0, 1}, {0, 1, 0}}));

  const std::vector<int> self{1, 1};
  CHECK(build_adjacency(self, 2).entries() == Eigen::MatrixXd::Zero(2, 2));

  const std::vector<int> twice{1, 2, 1, 2};
  CHECK(build_adjacency(twice, 2).entries() == mat({{0, 1}, {1, 0}}));
}

TEST_CASE("build_adjacency rejects bad input") {
  const std::vector<int> odd{1, 2, 3};
  CHECK_THROWS_AS(build_adjacency(odd, 3), InvalidArgument);
  const std::vector<int> high{1, 4};
  CHECK_THROWS_AS(build_adjacency(high, 3), InvalidArgument);
  const std::vector<int> zero{0, 1};
  CHECK_THROWS_AS(build_adjacency(zero, 3), InvalidArgument);
}

TEST_CASE("row_standardize examples") {
  const auto a1 = AdjacencyMatrix::from_dense(mat({{0, 1, 0}, {1, 0, 1}, {0, 1, 0}}));
  CHECK(row_standardize(a1).entries() == mat({{0, 1, 0}, {0.5, 0, 0.5}, {0, 1, 0}}));
  const auto a2 = AdjacencyMatrix::from_dense(mat({{0, 1, 1}, {1, 0, 0}, {1, 0, 0}}));
  CHECK(row_standardize(a2).entries() == mat({{0, 0.5, 0.5}, {1, 0, 0}, {1, 0, 0}}));
}

TEST_CASE("row_standardize names isolated nodes") {
  const auto a = AdjacencyMatrix::from_dense(mat({{0, 1, 0, 0}, {1, 0, 0, 0}, {0, 0, 0, 0},
                                                  {0, 0, 0, 0}}));
  try {
    row_standardize(a);
    FAIL("expected an error");
  } catch (const InvalidArgument& e) {
    CHECK(std::string(e.what()).find("3, 4") != std::string::npos);
  }
}

TEST_CASE("matrix validation") {
  CHECK_THROWS_AS(AdjacencyMatrix::from_dense(mat({{0, 1}, {0, 0}})), InvalidArgument);
  CHECK_THROWS_AS(AdjacencyMatrix::from_dense(mat({{1, 0}, {0, 0}})), InvalidArgument);
  CHECK_THROWS_AS(AdjacencyMatrix::from_dense(mat({{0, 2}, {2, 0}})), InvalidArgument);
  CHECK_THROWS_AS(WeightMatrix::from_dense(mat({{0, 0.9}, {1, 0}})), InvalidArgument);
  CHECK_THROWS_AS(WeightMatrix::from_dense(mat({{0.5, 0.5}, {1, 0}})), InvalidArgument);
  CHECK_THROWS_AS(WeightMatrix::from_dense(mat({{0, 1, 0}, {0.5, 0, 0.5}})), InvalidArgument);
  CHECK_NOTHROW(WeightMatrix::from_dense(mat({{0, 1}, {1, 0}})));
}

TEST_CASE("edges are listed once with source < target") {
  const std::vector<int> nodes{3, 1, 2, 3, 1, 3};
  const auto e = build_adjacency(nodes, 3).edges();
  REQUIRE(e.size() == 2);
  CHECK(e[0] == std::pair{1, 3});
  CHECK(e[1] == std::pair{2, 3});
}

TEST_CASE("property: random graphs give row-stochastic weights at 1e-12") {
  for (std::uint64_t seed = 1; seed <= 25; ++seed) {
    const int n = 5 + static_cast<int>(seed * 7 % 60);
    const auto a = random_adjacency(n, seed);
    const auto w = row_standardize(a);
    const Eigen::VectorXd sums = w.entries().rowwise().sum();
    CHECK((sums.array() - 1.0).abs().maxCoeff() <= 1e-12);
    CHECK(w.entries().diagonal().isZero(0.0));
    // Sparsity pattern of W equals that of A.
    CHECK(((w.entries().array() > 0.0) == (a.entries().array() > 0.0)).all());
    CHECK((w.entries().array() >= 0.0).all());
    CHECK((w.entries().array() <= 1.0).all());
  }
}

TEST_CASE("property: build_adjacency is permutation-consistent") {
  std::mt19937_64 rng(99);
  for (int rep = 0; rep < 20; ++rep) {
    const int n = 12;
    std::uniform_int_distribution<int> pick(1, n);
    std::vector<int> nodes(40);
    for (auto& v : nodes) v = pick(rng);
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 1);
    std::shuffle(perm.begin(), perm.end(), rng);
    std::vector<int> relabeled(nodes.size());
    std::transform(nodes.begin(), nodes.end(), relabeled.begin(),
                   [&](int v) { return perm[static_cast<std::size_t>(v - 1)]; });
    const Eigen::MatrixXd a = build_adjacency(nodes, n).entries();
    const Eigen::MatrixXd b = build_adjacency(relabeled, n).entries();
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) CHECK(b(perm[i] - 1, perm[j] - 1) == a(i, j));
  }
}

TEST_CASE("random_adjacency is deterministic and has no isolated nodes") {
  const auto a = random_adjacency(50, 7);
  CHECK(a.entries() == random_adjacency(50, 7).entries());
  CHECK((a.entries().rowwise().sum().array() > 0.0).all());
  CHECK(a.entries() != random_adjacency(50, 8).entries());
}
