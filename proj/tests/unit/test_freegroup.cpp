#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "../support/fixtures.hpp"
#include "../support/oracles.hpp"
#include "ttforge/error.hpp"

namespace ttforge {
namespace {

using testing::fib;
using testing::nilp;
using testing::rose;
using testing::sigma;
using testing::word;

TEST(Fold, Examples) {
  auto g = rose({"a", "b"});
  const auto h = fold(g, 0, {word(*g, "a b")});
  EXPECT_EQ(h.rank(), 1);
  EXPECT_EQ(h.graph().num_vertices(), 2);
  EXPECT_TRUE(h.is_core());
  EXPECT_EQ(fold(g, 0, {word(*g, "a"), word(*g, "b")}).rank(), 2);
  const auto trivial = fold(g, 0, {});
  EXPECT_EQ(trivial.rank(), 0);
  EXPECT_EQ(trivial.graph().num_vertices(), 1);
}

TEST(Fold, PrunesHairs) {
  auto g = rose({"a", "b"});
  const auto h = fold(g, 0, {word(*g, "b a -b")});
  EXPECT_EQ(h.rank(), 1);
  EXPECT_EQ(h.graph().num_vertices(), 2);
  EXPECT_TRUE(h.is_core());
}

TEST(Fold, Confluent) {
  std::mt19937_64 rng(2);
  auto g = rose({"a", "b", "c"});
  for (int i = 0; i < 100; ++i) {
    std::vector<Path> loops;
    const int count = rng() % 4;
    for (int k = 0; k < count; ++k) {
      loops.push_back(testing::random_reduced_path(*g, 0, 1 + rng() % 6, rng));
    }
    const std::string reference = fold(g, 0, loops).canonical_form();
    std::shuffle(loops.begin(), loops.end(), rng);
    EXPECT_EQ(fold(g, 0, loops).canonical_form(), reference);
    for (auto& loop : loops) loop = reverse(loop);
    EXPECT_EQ(fold(g, 0, loops).canonical_form(), reference);
  }
}

TEST(Contains, Examples) {
  auto g = rose({"a", "b"});
  const auto h = fold(g, 0, {word(*g, "a b")});
  EXPECT_TRUE(contains(h, word(*g, "a b a b")));
  EXPECT_FALSE(contains(h, word(*g, "a")));
  EXPECT_TRUE(contains(h, Path::trivial(0)));
}

TEST(Contains, AgreesWithBall) {
  std::mt19937_64 rng(29);
  auto g = rose({"a", "b"});
  const auto words = testing::reduced_words(*g, 8);
  for (int i = 0; i < 20; ++i) {
    std::vector<Path> gens;
    const int count = rng() % 3;
    for (int k = 0; k < count; ++k) {
      gens.push_back(testing::random_reduced_path(*g, 0, 1 + rng() % 4, rng));
    }
    const auto h = fold(g, 0, gens);
    ASSERT_LE(h.rank(), 2);
    const auto ball = testing::subgroup_ball(h.basis_words(), 8, 8);
    for (const Path& w : words) {
      EXPECT_EQ(contains(h, w), ball.contains(w.darts))
          << "[" << to_string(*g, w) << "] in H with basis " << h.basis_words().size()
          << " first " << (h.basis_words().empty() ? std::string() : to_string(*g, h.basis_words()[0]));
    }
  }
}

TEST(Pi1Endomorphism, Examples) {
  const auto s = pi1_endomorphism(sigma(), 0);
  EXPECT_EQ(to_string(s.ambient(), s.images()[0]), "a b");
  EXPECT_EQ(to_string(s.ambient(), s.images()[1]), "a b");
  const auto f = pi1_endomorphism(fib(), 0);
  EXPECT_EQ(to_string(f.ambient(), f.images()[0]), "b");
  EXPECT_EQ(to_string(f.ambient(), f.images()[1]), "a b");
  const auto id = pi1_endomorphism(GraphMap::identity(sigma().domain_ptr()), 0);
  EXPECT_EQ(id.images(), id.generator_loops());
  EXPECT_THROW(pi1_endomorphism(testing::cyc2(), 0), PreconditionFailed);
}

TEST(ImageSubgroup, Examples) {
  const auto s = pi1_endomorphism(sigma(), 0);
  EXPECT_EQ(image_subgroup(s, 1).rank(), 1);
  EXPECT_EQ(image_subgroup(pi1_endomorphism(fib(), 0), 5).rank(), 2);
  EXPECT_EQ(image_subgroup(nilp(), 3).rank(), 0);
}

TEST(Injective, Examples) {
  const auto s = pi1_endomorphism(sigma(), 0);
  auto g = s.ambient_ptr();
  EXPECT_FALSE(is_injective_on(s, whole_group(g, 0)));
  EXPECT_TRUE(is_injective_on(s, fold(g, 0, {word(*g, "a b")})));
  EXPECT_TRUE(is_injective_on(s, fold(g, 0, {})));
}

TEST(KernelStabilization, FixturesAndOracle) {
  const auto s = pi1_endomorphism(sigma(), 0);
  const auto f = pi1_endomorphism(fib(), 0);
  EXPECT_EQ(kernel_stabilization(f), 0);
  EXPECT_EQ(kernel_stabilization(s), 1);
  EXPECT_EQ(kernel_stabilization(nilp()), 3);
  EXPECT_EQ(testing::brute_force_kernel_stabilization(s, 6), 1);
  EXPECT_EQ(testing::brute_force_kernel_stabilization(f, 6), 0);
  EXPECT_EQ(testing::brute_force_kernel_stabilization(nilp(), 6), 3);
}

TEST(StableQuotient, Fixtures) {
  const auto s = stable_quotient(pi1_endomorphism(sigma(), 0));
  EXPECT_EQ(s.stabilization, 1);
  EXPECT_EQ(s.rank, 1);
  ASSERT_EQ(s.restriction.size(), 1u);
  EXPECT_EQ(s.restriction[0], (std::vector<int>{1, 1}));
  EXPECT_EQ(basis_word_to_string(s.restriction[0]), "x1 x1");
  const auto f = stable_quotient(pi1_endomorphism(fib(), 0));
  EXPECT_EQ(f.stabilization, 0);
  EXPECT_EQ(f.rank, 2);
  const auto n = stable_quotient(nilp());
  EXPECT_EQ(n.stabilization, 3);
  EXPECT_EQ(n.rank, 0);
  EXPECT_EQ(n.image_ranks, (std::vector<int>{3, 2, 1, 0, 0}));
}

TEST(StableQuotient, RanksBehave) {
  std::mt19937_64 rng(31);
  auto g = rose({"a", "b", "c"});
  for (int i = 0; i < 100; ++i) {
    std::vector<Path> images;
    for (int k = 0; k < 3; ++k) {
      images.push_back(testing::random_reduced_loop(*g, 0, 4, rng));
    }
    const Pi1Endomorphism phi(g, 0, images);
    const auto q = stable_quotient(phi);
    for (int k = 0; k < q.stabilization; ++k) {
      EXPECT_GT(q.image_ranks[k], q.image_ranks[k + 1]);
    }
    for (int m = 1; m <= 3; ++m) {
      EXPECT_EQ(image_subgroup(phi, q.stabilization + m).rank(), q.rank);
    }
  }
}

TEST(MapSubgroup, Examples) {
  auto g = rose({"a", "b"});
  const auto a = fold(g, 0, {word(*g, "a")});
  EXPECT_EQ(map_subgroup(pi1_endomorphism(sigma(), 0), a).canonical_form(),
            fold(g, 0, {word(*g, "a b")}).canonical_form());
  const auto id = pi1_endomorphism(GraphMap::identity(g), 0);
  EXPECT_EQ(map_subgroup(id, a).canonical_form(), a.canonical_form());
  EXPECT_EQ(map_subgroup(pi1_endomorphism(fib(), 0), a).canonical_form(),
            fold(g, 0, {word(*g, "b")}).canonical_form());
}

TEST(Hall, Examples) {
  auto g = rose({"a", "b"});
  const auto loop = hall_completion(fold(g, 0, {word(*g, "a")}));
  EXPECT_TRUE(loop.is_covering());
  EXPECT_EQ(loop.degree(), 1);

  SubgroupGraph path(g, 0);
  const VertexId v1 = path.add_vertex(0);
  const VertexId v2 = path.add_vertex(0);
  path.add_edge(0, v1, 0);
  path.add_edge(v1, v2, 0);
  const auto cover = hall_completion(path);
  EXPECT_TRUE(cover.is_covering());
  EXPECT_EQ(cover.degree(), 3);
  EXPECT_TRUE(embeds_into(path, cover).has_value());

  EXPECT_EQ(hall_completion(cover).canonical_form(), cover.canonical_form());
}

TEST(Hall, RandomCores) {
  std::mt19937_64 rng(37);
  for (int i = 0; i < 50; ++i) {
    const int n = 1 + rng() % 3;
    std::vector<std::string> names;
    for (int e = 0; e < n; ++e) names.push_back(std::string(1, 'a' + e));
    auto g = rose(names);
    std::vector<Path> gens;
    for (int k = 0; k < 1 + static_cast<int>(rng() % 3); ++k) {
      gens.push_back(testing::random_reduced_path(*g, 0, 1 + rng() % 5, rng));
    }
    const auto h = fold(g, 0, gens);
    const auto c = hall_completion(h);
    EXPECT_TRUE(c.is_covering());
    EXPECT_TRUE(embeds_into(h, c).has_value());
    EXPECT_LE(c.degree(), h.graph().num_vertices());
    for (const Path& w : gens) EXPECT_TRUE(contains(c, w));
  }
}

}  // namespace
}  // namespace ttforge
