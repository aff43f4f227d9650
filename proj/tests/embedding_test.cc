#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "kgforge/embedding.h"
#include "kgforge/error.h"
#include "kgforge/fs.h"
#include "test_util.h"

using namespace kgforge;
using namespace kgforge::embedding;

namespace {

Vector embed1(const std::string &text) {
  FallbackEmbedder e;
  return e.embed({text}).at(0);
}

std::string random_text(std::mt19937 &rng) {
  static const char *words[] = {"birth", "place", "date", "country", "citizen", "occupation",
                                "award", "title", "area", "teacher", "student", "music"};
  std::uniform_int_distribution<int> n(1, 5), w(0, 11);
  std::string s;
  for (int i = n(rng); i > 0; --i) s += std::string(s.empty() ? "" : " ") + words[w(rng)];
  return s;
}

}  // namespace

TEST(Fallback, DeterministicUnitVectors) {
  FallbackEmbedder e;
  auto v = e.embed({"place of birth", "Place  of\tbirth", "date of birth"});
  ASSERT_EQ(v.size(), 3u);
  EXPECT_EQ(v[0].dimension(), FallbackEmbedder::kDimension);
  EXPECT_NEAR(v[0].norm(), 1.0, 1e-6);
  EXPECT_EQ(v[0], v[1]);
  EXPECT_EQ(v[0], embed1("place of birth"));
  EXPECT_GT(cosine(v[0], v[2]), 0.3);
  EXPECT_LT(cosine(v[0], v[2]), 0.999);
}

TEST(Fallback, BlankTextIsRejected) {
  FallbackEmbedder e;
  try {
    e.embed({"ok", " \t"});
    FAIL() << "expected EmptyText";
  } catch (const EmptyText &err) {
    EXPECT_EQ(err.index(), 1u);
  }
}

TEST(Cosine, SymmetricAndBounded) {
  std::mt19937 rng(7);
  for (int i = 0; i < 100; ++i) {
    auto a = embed1(random_text(rng)), b = embed1(random_text(rng));
    EXPECT_DOUBLE_EQ(cosine(a, b), cosine(b, a));
    EXPECT_LE(cosine(a, b), 1.0);
    EXPECT_GE(cosine(a, b), -1.0);
    EXPECT_NEAR(cosine(a, a), 1.0, 1e-6);
  }
  EXPECT_THROW(cosine(Vector::normalized({1, 0}), Vector::normalized({1, 0, 0})), DimensionMismatch);
  EXPECT_EQ(Vector::normalized({0, 0}).norm(), 0.0);
}

TEST(Top1, MatchesBruteForce) {
  std::mt19937 rng(11);
  FallbackEmbedder e;
  std::vector<std::pair<std::string, std::string>> items;
  for (int i = 0; i < 50; ++i) items.emplace_back("P" + std::to_string(i + 1), random_text(rng));
  auto index = EmbeddingIndex::build(items, e);
  for (int q = 0; q < 100; ++q) {
    auto query = embed1(random_text(rng));
    auto hit = top1(query, index);
    std::string best;
    double best_score = -2;
    for (const auto &r : index.records()) {
      double s = cosine(query, r.vector);
      if (s > best_score || (s == best_score && r.id < best)) {
        best = r.id;
        best_score = s;
      }
    }
    EXPECT_EQ(hit.id, best);
    EXPECT_DOUBLE_EQ(hit.score, best_score);
  }
}

TEST(Top1, TieGoesToSmallestId) {
  auto v = Vector::normalized({1, 0});
  auto index = EmbeddingIndex::build({{"P9", "a", v}, {"P10", "b", v}, {"P2", "c", Vector::normalized({0, 1})}});
  EXPECT_EQ(top1(v, index).id, "P10");
}

TEST(Top1, Errors) {
  EXPECT_THROW(top1(Vector::normalized({1}), EmbeddingIndex{}), EmptyIndex);
  auto index = EmbeddingIndex::build({{"a", "a", Vector::normalized({1, 0})}});
  EXPECT_THROW(top1(Vector::normalized({1, 0, 0}), index), DimensionMismatch);
  EXPECT_THROW(EmbeddingIndex::build({{"a", "a", Vector::normalized({1, 0})},
                                      {"b", "b", Vector::normalized({1})}}),
               DimensionMismatch);
  EXPECT_THROW(EmbeddingIndex::build({{"a", "a", Vector::normalized({1})},
                                      {"a", "b", Vector::normalized({1})}}),
               Error);
}

TEST(Index, SaveLoadRoundTrip) {
  testutil::TempDir dir;
  FallbackEmbedder e;
  auto index = EmbeddingIndex::build({{"P19", "place of birth"}, {"P569", "date of birth"}}, e);
  index.save(dir / "i.kgei", "fp");
  EmbeddingIndex loaded;
  ASSERT_TRUE(EmbeddingIndex::load(dir / "i.kgei", "fp", loaded));
  ASSERT_EQ(loaded.records().size(), 2u);
  EXPECT_EQ(loaded.records()[1].id, "P569");
  EXPECT_EQ(loaded.records()[1].text, "date of birth");
  EXPECT_EQ(loaded.records()[1].vector, index.records()[1].vector);
  EXPECT_EQ(loaded.dimension(), index.dimension());

  EmbeddingIndex other;
  EXPECT_FALSE(EmbeddingIndex::load(dir / "i.kgei", "other", other));
  EXPECT_FALSE(EmbeddingIndex::load(dir / "missing.kgei", "fp", other));
  std::string bytes = fs::read_file(dir / "i.kgei");
  fs::write_atomic(dir / "cut.kgei", bytes.substr(0, bytes.size() - 3));
  EXPECT_FALSE(EmbeddingIndex::load(dir / "cut.kgei", "fp", other));
  EXPECT_TRUE(other.empty());
}
