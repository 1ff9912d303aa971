#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <set>

#include "json.hpp"
#include "seqrec/error.hpp"
#include "seqrec/eval/metrics.hpp"
#include "seqrec/model/checkpoint.hpp"
#include "seqrec/model/objective.hpp"
#include "test_util.hpp"

namespace {

using namespace seqrec;
using data::ItemId;
namespace st = seqrec::testing;

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected seqrec::Error";
  return ErrorCode::usage;
}

struct Fixture {
  data::SequenceDataset ds;
  data::Split split;
  model::ModelConfig cfg;
  model::ModelParams<float> params;
};

Fixture synthetic_fixture(std::size_t clusters = 4, std::uint64_t seed = 5) {
  data::SyntheticConfig sc;
  sc.num_users = 300;
  sc.num_items = 150;
  sc.cluster_count = clusters;
  sc.seed = seed;
  Fixture f;
  f.cfg.dim = 8;
  f.cfg.max_len = 12;
  f.cfg.num_layers = 1;
  f.cfg.dropout = 0.0;
  f.ds = data::build_sequences(data::five_core_filter(data::generate_synthetic(sc).events), f.cfg.max_len);
  f.split = data::split_leave_one_out(f.ds);
  std::mt19937_64 rng(seed);
  f.params = model::init_params<float>(f.cfg, f.ds.num_items, rng);
  return f;
}

// Exhaustive oracle: stable sort of ascending ids by descending score keeps
// the lower id first among equal scores.
std::size_t oracle_rank(const std::vector<double>& scores, ItemId target) {
  std::vector<ItemId> ids(scores.size());
  for (std::size_t i = 0; i < ids.size(); ++i) ids[i] = static_cast<ItemId>(i + 1);
  std::stable_sort(ids.begin(), ids.end(), [&](ItemId a, ItemId b) { return scores[a - 1] > scores[b - 1]; });
  return static_cast<std::size_t>(std::find(ids.begin(), ids.end(), target) - ids.begin()) + 1;
}

TEST(RankScores, Examples) {
  const std::vector<double> s = {0.5, 0.9, 0.1};
  EXPECT_EQ(eval::rank_scores<double>(s), (std::vector<ItemId>{2, 1, 3}));
  EXPECT_EQ(eval::target_rank<double>(s, 2), 1u);
  EXPECT_EQ(eval::target_rank<double>(s, 3), 3u);
  const std::vector<double> tied = {1.0, 2.0, 2.0, 1.0};
  EXPECT_EQ(eval::rank_scores<double>(tied), (std::vector<ItemId>{2, 3, 1, 4}));
  EXPECT_EQ(eval::target_rank<double>(tied, 3), 2u);
  EXPECT_EQ(code_of([&] { eval::target_rank<double>(s, 0); }), ErrorCode::invalid_input);
  EXPECT_EQ(code_of([&] { eval::target_rank<double>(s, 4); }), ErrorCode::invalid_input);
}

TEST(RankAllItems, MatchesExhaustiveSortWithIntegerScores) {
  // Small integer entries: dot products are exact in any summation order and
  // ties are frequent, so the tie-break is exercised.
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> small(-2, 2);
  model::ModelConfig cfg;
  cfg.dim = 4;
  cfg.max_len = 5;
  cfg.num_layers = 0;
  const std::uint32_t items = 100;
  model::ModelParams<double> p(cfg, items);
  for (std::size_t i = p.item().cols; i < p.item().size(); ++i) p.item().data[i] = small(rng);

  const std::size_t users = 50;
  linalg::Matrix h(users, cfg.dim);
  for (double& v : h.data()) v = small(rng);
  std::vector<data::SplitExample> ex(users);
  std::uniform_int_distribution<ItemId> item(1, items);
  for (std::size_t u = 0; u < users; ++u) ex[u] = {static_cast<std::uint32_t>(u), {0, 0, 1, 2, 3}, item(rng)};

  eval::RankOptions opt;
  opt.keep_top = items;
  const auto ranked = eval::rank_from_vectors(h, p, ex, opt);
  ASSERT_EQ(ranked.size(), users);
  std::size_t ties = 0;
  for (std::size_t u = 0; u < users; ++u) {
    std::vector<double> scores(items);
    for (ItemId v = 1; v <= items; ++v) {
      double s = 0.0;
      for (std::size_t c = 0; c < cfg.dim; ++c) s += h(u, c) * p.item().row(v)[c];
      scores[v - 1] = s;
    }
    const std::size_t rank = oracle_rank(scores, ex[u].target);
    EXPECT_EQ(ranked[u].rank, rank);
    ties += static_cast<std::size_t>(std::count(scores.begin(), scores.end(), scores[ex[u].target - 1])) - 1;

    std::vector<ItemId> full(items);
    for (std::size_t i = 0; i < items; ++i) full[i] = static_cast<ItemId>(i + 1);
    std::stable_sort(full.begin(), full.end(), [&](ItemId a, ItemId b) { return scores[a - 1] > scores[b - 1]; });
    EXPECT_EQ(ranked[u].top, full);

    for (const std::size_t n : {1u, 5u, 10u, 40u, 100u}) {
      EXPECT_EQ(eval::recall_at(ranked[u].rank, n), rank <= n ? 1.0 : 0.0);
      EXPECT_EQ(eval::ndcg_at(ranked[u].rank, n), rank <= n ? 1.0 / std::log2(rank + 1.0) : 0.0);
    }
  }
  EXPECT_GT(ties, 0u);
}

TEST(RankAllItems, EndToEndAgreesWithDirectScoring) {
  auto f = synthetic_fixture();
  const auto& ex = f.split.test;
  const auto ranked = eval::rank_all_items(f.params, f.cfg, ex);
  const auto h = eval::sequence_vectors(f.params, f.cfg, ex);
  ASSERT_EQ(ranked.size(), ex.size());
  for (std::size_t u = 0; u < ex.size(); ++u) {
    std::vector<float> hu(f.cfg.dim);
    for (std::size_t c = 0; c < hu.size(); ++c) hu[c] = static_cast<float>(h(u, c));
    std::vector<ItemId> all(f.ds.num_items);
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = static_cast<ItemId>(i + 1);
    const auto sf = model::score_items<float>(hu, f.params, all);
    const std::vector<double> scores(sf.begin(), sf.end());
    ASSERT_EQ(ranked[u].rank, oracle_rank(scores, ex[u].target)) << "user " << u;
    ASSERT_EQ(ranked[u].top.size(), 100u);
  }
}

TEST(RankAllItems, TargetScoredHighestIsRankOne) {
  model::ModelConfig cfg;
  cfg.dim = 3;
  cfg.max_len = 2;
  cfg.num_layers = 0;
  model::ModelParams<double> p(cfg, 3);
  p.item().row(1)[0] = 1.0;
  p.item().row(2)[1] = 1.0;
  p.item().row(3)[2] = 1.0;
  linalg::Matrix h{{0.1, 0.2, 0.9}};
  const std::vector<data::SplitExample> ex = {{0, {1, 2}, 3}};
  EXPECT_EQ(eval::rank_from_vectors(h, p, ex)[0].rank, 1u);
}

TEST(RankAllItems, MaskSeenDropsHistoryButNotTarget) {
  model::ModelConfig cfg;
  cfg.dim = 1;
  cfg.max_len = 3;
  cfg.num_layers = 0;
  model::ModelParams<double> p(cfg, 5);
  for (ItemId v = 1; v <= 5; ++v) p.item().row(v)[0] = 6.0 - v;  // item 1 scores highest
  linalg::Matrix h{{1.0}};
  const std::vector<data::SplitExample> ex = {{0, {1, 2, 4}, 4}};
  eval::RankOptions opt;
  EXPECT_EQ(eval::rank_from_vectors(h, p, ex, opt)[0].rank, 4u);
  opt.mask_seen = true;
  const auto r = eval::rank_from_vectors(h, p, ex, opt)[0];
  EXPECT_EQ(r.rank, 2u);
  EXPECT_EQ(r.top, (std::vector<ItemId>{3, 4, 5}));
}

TEST(Metrics, RecallAndNdcgExamples) {
  EXPECT_EQ(eval::recall_at(1, 1), 1.0);
  EXPECT_EQ(eval::ndcg_at(1, 7), 1.0);
  EXPECT_DOUBLE_EQ(eval::ndcg_at(3, 10), 0.5);
  EXPECT_EQ(eval::recall_at(11, 10), 0.0);
  EXPECT_EQ(eval::ndcg_at(11, 10), 0.0);
  EXPECT_EQ(eval::recall_at(10, 10), 1.0);
  EXPECT_EQ(code_of([] { eval::recall_at(0, 5); }), ErrorCode::invalid_input);
}

TEST(Metrics, NonDecreasingInCutoff) {
  for (std::size_t rank = 1; rank <= 60; ++rank) {
    for (std::size_t n = 1; n < 60; ++n) {
      EXPECT_LE(eval::recall_at(rank, n), eval::recall_at(rank, n + 1));
      EXPECT_LE(eval::ndcg_at(rank, n), eval::ndcg_at(rank, n + 1));
    }
  }
}

TEST(Diversity, Examples) {
  linalg::Matrix same(4, 3);
  for (std::size_t r = 1; r < 4; ++r) {
    same(r, 0) = 1.0;
    same(r, 1) = 2.0;
  }
  const std::vector<ItemId> three = {1, 2, 3};
  EXPECT_NEAR(eval::intra_list_diversity(three, same), 0.0, 1e-15);

  const auto eye = linalg::Matrix::identity(11);  // rows 1..10 orthogonal
  const std::vector<ItemId> two = {1, 2};
  EXPECT_DOUBLE_EQ(eval::intra_list_diversity(two, eye), 0.5);
  std::vector<ItemId> ten(10);
  for (std::size_t i = 0; i < 10; ++i) ten[i] = static_cast<ItemId>(i + 1);
  EXPECT_DOUBLE_EQ(eval::intra_list_diversity(ten, eye), 0.9);

  auto holed = eye;
  holed(3, 3) = 0.0;
  const std::vector<ItemId> with_zero = {1, 3};
  EXPECT_EQ(code_of([&] { eval::intra_list_diversity(with_zero, holed); }), ErrorCode::degenerate_matrix);
  EXPECT_EQ(code_of([&] { eval::intra_list_diversity({}, eye); }), ErrorCode::invalid_input);
}

TEST(Diversity, InvariantUnderPositiveRowScaling) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> scale(0.1, 10.0);
  for (int trial = 0; trial < 50; ++trial) {
    auto table = st::random_matrix(21, 6, rng);
    std::vector<ItemId> list;
    std::uniform_int_distribution<ItemId> item(1, 20);
    for (int i = 0; i < 10; ++i) list.push_back(item(rng));
    const double before = eval::intra_list_diversity(list, table);
    for (std::size_t r = 1; r < table.rows(); ++r) {
      const double s = scale(rng);
      for (double& x : table.row(r)) x *= s;
    }
    EXPECT_NEAR(eval::intra_list_diversity(list, table), before, 1e-12);
    EXPECT_GE(before, -1.0 - 1e-12);
    EXPECT_LE(before, 1.0 + 1e-12);
  }
}

TEST(Coverage, Examples) {
  std::vector<std::uint32_t> one_cat(101, 1);
  std::vector<ItemId> hundred(100);
  for (std::size_t i = 0; i < 100; ++i) hundred[i] = static_cast<ItemId>(i + 1);
  EXPECT_EQ(eval::coverage_at(hundred, one_cat), 1.0);
  std::vector<std::uint32_t> distinct(101);
  for (std::size_t i = 0; i <= 100; ++i) distinct[i] = static_cast<std::uint32_t>(i);
  EXPECT_EQ(eval::coverage_at(hundred, distinct), 100.0);
  // No categories at all: everything is "unknown".
  EXPECT_EQ(eval::coverage_at(hundred, {}), 1.0);
  // Missing category (0) counts once next to the known ones.
  const std::vector<std::uint32_t> partial = {0, 0, 0, 2, 2};
  const std::vector<ItemId> list = {1, 2, 3, 4};
  EXPECT_EQ(eval::coverage_at(list, partial), 2.0);
}

TEST(Coverage, SyntheticCatalogMatchesDistinctCount) {
  auto f = synthetic_fixture(6);
  ASSERT_TRUE(f.ds.has_categories());
  const auto ranked = eval::rank_all_items(f.params, f.cfg, f.split.test);
  for (const auto& r : ranked) {
    std::set<std::string> names;
    for (const ItemId v : r.top) names.insert(f.ds.category_names[f.ds.item_category[v]]);
    EXPECT_EQ(eval::coverage_at(r.top, f.ds.item_category), static_cast<double>(names.size()));
  }
}

eval::UserMetrics user_at(std::size_t length, std::size_t pop, std::size_t rank) {
  eval::UserMetrics m;
  m.rank = rank;
  m.train_length = length;
  m.target_popularity = pop;
  m.recall = {eval::recall_at(rank, 10)};
  m.ndcg = {eval::ndcg_at(rank, 10)};
  return m;
}

TEST(Groups, Examples) {
  const std::vector<eval::UserMetrics> same = {user_at(7, 1, 2), user_at(7, 1, 30), user_at(7, 1, 1)};
  const auto rows = eval::group_by_length(same, 1);
  ASSERT_EQ(rows.size(), 4u);
  EXPECT_EQ(rows[1].label, "6-10");
  EXPECT_EQ(rows[1].users, 3u);
  EXPECT_EQ(rows[0].users + rows[2].users + rows[3].users, 0u);
  EXPECT_TRUE(std::isnan(rows[0].recall[0]));

  const auto a = user_at(3, 0, 3), b = user_at(25, 500, 1);
  const auto two = eval::group_by_length({a, b}, 1);
  EXPECT_EQ(two[0].label, "<=5");
  EXPECT_EQ(two[3].label, ">20");
  EXPECT_EQ(two[0].ndcg[0], a.ndcg[0]);
  EXPECT_EQ(two[3].ndcg[0], b.ndcg[0]);

  const auto pop = eval::group_by_popularity({a, b}, 1);
  EXPECT_EQ(pop[0].users, 1u);  // cold target lands in the lowest bucket
  EXPECT_EQ(pop[0].label, "<=5");
  EXPECT_EQ(pop[3].label, ">100");
  EXPECT_EQ(pop[3].users, 1u);

  const auto single = eval::group_by_popularity({a, b}, 1, {1000});
  EXPECT_EQ(single[0].users, 2u);
  EXPECT_EQ(single[0].recall[0], (a.recall[0] + b.recall[0]) / 2.0);

  EXPECT_EQ(code_of([&] { eval::group_by_length({a}, 1, {5, 5}); }), ErrorCode::invalid_input);
}

TEST(Evaluate, AggregationIdentityAndRanges) {
  auto f = synthetic_fixture();
  eval::EvalOptions opt;
  opt.groups = true;
  const auto rep = eval::evaluate(f.params, f.cfg, f.ds, f.split.test, opt);
  ASSERT_EQ(rep.users, f.split.test.size());
  for (const auto* groups : {&rep.length_groups, &rep.popularity_groups}) {
    std::size_t users = 0;
    for (const auto& g : *groups) users += g.users;
    EXPECT_EQ(users, rep.users);
    for (std::size_t c = 0; c < rep.cutoffs.size(); ++c) {
      double r = 0.0, n = 0.0;
      for (const auto& g : *groups) {
        if (g.users == 0) continue;
        r += static_cast<double>(g.users) * g.recall[c];
        n += static_cast<double>(g.users) * g.ndcg[c];
      }
      EXPECT_NEAR(r / static_cast<double>(rep.users), rep.recall[c], 1e-12);
      EXPECT_NEAR(n / static_cast<double>(rep.users), rep.ndcg[c], 1e-12);
    }
  }
  for (std::size_t c = 0; c + 1 < rep.cutoffs.size(); ++c) {
    EXPECT_LE(rep.recall[c], rep.recall[c + 1]);
    EXPECT_LE(rep.ndcg[c], rep.ndcg[c + 1]);
  }
  for (const auto& u : rep.per_user) {
    for (std::size_t c = 0; c + 1 < rep.cutoffs.size(); ++c) {
      EXPECT_LE(u.recall[c], u.recall[c + 1]);
      EXPECT_LE(u.ndcg[c], u.ndcg[c + 1]);
    }
    EXPECT_GE(u.coverage, 1.0);
  }
  for (std::size_t c = 0; c < rep.cutoffs.size(); ++c) {
    EXPECT_GE(rep.recall[c], 0.0);
    EXPECT_LE(rep.recall[c], 1.0);
    EXPECT_GE(rep.ndcg[c], 0.0);
    EXPECT_LE(rep.ndcg[c], rep.recall[c]);
  }
  EXPECT_GE(rep.ild, -1.0);
  EXPECT_LE(rep.ild, 1.0);
  EXPECT_GE(rep.coverage, 1.0);
  EXPECT_EQ(rep.to_json(), eval::evaluate(f.params, f.cfg, f.ds, f.split.test, opt).to_json());
}

TEST(Evaluate, ReportKeysFollowCutoffs) {
  auto f = synthetic_fixture();
  eval::EvalOptions opt;
  opt.cutoffs = {5, 10, 40};
  auto j = nlohmann::json::parse(eval::evaluate(f.params, f.cfg, f.ds, f.split.test, opt).to_json());
  std::set<std::string> keys;
  for (const auto& [k, v] : j.items()) keys.insert(k);
  const std::set<std::string> expected = {"schema_version", "split", "users",     "recall@5",  "ndcg@5",
                                          "recall@10",      "ndcg@10", "recall@40", "ndcg@40",  "ild@10",
                                          "cov@100",        "ausc_item", "ausc_seq"};
  EXPECT_EQ(keys, expected);
  EXPECT_EQ(j["split"], "test");

  opt.cutoffs = {3};
  opt.groups = true;
  j = nlohmann::json::parse(eval::evaluate(f.params, f.cfg, f.ds, f.split.valid, opt).to_json());
  EXPECT_TRUE(j.contains("recall@3"));
  EXPECT_FALSE(j.contains("recall@10"));
  EXPECT_EQ(j["split"], "valid");
  EXPECT_TRUE(j["groups"]["length"].contains("<=5"));
  EXPECT_TRUE(j["groups"]["popularity"][">100"].contains("ndcg@3"));
}

TEST(Evaluate, CsvFlattening) {
  auto f = synthetic_fixture();
  eval::EvalOptions opt;
  opt.groups = true;
  const auto csv = eval::evaluate(f.params, f.cfg, f.ds, f.split.test, opt).to_csv();
  EXPECT_EQ(csv.rfind("metric,value\n", 0), 0u);
  EXPECT_NE(csv.find("\nndcg@10,"), std::string::npos);
  EXPECT_NE(csv.find("\ngroups.length.6-10.users,"), std::string::npos);
  EXPECT_NE(csv.find("\ngroups.popularity.<=5.recall@40,"), std::string::npos);
}

TEST(Evaluate, CheckpointRoundTripGivesSameReport) {
  auto f = synthetic_fixture();
  st::TempDir dir("eval");
  model::save_checkpoint(f.params, f.cfg, dir / "m.ckpt");
  const auto ck = model::load_checkpoint<float>(dir / "m.ckpt");
  eval::EvalOptions opt;
  opt.groups = true;
  EXPECT_EQ(eval::evaluate(ck.params, ck.config, f.ds, f.split.test, opt).to_json(),
            eval::evaluate(f.params, f.cfg, f.ds, f.split.test, opt).to_json());
}

TEST(Evaluate, ErrorsAndSingleCluster) {
  auto f = synthetic_fixture(1);
  const auto rep = eval::evaluate(f.params, f.cfg, f.ds, f.split.test);
  EXPECT_EQ(rep.coverage, 1.0);
  EXPECT_EQ(code_of([&] { eval::evaluate(f.params, f.cfg, f.ds, {}); }), ErrorCode::empty_dataset);
  auto other = f.ds;
  other.num_items += 1;
  EXPECT_EQ(code_of([&] { eval::evaluate(f.params, f.cfg, other, f.split.test); }), ErrorCode::invalid_input);
}

TEST(Degeneration, RandomStartAndRankOne) {
  auto f = synthetic_fixture();
  const auto h = eval::sequence_vectors(f.params, f.cfg, f.split.test);
  ASSERT_GE(h.rows(), f.cfg.dim);
  const auto rep = eval::degeneration_report(f.params, h);
  EXPECT_GT(rep.item.ausc, 1.0);
  EXPECT_GT(rep.sequence.ausc, 1.0);
  EXPECT_EQ(rep.item.sigma.size(), f.cfg.dim);

  linalg::Matrix same(40, f.cfg.dim);
  for (std::size_t r = 0; r < same.rows(); ++r)
    for (std::size_t c = 0; c < same.cols(); ++c) same(r, c) = 0.5 + static_cast<double>(c);
  EXPECT_NEAR(eval::degeneration_report(f.params, same).sequence.ausc, 1.0, 1e-9);
}

TEST(NormalizedTable, UnitRows) {
  auto f = synthetic_fixture();
  const auto t = eval::normalized_item_table(f.params);
  ASSERT_EQ(t.rows(), f.ds.num_items + 1u);
  for (std::size_t c = 0; c < t.cols(); ++c) EXPECT_EQ(t(0, c), 0.0);
  for (std::size_t r = 1; r < t.rows(); ++r) {
    double n = 0.0;
    for (const double x : t.row(r)) n += x * x;
    EXPECT_NEAR(n, 1.0, 1e-12);
  }
}

}  // namespace
