#pragma once
// All-items ranking, top-N metrics, list diversity/coverage, group breakdowns
// and the spectrum report of the item table and sequence representations.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "seqrec/data/dataset.hpp"
#include "seqrec/linalg/spectrum.hpp"
#include "seqrec/model/config.hpp"
#include "seqrec/model/params.hpp"

namespace seqrec::eval {

using data::ItemId;

/// Item ids 1..V ordered by descending score, ties by lower id.
/// scores[v - 1] belongs to item v.
template <typename Real>
std::vector<ItemId> rank_scores(std::span<const Real> scores);

/// 1-based rank of target under the same ordering, without sorting.
template <typename Real>
std::size_t target_rank(std::span<const Real> scores, ItemId target);

struct UserRanking {
  std::uint32_t user = 0;
  ItemId target = data::kPad;
  std::size_t rank = 0;     // 1-based, over the unmasked items
  std::vector<ItemId> top;  // best keep_top items
};

struct RankOptions {
  std::size_t keep_top = 100;
  bool mask_seen = false;  // drop the items of the input sequence (not the target)
  std::size_t batch = 256;
};

/// Final-position representations (users x d) of the example inputs, eval mode.
template <typename Real>
linalg::Matrix sequence_vectors(const model::ModelParams<Real>& params, const model::ModelConfig& cfg,
                                const std::vector<data::SplitExample>& examples, std::size_t batch = 256);

/// Scores every item against each example's h_last and ranks them.
template <typename Real>
std::vector<UserRanking> rank_all_items(const model::ModelParams<Real>& params, const model::ModelConfig& cfg,
                                        const std::vector<data::SplitExample>& examples,
                                        const RankOptions& opt = {});

/// Same, from precomputed representations (one row per example).
template <typename Real>
std::vector<UserRanking> rank_from_vectors(const linalg::Matrix& h, const model::ModelParams<Real>& params,
                                           const std::vector<data::SplitExample>& examples,
                                           const RankOptions& opt = {});

double recall_at(std::size_t rank, std::size_t n);
/// 1 / log2(rank + 1) inside the cutoff.
double ndcg_at(std::size_t rank, std::size_t n);

/// 1 - (sum_i sum_j cos(M_i, M_j)) / N^2, i == j included. `table` holds one
/// row per item id (row 0 is padding). Throws DegenerateMatrix on a zero row,
/// InvalidInput on an empty list.
double intra_list_diversity(std::span<const ItemId> list, const linalg::Matrix& table);

/// Distinct categories among the listed items. Ids without a category, or a
/// dataset without categories, count once as "unknown".
double coverage_at(std::span<const ItemId> list, const std::vector<std::uint32_t>& item_category);

/// Per-user metric values, the inputs to every aggregate.
struct UserMetrics {
  std::uint32_t user = 0;
  std::size_t rank = 0;
  std::size_t train_length = 0;
  std::size_t target_popularity = 0;
  std::vector<double> recall;  // one per cutoff
  std::vector<double> ndcg;
  double ild = 0.0;
  double coverage = 0.0;
};

/// Empty buckets are kept with NaN means.
struct GroupRow {
  std::string label;
  std::size_t users = 0;
  std::vector<double> recall;  // bucket means, one per cutoff
  std::vector<double> ndcg;
};

/// Buckets by training-sequence length; bounds are inclusive upper limits,
/// the last bucket is open. Default {5, 10, 20}: <=5, 6-10, 11-20, >20.
std::vector<GroupRow> group_by_length(const std::vector<UserMetrics>& users, std::size_t cutoffs,
                                      const std::vector<std::size_t>& bounds = {5, 10, 20});
/// Buckets by the target's training popularity, same bound convention.
/// Cold items (popularity 0) land in the first bucket.
std::vector<GroupRow> group_by_popularity(const std::vector<UserMetrics>& users, std::size_t cutoffs,
                                          const std::vector<std::size_t>& bounds = {5, 20, 100});

struct Degeneration {
  linalg::SpectrumReport item;
  linalg::SpectrumReport sequence;
};

/// Spectrum of the item table rows 1..V and of the given representations.
template <typename Real>
Degeneration degeneration_report(const model::ModelParams<Real>& params, const linalg::Matrix& h);

struct EvalOptions {
  std::vector<std::size_t> cutoffs = {5, 10, 40};
  std::size_t ild_n = 10;
  std::size_t coverage_n = 100;
  bool mask_seen = false;
  bool groups = false;
};

struct EvalReport {
  std::string split;
  std::size_t users = 0;
  std::vector<std::size_t> cutoffs;
  std::vector<double> recall;
  std::vector<double> ndcg;
  double ild = 0.0;
  double coverage = 0.0;
  std::size_t ild_n = 10;
  std::size_t coverage_n = 100;
  double ausc_item = 0.0;
  double ausc_seq = 0.0;
  std::vector<GroupRow> length_groups;
  std::vector<GroupRow> popularity_groups;
  std::vector<UserMetrics> per_user;
  Degeneration spectrum;

  double recall_at_cutoff(std::size_t n) const;
  double ndcg_at_cutoff(std::size_t n) const;

  std::string to_json() const;
  /// "metric,value" rows; group rows as groups.<kind>.<label>.<metric>.
  std::string to_csv() const;
};

/// Per-user metrics aggregated in user order (fixed summation order).
template <typename Real>
EvalReport evaluate(const model::ModelParams<Real>& params, const model::ModelConfig& cfg,
                    const data::SequenceDataset& ds, const std::vector<data::SplitExample>& examples,
                    const EvalOptions& opt = {});

/// Unit-normalized copy of rows 1..V of the item table, row 0 zero.
template <typename Real>
linalg::Matrix normalized_item_table(const model::ModelParams<Real>& params);

}  // namespace seqrec::eval
