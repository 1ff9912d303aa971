#include "seqrec/eval/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "json.hpp"

#include "seqrec/error.hpp"
#include "seqrec/model/encoder.hpp"
#include "seqrec/model/objective.hpp"

namespace seqrec::eval {
namespace {

constexpr int kSchemaVersion = 1;

template <typename Real>
bool ranks_before(Real sa, ItemId a, Real sb, ItemId b) {
  return sa > sb || (sa == sb && a < b);
}

// Drops any leading padding and re-pads to the model's window.
std::vector<ItemId> fit_window(const std::vector<ItemId>& input, std::size_t n) {
  auto first = std::find_if(input.begin(), input.end(), [](ItemId v) { return v != data::kPad; });
  return data::pad_truncate(std::vector<ItemId>(first, input.end()), n);
}

template <typename Real>
linalg::Matrix full_table(const model::ModelParams<Real>& params) {
  const auto& m = params.item();
  linalg::Matrix out(m.rows, m.cols);
  for (std::size_t i = 0; i < m.size(); ++i) out.data()[i] = static_cast<double>(m.data[i]);
  return out;
}

std::string bucket_label(const std::vector<std::size_t>& bounds, std::size_t b) {
  if (b == 0) return "<=" + std::to_string(bounds[0]);
  if (b == bounds.size()) return ">" + std::to_string(bounds.back());
  return std::to_string(bounds[b - 1] + 1) + "-" + std::to_string(bounds[b]);
}

template <typename Key>
std::vector<GroupRow> group_by(const std::vector<UserMetrics>& users, std::size_t cutoffs,
                               const std::vector<std::size_t>& bounds, Key key) {
  if (bounds.empty() || !std::is_sorted(bounds.begin(), bounds.end()) ||
      std::adjacent_find(bounds.begin(), bounds.end()) != bounds.end()) {
    throw Error(ErrorCode::invalid_input, "bucket bounds must be non-empty and strictly increasing");
  }
  std::vector<GroupRow> rows(bounds.size() + 1);
  for (std::size_t b = 0; b < rows.size(); ++b) {
    rows[b].label = bucket_label(bounds, b);
    rows[b].recall.assign(cutoffs, 0.0);
    rows[b].ndcg.assign(cutoffs, 0.0);
  }
  for (const auto& u : users) {
    const std::size_t v = key(u);
    const std::size_t b = static_cast<std::size_t>(std::lower_bound(bounds.begin(), bounds.end(), v) - bounds.begin());
    auto& row = rows[b];
    ++row.users;
    for (std::size_t c = 0; c < cutoffs; ++c) {
      row.recall[c] += u.recall.at(c);
      row.ndcg[c] += u.ndcg.at(c);
    }
  }
  for (auto& row : rows) {
    for (std::size_t c = 0; c < cutoffs; ++c) {
      const double n = static_cast<double>(row.users);
      row.recall[c] = row.users ? row.recall[c] / n : std::numeric_limits<double>::quiet_NaN();
      row.ndcg[c] = row.users ? row.ndcg[c] / n : std::numeric_limits<double>::quiet_NaN();
    }
  }
  return rows;
}

nlohmann::ordered_json groups_json(const std::vector<GroupRow>& rows, const std::vector<std::size_t>& cutoffs) {
  auto out = nlohmann::ordered_json::object();
  for (const auto& row : rows) {
    auto g = nlohmann::ordered_json::object();
    g["users"] = row.users;
    for (std::size_t c = 0; c < cutoffs.size(); ++c) {
      const std::string n = std::to_string(cutoffs[c]);
      // NaN serializes as null for empty buckets.
      g["recall@" + n] = row.recall[c];
      g["ndcg@" + n] = row.ndcg[c];
    }
    out[row.label] = std::move(g);
  }
  return out;
}

std::string csv_number(double v) {
  if (std::isnan(v)) return "";
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

}  // namespace

template <typename Real>
std::vector<ItemId> rank_scores(std::span<const Real> scores) {
  std::vector<ItemId> order(scores.size());
  std::iota(order.begin(), order.end(), ItemId{1});
  std::sort(order.begin(), order.end(),
            [&](ItemId a, ItemId b) { return ranks_before(scores[a - 1], a, scores[b - 1], b); });
  return order;
}

template <typename Real>
std::size_t target_rank(std::span<const Real> scores, ItemId target) {
  if (target == data::kPad || target > scores.size()) {
    throw Error(ErrorCode::invalid_input, "target id outside the scored items");
  }
  const Real st = scores[target - 1];
  std::size_t rank = 1;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    const auto v = static_cast<ItemId>(i + 1);
    if (ranks_before(scores[i], v, st, target)) ++rank;
  }
  return rank;
}

template <typename Real>
linalg::Matrix sequence_vectors(const model::ModelParams<Real>& params, const model::ModelConfig& cfg,
                                const std::vector<data::SplitExample>& examples, std::size_t batch) {
  const std::size_t n = cfg.max_len, d = cfg.dim;
  if (batch == 0) throw Error(ErrorCode::invalid_input, "batch size is 0");
  linalg::Matrix h(examples.size(), d);
  std::vector<ItemId> input;
  for (std::size_t start = 0; start < examples.size(); start += batch) {
    const std::size_t b = std::min(batch, examples.size() - start);
    input.clear();
    input.reserve(b * n);
    for (std::size_t r = 0; r < b; ++r) {
      const auto row = fit_window(examples[start + r].input, n);
      input.insert(input.end(), row.begin(), row.end());
    }
    const auto fwd = model::forward(params, cfg, input, b, false);
    for (std::size_t r = 0; r < b; ++r) {
      for (std::size_t c = 0; c < d; ++c) h(start + r, c) = static_cast<double>(fwd.h_last[r * d + c]);
    }
  }
  return h;
}

template <typename Real>
std::vector<UserRanking> rank_from_vectors(const linalg::Matrix& h, const model::ModelParams<Real>& params,
                                           const std::vector<data::SplitExample>& examples,
                                           const RankOptions& opt) {
  if (h.rows() != examples.size() || h.cols() != params.dim()) {
    throw Error(ErrorCode::invalid_input, "representation matrix does not match the examples");
  }
  const std::uint32_t num_items = params.num_items();
  std::vector<ItemId> all(num_items);
  std::iota(all.begin(), all.end(), ItemId{1});

  std::vector<UserRanking> out;
  out.reserve(examples.size());
  std::vector<Real> hr(params.dim());
  std::vector<std::uint8_t> masked(std::size_t{num_items} + 1, 0);
  std::vector<ItemId> cand;
  for (std::size_t u = 0; u < examples.size(); ++u) {
    const auto& ex = examples[u];
    if (ex.target == data::kPad || ex.target > num_items) {
      throw Error(ErrorCode::invalid_input, "target id outside [1, num_items]");
    }
    for (std::size_t c = 0; c < hr.size(); ++c) hr[c] = static_cast<Real>(h(u, c));
    const auto scores = model::score_items<Real>(hr, params, all);
    for (const Real s : scores) {
      if (!std::isfinite(static_cast<double>(s))) throw Error(ErrorCode::numerical_failure, "non-finite item score");
    }

    if (opt.mask_seen) {
      for (const ItemId v : ex.input) {
        if (v <= num_items) masked[v] = 1;
      }
      masked[ex.target] = 0;
    }
    const Real st = scores[ex.target - 1];
    UserRanking r{ex.user, ex.target, 1, {}};
    cand.clear();
    for (ItemId v = 1; v <= num_items; ++v) {
      if (masked[v]) continue;
      cand.push_back(v);
      if (ranks_before(scores[v - 1], v, st, ex.target)) ++r.rank;
    }
    const std::size_t keep = std::min(opt.keep_top, cand.size());
    const auto before = [&](ItemId a, ItemId b) { return ranks_before(scores[a - 1], a, scores[b - 1], b); };
    std::partial_sort(cand.begin(), cand.begin() + static_cast<std::ptrdiff_t>(keep), cand.end(), before);
    r.top.assign(cand.begin(), cand.begin() + static_cast<std::ptrdiff_t>(keep));
    out.push_back(std::move(r));

    if (opt.mask_seen) {
      for (const ItemId v : ex.input) {
        if (v <= num_items) masked[v] = 0;
      }
    }
  }
  return out;
}

template <typename Real>
std::vector<UserRanking> rank_all_items(const model::ModelParams<Real>& params, const model::ModelConfig& cfg,
                                        const std::vector<data::SplitExample>& examples, const RankOptions& opt) {
  return rank_from_vectors(sequence_vectors(params, cfg, examples, opt.batch), params, examples, opt);
}

double recall_at(std::size_t rank, std::size_t n) {
  if (rank == 0) throw Error(ErrorCode::invalid_input, "rank is 1-based");
  return rank <= n ? 1.0 : 0.0;
}

double ndcg_at(std::size_t rank, std::size_t n) {
  if (rank == 0) throw Error(ErrorCode::invalid_input, "rank is 1-based");
  return rank <= n ? 1.0 / std::log2(static_cast<double>(rank) + 1.0) : 0.0;
}

double intra_list_diversity(std::span<const ItemId> list, const linalg::Matrix& table) {
  if (list.empty()) throw Error(ErrorCode::invalid_input, "empty list");
  const std::size_t n = list.size(), d = table.cols();
  std::vector<double> unit(n * d);
  for (std::size_t i = 0; i < n; ++i) {
    if (list[i] >= table.rows()) throw Error(ErrorCode::invalid_input, "item id outside the table");
    const auto row = table.row(list[i]);
    double norm = 0.0;
    for (const double x : row) norm += x * x;
    norm = std::sqrt(norm);
    if (norm == 0.0) {
      throw Error(ErrorCode::degenerate_matrix, "zero embedding for item " + std::to_string(list[i]));
    }
    for (std::size_t c = 0; c < d; ++c) unit[i * d + c] = row[c] / norm;
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      double dot = 0.0;
      for (std::size_t c = 0; c < d; ++c) dot += unit[i * d + c] * unit[j * d + c];
      sum += dot;
    }
  }
  return 1.0 - sum / static_cast<double>(n * n);
}

double coverage_at(std::span<const ItemId> list, const std::vector<std::uint32_t>& item_category) {
  std::vector<std::uint32_t> cats;
  cats.reserve(list.size());
  for (const ItemId v : list) cats.push_back(v < item_category.size() ? item_category[v] : 0);
  std::sort(cats.begin(), cats.end());
  return static_cast<double>(std::unique(cats.begin(), cats.end()) - cats.begin());
}

std::vector<GroupRow> group_by_length(const std::vector<UserMetrics>& users, std::size_t cutoffs,
                                      const std::vector<std::size_t>& bounds) {
  return group_by(users, cutoffs, bounds, [](const UserMetrics& u) { return u.train_length; });
}

std::vector<GroupRow> group_by_popularity(const std::vector<UserMetrics>& users, std::size_t cutoffs,
                                          const std::vector<std::size_t>& bounds) {
  return group_by(users, cutoffs, bounds, [](const UserMetrics& u) { return u.target_popularity; });
}

template <typename Real>
Degeneration degeneration_report(const model::ModelParams<Real>& params, const linalg::Matrix& h) {
  return {linalg::spectrum_report(model::item_matrix(params)), linalg::spectrum_report(h)};
}

double EvalReport::recall_at_cutoff(std::size_t n) const {
  const auto it = std::find(cutoffs.begin(), cutoffs.end(), n);
  if (it == cutoffs.end()) throw Error(ErrorCode::invalid_input, "cutoff " + std::to_string(n) + " not evaluated");
  return recall[static_cast<std::size_t>(it - cutoffs.begin())];
}

double EvalReport::ndcg_at_cutoff(std::size_t n) const {
  const auto it = std::find(cutoffs.begin(), cutoffs.end(), n);
  if (it == cutoffs.end()) throw Error(ErrorCode::invalid_input, "cutoff " + std::to_string(n) + " not evaluated");
  return ndcg[static_cast<std::size_t>(it - cutoffs.begin())];
}

std::string EvalReport::to_json() const {
  nlohmann::ordered_json j;
  j["schema_version"] = kSchemaVersion;
  j["split"] = split;
  j["users"] = users;
  for (std::size_t c = 0; c < cutoffs.size(); ++c) {
    j["recall@" + std::to_string(cutoffs[c])] = recall[c];
    j["ndcg@" + std::to_string(cutoffs[c])] = ndcg[c];
  }
  j["ild@" + std::to_string(ild_n)] = ild;
  j["cov@" + std::to_string(coverage_n)] = coverage;
  j["ausc_item"] = ausc_item;
  j["ausc_seq"] = ausc_seq;
  if (!length_groups.empty() || !popularity_groups.empty()) {
    j["groups"]["length"] = groups_json(length_groups, cutoffs);
    j["groups"]["popularity"] = groups_json(popularity_groups, cutoffs);
  }
  return j.dump(2);
}

std::string EvalReport::to_csv() const {
  std::ostringstream os;
  os << "metric,value\n";
  for (std::size_t c = 0; c < cutoffs.size(); ++c) {
    os << "recall@" << cutoffs[c] << ',' << csv_number(recall[c]) << '\n';
    os << "ndcg@" << cutoffs[c] << ',' << csv_number(ndcg[c]) << '\n';
  }
  os << "ild@" << ild_n << ',' << csv_number(ild) << '\n';
  os << "cov@" << coverage_n << ',' << csv_number(coverage) << '\n';
  os << "ausc_item," << csv_number(ausc_item) << '\n';
  os << "ausc_seq," << csv_number(ausc_seq) << '\n';
  const auto groups = [&](const char* kind, const std::vector<GroupRow>& rows) {
    for (const auto& row : rows) {
      const std::string prefix = std::string("groups.") + kind + "." + row.label + ".";
      os << prefix << "users," << row.users << '\n';
      for (std::size_t c = 0; c < cutoffs.size(); ++c) {
        os << prefix << "recall@" << cutoffs[c] << ',' << csv_number(row.recall[c]) << '\n';
        os << prefix << "ndcg@" << cutoffs[c] << ',' << csv_number(row.ndcg[c]) << '\n';
      }
    }
  };
  groups("length", length_groups);
  groups("popularity", popularity_groups);
  return os.str();
}

template <typename Real>
EvalReport evaluate(const model::ModelParams<Real>& params, const model::ModelConfig& cfg,
                    const data::SequenceDataset& ds, const std::vector<data::SplitExample>& examples,
                    const EvalOptions& opt) {
  if (examples.empty()) throw Error(ErrorCode::empty_dataset, "no examples to evaluate");
  if (opt.cutoffs.empty() || opt.ild_n == 0 || opt.coverage_n == 0) {
    throw Error(ErrorCode::invalid_input, "cutoffs must be positive and non-empty");
  }
  if (params.num_items() != ds.num_items) {
    throw Error(ErrorCode::invalid_input, "model and dataset disagree on the item count");
  }
  const auto h = sequence_vectors(params, cfg, examples);
  RankOptions ro;
  ro.keep_top = std::max(opt.ild_n, opt.coverage_n);
  ro.mask_seen = opt.mask_seen;
  const auto ranked = rank_from_vectors(h, params, examples, ro);
  const auto table = full_table(params);

  EvalReport rep;
  rep.split = examples.front().role == data::Role::valid ? "valid" : "test";
  rep.users = examples.size();
  rep.cutoffs = opt.cutoffs;
  rep.ild_n = opt.ild_n;
  rep.coverage_n = opt.coverage_n;
  rep.recall.assign(opt.cutoffs.size(), 0.0);
  rep.ndcg.assign(opt.cutoffs.size(), 0.0);
  rep.per_user.reserve(ranked.size());
  for (const auto& r : ranked) {
    UserMetrics m;
    m.user = r.user;
    m.rank = r.rank;
    const std::size_t len = r.user < ds.sequences.size() ? ds.sequences[r.user].size() : 0;
    m.train_length = len >= 2 ? len - 2 : 0;
    m.target_popularity = r.target < ds.item_popularity.size() ? ds.item_popularity[r.target] : 0;
    for (const std::size_t n : opt.cutoffs) {
      m.recall.push_back(recall_at(r.rank, n));
      m.ndcg.push_back(ndcg_at(r.rank, n));
    }
    const std::span<const ItemId> top(r.top);
    m.ild = intra_list_diversity(top.first(std::min(opt.ild_n, top.size())), table);
    m.coverage = coverage_at(top.first(std::min(opt.coverage_n, top.size())), ds.item_category);
    rep.per_user.push_back(std::move(m));
  }
  for (const auto& m : rep.per_user) {
    for (std::size_t c = 0; c < opt.cutoffs.size(); ++c) {
      rep.recall[c] += m.recall[c];
      rep.ndcg[c] += m.ndcg[c];
    }
    rep.ild += m.ild;
    rep.coverage += m.coverage;
  }
  const double users = static_cast<double>(rep.users);
  for (std::size_t c = 0; c < opt.cutoffs.size(); ++c) {
    rep.recall[c] /= users;
    rep.ndcg[c] /= users;
  }
  rep.ild /= users;
  rep.coverage /= users;

  rep.spectrum = degeneration_report(params, h);
  rep.ausc_item = rep.spectrum.item.ausc;
  rep.ausc_seq = rep.spectrum.sequence.ausc;
  if (opt.groups) {
    rep.length_groups = group_by_length(rep.per_user, opt.cutoffs.size());
    rep.popularity_groups = group_by_popularity(rep.per_user, opt.cutoffs.size());
  }
  return rep;
}

template <typename Real>
linalg::Matrix normalized_item_table(const model::ModelParams<Real>& params) {
  auto t = full_table(params);
  for (std::size_t r = 1; r < t.rows(); ++r) {
    auto row = t.row(r);
    double norm = 0.0;
    for (const double x : row) norm += x * x;
    norm = std::sqrt(norm);
    if (norm == 0.0) throw Error(ErrorCode::degenerate_matrix, "zero embedding for item " + std::to_string(r));
    for (double& x : row) x /= norm;
  }
  return t;
}

#define SEQREC_INSTANTIATE(R)                                                                                   \
  template std::vector<ItemId> rank_scores<R>(std::span<const R>);                                              \
  template std::size_t target_rank<R>(std::span<const R>, ItemId);                                              \
  template linalg::Matrix sequence_vectors<R>(const model::ModelParams<R>&, const model::ModelConfig&,          \
                                              const std::vector<data::SplitExample>&, std::size_t);             \
  template std::vector<UserRanking> rank_from_vectors<R>(const linalg::Matrix&, const model::ModelParams<R>&,   \
                                                         const std::vector<data::SplitExample>&,                \
                                                         const RankOptions&);                                   \
  template std::vector<UserRanking> rank_all_items<R>(const model::ModelParams<R>&, const model::ModelConfig&,  \
                                                      const std::vector<data::SplitExample>&,                   \
                                                      const RankOptions&);                                      \
  template Degeneration degeneration_report<R>(const model::ModelParams<R>&, const linalg::Matrix&);            \
  template EvalReport evaluate<R>(const model::ModelParams<R>&, const model::ModelConfig&,                      \
                                  const data::SequenceDataset&, const std::vector<data::SplitExample>&,         \
                                  const EvalOptions&);                                                          \
  template linalg::Matrix normalized_item_table<R>(const model::ModelParams<R>&);

SEQREC_INSTANTIATE(float)
SEQREC_INSTANTIATE(double)

}  // namespace seqrec::eval
