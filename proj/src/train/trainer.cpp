#include "seqrec/train/trainer.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>

#include "json.hpp"
#include "seqrec/error.hpp"
#include "seqrec/eval/metrics.hpp"
#include "seqrec/linalg/spectrum.hpp"
#include "seqrec/model/objective.hpp"

namespace seqrec::train {

std::string epoch_json(const EpochRecord& rec) {
  const auto maybe = [](double v) { return std::isnan(v) ? nlohmann::ordered_json(nullptr) : nlohmann::ordered_json(v); };
  nlohmann::ordered_json j;
  j["schema_version"] = 1;
  j["epoch"] = rec.epoch;
  j["steps"] = rec.steps;
  j["L_rec"] = rec.rec;
  j["L_seq"] = maybe(rec.seq);
  j["L_item"] = maybe(rec.item);
  j["total"] = rec.total;
  j["ausc_M"] = rec.ausc_item;
  j["ausc_H"] = rec.ausc_seq;
  j["valid_ndcg@10"] = rec.valid_ndcg10;
  j["wall_time"] = rec.wall_seconds;
  return j.dump();
}

model::Batch make_batch(const std::vector<const data::TrainExample*>& rows, std::size_t len, std::size_t negatives,
                        const data::NegativeSampler& sampler, std::mt19937_64& rng) {
  model::Batch b;
  b.size = rows.size();
  b.len = len;
  b.negatives_per_pos = negatives;
  b.input.reserve(rows.size() * len);
  b.targets.reserve(rows.size() * len);
  b.negatives.assign(rows.size() * len * negatives, data::kPad);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const auto& ex = *rows[r];
    if (ex.input.size() != len || ex.targets.size() != len) {
      throw Error(ErrorCode::invalid_input, "training row length does not match the model window");
    }
    b.input.insert(b.input.end(), ex.input.begin(), ex.input.end());
    b.targets.insert(b.targets.end(), ex.targets.begin(), ex.targets.end());
    b.users.push_back(ex.user);
    for (std::size_t t = 0; t < len; ++t) {
      if (ex.targets[t] == data::kPad) continue;
      sampler.sample_into(ex.user, negatives, rng, b.negatives.data() + (r * len + t) * negatives);
    }
  }
  return b;
}

TrainResult train_model(const data::SequenceDataset& ds, const data::Split& split, const model::ModelConfig& cfg,
                        const TrainOptions& opt, const std::function<void(const EpochRecord&)>& on_epoch) {
  cfg.validate();
  if (ds.max_len != cfg.max_len) {
    throw Error(ErrorCode::invalid_input, "dataset window " + std::to_string(ds.max_len) +
                                              " differs from model window " + std::to_string(cfg.max_len));
  }
  if (opt.batch_size == 0) throw Error(ErrorCode::invalid_input, "batch size is 0");
  if (split.train.empty()) throw Error(ErrorCode::empty_dataset, "no training rows");
  if (split.valid.empty()) throw Error(ErrorCode::empty_dataset, "no validation rows");

  std::mt19937_64 rng(cfg.seed);
  auto params = model::init_params<float>(cfg, ds.num_items, rng);
  model::Adam<float> adam(params);
  const data::NegativeSampler sampler(ds);

  std::vector<const data::TrainExample*> order;
  order.reserve(split.train.size());
  for (const auto& ex : split.train) order.push_back(&ex);

  eval::RankOptions ro;
  ro.keep_top = 10;

  TrainResult res;
  res.params = params;
  std::vector<const data::TrainExample*> rows;
  for (std::size_t epoch = 1; epoch <= opt.epochs; ++epoch) {
    const auto start = std::chrono::steady_clock::now();
    std::shuffle(order.begin(), order.end(), rng);

    EpochRecord rec;
    rec.epoch = epoch;
    for (std::size_t i = 0; i < order.size(); i += opt.batch_size) {
      rows.assign(order.begin() + static_cast<std::ptrdiff_t>(i),
                  order.begin() + static_cast<std::ptrdiff_t>(std::min(order.size(), i + opt.batch_size)));
      const auto batch = make_batch(rows, cfg.max_len, cfg.negatives, sampler, rng);
      const auto parts = model::train_step(params, adam, cfg, batch, rng);
      rec.rec += parts.rec;
      rec.seq += parts.seq;
      rec.item += parts.item;
      rec.total += parts.total;
      ++rec.steps;
    }
    const double steps = static_cast<double>(rec.steps);
    rec.rec /= steps;
    rec.seq /= steps;  // stays NaN when the term is off
    rec.item /= steps;
    rec.total /= steps;

    const auto h = eval::sequence_vectors(params, cfg, split.valid);
    const auto ranked = eval::rank_from_vectors(h, params, split.valid, ro);
    double ndcg = 0.0;
    for (const auto& r : ranked) ndcg += eval::ndcg_at(r.rank, 10);
    rec.valid_ndcg10 = ndcg / static_cast<double>(ranked.size());
    rec.ausc_item = linalg::ausc(model::item_matrix(params));
    rec.ausc_seq = linalg::ausc(h);
    rec.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    res.history.push_back(rec);
    if (on_epoch) on_epoch(rec);
    if (rec.valid_ndcg10 > res.best_valid_ndcg10) {
      res.best_valid_ndcg10 = rec.valid_ndcg10;
      res.best_epoch = epoch;
      res.params = params;
    } else if (opt.patience > 0 && epoch - res.best_epoch >= opt.patience) {
      res.stopped_early = true;
      break;
    }
  }
  return res;
}

}  // namespace seqrec::train
