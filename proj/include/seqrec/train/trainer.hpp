#pragma once
// Epoch loop: shuffled mini-batches with fresh negatives per target position,
// validation NDCG@10 after every epoch, best-so-far parameters kept.

#include <cstddef>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "seqrec/data/dataset.hpp"
#include "seqrec/model/config.hpp"
#include "seqrec/model/encoder.hpp"
#include "seqrec/model/params.hpp"

namespace seqrec::train {

struct TrainOptions {
  std::size_t epochs = 200;
  std::size_t batch_size = 128;
  /// Stop after this many epochs without a better validation NDCG@10; 0 never stops early.
  std::size_t patience = 50;
};

struct EpochRecord {
  std::size_t epoch = 0;  // 1-based
  std::size_t steps = 0;
  double rec = 0.0;       // batch means over the epoch
  double seq = 0.0;       // NaN when lambda == 0
  double item = 0.0;      // NaN when beta == 0
  double total = 0.0;
  double ausc_item = 0.0;
  double ausc_seq = 0.0;  // over validation h_last
  double valid_ndcg10 = 0.0;
  double wall_seconds = 0.0;
};

/// One JSON object per line; L_seq / L_item are null when their weight is 0.
std::string epoch_json(const EpochRecord& rec);

struct TrainResult {
  model::ModelParams<float> params;  // best by validation NDCG@10
  std::size_t best_epoch = 0;
  double best_valid_ndcg10 = -1.0;
  bool stopped_early = false;
  std::vector<EpochRecord> history;
};

/// Builds a batch from training rows: negatives_per_pos = cfg.negatives,
/// sampled from items the user never interacted with; kPad where there is
/// no target.
model::Batch make_batch(const std::vector<const data::TrainExample*>& rows, std::size_t len, std::size_t negatives,
                        const data::NegativeSampler& sampler, std::mt19937_64& rng);

/// Trains from a fresh initialization seeded by cfg.seed. The dataset's
/// max_len must equal cfg.max_len.
TrainResult train_model(const data::SequenceDataset& ds, const data::Split& split, const model::ModelConfig& cfg,
                        const TrainOptions& opt, const std::function<void(const EpochRecord&)>& on_epoch = {});

}  // namespace seqrec::train
