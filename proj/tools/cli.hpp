#pragma once
// Command-line front end. Everything runs in-process through run(), so the
// tests drive the same code path as the binary.

#include <cstddef>
#include <functional>
#include <ostream>
#include <string>
#include <vector>

#include "seqrec/data/dataset.hpp"
#include "seqrec/linalg/matrix.hpp"
#include "seqrec/model/config.hpp"
#include "seqrec/train/trainer.hpp"

namespace seqrec::cli {

/// Parses and executes one command line (without the program name).
/// Payloads go to `out`, diagnostics to `err`. Returns the process exit
/// status: 0 ok, 1 usage, 2 I/O, 3 data, 4 numerical / model state.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Greedy determinant maximization over the candidates' rows of a
/// unit-normalized item table; once the kernel turns singular the remaining
/// slots are filled in candidate order.
std::vector<data::ItemId> rerank_list(const std::vector<data::ItemId>& candidates, const linalg::Matrix& unit_table,
                                      std::size_t k);

struct SweepRow {
  double lambda = 0.0;
  double beta = 0.0;
  model::RegKind reg = model::RegKind::spectral;
  std::size_t best_epoch = 0;
  double valid_ndcg10 = 0.0;
  double ndcg10 = 0.0;
  double recall10 = 0.0;
  double ild10 = 0.0;
  double cov100 = 0.0;
  double ausc_item = 0.0;
  double ausc_seq = 0.0;
};

std::string sweep_header();
std::string sweep_csv_row(const SweepRow& row);

struct SweepSpec {
  model::ModelConfig base;  // lambda and beta are overwritten per point
  std::vector<double> lambdas = {0.0};
  std::vector<double> betas = {0.0};
  train::TrainOptions train;
  std::size_t jobs = 1;
};

/// Trains one model per (lambda, beta), sorted ascending, each from scratch
/// with the same seed, and evaluates it on the test split. `on_row` sees the
/// rows in grid order as soon as every earlier row is done.
std::vector<SweepRow> run_sweep(const data::SequenceDataset& ds, const SweepSpec& spec,
                                const std::function<void(const SweepRow&)>& on_row = {});

}  // namespace seqrec::cli
