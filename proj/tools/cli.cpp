#include "cli.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "json.hpp"
#include "seqrec/dpp/diversity.hpp"
#include "seqrec/error.hpp"
#include "seqrec/eval/metrics.hpp"
#include "seqrec/model/checkpoint.hpp"

namespace seqrec::cli {
namespace {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;
using data::ItemId;

constexpr int kSchemaVersion = 1;

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// Relative output names land in the output directory.
fs::path resolve(const fs::path& out_dir, const std::string& name) {
  const fs::path p(name);
  return p.is_absolute() ? p : out_dir / p;
}

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::io_error, "cannot create " + dir.string() + ": " + ec.message());
}

std::ofstream open_out(const fs::path& path) {
  if (path.has_parent_path()) ensure_dir(path.parent_path());
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorCode::io_error, "cannot write " + path.string());
  return f;
}

void write_file(const fs::path& path, const std::string& text) {
  auto f = open_out(path);
  f << text;
  if (!f) throw Error(ErrorCode::io_error, "write failed for " + path.string());
}

data::Role parse_role(const std::string& s) {
  if (s == "test") return data::Role::test;
  if (s == "valid") return data::Role::valid;
  throw Error(ErrorCode::usage, "split must be test or valid");
}

const std::vector<data::SplitExample>& examples_for(const data::Split& sp, data::Role role) {
  return role == data::Role::valid ? sp.valid : sp.test;
}

struct ModelOptions {
  model::ModelConfig cfg;
  std::string reg = "spectral";
  train::TrainOptions train;

  void add_to(CLI::App* app, bool with_weights) {
    app->add_option("--dim", cfg.dim, "embedding size")->capture_default_str();
    app->add_option("--layers", cfg.num_layers, "attention blocks")->capture_default_str();
    app->add_option("--heads", cfg.num_heads, "attention heads")->capture_default_str();
    app->add_option("--dropout", cfg.dropout, "dropout rate")->capture_default_str();
    if (with_weights) {
      app->add_option("--lambda", cfg.lambda, "sequence-output regularizer weight")->capture_default_str();
      app->add_option("--beta", cfg.beta, "item-table regularizer weight")->capture_default_str();
    }
    app->add_option("--negatives", cfg.negatives, "negatives per target position")->capture_default_str();
    app->add_option("--lr", cfg.learning_rate, "Adam learning rate")->capture_default_str();
    app->add_option("--reg", reg, "regularizer: spectral, cos, euclid, none")
        ->check(CLI::IsMember({"spectral", "cos", "euclid", "none"}))
        ->capture_default_str();
    app->add_flag("--item-reg-in-batch", cfg.item_reg_in_batch, "item regularizer over batch items only");
    app->add_option("--epochs", train.epochs, "maximum epochs")->capture_default_str();
    app->add_option("--batch-size", train.batch_size, "training rows per step")->capture_default_str();
    app->add_option("--patience", train.patience, "epochs without validation gain before stopping (0 = off)")
        ->capture_default_str();
    app->add_option("--seed", cfg.seed, "random seed")->required();
  }

  model::ModelConfig resolved(const data::SequenceDataset& ds) const {
    auto c = cfg;
    c.reg = model::parse_reg_kind(reg);
    c.max_len = ds.max_len;
    c.validate();
    return c;
  }
};

json report_json(const eval::EvalReport& rep) { return json::parse(rep.to_json()); }

int cmd_synth(const data::SyntheticConfig& sc, const fs::path& out_path, std::ostream& out, std::ostream& err) {
  const auto log = data::generate_synthetic(sc);
  if (out_path.has_parent_path()) ensure_dir(out_path.parent_path());
  data::write_tsv(log.events, out_path);
  const double share = data::head_share(log.events);
  json j;
  j["schema_version"] = kSchemaVersion;
  j["events"] = log.events.size();
  j["users"] = sc.num_users;
  j["items"] = sc.num_items;
  j["head10_share"] = share;
  j["path"] = out_path.string();
  out << j.dump(2) << '\n';
  err << "wrote " << log.events.size() << " events to " << out_path.string() << "; head 10% of items take "
      << num(100.0 * share) << "% of events\n";
  return 0;
}

struct PrepareArgs {
  std::string input;
  std::string format = "tsv";
  bool header = false;
  std::size_t max_len = 20;
  std::size_t min_count = 5;
  std::string output = "dataset.bin";
  std::string stats = "stats.json";
};

int cmd_prepare(const PrepareArgs& a, const fs::path& out_dir, std::ostream& out, std::ostream& err) {
  const auto fmt = a.format == "csv" ? data::Format::csv : data::Format::tsv;
  const auto ing = data::ingest(a.input, fmt, a.header);
  if (ing.malformed) err << "skipped " << ing.malformed << " malformed rows of " << ing.rows << '\n';
  const auto kept = data::five_core_filter(ing.events, a.min_count);
  const auto ds = data::build_sequences(kept, a.max_len);
  const auto split = data::split_leave_one_out(ds);
  const auto bundle = resolve(out_dir, a.output);
  if (bundle.has_parent_path()) ensure_dir(bundle.parent_path());
  data::write_bundle(ds, bundle);
  const auto stats = data::stats_json(ds, ing.malformed, split.excluded);
  write_file(resolve(out_dir, a.stats), stats + "\n");
  out << stats << '\n';
  err << "bundle " << bundle.string() << ": " << ds.num_users() << " users, " << ds.num_items << " items\n";
  return 0;
}

struct TrainArgs {
  std::string data;
  std::string checkpoint = "model.ckpt";
  std::string metrics = "metrics.jsonl";
};

int cmd_train(const TrainArgs& a, const ModelOptions& mo, const fs::path& out_dir, bool quiet, std::ostream& out,
              std::ostream& err) {
  const auto ds = data::read_bundle(a.data);
  const auto split = data::split_leave_one_out(ds);
  const auto cfg = mo.resolved(ds);
  auto metrics = open_out(resolve(out_dir, a.metrics));
  const auto res = train::train_model(ds, split, cfg, mo.train, [&](const train::EpochRecord& r) {
    metrics << train::epoch_json(r) << '\n';
    metrics.flush();
    if (!quiet) {
      err << "epoch " << r.epoch << " loss " << num(r.total) << " valid ndcg@10 " << num(r.valid_ndcg10) << '\n';
    }
  });
  const auto ckpt = resolve(out_dir, a.checkpoint);
  model::save_checkpoint(res.params, cfg, ckpt);

  json j;
  j["schema_version"] = kSchemaVersion;
  j["seed"] = cfg.seed;
  j["lambda"] = cfg.lambda;
  j["beta"] = cfg.beta;
  j["reg"] = std::string(model::to_string(cfg.reg));
  j["best_epoch"] = res.best_epoch;
  j["epochs_run"] = res.history.size();
  j["stopped_early"] = res.stopped_early;
  j["best_valid_ndcg@10"] = res.best_valid_ndcg10;
  j["test"] = report_json(eval::evaluate(res.params, cfg, ds, split.test));
  out << j.dump(2) << '\n';
  err << "checkpoint " << ckpt.string() << " (epoch " << res.best_epoch << ")\n";
  return 0;
}

struct EvalArgs {
  std::string data;
  std::string checkpoint;
  std::string split = "test";
  std::vector<std::size_t> topk = {5, 10, 40};
  bool groups = false;
  bool spectrum = false;
  bool mask_seen = false;
  std::string csv;
  std::string output;
};

void write_spectra(const eval::Degeneration& deg, const fs::path& out_dir, std::ostream& err) {
  const auto item = out_dir / "spectrum_item.csv";
  const auto seq = out_dir / "spectrum_seq.csv";
  ensure_dir(out_dir);
  write_file(item, linalg::spectrum_csv(deg.item));
  write_file(seq, linalg::spectrum_csv(deg.sequence));
  err << "spectra " << item.string() << ", " << seq.string() << '\n';
}

int cmd_eval(const EvalArgs& a, const fs::path& out_dir, bool spectrum_only, std::ostream& out, std::ostream& err) {
  const auto ds = data::read_bundle(a.data);
  const auto ck = model::load_checkpoint<float>(a.checkpoint);
  if (ck.config.max_len != ds.max_len) {
    throw Error(ErrorCode::invalid_input, "checkpoint window differs from the dataset window");
  }
  const auto split = data::split_leave_one_out(ds);
  const auto& ex = examples_for(split, parse_role(a.split));
  if (spectrum_only) {
    const auto h = eval::sequence_vectors(ck.params, ck.config, ex);
    const auto deg = eval::degeneration_report(ck.params, h);
    write_spectra(deg, out_dir, err);
    json j;
    j["schema_version"] = kSchemaVersion;
    j["split"] = a.split;
    j["ausc_item"] = deg.item.ausc;
    j["ausc_seq"] = deg.sequence.ausc;
    out << j.dump(2) << '\n';
    return 0;
  }
  eval::EvalOptions opt;
  opt.cutoffs = a.topk;
  opt.groups = a.groups;
  opt.mask_seen = a.mask_seen;
  const auto rep = eval::evaluate(ck.params, ck.config, ds, ex, opt);
  const auto text = rep.to_json();
  out << text << '\n';
  if (!a.output.empty()) write_file(resolve(out_dir, a.output), text + "\n");
  if (!a.csv.empty()) write_file(resolve(out_dir, a.csv), rep.to_csv());
  if (a.spectrum) write_spectra(rep.spectrum, out_dir, err);
  return 0;
}

struct SweepArgs {
  std::string data;
  std::vector<double> lambdas = {0.0};
  std::vector<double> betas = {0.0};
  std::size_t jobs = 1;
  std::string output = "sweep.csv";
};

int cmd_sweep(const SweepArgs& a, const ModelOptions& mo, const fs::path& out_dir, std::ostream& out,
              std::ostream& err) {
  const auto ds = data::read_bundle(a.data);
  SweepSpec spec;
  spec.base = mo.resolved(ds);
  spec.lambdas = a.lambdas;
  spec.betas = a.betas;
  spec.train = mo.train;
  spec.jobs = a.jobs;
  const auto path = resolve(out_dir, a.output);
  auto csv = open_out(path);
  csv << sweep_header() << '\n';
  csv.flush();
  out << sweep_header() << '\n';
  run_sweep(ds, spec, [&](const SweepRow& row) {
    const auto line = sweep_csv_row(row);
    csv << line << '\n';
    csv.flush();
    out << line << '\n';
    out.flush();
    err << "lambda " << num(row.lambda) << " beta " << num(row.beta) << " done\n";
  });
  err << "sweep table " << path.string() << '\n';
  return 0;
}

struct RerankArgs {
  std::string data;
  std::string checkpoint;
  std::string split = "test";
  std::size_t candidates = 100;
  std::size_t k = 10;
  std::string output;
};

int cmd_rerank(const RerankArgs& a, const fs::path& out_dir, std::ostream& out, std::ostream& err) {
  if (a.k == 0 || a.candidates < a.k) throw Error(ErrorCode::usage, "need 0 < k <= candidates");
  const auto ds = data::read_bundle(a.data);
  const auto ck = model::load_checkpoint<float>(a.checkpoint);
  if (ck.config.max_len != ds.max_len) {
    throw Error(ErrorCode::invalid_input, "checkpoint window differs from the dataset window");
  }
  const auto split = data::split_leave_one_out(ds);
  const auto& ex = examples_for(split, parse_role(a.split));
  if (ex.empty()) throw Error(ErrorCode::empty_dataset, "no users to re-rank");
  eval::RankOptions ro;
  ro.keep_top = a.candidates;
  const auto ranked = eval::rank_all_items(ck.params, ck.config, ex, ro);
  const auto unit = eval::normalized_item_table(ck.params);
  linalg::Matrix table(unit.rows(), unit.cols());
  for (std::size_t i = 0; i < table.size(); ++i) table.data()[i] = ck.params.item().data[i];

  json lists = json::array();
  double ild_before = 0.0, ild_after = 0.0, hit_before = 0.0, hit_after = 0.0;
  for (const auto& r : ranked) {
    const std::size_t k = std::min(a.k, r.top.size());
    const auto after = rerank_list(r.top, unit, k);
    const std::vector<ItemId> before(r.top.begin(), r.top.begin() + static_cast<std::ptrdiff_t>(k));
    ild_before += eval::intra_list_diversity(before, table);
    ild_after += eval::intra_list_diversity(after, table);
    hit_before += std::find(before.begin(), before.end(), r.target) != before.end() ? 1.0 : 0.0;
    hit_after += std::find(after.begin(), after.end(), r.target) != after.end() ? 1.0 : 0.0;

    json u;
    u["user"] = ds.user_ids.at(r.user);
    auto names = [&](const std::vector<ItemId>& ids) {
      json arr = json::array();
      for (const ItemId v : ids) arr.push_back(ds.item_ids.at(v));
      return arr;
    };
    u["before"] = names(before);
    u["after"] = names(after);
    lists.push_back(std::move(u));
  }
  const double n = static_cast<double>(ranked.size());
  json j;
  j["schema_version"] = kSchemaVersion;
  j["split"] = a.split;
  j["candidates"] = a.candidates;
  j["k"] = a.k;
  j["users"] = ranked.size();
  j["ild_before"] = ild_before / n;
  j["ild_after"] = ild_after / n;
  j["recall_before"] = hit_before / n;
  j["recall_after"] = hit_after / n;
  j["lists"] = std::move(lists);
  const auto text = j.dump(2);
  out << text << '\n';
  if (!a.output.empty()) write_file(resolve(out_dir, a.output), text + "\n");
  err << "ild@" << a.k << " " << num(ild_before / n) << " -> " << num(ild_after / n) << '\n';
  return 0;
}

}  // namespace

std::vector<ItemId> rerank_list(const std::vector<ItemId>& candidates, const linalg::Matrix& unit_table,
                                std::size_t k) {
  k = std::min(k, candidates.size());
  if (k == 0) return {};
  linalg::Matrix feats(candidates.size(), unit_table.cols());
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    if (candidates[i] >= unit_table.rows()) throw Error(ErrorCode::invalid_input, "candidate outside the table");
    const auto src = unit_table.row(candidates[i]);
    std::copy(src.begin(), src.end(), feats.row(i).begin());
  }
  const auto sel = dpp::greedy_select(dpp::gram_kernel(feats), k);
  std::vector<ItemId> out;
  for (const std::size_t i : sel.selected()) out.push_back(candidates[i]);
  // Singular kernel: the remaining slots follow the candidate order.
  for (std::size_t i = 0; out.size() < k && i < candidates.size(); ++i) {
    if (!sel.contains(i)) out.push_back(candidates[i]);
  }
  return out;
}

std::string sweep_header() {
  return "lambda,beta,reg,best_epoch,valid_ndcg@10,ndcg@10,recall@10,ild@10,cov@100,ausc_item,ausc_seq";
}

std::string sweep_csv_row(const SweepRow& r) {
  std::ostringstream os;
  os << num(r.lambda) << ',' << num(r.beta) << ',' << model::to_string(r.reg) << ',' << r.best_epoch << ','
     << num(r.valid_ndcg10) << ',' << num(r.ndcg10) << ',' << num(r.recall10) << ',' << num(r.ild10) << ','
     << num(r.cov100) << ',' << num(r.ausc_item) << ',' << num(r.ausc_seq);
  return os.str();
}

std::vector<SweepRow> run_sweep(const data::SequenceDataset& ds, const SweepSpec& spec,
                                const std::function<void(const SweepRow&)>& on_row) {
  if (spec.lambdas.empty() || spec.betas.empty()) throw Error(ErrorCode::usage, "sweep grids must be non-empty");
  auto lambdas = spec.lambdas, betas = spec.betas;
  std::sort(lambdas.begin(), lambdas.end());
  lambdas.erase(std::unique(lambdas.begin(), lambdas.end()), lambdas.end());
  std::sort(betas.begin(), betas.end());
  betas.erase(std::unique(betas.begin(), betas.end()), betas.end());
  std::vector<std::pair<double, double>> grid;
  for (const double l : lambdas)
    for (const double b : betas) grid.emplace_back(l, b);

  const auto split = data::split_leave_one_out(ds);
  const auto point = [&](std::size_t i) {
    auto cfg = spec.base;
    cfg.lambda = grid[i].first;
    cfg.beta = grid[i].second;
    const auto res = train::train_model(ds, split, cfg, spec.train);
    eval::EvalOptions opt;
    opt.cutoffs = {10};
    const auto rep = eval::evaluate(res.params, cfg, ds, split.test, opt);
    SweepRow row;
    row.lambda = cfg.lambda;
    row.beta = cfg.beta;
    row.reg = cfg.reg;
    row.best_epoch = res.best_epoch;
    row.valid_ndcg10 = res.best_valid_ndcg10;
    row.ndcg10 = rep.ndcg[0];
    row.recall10 = rep.recall[0];
    row.ild10 = rep.ild;
    row.cov100 = rep.coverage;
    row.ausc_item = rep.ausc_item;
    row.ausc_seq = rep.ausc_seq;
    return row;
  };

  std::vector<SweepRow> rows(grid.size());
  if (spec.jobs <= 1 || grid.size() == 1) {
    for (std::size_t i = 0; i < grid.size(); ++i) {
      rows[i] = point(i);
      if (on_row) on_row(rows[i]);
    }
    return rows;
  }

  std::vector<char> done(grid.size(), 0);
  std::size_t emitted = 0;
  std::atomic<std::size_t> next{0};
  std::mutex mu;
  std::exception_ptr failure;
  const auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= grid.size()) return;
      try {
        auto row = point(i);
        std::lock_guard<std::mutex> lock(mu);
        rows[i] = row;
        done[i] = 1;
        // Rows leave in grid order regardless of completion order.
        while (emitted < grid.size() && done[emitted] && !failure) {
          if (on_row) on_row(rows[emitted]);
          ++emitted;
        }
      } catch (...) {
        std::lock_guard<std::mutex> lock(mu);
        if (!failure) failure = std::current_exception();
        next = grid.size();
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  for (std::size_t t = 0; t < std::min(spec.jobs, grid.size()); ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
  return rows;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Sequential recommendation with singular-spectrum smoothing"};
  app.set_config("--config", "", "INI file; sections are subcommand names");
  app.require_subcommand(1);
  std::string out_dir = ".";
  bool quiet = false;
  app.add_option("--out-dir", out_dir, "directory for outputs")->envname("SEQREC_OUT_DIR")->capture_default_str();
  app.add_flag("-q,--quiet", quiet, "no per-epoch progress on stderr");

  data::SyntheticConfig sc;
  std::string synth_out = "synthetic.tsv";
  auto* synth = app.add_subcommand("synth", "write a synthetic interaction log");
  synth->add_option("--users", sc.num_users)->check(CLI::PositiveNumber)->capture_default_str();
  synth->add_option("--items", sc.num_items)->check(CLI::PositiveNumber)->capture_default_str();
  synth->add_option("--zipf", sc.zipf_s, "popularity exponent")->capture_default_str();
  synth->add_option("--clusters", sc.cluster_count)->check(CLI::PositiveNumber)->capture_default_str();
  synth->add_option("--seed", sc.seed)->capture_default_str();
  synth->add_option("--min-len", sc.min_len)->capture_default_str();
  synth->add_option("--max-len", sc.max_len)->capture_default_str();
  synth->add_option("-o,--output", synth_out)->capture_default_str();

  PrepareArgs pa;
  auto* prepare = app.add_subcommand("prepare", "ingest, 5-core filter, sequence, split, write bundle + stats");
  prepare->add_option("-i,--input", pa.input)->required();
  prepare->add_option("--format", pa.format)->check(CLI::IsMember({"tsv", "csv"}))->capture_default_str();
  prepare->add_flag("--header", pa.header, "first row is a header");
  prepare->add_option("--max-len", pa.max_len, "sequence window")->check(CLI::PositiveNumber)->capture_default_str();
  prepare->add_option("--min-count", pa.min_count, "k of the k-core filter")->capture_default_str();
  prepare->add_option("-o,--output", pa.output)->capture_default_str();
  prepare->add_option("--stats", pa.stats)->capture_default_str();

  TrainArgs ta;
  ModelOptions train_mo;
  auto* trn = app.add_subcommand("train", "train one model, keep the best validation checkpoint");
  trn->add_option("-d,--data", ta.data, "dataset bundle")->required();
  train_mo.add_to(trn, true);
  trn->add_option("--checkpoint", ta.checkpoint)->capture_default_str();
  trn->add_option("--metrics", ta.metrics, "epoch metrics, one JSON object per line")->capture_default_str();

  EvalArgs ea;
  auto* evl = app.add_subcommand("eval", "all-items ranking metrics on a split");
  evl->add_option("-d,--data", ea.data)->required();
  evl->add_option("-c,--checkpoint", ea.checkpoint)->required();
  evl->add_option("--split", ea.split)->check(CLI::IsMember({"test", "valid"}))->capture_default_str();
  evl->add_option("--topk", ea.topk, "cutoffs, comma separated")->delimiter(',')->check(CLI::PositiveNumber);
  evl->add_flag("--groups", ea.groups, "length and popularity breakdowns");
  evl->add_flag("--spectrum", ea.spectrum, "write spectrum_item.csv and spectrum_seq.csv");
  evl->add_flag("--mask-seen", ea.mask_seen, "exclude items of the input sequence from the ranking");
  evl->add_option("--csv", ea.csv, "also write a flat metric,value CSV");
  evl->add_option("-o,--output", ea.output, "also write the JSON report");

  EvalArgs sa;
  auto* spec = app.add_subcommand("spectrum", "only the singular spectrum curves (eval --spectrum-only)");
  spec->add_option("-d,--data", sa.data)->required();
  spec->add_option("-c,--checkpoint", sa.checkpoint)->required();
  spec->add_option("--split", sa.split)->check(CLI::IsMember({"test", "valid"}))->capture_default_str();

  SweepArgs wa;
  ModelOptions sweep_mo;
  auto* swp = app.add_subcommand("sweep", "train and evaluate one model per (lambda, beta)");
  swp->add_option("-d,--data", wa.data)->required();
  sweep_mo.add_to(swp, false);
  swp->add_option("--lambdas", wa.lambdas, "comma separated")->delimiter(',');
  swp->add_option("--betas", wa.betas, "comma separated")->delimiter(',');
  swp->add_option("--jobs", wa.jobs, "grid points trained concurrently")->capture_default_str();
  swp->add_option("-o,--output", wa.output)->capture_default_str();

  RerankArgs ra;
  auto* rer = app.add_subcommand("rerank", "greedy determinant re-ranking of each user's top candidates");
  rer->add_option("-d,--data", ra.data)->required();
  rer->add_option("-c,--checkpoint", ra.checkpoint)->required();
  rer->add_option("--split", ra.split)->check(CLI::IsMember({"test", "valid"}))->capture_default_str();
  rer->add_option("--candidates", ra.candidates)->capture_default_str();
  rer->add_option("-k", ra.k, "list length")->capture_default_str();
  rer->add_option("-o,--output", ra.output);

  std::vector<std::string> argv_store = {"seqrec"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& s : argv_store) argv.push_back(s.data());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 1;
  }

  try {
    const fs::path dir(out_dir);
    if (*synth) return cmd_synth(sc, resolve(dir, synth_out), out, err);
    if (*prepare) return cmd_prepare(pa, dir, out, err);
    if (*trn) return cmd_train(ta, train_mo, dir, quiet, out, err);
    if (*evl) return cmd_eval(ea, dir, false, out, err);
    if (*spec) return cmd_eval(sa, dir, true, out, err);
    if (*swp) return cmd_sweep(wa, sweep_mo, dir, out, err);
    if (*rer) return cmd_rerank(ra, dir, out, err);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_code(e.code());
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return exit_code(ErrorCode::io_error);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return exit_code(ErrorCode::numerical_failure);
  }
  return 1;
}

}  // namespace seqrec::cli
