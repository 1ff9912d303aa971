// Acceptance suite. Prints one PASS/FAIL line per criterion and exits non-zero
// if any criterion fails. Pass criterion numbers as arguments to run a subset.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <ctime>
#include <functional>
#include <limits>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "model_oracles.hpp"
#include "seqrec/dpp/diversity.hpp"
#include "seqrec/error.hpp"
#include "seqrec/eval/metrics.hpp"
#include "seqrec/linalg/spectrum.hpp"
#include "seqrec/linalg/svd.hpp"
#include "test_util.hpp"

namespace {

using namespace seqrec;
using data::ItemId;
using linalg::Matrix;
namespace st = seqrec::testing;

// Tolerances and budgets, fixed here and nowhere else.
constexpr double kSvdTol = 1e-10;
constexpr double kLogdetTol = 1e-8;
constexpr double kSmoothGradTol = 1e-4;
constexpr double kFdStep = 1e-5;
constexpr double kDetLemmaTol = 1e-9;
constexpr double kModelGradTol = 1e-3;
constexpr double kBalanceRatio = 0.95;
constexpr double kSpectrumGain = 1.10;

// Shared setup of the trend criteria.
constexpr double kTrendLambda = 0.1;
constexpr std::uint64_t kTrendSeed = 1;
constexpr std::size_t kTrendEpochs = 60;
const std::vector<double> kBetaGrid = {0.0, 1e-5, 1e-4, 1e-3};
constexpr double kLargeBeta = 1e-1;

struct Outcome {
  bool pass = true;
  std::string detail;
};

double cpu_seconds() { return static_cast<double>(std::clock()) / CLOCKS_PER_SEC; }

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

Matrix reconstruct(const linalg::SvdResult& f) {
  Matrix us = f.u;
  for (std::size_t i = 0; i < us.rows(); ++i)
    for (std::size_t j = 0; j < us.cols(); ++j) us(i, j) *= f.sigma[j];
  return st::naive_matmul(us, f.v.transposed());
}

double orthonormality_error(const Matrix& q) {
  const Matrix g = st::naive_matmul(q.transposed(), q);
  return linalg::max_abs(g - Matrix::identity(g.rows()));
}

Outcome svd_correctness() {
  std::mt19937_64 rng(101);
  std::uniform_int_distribution<std::size_t> dim(1, 64);
  double worst_rec = 0.0, worst_orth = 0.0;
  bool descending = true;
  for (int trial = 0; trial < 200; ++trial) {
    const Matrix a = st::random_matrix(dim(rng), dim(rng), rng, 2.0);
    const auto f = linalg::svd(a);
    worst_rec = std::max(worst_rec, (reconstruct(f) - a).frobenius_norm() / a.frobenius_norm());
    worst_orth = std::max({worst_orth, orthonormality_error(f.u), orthonormality_error(f.v)});
    for (std::size_t i = 0; i + 1 < f.sigma.size(); ++i) descending = descending && f.sigma[i] >= f.sigma[i + 1];
    descending = descending && f.sigma.back() >= 0.0;
  }
  return {worst_rec <= kSvdTol && worst_orth <= kSvdTol && descending,
          "max reconstruction " + fmt(worst_rec) + ", max orthonormality " + fmt(worst_orth) +
              (descending ? ", descending" : ", NOT descending")};
}

Outcome logdet_identity() {
  std::mt19937_64 rng(102);
  std::uniform_int_distribution<std::size_t> cols(1, 24);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = cols(rng);
    const std::size_t m = n + cols(rng);  // tall Gaussian: full column rank
    const auto [chol, spec] = dpp::logdet_vs_spectrum(st::random_matrix(m, n, rng));
    worst = std::max(worst, std::fabs(chol - spec));
  }
  return {worst <= kLogdetTol, "max |logdet - sum 2 log sigma| " + fmt(worst)};
}

// Random matrix whose adjacent singular values differ by at least `gap`.
Matrix separated_matrix(std::size_t m, std::size_t n, double gap, std::mt19937_64& rng) {
  for (;;) {
    Matrix a = st::random_matrix(m, n, rng);
    const auto s = linalg::singular_values(a);
    bool ok = true;
    for (std::size_t i = 0; i + 1 < s.size(); ++i) ok = ok && (s[i] - s[i + 1] >= gap);
    if (ok) return a;
  }
}

Outcome smoothing_gradient() {
  const auto f = [](const Matrix& x) { return linalg::smoothing_loss(x); };
  std::mt19937_64 rng(103);
  double worst = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const Matrix a = separated_matrix(8, 5, 1e-2, rng);
    worst = std::max(worst, st::relative_error(linalg::smoothing_loss_grad(a), st::finite_difference(f, a, kFdStep)));
  }
  const double d[2] = {3, 4};
  const Matrix g = linalg::smoothing_loss_grad(Matrix::diagonal(d));
  const Matrix expected{{-0.032, 0.0}, {0.0, 0.024}};
  const double diag_err = st::relative_error(g, expected);
  const double diag_fd = st::relative_error(g, st::finite_difference(f, Matrix::diagonal(d), kFdStep));
  return {worst <= kSmoothGradTol && diag_err <= kSmoothGradTol && diag_fd <= kSmoothGradTol,
          "max rel err " + fmt(worst) + ", diag(3,4) vs analytic " + fmt(diag_err) + ", vs fd " + fmt(diag_fd)};
}

Outcome smoothing_bound() {
  std::mt19937_64 rng(104);
  std::uniform_int_distribution<std::size_t> dim(2, 32);
  std::uniform_real_distribution<double> scale(0.01, 100.0);
  std::size_t violations = 0;
  double min_gap = std::numeric_limits<double>::infinity();
  for (int trial = 0; trial < 1000; ++trial) {
    const Matrix a = st::random_matrix(dim(rng), dim(rng), rng, scale(rng));
    const double lhs = -linalg::smoothing_loss(a);
    const double rhs = linalg::ausc(a);
    violations += lhs <= rhs ? 0 : 1;
    min_gap = std::min(min_gap, rhs - lhs);
  }
  return {violations == 0, std::to_string(violations) + " violations, min ausc - (-loss) " + fmt(min_gap)};
}

// Exhaustive per-step argmax through direct LU determinants.
std::vector<std::size_t> brute_force_greedy(const dpp::KernelMatrix& k, std::size_t target) {
  std::vector<std::size_t> chosen;
  while (chosen.size() < target) {
    double best = -std::numeric_limits<double>::infinity();
    std::size_t best_j = k.size();
    for (std::size_t j = 0; j < k.size(); ++j) {
      if (std::find(chosen.begin(), chosen.end(), j) != chosen.end()) continue;
      auto trial = chosen;
      trial.push_back(j);
      const double det = st::lu_determinant(st::principal_minor(k.k, trial));
      if (det > best) {
        best = det;
        best_j = j;
      }
    }
    if (!(best > dpp::kSingularTol)) break;
    chosen.push_back(best_j);
  }
  return chosen;
}

Outcome determinant_lemma() {
  std::mt19937_64 rng(105);
  double worst = 0.0;
  std::size_t checks = 0;
  for (int pool = 0; pool < 3; ++pool) {
    // 16-dimensional rows of norm about one keep all 12-item minors well
    // conditioned with determinants of order one.
    const auto k = dpp::gram_kernel(st::random_matrix(12, 16, rng, 0.25));
    for (std::uint32_t mask = 0; mask < (1u << 12); ++mask) {
      std::vector<std::size_t> ys;
      for (std::size_t i = 0; i < 12; ++i)
        if (mask >> i & 1u) ys.push_back(i);
      const auto sel = dpp::GreedySelection::from_items(k, ys);
      for (std::size_t j = 0; j < 12; ++j) {
        if (mask >> j & 1u) continue;
        auto expanded = ys;
        expanded.push_back(j);
        const double direct = st::lu_determinant(st::principal_minor(k.k, expanded));
        worst = std::max(worst, std::fabs(dpp::det_after_add(k, sel, j) - direct));
        ++checks;
      }
    }
  }
  std::size_t greedy_mismatch = 0, greedy_runs = 0;
  std::uniform_int_distribution<std::size_t> pool_size(2, 10);
  for (int trial = 0; trial < 200; ++trial) {
    // At least as many feature columns as items: full rank, so every step's
    // argmax is well defined and never a rounding-noise comparison.
    const std::size_t n = pool_size(rng);
    const std::size_t dim = n + std::uniform_int_distribution<std::size_t>(0, 4)(rng);
    const auto k = dpp::gram_kernel(st::random_matrix(n, dim, rng));
    const std::size_t target = std::uniform_int_distribution<std::size_t>(1, n)(rng);
    greedy_mismatch += dpp::greedy_select(k, target).selected() == brute_force_greedy(k, target) ? 0 : 1;
    ++greedy_runs;
  }
  return {worst <= kDetLemmaTol && greedy_mismatch == 0,
          std::to_string(checks) + " subset extensions, max |lemma - direct| " + fmt(worst) + "; greedy " +
              std::to_string(greedy_mismatch) + "/" + std::to_string(greedy_runs) + " mismatches"};
}

Outcome model_gradient() {
  const auto cfg = st::tiny_config(0.1, 0.1);
  std::mt19937_64 rng(106);
  auto p = model::init_params<double>(cfg, 12, rng);
  st::randomize(p, rng);
  const auto batch = st::random_batch(5, cfg.max_len, 12, 2, rng);
  const auto res = st::check_gradients(p, cfg, batch);
  return {res.worst <= kModelGradTol, std::to_string(res.rel_error.size()) + " tensors, worst " + res.worst_tensor +
                                          " rel err " + fmt(res.worst)};
}

Outcome causality() {
  model::ModelConfig cfg;
  cfg.dim = 8;
  cfg.max_len = 7;
  cfg.num_layers = 2;
  cfg.num_heads = 2;
  cfg.dropout = 0.0;
  std::mt19937_64 rng(107);
  auto p = model::init_params<double>(cfg, 40, rng);
  st::randomize(p, rng);
  std::uniform_int_distribution<ItemId> item(0, 40);
  std::size_t broken = 0;
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t batch = 4;
    std::vector<ItemId> in(batch * cfg.max_len);
    for (auto& v : in) v = item(rng);
    const auto base = model::forward(p, cfg, in, batch, false);
    const std::size_t t = static_cast<std::size_t>(trial) % cfg.max_len;
    auto changed = in;
    for (std::size_t b = 0; b < batch; ++b)
      for (std::size_t j = t + 1; j < cfg.max_len; ++j) changed[b * cfg.max_len + j] = item(rng);
    const auto out = model::forward(p, cfg, changed, batch, false);
    for (std::size_t b = 0; b < batch; ++b)
      for (std::size_t j = 0; j <= t; ++j)
        broken += std::memcmp(base.at(b, j), out.at(b, j), cfg.dim * sizeof(double)) == 0 ? 0 : 1;
  }
  return {broken == 0, std::to_string(broken) + " prefix positions changed over 50 batches"};
}

Outcome ranking_oracle() {
  // No encoder layers and small integer tables: every score is an exact
  // integer, so ties are common and the brute force needs no tolerance.
  model::ModelConfig cfg;
  cfg.dim = 4;
  cfg.max_len = 5;
  cfg.num_layers = 0;
  const std::uint32_t items = 100;
  std::mt19937_64 rng(108);
  std::uniform_int_distribution<int> small(-2, 2);
  model::ModelParams<double> p(cfg, items);
  for (std::size_t i = p.item().cols; i < p.item().size(); ++i) p.item().data[i] = small(rng);
  for (auto& v : p.pos().data) v = small(rng);

  const std::size_t users = 50;
  std::uniform_int_distribution<ItemId> item(1, items);
  std::vector<data::SplitExample> ex(users);
  for (std::size_t u = 0; u < users; ++u) {
    ex[u].user = static_cast<std::uint32_t>(u);
    ex[u].input.assign(cfg.max_len, data::kPad);
    for (std::size_t t = u % 3; t < cfg.max_len; ++t) ex[u].input[t] = item(rng);
    ex[u].target = item(rng);
  }
  eval::RankOptions opt;
  opt.keep_top = items;
  const auto ranked = eval::rank_all_items(p, cfg, ex, opt);

  std::size_t mismatches = 0, ties = 0;
  for (std::size_t u = 0; u < users; ++u) {
    const ItemId last = ex[u].input.back();
    std::vector<double> scores(items);
    for (ItemId v = 1; v <= items; ++v) {
      double s = 0.0;
      for (std::size_t c = 0; c < cfg.dim; ++c)
        s += (p.item().row(last)[c] + p.pos().row(cfg.max_len - 1)[c]) * p.item().row(v)[c];
      scores[v - 1] = s;
    }
    std::vector<ItemId> order(items);
    std::iota(order.begin(), order.end(), ItemId{1});
    std::stable_sort(order.begin(), order.end(), [&](ItemId a, ItemId b) { return scores[a - 1] > scores[b - 1]; });
    const std::size_t rank =
        static_cast<std::size_t>(std::find(order.begin(), order.end(), ex[u].target) - order.begin()) + 1;
    ties += static_cast<std::size_t>(std::count(scores.begin(), scores.end(), scores[ex[u].target - 1])) - 1;
    bool ok = ranked[u].rank == rank && ranked[u].top == order;
    for (const std::size_t n : {1u, 5u, 10u, 20u, 40u, 100u}) {
      ok = ok && eval::recall_at(ranked[u].rank, n) == (rank <= n ? 1.0 : 0.0);
      ok = ok && eval::ndcg_at(ranked[u].rank, n) == (rank <= n ? 1.0 / std::log2(static_cast<double>(rank) + 1.0) : 0.0);
    }
    mismatches += ok ? 0 : 1;
  }
  return {mismatches == 0 && ties > 0,
          std::to_string(mismatches) + "/" + std::to_string(users) + " users differ, " + std::to_string(ties) +
              " tied scores at targets"};
}

data::SequenceDataset trend_dataset() {
  data::SyntheticConfig sc;  // 2000 users, 500 items, Zipf 1.2, 8 clusters
  sc.seed = kTrendSeed;
  return data::build_sequences(data::five_core_filter(data::generate_synthetic(sc).events), 20);
}

model::ModelConfig trend_model() {
  model::ModelConfig cfg;
  cfg.max_len = 20;
  cfg.seed = kTrendSeed;
  return cfg;
}

struct TrendRuns {
  std::vector<cli::SweepRow> rows;  // kBetaGrid followed by kLargeBeta
  double cpu = 0.0;
};

const TrendRuns& trend_runs() {
  static const TrendRuns runs = [] {
    TrendRuns r;
    const double start = cpu_seconds();
    const auto ds = trend_dataset();
    cli::SweepSpec spec;
    spec.base = trend_model();
    spec.lambdas = {kTrendLambda};
    spec.betas = kBetaGrid;
    spec.betas.push_back(kLargeBeta);
    spec.train.epochs = kTrendEpochs;
    r.rows = cli::run_sweep(ds, spec, [](const cli::SweepRow& row) {
      std::fprintf(stderr, "  trend run beta=%g: valid ndcg@10 %.4f, ndcg@10 %.4f, ild@10 %.4f, ausc M %.3f H %.3f\n",
                   row.beta, row.valid_ndcg10, row.ndcg10, row.ild10, row.ausc_item, row.ausc_seq);
    });
    r.cpu = cpu_seconds() - start;
    return r;
  }();
  return runs;
}

Outcome diversity_trend() {
  const auto& runs = trend_runs();
  const auto& rows = runs.rows;
  bool increasing = true;
  std::string ild = "ild@10";
  for (std::size_t i = 0; i < kBetaGrid.size(); ++i) {
    ild += " " + fmt(rows[i].ild10);
    if (i > 0) increasing = increasing && rows[i].ild10 > rows[i - 1].ild10;
  }
  const double base = rows[0].ndcg10;
  double best_ratio = 0.0;
  for (std::size_t i = 1; i < kBetaGrid.size(); ++i) best_ratio = std::max(best_ratio, rows[i].ndcg10 / base);
  const bool balanced = best_ratio >= kBalanceRatio;
  const bool drops = rows.back().ndcg10 < base;
  const bool in_budget = runs.cpu < 15 * 60;
  return {increasing && balanced && drops && in_budget,
          ild + (increasing ? " (strictly increasing)" : " (NOT strictly increasing)") + "; best ndcg ratio " +
              fmt(best_ratio) + "; beta=1e-1 ndcg " + fmt(rows.back().ndcg10) + " vs baseline " + fmt(base) +
              "; cpu " + fmt(runs.cpu) + "s"};
}

Outcome spectrum_trend() {
  const auto& rows = trend_runs().rows;
  std::size_t best = 1;
  for (std::size_t i = 2; i < rows.size(); ++i)
    if (rows[i].valid_ndcg10 > rows[best].valid_ndcg10) best = i;
  const double gm = rows[best].ausc_item / rows[0].ausc_item;
  const double gh = rows[best].ausc_seq / rows[0].ausc_seq;
  return {gm >= kSpectrumGain && gh >= kSpectrumGain,
          "best beta " + fmt(rows[best].beta) + " by validation: ausc(M) ratio " + fmt(gm) + ", ausc(H) ratio " +
              fmt(gh)};
}

Outcome regularizer_harness() {
  const auto ds = trend_dataset();
  std::size_t bad = 0;
  std::string detail;
  for (const auto kind : {model::RegKind::cos, model::RegKind::euclid}) {
    cli::SweepSpec spec;
    spec.base = trend_model();
    spec.base.reg = kind;
    spec.lambdas = {kTrendLambda};
    spec.betas = {kLargeBeta};
    spec.train.epochs = 20;
    try {
      const auto rows = cli::run_sweep(ds, spec);
      const auto line = cli::sweep_csv_row(rows.at(0));
      const std::string header = cli::sweep_header();
      const bool schema = std::count(line.begin(), line.end(), ',') == std::count(header.begin(), header.end(), ',');
      const auto& r = rows[0];
      const bool finite = std::isfinite(r.valid_ndcg10) && std::isfinite(r.ndcg10) && std::isfinite(r.recall10) &&
                          std::isfinite(r.ild10) && std::isfinite(r.cov100) && std::isfinite(r.ausc_item) &&
                          std::isfinite(r.ausc_seq);
      const bool tagged = line.find("," + std::string(model::to_string(kind)) + ",") != std::string::npos;
      bad += schema && finite && tagged ? 0 : 1;
      detail += std::string(model::to_string(kind)) + ": " + line + "; ";
    } catch (const std::exception& e) {
      ++bad;
      detail += std::string(model::to_string(kind)) + " failed: " + e.what() + "; ";
    }
  }
  return {bad == 0, detail};
}

Outcome data_protocol() {
  std::mt19937_64 rng(112);
  // Raw log with some short users mixed into a synthetic one.
  data::SyntheticConfig sc;
  sc.num_users = 300;
  sc.num_items = 120;
  auto events = data::generate_synthetic(sc).events;
  std::map<std::string, std::size_t> raw_counts;
  for (int u = 0; u < 40; ++u)
    for (int t = 0; t <= u % 7; ++t)
      events.push_back({"short" + std::to_string(u), "item" + std::to_string(t), t, std::nullopt});
  for (const auto& e : events) ++raw_counts[e.user];
  const auto kept = data::five_core_filter(events);
  std::map<std::string, std::size_t> kept_counts;
  for (const auto& e : kept) ++kept_counts[e.user];
  bool core = true;
  for (const auto& [user, n] : raw_counts) core = core && (n >= 5 ? kept_counts[user] == n : kept_counts.count(user) == 0);
  const auto ds = data::build_sequences(kept, 15);
  for (const auto& s : ds.sequences) core = core && s.size() >= 5;

  const auto split = data::split_leave_one_out(ds);
  const bool counts = split.test.size() == ds.num_users() && split.valid.size() == ds.num_users();

  bool pad = true;
  std::uniform_int_distribution<std::size_t> len(0, 40), width(1, 30);
  std::uniform_int_distribution<ItemId> item(1, 1000);
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<ItemId> seq(len(rng));
    for (auto& v : seq) v = item(rng);
    const std::size_t n = width(rng);
    std::vector<ItemId> expect(n, data::kPad);
    for (std::size_t k = 0; k < std::min(n, seq.size()); ++k) expect[n - 1 - k] = seq[seq.size() - 1 - k];
    pad = pad && data::pad_truncate(seq, n) == expect;
  }

  const auto again = data::build_sequences(data::five_core_filter(events), 15);
  st::TempDir dir("accept_bundle");
  data::write_bundle(ds, dir / "a.bin");
  data::write_bundle(again, dir / "b.bin");
  const bool deterministic = data::bundle_bytes(ds) == data::bundle_bytes(again) &&
                             data::bundle_bytes(data::read_bundle(dir / "a.bin")) ==
                                 data::bundle_bytes(data::read_bundle(dir / "b.bin"));
  return {core && counts && pad && deterministic,
          std::string("5-core ") + (core ? "ok" : "BROKEN") + ", split counts " + (counts ? "ok" : "BROKEN") +
              ", pad_truncate " + (pad ? "ok" : "BROKEN") + ", bundles " + (deterministic ? "identical" : "DIFFER")};
}

Outcome determinism() {
  st::TempDir dir("accept_det");
  auto run = [&](const std::vector<std::string>& args) {
    std::ostringstream out, err;
    const int code = cli::run(args, out, err);
    if (code != 0) throw std::runtime_error("exit " + std::to_string(code) + ": " + err.str());
    return out.str();
  };
  const std::string d = dir.path().string();
  run({"-q", "--out-dir", d, "synth", "--users", "600", "--items", "200", "--seed", "5"});
  run({"-q", "--out-dir", d, "prepare", "-i", d + "/synthetic.tsv", "--max-len", "20"});
  auto train = [&](const std::string& tag) {
    return run({"-q", "--out-dir", d + "/" + tag, "train", "-d", d + "/dataset.bin", "--seed", "11", "--lambda", "0.1",
                "--beta", "0.01", "--epochs", "4"});
  };
  const auto a = train("a");
  const auto b = train("b");
  auto eval = [&](const std::string& tag) {
    return run({"-q", "--out-dir", d, "eval", "-d", d + "/dataset.bin", "-c", d + "/" + tag + "/model.ckpt",
                "--groups"});
  };
  const bool same = a == b && eval("a") == eval("b");
  return {same, same ? "train and eval JSON byte-identical" : "outputs differ"};
}

struct Criterion {
  int id;
  std::string name;
  double budget_seconds;  // 0: shares another criterion's runs
  std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> all = {
      {1, "svd correctness", 10, svd_correctness},
      {2, "log det vs singular values", 5, logdet_identity},
      {3, "smoothing loss gradient", 5, smoothing_gradient},
      {4, "smoothing loss bounded by ausc", 5, smoothing_bound},
      {5, "determinant lemma and greedy selection", 30, determinant_lemma},
      {6, "full model gradient", 120, model_gradient},
      {7, "causal attention", 10, causality},
      {8, "ranking metric oracle", 5, ranking_oracle},
      {9, "diversity rises with beta", 15 * 60, diversity_trend},
      {10, "spectrum flattens with beta", 0, spectrum_trend},
      {11, "cos and euclid regularizers", 10 * 60, regularizer_harness},
      {12, "data protocol", 5, data_protocol},
      {13, "determinism", 5 * 60, determinism},
  };
  std::set<int> wanted;
  for (int i = 1; i < argc; ++i) wanted.insert(std::atoi(argv[i]));

  int failures = 0;
  for (const auto& c : all) {
    if (!wanted.empty() && !wanted.count(c.id)) continue;
    const double start = cpu_seconds();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    const double spent = cpu_seconds() - start;
    if (c.budget_seconds > 0 && spent >= c.budget_seconds) {
      o.pass = false;
      o.detail += "; over the " + fmt(c.budget_seconds) + "s budget";
    }
    failures += o.pass ? 0 : 1;
    std::printf("criterion %2d %s: %s (%s; %.1fs cpu)\n", c.id, o.pass ? "PASS" : "FAIL", c.name.c_str(),
                o.detail.c_str(), spent);
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
