#pragma once
// Interaction logs, per-user chronological sequences, leave-one-out splits,
// negative sampling, and a synthetic long-tail log generator.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace seqrec::data {

using ItemId = std::uint32_t;  // dense id; 0 is padding
inline constexpr ItemId kPad = 0;

struct Interaction {
  std::string user;
  std::string item;
  std::int64_t timestamp = 0;
  std::optional<std::string> category;
};

enum class Format { tsv, csv };

struct IngestResult {
  std::vector<Interaction> events;
  std::size_t rows = 0;       // data rows seen (header and blank lines excluded)
  std::size_t malformed = 0;  // rows skipped
};

/// Parses `user, item, timestamp[, category]` rows. Malformed rows (wrong
/// field count, empty id, non-integer or negative timestamp) are skipped and
/// counted. Throws IoError if unreadable, FormatError if more than half of the
/// rows are malformed.
IngestResult ingest(const std::filesystem::path& path, Format format, bool has_header = false);
IngestResult ingest_text(const std::string& text, Format format, bool has_header = false);

/// Drops every event of users with fewer than `min_events` events. One pass,
/// users only. Throws EmptyDataset if nothing survives.
std::vector<Interaction> five_core_filter(const std::vector<Interaction>& events,
                                          std::size_t min_events = 5);

struct SequenceDataset {
  std::size_t max_len = 0;
  std::uint32_t num_items = 0;
  std::vector<std::vector<ItemId>> sequences;  // per user, chronological
  std::vector<std::string> user_ids;           // raw id per user index
  std::vector<std::string> item_ids;           // raw id per dense id; [0] is ""
  // Dense category per item (0 means none given); empty when the log had no
  // category column. category_names[0] is "unknown".
  std::vector<std::uint32_t> item_category;
  std::vector<std::string> category_names;
  // Interactions per item in the training part (all but the last two events).
  std::vector<std::uint32_t> item_popularity;

  std::size_t num_users() const noexcept { return sequences.size(); }
  bool has_categories() const noexcept { return !item_category.empty(); }
  std::size_t num_interactions() const noexcept;
};

/// Groups events per user (first-appearance order), sorts each by timestamp
/// with ties kept in input order, and re-indexes items densely into
/// [1, num_items] by first appearance.
SequenceDataset build_sequences(const std::vector<Interaction>& events, std::size_t max_len);

/// Keeps the last n items, left-pads with kPad to exactly n.
std::vector<ItemId> pad_truncate(const std::vector<ItemId>& seq, std::size_t n);

/// Teacher-forced training row: targets[t] is the next item after input[t],
/// kPad where there is no target.
struct TrainExample {
  std::uint32_t user = 0;
  std::vector<ItemId> input;
  std::vector<ItemId> targets;
};

enum class Role { train, valid, test };

struct SplitExample {
  std::uint32_t user = 0;
  std::vector<ItemId> input;
  ItemId target = kPad;
  Role role = Role::test;
};

struct Split {
  std::vector<TrainExample> train;
  std::vector<SplitExample> valid;
  std::vector<SplitExample> test;
  std::size_t excluded = 0;  // users with fewer than 3 events
};

/// Leave-one-out. For [v1..vL]: test [v1..v(L-1)] -> vL, valid
/// [v1..v(L-2)] -> v(L-1), train inputs v1..v(L-3) with targets v2..v(L-2).
/// The training part never sees the validation or test target.
Split split_leave_one_out(const SequenceDataset& ds);

/// Samples `count` distinct items the user never interacted with, uniformly.
/// Throws NoNegativesAvailable if fewer than `count` such items exist.
std::vector<ItemId> sample_negatives(const SequenceDataset& ds, std::uint32_t user, std::size_t count,
                                     std::mt19937_64& rng);

/// Same sampling with the per-user interaction sets built once.
class NegativeSampler {
 public:
  explicit NegativeSampler(const SequenceDataset& ds);
  std::vector<ItemId> sample(std::uint32_t user, std::size_t count, std::mt19937_64& rng) const;
  void sample_into(std::uint32_t user, std::size_t count, std::mt19937_64& rng, ItemId* out) const;

 private:
  bool seen(std::uint32_t user, ItemId item) const;
  std::uint32_t num_items_;
  std::vector<std::vector<ItemId>> seen_;  // sorted unique per user
};

struct SyntheticConfig {
  std::size_t num_users = 2000;
  std::size_t num_items = 500;
  double zipf_s = 1.2;
  std::size_t cluster_count = 8;
  std::uint64_t seed = 1;
  std::size_t min_len = 5;
  std::size_t max_len = 50;
  double stay_prob = 0.85;       // keep walking inside the current cluster
  double successor_prob = 0.6;   // follow the item's fixed successor
};

struct SyntheticLog {
  std::vector<Interaction> events;
  std::vector<std::size_t> user_lengths;
};

/// Zipf item popularity, items dealt round-robin by popularity rank into
/// clusters (category = cluster), and per-user cluster-biased Markov walks
/// with lengths uniform in [min_len, max_len]. Deterministic given the seed.
SyntheticLog generate_synthetic(const SyntheticConfig& cfg);

/// Writes `user\titem\ttimestamp\tcategory` rows, no header.
void write_tsv(const std::vector<Interaction>& events, const std::filesystem::path& path);
std::string to_tsv(const std::vector<Interaction>& events);

/// Fraction of events whose item is among the top 10% most frequent items.
double head_share(const std::vector<Interaction>& events);

// Bundle layout (little endian, trailing FNV-1a u64 over everything before it):
//   "SSRDATA\0", u32 version, u64 max_len, u32 num_items, u32 num_users,
//   u32 length per user, u32 items per user, u8 has_categories,
//   [u32 num_categories, category names, u32 category per item],
//   user id strings, item id strings (u16 length prefixed).
inline constexpr std::uint32_t kBundleVersion = 1;

void write_bundle(const SequenceDataset& ds, const std::filesystem::path& path);
/// Throws IoError, or FormatError on bad magic/version/truncation/corruption.
SequenceDataset read_bundle(const std::filesystem::path& path);
std::vector<std::uint8_t> bundle_bytes(const SequenceDataset& ds);

/// Statistics sidecar as a JSON object string.
std::string stats_json(const SequenceDataset& ds, std::size_t malformed_rows, std::size_t excluded_users);

}  // namespace seqrec::data
