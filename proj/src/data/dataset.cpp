#include "seqrec/data/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>
#include <string_view>
#include <unordered_map>

#include "json.hpp"
#include "seqrec/error.hpp"
#include "seqrec/io/binary.hpp"

namespace seqrec::data {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split_fields(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(sep, start);
    if (pos == std::string_view::npos) {
      out.push_back(trim(line.substr(start)));
      return out;
    }
    out.push_back(trim(line.substr(start, pos - start)));
    start = pos + 1;
  }
}

std::optional<Interaction> parse_row(std::string_view line, char sep) {
  const auto f = split_fields(line, sep);
  if (f.size() < 3 || f.size() > 4) return std::nullopt;
  if (f[0].empty() || f[1].empty()) return std::nullopt;
  Interaction ev;
  const char* end = f[2].data() + f[2].size();
  const auto [ptr, ec] = std::from_chars(f[2].data(), end, ev.timestamp);
  if (ec != std::errc() || ptr != end || ev.timestamp < 0) return std::nullopt;
  ev.user = std::string(f[0]);
  ev.item = std::string(f[1]);
  if (f.size() == 4 && !f[3].empty()) ev.category = std::string(f[3]);
  return ev;
}

// Training part = every event except the last two (held out for valid/test).
void fill_train_popularity(SequenceDataset& ds) {
  ds.item_popularity.assign(std::size_t{ds.num_items} + 1, 0);
  for (const auto& seq : ds.sequences) {
    const std::size_t train_part = seq.size() >= 2 ? seq.size() - 2 : 0;
    for (std::size_t t = 0; t < train_part; ++t) ++ds.item_popularity[seq[t]];
  }
}

}  // namespace

IngestResult ingest_text(const std::string& text, Format format, bool has_header) {
  const char sep = format == Format::tsv ? '\t' : ',';
  IngestResult res;
  std::istringstream in(text);
  std::string line;
  bool header_pending = has_header;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    if (header_pending) {
      header_pending = false;
      continue;
    }
    ++res.rows;
    if (auto ev = parse_row(line, sep)) {
      res.events.push_back(std::move(*ev));
    } else {
      ++res.malformed;
    }
  }
  if (res.malformed * 2 > res.rows) {
    throw Error(ErrorCode::format_error, std::to_string(res.malformed) + " of " + std::to_string(res.rows) +
                                             " rows are malformed");
  }
  return res;
}

IngestResult ingest(const std::filesystem::path& path, Format format, bool has_header) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorCode::io_error, "cannot open " + path.string());
  std::ostringstream ss;
  ss << f.rdbuf();
  if (f.bad()) throw Error(ErrorCode::io_error, "read failed: " + path.string());
  return ingest_text(ss.str(), format, has_header);
}

std::vector<Interaction> five_core_filter(const std::vector<Interaction>& events, std::size_t min_events) {
  std::unordered_map<std::string, std::size_t> counts;
  for (const auto& ev : events) ++counts[ev.user];
  std::vector<Interaction> out;
  for (const auto& ev : events) {
    if (counts[ev.user] >= min_events) out.push_back(ev);
  }
  if (out.empty()) throw Error(ErrorCode::empty_dataset, "no user has at least " + std::to_string(min_events) + " events");
  return out;
}

std::size_t SequenceDataset::num_interactions() const noexcept {
  std::size_t n = 0;
  for (const auto& s : sequences) n += s.size();
  return n;
}

SequenceDataset build_sequences(const std::vector<Interaction>& events, std::size_t max_len) {
  SequenceDataset ds;
  ds.max_len = max_len;
  ds.item_ids.push_back("");

  std::unordered_map<std::string, std::uint32_t> user_index;
  std::unordered_map<std::string, ItemId> item_index;
  std::vector<std::vector<std::size_t>> per_user;  // event indices, input order
  for (std::size_t i = 0; i < events.size(); ++i) {
    const auto& ev = events[i];
    auto [uit, new_user] = user_index.try_emplace(ev.user, static_cast<std::uint32_t>(per_user.size()));
    if (new_user) {
      per_user.emplace_back();
      ds.user_ids.push_back(ev.user);
    }
    per_user[uit->second].push_back(i);
    auto [iit, new_item] = item_index.try_emplace(ev.item, static_cast<ItemId>(ds.item_ids.size()));
    if (new_item) ds.item_ids.push_back(ev.item);
  }
  ds.num_items = static_cast<std::uint32_t>(ds.item_ids.size() - 1);

  const bool any_category =
      std::any_of(events.begin(), events.end(), [](const Interaction& e) { return e.category.has_value(); });
  if (any_category) {
    ds.category_names.push_back("unknown");
    std::unordered_map<std::string, std::uint32_t> cat_index;
    ds.item_category.assign(ds.num_items + 1, 0);
    for (const auto& ev : events) {
      if (!ev.category) continue;
      auto [cit, added] = cat_index.try_emplace(*ev.category, static_cast<std::uint32_t>(ds.category_names.size()));
      if (added) ds.category_names.push_back(*ev.category);
      auto& slot = ds.item_category[item_index.at(ev.item)];
      if (slot == 0) slot = cit->second;  // first category seen for an item wins
    }
  }

  ds.sequences.resize(per_user.size());
  for (std::size_t u = 0; u < per_user.size(); ++u) {
    auto& idx = per_user[u];
    std::stable_sort(idx.begin(), idx.end(),
                     [&](std::size_t a, std::size_t b) { return events[a].timestamp < events[b].timestamp; });
    auto& seq = ds.sequences[u];
    seq.reserve(idx.size());
    for (std::size_t i : idx) seq.push_back(item_index.at(events[i].item));
  }

  fill_train_popularity(ds);
  return ds;
}

std::vector<ItemId> pad_truncate(const std::vector<ItemId>& seq, std::size_t n) {
  if (n == 0) throw Error(ErrorCode::invalid_input, "pad_truncate needs n >= 1");
  std::vector<ItemId> out(n, kPad);
  const std::size_t keep = std::min(n, seq.size());
  std::copy(seq.end() - static_cast<std::ptrdiff_t>(keep), seq.end(), out.end() - static_cast<std::ptrdiff_t>(keep));
  return out;
}

Split split_leave_one_out(const SequenceDataset& ds) {
  if (ds.max_len == 0) throw Error(ErrorCode::invalid_input, "dataset max_len is 0");
  Split sp;
  for (std::uint32_t u = 0; u < ds.num_users(); ++u) {
    const auto& seq = ds.sequences[u];
    const std::size_t len = seq.size();
    if (len < 3) {
      ++sp.excluded;
      continue;
    }
    const auto prefix = [&](std::size_t k) { return std::vector<ItemId>(seq.begin(), seq.begin() + static_cast<std::ptrdiff_t>(k)); };
    sp.test.push_back({u, pad_truncate(prefix(len - 1), ds.max_len), seq[len - 1], Role::test});
    sp.valid.push_back({u, pad_truncate(prefix(len - 2), ds.max_len), seq[len - 2], Role::valid});
    if (len >= 4) {
      const std::vector<ItemId> in(seq.begin(), seq.begin() + static_cast<std::ptrdiff_t>(len - 3));
      const std::vector<ItemId> tg(seq.begin() + 1, seq.begin() + static_cast<std::ptrdiff_t>(len - 2));
      sp.train.push_back({u, pad_truncate(in, ds.max_len), pad_truncate(tg, ds.max_len)});
    }
  }
  return sp;
}

NegativeSampler::NegativeSampler(const SequenceDataset& ds) : num_items_(ds.num_items) {
  seen_.reserve(ds.num_users());
  for (const auto& seq : ds.sequences) {
    std::vector<ItemId> s = seq;
    std::sort(s.begin(), s.end());
    s.erase(std::unique(s.begin(), s.end()), s.end());
    seen_.push_back(std::move(s));
  }
}

bool NegativeSampler::seen(std::uint32_t user, ItemId item) const {
  const auto& s = seen_[user];
  return std::binary_search(s.begin(), s.end(), item);
}

void NegativeSampler::sample_into(std::uint32_t user, std::size_t count, std::mt19937_64& rng, ItemId* out) const {
  if (user >= seen_.size()) throw Error(ErrorCode::invalid_input, "user index out of range");
  const std::size_t available = num_items_ - seen_[user].size();
  if (available < count || available == 0) {
    throw Error(ErrorCode::no_negatives_available,
                "user " + std::to_string(user) + " has " + std::to_string(available) + " unseen items, need " +
                    std::to_string(count));
  }
  if (available * 2 >= num_items_) {
    // Rejection sampling; expected draws per accepted item stay below 2 + count/available.
    std::uniform_int_distribution<ItemId> pick(1, num_items_);
    std::size_t got = 0;
    while (got < count) {
      const ItemId v = pick(rng);
      if (seen(user, v) || std::find(out, out + got, v) != out + got) continue;
      out[got++] = v;
    }
    return;
  }
  // Dense user: partial Fisher-Yates over the complement.
  std::vector<ItemId> pool;
  pool.reserve(available);
  for (ItemId v = 1; v <= num_items_; ++v)
    if (!seen(user, v)) pool.push_back(v);
  for (std::size_t i = 0; i < count; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, pool.size() - 1);
    std::swap(pool[i], pool[pick(rng)]);
    out[i] = pool[i];
  }
}

std::vector<ItemId> NegativeSampler::sample(std::uint32_t user, std::size_t count, std::mt19937_64& rng) const {
  std::vector<ItemId> out(count);
  sample_into(user, count, rng, out.data());
  return out;
}

std::vector<ItemId> sample_negatives(const SequenceDataset& ds, std::uint32_t user, std::size_t count,
                                     std::mt19937_64& rng) {
  return NegativeSampler(ds).sample(user, count, rng);
}

SyntheticLog generate_synthetic(const SyntheticConfig& cfg) {
  if (cfg.num_users == 0 || cfg.num_items == 0 || cfg.cluster_count == 0) {
    throw Error(ErrorCode::invalid_input, "synthetic counts must be >= 1");
  }
  if (!(cfg.zipf_s > 0.0)) throw Error(ErrorCode::invalid_input, "zipf_s must be > 0");
  if (cfg.min_len == 0 || cfg.min_len > cfg.max_len) throw Error(ErrorCode::invalid_input, "bad length range");

  std::mt19937_64 rng(cfg.seed);
  const std::size_t n_items = cfg.num_items;
  const std::size_t n_clusters = std::min(cfg.cluster_count, n_items);

  // Item r (0-based popularity rank) has weight (r+1)^-s and cluster r mod C.
  std::vector<std::vector<std::size_t>> members(n_clusters);
  std::vector<std::vector<double>> weights(n_clusters);
  for (std::size_t r = 0; r < n_items; ++r) {
    members[r % n_clusters].push_back(r);
    weights[r % n_clusters].push_back(std::pow(static_cast<double>(r + 1), -cfg.zipf_s));
  }
  std::vector<std::discrete_distribution<std::size_t>> in_cluster;
  for (const auto& w : weights) in_cluster.emplace_back(w.begin(), w.end());

  std::vector<std::size_t> successor(n_items);
  for (std::size_t r = 0; r < n_items; ++r) {
    const std::size_t c = r % n_clusters;
    std::size_t s = members[c][in_cluster[c](rng)];
    if (s == r && members[c].size() > 1) s = members[c][in_cluster[c](rng)];
    successor[r] = s;
  }

  std::uniform_int_distribution<std::size_t> len_dist(cfg.min_len, cfg.max_len);
  std::uniform_int_distribution<std::size_t> cluster_dist(0, n_clusters - 1);
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  std::uniform_int_distribution<std::int64_t> start_dist(0, 10'000'000);
  std::uniform_int_distribution<std::int64_t> gap_dist(1, 86'400);

  SyntheticLog log;
  log.user_lengths.reserve(cfg.num_users);
  for (std::size_t u = 0; u < cfg.num_users; ++u) {
    const std::size_t len = len_dist(rng);
    std::size_t cluster = cluster_dist(rng);
    std::size_t item = members[cluster][in_cluster[cluster](rng)];
    std::int64_t ts = 1'600'000'000 + start_dist(rng);
    const std::string user = "u" + std::to_string(u + 1);
    for (std::size_t t = 0; t < len; ++t) {
      if (t > 0) {
        if (coin(rng) < cfg.stay_prob) {
          item = coin(rng) < cfg.successor_prob ? successor[item] : members[cluster][in_cluster[cluster](rng)];
        } else {
          cluster = cluster_dist(rng);
          item = members[cluster][in_cluster[cluster](rng)];
        }
        ts += gap_dist(rng);
      }
      log.events.push_back({user, "i" + std::to_string(item + 1), ts, "c" + std::to_string(item % n_clusters + 1)});
    }
    log.user_lengths.push_back(len);
  }
  return log;
}

std::string to_tsv(const std::vector<Interaction>& events) {
  std::string out;
  for (const auto& ev : events) {
    out += ev.user;
    out += '\t';
    out += ev.item;
    out += '\t';
    out += std::to_string(ev.timestamp);
    if (ev.category) {
      out += '\t';
      out += *ev.category;
    }
    out += '\n';
  }
  return out;
}

void write_tsv(const std::vector<Interaction>& events, const std::filesystem::path& path) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw Error(ErrorCode::io_error, "cannot open " + path.string() + " for writing");
  const std::string text = to_tsv(events);
  f.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!f) throw Error(ErrorCode::io_error, "write failed: " + path.string());
}

double head_share(const std::vector<Interaction>& events) {
  if (events.empty()) return 0.0;
  std::unordered_map<std::string, std::size_t> freq;
  for (const auto& ev : events) ++freq[ev.item];
  std::vector<std::size_t> counts;
  counts.reserve(freq.size());
  for (const auto& [_, c] : freq) counts.push_back(c);
  std::sort(counts.begin(), counts.end(), std::greater<>());
  const std::size_t head = std::max<std::size_t>(1, counts.size() / 10);
  const std::size_t head_events = std::accumulate(counts.begin(), counts.begin() + static_cast<std::ptrdiff_t>(head), std::size_t{0});
  return static_cast<double>(head_events) / static_cast<double>(events.size());
}

namespace {

constexpr char kBundleMagic[8] = {'S', 'S', 'R', 'D', 'A', 'T', 'A', '\0'};

io::BinaryWriter encode_bundle(const SequenceDataset& ds) {
  io::BinaryWriter w;
  w.bytes(kBundleMagic, sizeof kBundleMagic);
  w.put(kBundleVersion);
  w.put(static_cast<std::uint64_t>(ds.max_len));
  w.put(ds.num_items);
  w.put(static_cast<std::uint32_t>(ds.num_users()));
  for (const auto& s : ds.sequences) w.put(static_cast<std::uint32_t>(s.size()));
  for (const auto& s : ds.sequences) w.put_array(s.data(), s.size());
  w.put(static_cast<std::uint8_t>(ds.has_categories() ? 1 : 0));
  if (ds.has_categories()) {
    w.put(static_cast<std::uint32_t>(ds.category_names.size()));
    for (const auto& c : ds.category_names) w.put_string(c);
    w.put_array(ds.item_category.data(), ds.item_category.size());
  }
  for (const auto& u : ds.user_ids) w.put_string(u);
  for (const auto& i : ds.item_ids) w.put_string(i);
  return w;
}

}  // namespace

std::vector<std::uint8_t> bundle_bytes(const SequenceDataset& ds) { return encode_bundle(ds).buffer(); }

void write_bundle(const SequenceDataset& ds, const std::filesystem::path& path) { encode_bundle(ds).save(path); }

SequenceDataset read_bundle(const std::filesystem::path& path) {
  auto r = io::BinaryReader::open(path);
  char magic[8];
  r.bytes(magic, sizeof magic);
  if (!std::equal(magic, magic + 8, kBundleMagic)) throw Error(ErrorCode::format_error, "not a dataset bundle: " + path.string());
  const auto version = r.get<std::uint32_t>();
  if (version != kBundleVersion) {
    throw Error(ErrorCode::format_error, "bundle version " + std::to_string(version) + ", expected " +
                                             std::to_string(kBundleVersion));
  }
  SequenceDataset ds;
  ds.max_len = r.get<std::uint64_t>();
  ds.num_items = r.get<std::uint32_t>();
  const auto users = r.get<std::uint32_t>();
  r.require(std::size_t{users} * 4);
  std::vector<std::uint32_t> lengths(users);
  r.get_array(lengths.data(), users);
  ds.sequences.resize(users);
  for (std::uint32_t u = 0; u < users; ++u) {
    ds.sequences[u].resize(lengths[u]);
    r.get_array(ds.sequences[u].data(), lengths[u]);
    for (ItemId v : ds.sequences[u])
      if (v == kPad || v > ds.num_items) throw Error(ErrorCode::format_error, "item id out of range in bundle");
  }
  if (r.get<std::uint8_t>() != 0) {
    const auto cats = r.get<std::uint32_t>();
    for (std::uint32_t c = 0; c < cats; ++c) ds.category_names.push_back(r.get_string());
    ds.item_category.resize(std::size_t{ds.num_items} + 1);
    r.get_array(ds.item_category.data(), ds.item_category.size());
  }
  for (std::uint32_t u = 0; u < users; ++u) ds.user_ids.push_back(r.get_string());
  for (std::uint32_t i = 0; i <= ds.num_items; ++i) ds.item_ids.push_back(r.get_string());
  if (r.remaining() != 0) throw Error(ErrorCode::format_error, "trailing bytes in bundle");

  fill_train_popularity(ds);
  return ds;
}

std::string stats_json(const SequenceDataset& ds, std::size_t malformed_rows, std::size_t excluded_users) {
  const double users = static_cast<double>(ds.num_users());
  const double items = static_cast<double>(ds.num_items);
  const double inter = static_cast<double>(ds.num_interactions());
  nlohmann::ordered_json j;
  j["schema_version"] = 1;
  j["users"] = ds.num_users();
  j["items"] = ds.num_items;
  j["interactions"] = ds.num_interactions();
  j["density"] = users > 0 && items > 0 ? inter / (users * items) : 0.0;
  j["avg_per_user"] = users > 0 ? inter / users : 0.0;
  j["categories"] = ds.has_categories() ? ds.category_names.size() - 1 : 0;
  j["malformed_rows"] = malformed_rows;
  j["excluded_users"] = excluded_users;
  return j.dump(2);
}

}  // namespace seqrec::data
