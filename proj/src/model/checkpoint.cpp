#include "seqrec/model/checkpoint.hpp"

#include <algorithm>
#include <string>

#include "seqrec/error.hpp"
#include "seqrec/io/binary.hpp"

namespace seqrec::model {

namespace {

constexpr char kMagic[8] = {'S', 'S', 'R', 'C', 'K', 'P', 'T', '\0'};

}  // namespace

template <typename Real>
void save_checkpoint(const ModelParams<Real>& params, const ModelConfig& cfg, const std::filesystem::path& path) {
  io::BinaryWriter w;
  w.bytes(kMagic, sizeof kMagic);
  w.put(kCheckpointVersion);
  w.put(static_cast<std::uint32_t>(sizeof(float)));
  w.put(static_cast<std::uint32_t>(cfg.dim));
  w.put(static_cast<std::uint32_t>(cfg.max_len));
  w.put(static_cast<std::uint32_t>(cfg.num_layers));
  w.put(static_cast<std::uint32_t>(cfg.num_heads));
  w.put(static_cast<std::uint32_t>(cfg.negatives));
  w.put(cfg.dropout);
  w.put(cfg.lambda);
  w.put(cfg.beta);
  w.put(cfg.learning_rate);
  w.put(static_cast<std::uint64_t>(cfg.seed));
  w.put(static_cast<std::uint8_t>(cfg.reg));
  w.put(static_cast<std::uint8_t>(cfg.item_reg_in_batch ? 1 : 0));
  w.put(params.num_items());
  w.put(static_cast<std::uint32_t>(params.tensors().size()));
  for (const auto& t : params.tensors()) {
    w.put_string(t.name);
    w.put(static_cast<std::uint32_t>(t.rows));
    w.put(static_cast<std::uint32_t>(t.cols));
    for (Real v : t.data) w.put(static_cast<float>(v));
  }
  w.save(path);
}

template <typename Real>
Checkpoint<Real> load_checkpoint(const std::filesystem::path& path) {
  auto r = io::BinaryReader::open(path);
  char magic[8];
  r.bytes(magic, sizeof magic);
  if (!std::equal(magic, magic + 8, kMagic)) throw Error(ErrorCode::format_error, "not a checkpoint: " + path.string());
  const auto version = r.get<std::uint32_t>();
  if (version != kCheckpointVersion) {
    throw Error(ErrorCode::incompatible_checkpoint, "checkpoint version " + std::to_string(version) +
                                                        ", this build reads " + std::to_string(kCheckpointVersion));
  }
  if (r.get<std::uint32_t>() != sizeof(float)) {
    throw Error(ErrorCode::incompatible_checkpoint, "checkpoint stores reals of an unsupported width");
  }
  Checkpoint<Real> ck;
  auto& cfg = ck.config;
  cfg.dim = r.get<std::uint32_t>();
  cfg.max_len = r.get<std::uint32_t>();
  cfg.num_layers = r.get<std::uint32_t>();
  cfg.num_heads = r.get<std::uint32_t>();
  cfg.negatives = r.get<std::uint32_t>();
  cfg.dropout = r.get<double>();
  cfg.lambda = r.get<double>();
  cfg.beta = r.get<double>();
  cfg.learning_rate = r.get<double>();
  cfg.seed = r.get<std::uint64_t>();
  const auto reg = r.get<std::uint8_t>();
  if (reg > static_cast<std::uint8_t>(RegKind::none)) throw Error(ErrorCode::format_error, "bad regularizer tag");
  cfg.reg = static_cast<RegKind>(reg);
  cfg.item_reg_in_batch = r.get<std::uint8_t>() != 0;
  const auto num_items = r.get<std::uint32_t>();
  try {
    cfg.validate();
  } catch (const Error& e) {
    throw Error(ErrorCode::format_error, std::string("stored config is invalid: ") + e.what());
  }

  ck.params = ModelParams<Real>(cfg, num_items);
  const auto count = r.get<std::uint32_t>();
  if (count != ck.params.tensors().size()) throw Error(ErrorCode::format_error, "tensor count mismatch");
  for (auto& t : ck.params.tensors()) {
    const std::string name = r.get_string();
    const auto rows = r.get<std::uint32_t>();
    const auto cols = r.get<std::uint32_t>();
    if (name != t.name || rows != t.rows || cols != t.cols) {
      throw Error(ErrorCode::format_error, "unexpected tensor '" + name + "'");
    }
    r.require(t.size() * sizeof(float));
    for (auto& v : t.data) v = static_cast<Real>(r.get<float>());
  }
  if (r.remaining() != 0) throw Error(ErrorCode::format_error, "trailing bytes in checkpoint");
  return ck;
}

template void save_checkpoint<float>(const ModelParams<float>&, const ModelConfig&, const std::filesystem::path&);
template void save_checkpoint<double>(const ModelParams<double>&, const ModelConfig&, const std::filesystem::path&);
template Checkpoint<float> load_checkpoint<float>(const std::filesystem::path&);
template Checkpoint<double> load_checkpoint<double>(const std::filesystem::path&);

}  // namespace seqrec::model
