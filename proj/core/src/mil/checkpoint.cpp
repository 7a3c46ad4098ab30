// Copyright 2026 The vadkit Authors
// SPDX-License-Identifier: Apache-2.0

#include "vad/mil/checkpoint.hpp"

#include <cstring>
#include <map>

#include "vad/error.hpp"
#include "vad/features/feature_file.hpp"

namespace vad::mil {

namespace le = features::le;

nlohmann::json to_json(const ModelShape& s) {
  return {{"d", s.d},
          {"scorer_hidden1", s.scorer_hidden1},
          {"scorer_hidden2", s.scorer_hidden2},
          {"classifier_hidden1", s.classifier_hidden1},
          {"classifier_hidden2", s.classifier_hidden2}};
}

ModelShape model_shape_from_json(const nlohmann::json& j) {
  ModelShape s;
  s.d = j.at("d").get<std::size_t>();
  s.scorer_hidden1 = j.at("scorer_hidden1").get<std::size_t>();
  s.scorer_hidden2 = j.at("scorer_hidden2").get<std::size_t>();
  s.classifier_hidden1 = j.at("classifier_hidden1").get<std::size_t>();
  s.classifier_hidden2 = j.at("classifier_hidden2").get<std::size_t>();
  return s;
}

void save_checkpoint(const std::filesystem::path& path, ModelParams& model, const nlohmann::json& metadata) {
  nlohmann::json meta = metadata;
  meta["model"] = to_json(model.shape);
  const std::string meta_text = meta.dump();

  std::string out(kCheckpointMagic, 4);
  le::put_u32(out, kCheckpointVersion);
  le::put_u32(out, static_cast<std::uint32_t>(meta_text.size()));
  out += meta_text;
  const std::vector<ag::Parameter*> params = model.parameters();
  le::put_u32(out, static_cast<std::uint32_t>(params.size()));
  for (const ag::Parameter* p : params) {
    le::put_u32(out, static_cast<std::uint32_t>(p->name.size()));
    out += p->name;
    le::put_u32(out, static_cast<std::uint32_t>(p->value.rank()));
    for (std::size_t dim : p->value.shape()) le::put_u32(out, static_cast<std::uint32_t>(dim));
    for (float v : p->value.data()) le::put_f32(out, v);
  }
  features::write_file(path, out);
}

namespace {

class Reader {
 public:
  Reader(const std::string& bytes, std::string where) : bytes_(bytes), where_(std::move(where)) {}

  const char* take(std::size_t n) {
    if (bytes_.size() - pos_ < n) throw FormatError(where_ + ": truncated checkpoint");
    const char* p = bytes_.data() + pos_;
    pos_ += n;
    return p;
  }
  std::uint32_t u32() { return le::get_u32(take(4)); }
  std::string text(std::size_t n) { return std::string(take(n), n); }
  bool done() const { return pos_ == bytes_.size(); }

 private:
  const std::string& bytes_;
  std::string where_;
  std::size_t pos_ = 0;
};

}  // namespace

Checkpoint load_checkpoint(const std::filesystem::path& path) {
  const std::string bytes = features::read_file(path);
  const std::string where = path.string();
  Reader in(bytes, where);
  if (bytes.size() < 4 || std::memcmp(in.take(4), kCheckpointMagic, 4) != 0) {
    throw FormatError(where + ": bad magic, not a VADC checkpoint");
  }
  const std::uint32_t version = in.u32();
  if (version != kCheckpointVersion) throw FormatError(where + ": unsupported checkpoint version " + std::to_string(version));

  Checkpoint ck;
  try {
    ck.metadata = nlohmann::json::parse(in.text(in.u32()));
    ck.model = ModelParams::init(model_shape_from_json(ck.metadata.at("model")), 0);
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(where + ": malformed checkpoint metadata: " + e.what());
  }

  std::map<std::string, ag::Parameter*> by_name;
  for (ag::Parameter* p : ck.model.parameters()) by_name[p->name] = p;
  const std::uint32_t count = in.u32();
  if (count != by_name.size()) throw FormatError(where + ": checkpoint tensor count does not match the model");
  for (std::uint32_t t = 0; t < count; ++t) {
    const std::string name = in.text(in.u32());
    const auto it = by_name.find(name);
    if (it == by_name.end()) throw FormatError(where + ": unknown tensor '" + name + "'");
    ag::Shape shape(in.u32());
    for (std::size_t& dim : shape) dim = in.u32();
    ag::Parameter& p = *it->second;
    if (shape != p.value.shape()) {
      throw FormatError(where + ": tensor '" + name + "' has shape " + ag::shape_string(shape) + ", model expects " +
                        ag::shape_string(p.value.shape()));
    }
    for (float& v : p.value.data()) v = le::get_f32(in.take(4));
    p.zero_grad();
  }
  if (!in.done()) throw FormatError(where + ": trailing bytes after the last tensor");
  return ck;
}

}  // namespace vad::mil
