// src/model/checkpoint.cc

// Copyright 2026  The SVTS Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#include "svts/model/checkpoint.h"

#include <cmath>
#include <filesystem>
#include <fstream>

#include "json.hpp"
#include "svts/core/binary_io.h"
#include "svts/core/error.h"

namespace svts::nn {

namespace {

constexpr char kMagic[] = "SVTSCKPT";
constexpr int kVersion = 1;

}  // namespace

void SaveCheckpoint(const std::string &path, const CheckpointState &state) {
  nlohmann::json header;
  header["model"] = state.model.ToKeyValues();
  header["train"] = state.train;
  header["epoch"] = state.epoch;
  header["step"] = state.step;
  if (std::isfinite(state.val_loss))
    header["val_loss"] = state.val_loss;
  else
    header["val_loss"] = nullptr;
  header["rng_state"] = state.rng_state;
  nlohmann::json index = nlohmann::json::array();
  uint64_t offset = 0;
  for (const auto &[name, m] : state.tensors) {
    index.push_back({{"name", name}, {"rows", m.rows()}, {"cols", m.cols()}, {"offset", offset}});
    offset += static_cast<uint64_t>(m.size()) * 8;
  }
  header["tensors"] = index;
  const std::string text = header.dump();

  const std::string tmp = path + ".tmp";
  {
    std::ofstream os(tmp, std::ios::binary);
    if (!os) throw IoError("cannot write checkpoint " + path);
    os << kMagic << ' ' << kVersion << '\n';
    WriteU64(os, text.size());
    os.write(text.data(), static_cast<std::streamsize>(text.size()));
    for (const auto &[name, m] : state.tensors)
      WriteF64Array(os, std::span<const double>(m.data(), static_cast<size_t>(m.size())));
    if (!os) throw IoError("error writing checkpoint " + path);
  }
  std::filesystem::rename(tmp, path);
}

CheckpointState LoadCheckpoint(const std::string &path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot open checkpoint " + path);
  const std::vector<std::string> magic = ReadHeaderTokens(is);
  if (magic.size() != 2 || magic[0] != kMagic)
    throw ParseError(path + ": not a checkpoint file", 1);
  if (magic[1] != std::to_string(kVersion))
    throw ParseError(path + ": unsupported checkpoint version " + magic[1], 1);
  const uint64_t len = ReadU64(is);
  if (len > (uint64_t{1} << 32)) throw ParseError(path + ": corrupt header length", 1);
  std::string text(len, '\0');
  is.read(text.data(), static_cast<std::streamsize>(len));
  if (!is) throw IoError(path + ": truncated header");
  nlohmann::json header;
  try {
    header = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception &e) {
    throw ParseError(path + ": bad checkpoint header: " + e.what(), 1);
  }
  CheckpointState state;
  try {
    state.model = ModelConfig::FromKeyValues(header.at("model").get<KeyValues>());
    state.train = header.at("train").get<KeyValues>();
    state.epoch = header.at("epoch").get<int>();
    state.step = header.at("step").get<int64_t>();
    if (!header.at("val_loss").is_null()) state.val_loss = header.at("val_loss").get<double>();
    state.rng_state = header.at("rng_state").get<std::string>();
    uint64_t expected = 0;
    for (const auto &entry : header.at("tensors")) {
      const std::string name = entry.at("name").get<std::string>();
      const int64_t rows = entry.at("rows").get<int64_t>(), cols = entry.at("cols").get<int64_t>();
      if (entry.at("offset").get<uint64_t>() != expected)
        throw ParseError(path + ": tensor '" + name + "' has an unexpected offset", 1);
      const std::vector<double> data = ReadF64Array(is, static_cast<size_t>(rows * cols));
      if (!is) throw IoError(path + ": truncated tensor data at '" + name + "'");
      Matrix m(rows, cols);
      std::copy(data.begin(), data.end(), m.data());
      state.tensors.emplace(name, std::move(m));
      expected += static_cast<uint64_t>(rows * cols) * 8;
    }
  } catch (const nlohmann::json::exception &e) {
    throw ParseError(path + ": bad checkpoint header: " + e.what(), 1);
  }
  return state;
}

void CaptureModel(Predictor &model, CheckpointState &state) {
  state.model = model.config();
  for (Param *p : model.Params()) state.tensors[p->name] = p->value;
  for (Buffer *b : model.Buffers()) state.tensors[b->name] = b->value;
}

void RestoreModel(const CheckpointState &state, Predictor &model) {
  auto restore = [&](const std::string &name, Matrix &dst) {
    auto it = state.tensors.find(name);
    if (it == state.tensors.end()) throw ValidationError("checkpoint lacks tensor '" + name + "'");
    if (it->second.rows() != dst.rows() || it->second.cols() != dst.cols())
      throw ShapeError("checkpoint tensor '" + name + "' has the wrong shape");
    dst = it->second;
  };
  for (Param *p : model.Params()) restore(p->name, p->value);
  for (Buffer *b : model.Buffers()) restore(b->name, b->value);
}

std::unique_ptr<Predictor> LoadPredictor(const std::string &path) {
  const CheckpointState state = LoadCheckpoint(path);
  Rng rng(0);
  auto model = std::make_unique<Predictor>(state.model, rng);
  RestoreModel(state, *model);
  return model;
}

}  // namespace svts::nn
