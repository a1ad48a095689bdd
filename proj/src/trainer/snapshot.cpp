/**
 * Copyright 2026 The ctrla Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <bit>
#include <cstring>
#include <fstream>
#include <map>
#include <stdexcept>

#include "ctrla/trainer.hpp"

namespace ctrla {

namespace {

constexpr char kMagic[6] = {'C', 'T', 'R', 'L', 'A', '1'};

void put_u32(std::ostream& out, std::uint32_t v) {
  const char b[4] = {static_cast<char>(v & 0xff), static_cast<char>((v >> 8) & 0xff),
                     static_cast<char>((v >> 16) & 0xff), static_cast<char>((v >> 24) & 0xff)};
  out.write(b, 4);
}

class Reader {
 public:
  Reader(std::vector<char> bytes, std::string name) : bytes_(std::move(bytes)), name_(std::move(name)) {}

  bool done() const { return pos_ == bytes_.size(); }

  std::uint32_t u32() {
    need(4);
    std::uint32_t v = 0;
    for (int k = 0; k < 4; ++k) v |= static_cast<std::uint32_t>(static_cast<unsigned char>(bytes_[pos_ + k])) << (8 * k);
    pos_ += 4;
    return v;
  }

  std::string str(std::size_t n) {
    need(n);
    std::string s(bytes_.data() + pos_, n);
    pos_ += n;
    return s;
  }

  void need(std::size_t n) const {
    if (bytes_.size() - pos_ < n) {
      throw std::runtime_error("'" + name_ + "': truncated at byte offset " + std::to_string(pos_) +
                               " (needed " + std::to_string(n) + " more bytes)");
    }
  }

 private:
  std::vector<char> bytes_;
  std::string name_;
  std::size_t pos_ = 0;
};

struct Stored {
  std::vector<std::size_t> shape;
  std::vector<float> data;
};

std::vector<nn::Tensor<float>*> all_tensors(nn::Classifier& model) {
  std::vector<nn::Tensor<float>*> out;
  for (auto* p : model.parameters()) out.push_back(&p->value);
  for (auto* b : model.buffers()) out.push_back(b);
  return out;
}

}  // namespace

void save_snapshot(const std::filesystem::path& file, nn::Classifier& model) {
  std::ofstream out(file, std::ios::binary);
  if (!out) throw std::runtime_error("cannot create '" + file.string() + "'");
  out.write(kMagic, sizeof(kMagic));
  for (const auto* t : all_tensors(model)) {
    put_u32(out, static_cast<std::uint32_t>(t->name.size()));
    out.write(t->name.data(), static_cast<std::streamsize>(t->name.size()));
    put_u32(out, static_cast<std::uint32_t>(t->shape.size()));
    for (const auto d : t->shape) put_u32(out, static_cast<std::uint32_t>(d));
    for (const float v : t->data) put_u32(out, std::bit_cast<std::uint32_t>(v));
  }
  if (!out) throw std::runtime_error("failed writing '" + file.string() + "'");
}

void load_snapshot(const std::filesystem::path& file, nn::Classifier& model) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open snapshot '" + file.string() + "'");
  std::vector<char> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  Reader r(std::move(bytes), file.string());
  if (r.str(sizeof(kMagic)) != std::string(kMagic, sizeof(kMagic))) {
    throw std::runtime_error("'" + file.string() + "': bad magic, expected CTRLA1");
  }
  std::map<std::string, Stored> stored;
  while (!r.done()) {
    const std::string name = r.str(r.u32());
    Stored s;
    const std::uint32_t rank = r.u32();
    std::size_t count = 1;
    for (std::uint32_t k = 0; k < rank; ++k) {
      s.shape.push_back(r.u32());
      count *= s.shape.back();
    }
    r.need(count * 4);
    s.data.resize(count);
    for (auto& v : s.data) v = std::bit_cast<float>(r.u32());
    stored[name] = std::move(s);
  }
  for (auto* t : all_tensors(model)) {
    const auto it = stored.find(t->name);
    if (it == stored.end()) throw std::runtime_error("snapshot lacks tensor '" + t->name + "'");
    if (it->second.shape != t->shape) throw std::runtime_error("snapshot tensor '" + t->name + "' has a different shape");
    t->data = it->second.data;
  }
}

}  // namespace ctrla
