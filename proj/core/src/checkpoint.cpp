#include "rampart/checkpoint.hpp"

#include <cstring>
#include <fstream>

#include "rampart/error.hpp"

namespace rampart {

namespace {

constexpr char kMagic[4] = {'R', 'P', 'C', 'K'};
constexpr uint32_t kVersion = 1;

void put_u32(std::string& out, uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

void put_u64(std::string& out, uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

void put_str(std::string& out, const std::string& s) {
  put_u32(out, static_cast<uint32_t>(s.size()));
  out += s;
}

class Cursor {
 public:
  Cursor(const std::string& buf, const std::string& what) : buf_(buf), what_(what) {}

  uint32_t u32() {
    need(4);
    uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<uint32_t>(static_cast<uint8_t>(buf_[pos_ + i])) << (8 * i);
    pos_ += 4;
    return v;
  }
  uint64_t u64() {
    need(8);
    uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<uint64_t>(static_cast<uint8_t>(buf_[pos_ + i])) << (8 * i);
    pos_ += 8;
    return v;
  }
  std::string str() {
    uint32_t n = u32();
    need(n);
    std::string s = buf_.substr(pos_, n);
    pos_ += n;
    return s;
  }
  double f64() {
    uint64_t bits = u64();
    double d;
    std::memcpy(&d, &bits, sizeof(d));
    return d;
  }
  size_t pos() const { return pos_; }

 private:
  void need(size_t n) {
    if (pos_ + n > buf_.size()) {
      throw ParseError(what_ + ": truncated", pos_);
    }
  }
  const std::string& buf_;
  std::string what_;
  size_t pos_ = 0;
};

}  // namespace

const Tensor& Checkpoint::tensor(const std::string& name) const {
  for (const auto& [n, t] : tensors) {
    if (n == name) return t;
  }
  throw ConfigError("checkpoint: no tensor named '" + name + "'");
}

void save_checkpoint(const std::filesystem::path& path, const Checkpoint& ckpt) {
  std::string out;
  out.append(kMagic, 4);
  put_u32(out, kVersion);
  put_u32(out, static_cast<uint32_t>(ckpt.metadata.size()));
  for (const auto& [k, v] : ckpt.metadata) {
    put_str(out, k);
    put_str(out, v);
  }
  put_u32(out, static_cast<uint32_t>(ckpt.tensors.size()));
  for (const auto& [name, t] : ckpt.tensors) {
    put_str(out, name);
    put_u32(out, static_cast<uint32_t>(t.rank()));
    for (int64_t d : t.shape()) put_u64(out, static_cast<uint64_t>(d));
    for (double v : t.values()) {
      uint64_t bits;
      std::memcpy(&bits, &v, sizeof(bits));
      put_u64(out, bits);
    }
  }
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError("cannot open '" + path.string() + "' for writing");
  f.write(out.data(), static_cast<std::streamsize>(out.size()));
  if (!f) throw IoError("write failed for '" + path.string() + "'");
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open '" + path.string() + "'");
  std::string buf((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
  const std::string what = "checkpoint '" + path.string() + "'";
  if (buf.size() < 8 || std::memcmp(buf.data(), kMagic, 4) != 0) {
    throw ParseError(what + ": bad magic", 0);
  }
  const std::string body = buf.substr(4);
  Cursor cur(body, what);
  Checkpoint ckpt;
  ckpt.version = cur.u32();
  if (ckpt.version != kVersion) {
    throw ParseError(what + ": unsupported version " + std::to_string(ckpt.version), 4);
  }
  const uint32_t n_meta = cur.u32();
  for (uint32_t i = 0; i < n_meta; ++i) {
    std::string k = cur.str();
    std::string v = cur.str();
    ckpt.metadata.emplace(std::move(k), std::move(v));
  }
  const uint32_t n_tensors = cur.u32();
  for (uint32_t i = 0; i < n_tensors; ++i) {
    std::string name = cur.str();
    const uint32_t rank = cur.u32();
    Shape shape(rank);
    for (uint32_t d = 0; d < rank; ++d) shape[d] = static_cast<int64_t>(cur.u64());
    const int64_t n = shape_numel(shape);
    std::vector<double> data(static_cast<size_t>(n));
    for (int64_t j = 0; j < n; ++j) data[static_cast<size_t>(j)] = cur.f64();
    ckpt.tensors.emplace_back(std::move(name), Tensor(std::move(shape), std::move(data)));
  }
  return ckpt;
}

Checkpoint checkpoint_from_params(const ParamSet& params) {
  Checkpoint ckpt;
  for (size_t i = 0; i < params.size(); ++i) {
    ckpt.tensors.emplace_back(params.names()[i], params.vars()[i].value());
  }
  return ckpt;
}

void params_from_checkpoint(const Checkpoint& ckpt, ParamSet& params) {
  for (size_t i = 0; i < params.size(); ++i) {
    const Tensor& src = ckpt.tensor(params.names()[i]);
    Tensor& dst = params.value(params.names()[i]);
    if (!dst.same_shape(src)) {
      throw ShapeError("checkpoint: tensor '" + params.names()[i] + "' has shape " +
                       shape_str(src.shape()) + ", expected " + shape_str(dst.shape()));
    }
    dst = src;
  }
}

}  // namespace rampart
