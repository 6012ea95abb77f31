#include <cstring>
#include <fstream>
#include <string>

#include "asrnn/errors.hpp"
#include "asrnn/tasks.hpp"

namespace asrnn {

namespace {

constexpr char kMagic[4] = {'A', 'S', 'D', 'S'};
constexpr std::uint32_t kVersion = 1;

// All multi-byte fields are little-endian regardless of host order.
template <typename T>
void write_le(std::ofstream& out, T v) {
  unsigned char buf[sizeof(T)];
  for (std::size_t i = 0; i < sizeof(T); ++i)
    buf[i] = static_cast<unsigned char>((static_cast<std::uint64_t>(v) >> (8 * i)) & 0xFF);
  out.write(reinterpret_cast<const char*>(buf), sizeof(T));
}

void write_f32(std::ofstream& out, float v) {
  std::uint32_t bits;
  std::memcpy(&bits, &v, 4);
  write_le(out, bits);
}

class Reader {
 public:
  explicit Reader(const std::string& path) : path_(path), in_(path, std::ios::binary) {
    if (!in_) throw DataError("cannot open dataset file: " + path);
  }

  std::uint64_t offset() const { return offset_; }

  void read_bytes(void* dst, std::size_t n) {
    in_.read(static_cast<char*>(dst), static_cast<std::streamsize>(n));
    if (static_cast<std::size_t>(in_.gcount()) != n)
      throw DataError("dataset parse error in " + path_ + ": truncated read at byte offset " +
                      std::to_string(offset_));
    offset_ += n;
  }

  template <typename T>
  T read_le() {
    unsigned char buf[sizeof(T)];
    read_bytes(buf, sizeof(T));
    std::uint64_t v = 0;
    for (std::size_t i = 0; i < sizeof(T); ++i)
      v |= static_cast<std::uint64_t>(buf[i]) << (8 * i);
    return static_cast<T>(v);
  }

  float read_f32() {
    std::uint32_t bits = read_le<std::uint32_t>();
    float v;
    std::memcpy(&v, &bits, 4);
    return v;
  }

  [[noreturn]] void fail(const std::string& what) {
    throw DataError("dataset parse error in " + path_ + ": " + what +
                    " at byte offset " + std::to_string(offset_));
  }

 private:
  std::string path_;
  std::ifstream in_;
  std::uint64_t offset_ = 0;
};

}  // namespace

void save_dataset(const Dataset& ds, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot open dataset file for writing: " + path);

  out.write(kMagic, 4);
  write_le(out, kVersion);

  std::string header = "task=" + ds.task + "\n";
  header += "frame_dim=" + std::to_string(ds.frame_dim) + "\n";
  header += "classes=" + std::to_string(ds.classes) + "\n";
  header += "per_step=" + std::string(ds.per_step ? "1" : "0") + "\n";
  header += "seed=" + std::to_string(ds.seed) + "\n";
  header += "count=" + std::to_string(ds.examples.size()) + "\n";
  header += ds.header_text;
  write_le(out, static_cast<std::uint32_t>(header.size()));
  out.write(header.data(), static_cast<std::streamsize>(header.size()));

  write_le(out, static_cast<std::uint32_t>(ds.examples.size()));
  for (const TaskExample& ex : ds.examples) {
    write_le(out, static_cast<std::uint32_t>(ex.length()));
    std::uint8_t flags = 0;
    if (!ex.per_step) flags |= 1;  // sequence label present
    if (ex.per_step) flags |= 2;
    write_le(out, flags);
    if (!ex.per_step) write_le(out, ex.label);
    if (ex.per_step) {
      for (std::uint16_t t : ex.step_targets) write_le(out, t);
      for (std::uint8_t m : ex.mask) write_le(out, m);
    }
    for (double v : ex.frames) write_f32(out, static_cast<float>(v));
  }
  out.flush();
  if (!out) throw DataError("write failure on dataset file: " + path);
}

Dataset load_dataset(const std::string& path) {
  Reader r(path);

  char magic[4];
  r.read_bytes(magic, 4);
  if (std::memcmp(magic, kMagic, 4) != 0)
    throw DataError("dataset parse error in " + path +
                    ": bad magic bytes at byte offset 0");
  const std::uint32_t version = r.read_le<std::uint32_t>();
  if (version != kVersion)
    throw DataError("dataset version mismatch in " + path + ": file has version " +
                    std::to_string(version) + ", reader supports " +
                    std::to_string(kVersion));

  Dataset ds;
  const std::uint32_t header_len = r.read_le<std::uint32_t>();
  std::string header(header_len, '\0');
  if (header_len) r.read_bytes(header.data(), header_len);

  // Pull the well-known keys; everything else is generator provenance.
  std::size_t consumed = 0;
  auto take_line = [&](const std::string& key) -> std::string {
    const std::string prefix = key + "=";
    std::size_t pos = consumed;
    if (header.compare(pos, prefix.size(), prefix) != 0)
      r.fail("expected header key '" + key + "'");
    std::size_t eol = header.find('\n', pos);
    if (eol == std::string::npos) r.fail("unterminated header line");
    std::string value = header.substr(pos + prefix.size(),
                                      eol - pos - prefix.size());
    consumed = eol + 1;
    return value;
  };
  try {
    ds.task = take_line("task");
    ds.frame_dim = std::stoull(take_line("frame_dim"));
    ds.classes = std::stoull(take_line("classes"));
    ds.per_step = take_line("per_step") == "1";
    ds.seed = std::stoull(take_line("seed"));
    const std::size_t declared = std::stoull(take_line("count"));
    ds.header_text = header.substr(consumed);
    if (ds.frame_dim == 0) r.fail("frame_dim must be positive");

    const std::uint32_t count = r.read_le<std::uint32_t>();
    if (count != declared) r.fail("example count disagrees with header");
    ds.examples.reserve(count);
    for (std::uint32_t e = 0; e < count; ++e) {
      TaskExample ex;
      ex.frame_dim = ds.frame_dim;
      const std::uint32_t T = r.read_le<std::uint32_t>();
      const std::uint8_t flags = r.read_le<std::uint8_t>();
      ex.per_step = (flags & 2) != 0;
      if (ex.per_step != ds.per_step) r.fail("example kind disagrees with header");
      if (flags & 1) ex.label = r.read_le<std::uint16_t>();
      if (ex.per_step) {
        ex.step_targets.resize(T);
        for (std::uint32_t t = 0; t < T; ++t)
          ex.step_targets[t] = r.read_le<std::uint16_t>();
        ex.mask.resize(T);
        for (std::uint32_t t = 0; t < T; ++t) ex.mask[t] = r.read_le<std::uint8_t>();
      }
      ex.frames.resize(static_cast<std::size_t>(T) * ds.frame_dim);
      for (double& v : ex.frames) v = static_cast<double>(r.read_f32());
      ds.examples.push_back(std::move(ex));
    }
  } catch (const std::invalid_argument&) {
    r.fail("malformed numeric header field");
  } catch (const std::out_of_range&) {
    r.fail("numeric header field out of range");
  }
  return ds;
}

}  // namespace asrnn
