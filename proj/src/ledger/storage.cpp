#include "pharmachain/ledger/storage.hpp"

#include <iterator>
#include <stdexcept>

namespace pharmachain::ledger {

namespace {
constexpr std::string_view kSnapshotMagic = "PCSNAP01";

Bytes read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return Bytes(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

void write_file_atomic(const std::filesystem::path& path, ByteView data) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out.write(reinterpret_cast<const char*>(data.data()), static_cast<std::streamsize>(data.size()));
  }
  std::filesystem::rename(tmp, path);
}
}  // namespace

Bytes encode_kv(const KvMap& kv) {
  ByteWriter w;
  w.u32(static_cast<std::uint32_t>(kv.size()));
  for (const auto& [key, value] : kv) {
    w.u16(static_cast<std::uint16_t>(key.size()));
    w.raw(ByteView(reinterpret_cast<const std::uint8_t*>(key.data()), key.size()));
    w.blob(value);
  }
  return w.take();
}

KvMap decode_kv(ByteReader& r) {
  KvMap kv;
  auto n = r.u32();
  for (std::uint32_t i = 0; i < n; ++i) {
    auto klen = r.u16();
    auto kbytes = r.raw(klen);
    std::string key(kbytes.begin(), kbytes.end());
    kv.emplace(std::move(key), r.blob());
  }
  return kv;
}

Hash256 hash_kv(const KvMap& kv) { return sha256(encode_kv(kv)); }

Bytes encode_snapshot(const Snapshot& s) {
  ByteWriter w;
  w.raw(ByteView(reinterpret_cast<const std::uint8_t*>(kSnapshotMagic.data()), kSnapshotMagic.size()));
  w.u64(s.height);
  w.raw(encode_kv(s.entries));
  return w.take();
}

Snapshot decode_snapshot(ByteView data) {
  ByteReader r(data);
  auto magic = r.raw(kSnapshotMagic.size());
  if (std::string_view(reinterpret_cast<const char*>(magic.data()), magic.size()) != kSnapshotMagic)
    throw DecodeError("not a state snapshot");
  Snapshot s;
  s.height = r.u64();
  s.entries = decode_kv(r);
  r.expect_done();
  return s;
}

void write_snapshot(const std::filesystem::path& path, const Snapshot& s) {
  write_file_atomic(path, encode_snapshot(s));
}

std::optional<Snapshot> read_snapshot(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) return std::nullopt;
  try {
    return decode_snapshot(read_file(path));
  } catch (const DecodeError&) {
    return std::nullopt;
  }
}

BlockLog::BlockLog(std::filesystem::path path) : path_(std::move(path)) {
  out_.open(path_, std::ios::binary | std::ios::app);
  if (!out_) throw std::runtime_error("cannot open block log " + path_.string());
}

void BlockLog::append(ByteView record) {
  ByteWriter w;
  w.u32(static_cast<std::uint32_t>(record.size()));
  w.raw(record);
  out_.write(reinterpret_cast<const char*>(w.bytes().data()), static_cast<std::streamsize>(w.size()));
  out_.flush();
  if (!out_) throw std::runtime_error("write to block log failed");
}

BlockLog::Contents BlockLog::read_all(const std::filesystem::path& path) {
  Contents c;
  if (!std::filesystem::exists(path)) return c;
  auto data = read_file(path);
  std::size_t pos = 0;
  while (pos < data.size()) {
    if (data.size() - pos < 4) {
      c.records.emplace_back(data.begin() + static_cast<std::ptrdiff_t>(pos), data.end());
      c.truncated_tail = true;
      break;
    }
    std::uint32_t len = (std::uint32_t{data[pos]} << 24) | (std::uint32_t{data[pos + 1]} << 16) |
                        (std::uint32_t{data[pos + 2]} << 8) | std::uint32_t{data[pos + 3]};
    pos += 4;
    if (len > data.size() - pos) {
      c.records.emplace_back(data.begin() + static_cast<std::ptrdiff_t>(pos), data.end());
      c.truncated_tail = true;
      break;
    }
    c.records.emplace_back(data.begin() + static_cast<std::ptrdiff_t>(pos),
                           data.begin() + static_cast<std::ptrdiff_t>(pos + len));
    pos += len;
  }
  return c;
}

void BlockLog::write_all(const std::filesystem::path& path, const std::vector<Bytes>& records) {
  ByteWriter w;
  for (const auto& r : records) {
    w.u32(static_cast<std::uint32_t>(r.size()));
    w.raw(r);
  }
  write_file_atomic(path, w.bytes());
}

}  // namespace pharmachain::ledger
