#pragma once

// On-disk formats: the append-only block log and the key-value state snapshot.
// Layouts are documented in docs/FORMATS.md.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "pharmachain/bytes.hpp"
#include "pharmachain/crypto.hpp"

namespace pharmachain::ledger {

// Domain entity id -> canonical value bytes. Ordered, so iteration is canonical.
using KvMap = std::map<std::string, Bytes>;

Bytes encode_kv(const KvMap& kv);
KvMap decode_kv(ByteReader& r);
Hash256 hash_kv(const KvMap& kv);

struct Snapshot {
  std::uint64_t height = 0;
  KvMap entries;
};

Bytes encode_snapshot(const Snapshot& s);
Snapshot decode_snapshot(ByteView data);
void write_snapshot(const std::filesystem::path& path, const Snapshot& s);
std::optional<Snapshot> read_snapshot(const std::filesystem::path& path);

// Each record is a u32 big-endian length followed by one encoded block.
class BlockLog {
 public:
  explicit BlockLog(std::filesystem::path path);

  void append(ByteView record);
  const std::filesystem::path& path() const { return path_; }

  struct Contents {
    std::vector<Bytes> records;
    // A length prefix pointed past end of file; the remainder became the last record.
    bool truncated_tail = false;
  };
  static Contents read_all(const std::filesystem::path& path);
  static void write_all(const std::filesystem::path& path, const std::vector<Bytes>& records);

 private:
  std::filesystem::path path_;
  std::ofstream out_;
};

}  // namespace pharmachain::ledger
