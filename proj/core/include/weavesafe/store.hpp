#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "weavesafe/pm_mbr.hpp"
#include "weavesafe/weaksec.hpp"

namespace weavesafe::store {

using gf::Element;
using linalg::Vector;
using pm_mbr::CodeParams;

// Big-endian bit packing at m bits per symbol, split into chunks of
// `chunk_symbols` symbols. The last chunk is zero padded.
std::vector<Vector> chunk_plaintext(std::span<const std::uint8_t> bytes, unsigned m,
                                    std::size_t chunk_symbols);
std::vector<Vector> chunk_plaintext(std::span<const std::uint8_t> bytes,
                                    const CodeParams& params);
// Inverse of chunk_plaintext; padding past `length` bytes is dropped.
std::vector<std::uint8_t> unchunk(std::span<const Vector> chunks, unsigned m,
                                  std::size_t length);

std::string sha256_hex(std::span<const std::uint8_t> bytes);

inline constexpr std::uint8_t kShareVersion = 1;
inline constexpr std::size_t kShareHeaderBytes = 16;

// One node's file: 16-byte header then chunk_count * d symbols.
//   0  "WSRC"
//   4  version u8
//   5  m, n, k, d, node  (u8 each)
//  10  reserved u16 = 0
//  12  chunk_count u32 little-endian
struct ShareFile {
  CodeParams params;
  unsigned node = 0;           // 1-based
  std::vector<Vector> chunks;  // d symbols each

  std::vector<std::uint8_t> serialize() const;
  // Throws Error(format_error) on a malformed header or payload length.
  static ShareFile parse(std::span<const std::uint8_t> bytes);
};

inline constexpr unsigned kManifestVersion = 1;

struct Manifest {
  unsigned format_version = kManifestVersion;
  CodeParams params;
  std::uint64_t original_length = 0;
  std::uint64_t chunk_count = 0;
  std::vector<std::string> share_files;  // relative to the root, index e-1
  std::string sha256;

  std::string to_json() const;
  static Manifest from_json(const std::string& text);

  friend bool operator==(const Manifest&, const Manifest&) = default;
};

struct RepairStats {
  unsigned failed = 0;
  std::vector<unsigned> helpers;
  std::uint64_t chunks = 0;
  // One symbol per helper per chunk.
  std::uint64_t symbols_downloaded = 0;
  std::uint64_t symbols_per_chunk = 0;
};

// Directory-backed simulation of n storage nodes:
//   root/manifest.json
//   root/node_<i>/share.wsrc
// A node is live when its share file exists.
class Cluster {
 public:
  // Encodes `bytes` into a fresh cluster at `root`. With a seed the coset
  // randomness is a deterministic stream derived from it (tests only: reusing
  // a seed for real data gives up the uniform randomness secrecy relies on).
  static Cluster store(const std::filesystem::path& root, std::span<const std::uint8_t> bytes,
                       const CodeParams& params,
                       std::optional<std::string> seed = std::nullopt);
  // Opens an existing cluster by reading its manifest.
  static Cluster open(const std::filesystem::path& root);

  const std::filesystem::path& root() const { return root_; }
  const Manifest& manifest() const { return manifest_; }
  const CodeParams& params() const { return manifest_.params; }
  const weaksec::SecureCodec& codec() const { return codec_; }

  std::filesystem::path share_path(unsigned node) const;
  bool is_live(unsigned node) const;
  std::vector<unsigned> live_nodes() const;

  ShareFile read_share(unsigned node) const;

  // Decodes from the first k live nodes and checks the digest.
  std::vector<std::uint8_t> reconstruct() const;
  // Deletes the share of `node`.
  void fail(unsigned node);
  // Regenerates the share of a failed node from the first d live helpers.
  RepairStats repair(unsigned node);
  // What node e stores, chunk by chunk.
  std::vector<Vector> eavesdrop(unsigned node) const;

 private:
  Cluster(std::filesystem::path root, Manifest manifest);

  void check_node(unsigned node) const;

  std::filesystem::path root_;
  Manifest manifest_;
  weaksec::SecureCodec codec_;
};

}  // namespace weavesafe::store
