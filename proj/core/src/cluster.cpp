#include <fcntl.h>
#include <sys/file.h>
#include <unistd.h>

#include <array>
#include <fstream>
#include <iterator>

#include <sodium.h>

#include "weavesafe/error.hpp"
#include "weavesafe/store.hpp"

namespace fs = std::filesystem;

namespace weavesafe::store {
namespace {

constexpr std::string_view kModule = "store";

void ensure_sodium() {
  static const int status = sodium_init();
  if (status < 0) throw Error(Errc::io_error, kModule, "libsodium failed to initialise");
}

// Exclusive flock on root/.lock for the lifetime of the object.
class WriterLock {
 public:
  explicit WriterLock(const fs::path& root) {
    const fs::path path = root / ".lock";
    fd_ = ::open(path.c_str(), O_RDWR | O_CREAT | O_CLOEXEC, 0644);
    if (fd_ < 0) throw Error(Errc::io_error, kModule, "cannot open " + path.string());
    if (::flock(fd_, LOCK_EX) != 0) {
      ::close(fd_);
      throw Error(Errc::io_error, kModule, "cannot lock " + path.string());
    }
  }
  ~WriterLock() {
    ::flock(fd_, LOCK_UN);
    ::close(fd_);
  }
  WriterLock(const WriterLock&) = delete;
  WriterLock& operator=(const WriterLock&) = delete;

 private:
  int fd_ = -1;
};

std::vector<std::uint8_t> read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::io_error, kModule, "cannot read " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

// Writes next to the target and renames, so readers never see half a file.
void write_file(const fs::path& path, std::span<const std::uint8_t> bytes) {
  fs::create_directories(path.parent_path());
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
    if (!out) throw Error(Errc::io_error, kModule, "cannot write " + tmp.string());
  }
  fs::rename(tmp, path);
}

void write_text(const fs::path& path, const std::string& text) {
  write_file(path, {reinterpret_cast<const std::uint8_t*>(text.data()), text.size()});
}

// 2 symbols per chunk. Seeded streams come from ChaCha20 keyed with
// SHA-256(seed).
std::vector<Element> coset_randomness(std::uint64_t chunks, const gf::Field& field,
                                      const std::optional<std::string>& seed) {
  const std::size_t sb = field.symbol_bytes();
  const std::size_t count = chunks * weaksec::OuterCode::kRandomSymbols;
  std::vector<std::uint8_t> raw(count * sb);
  if (seed) {
    std::array<unsigned char, randombytes_SEEDBYTES> key{};
    static_assert(randombytes_SEEDBYTES == crypto_hash_sha256_BYTES);
    crypto_hash_sha256(key.data(), reinterpret_cast<const unsigned char*>(seed->data()),
                       seed->size());
    randombytes_buf_deterministic(raw.data(), raw.size(), key.data());
  } else {
    randombytes_buf(raw.data(), raw.size());
  }
  const std::uint32_t mask = field.order() - 1;
  std::vector<Element> out(count);
  for (std::size_t i = 0; i < count; ++i) {
    std::uint32_t v = 0;
    for (std::size_t b = 0; b < sb; ++b) v = (v << 8) | raw[i * sb + b];
    out[i] = Element(v & mask);
  }
  return out;
}

fs::path share_name(unsigned node) {
  return fs::path("node_" + std::to_string(node)) / "share.wsrc";
}

}  // namespace

Cluster::Cluster(fs::path root, Manifest manifest)
    : root_(std::move(root)),
      manifest_(std::move(manifest)),
      codec_(weaksec::SecureCodec::create(manifest_.params)) {}

Cluster Cluster::store(const fs::path& root, std::span<const std::uint8_t> bytes,
                       const CodeParams& params, std::optional<std::string> seed) {
  ensure_sodium();
  fs::create_directories(root);
  WriterLock lock(root);

  Manifest manifest;
  manifest.params = params;
  manifest.original_length = bytes.size();
  manifest.sha256 = sha256_hex(bytes);
  for (unsigned e = 1; e <= params.n; ++e) manifest.share_files.push_back(share_name(e).string());

  const auto chunks = chunk_plaintext(bytes, params);
  manifest.chunk_count = chunks.size();
  Cluster cluster(root, manifest);
  const auto& codec = cluster.codec_;
  const auto randomness = coset_randomness(chunks.size(), *codec.field(), seed);

  std::vector<ShareFile> shares(params.n);
  for (unsigned e = 1; e <= params.n; ++e) {
    shares[e - 1].params = params;
    shares[e - 1].node = e;
    shares[e - 1].chunks.reserve(chunks.size());
  }
  constexpr std::size_t r = weaksec::OuterCode::kRandomSymbols;
  for (std::size_t c = 0; c < chunks.size(); ++c) {
    const Vector x =
        codec.coset_encode(chunks[c], std::span(randomness).subspan(c * r, r));
    const linalg::Matrix all = codec.inner().encode_all(x);
    for (unsigned e = 0; e < params.n; ++e) {
      shares[e].chunks.emplace_back(all.row(e).begin(), all.row(e).end());
    }
  }
  for (unsigned e = 1; e <= params.n; ++e) {
    write_file(cluster.share_path(e), shares[e - 1].serialize());
  }
  write_text(root / "manifest.json", manifest.to_json());
  return cluster;
}

Cluster Cluster::open(const fs::path& root) {
  ensure_sodium();
  const auto raw = read_file(root / "manifest.json");
  return Cluster(root, Manifest::from_json(std::string(raw.begin(), raw.end())));
}

void Cluster::check_node(unsigned node) const { codec_.inner().check_node(node); }

fs::path Cluster::share_path(unsigned node) const {
  check_node(node);
  return root_ / manifest_.share_files[node - 1];
}

bool Cluster::is_live(unsigned node) const { return fs::exists(share_path(node)); }

std::vector<unsigned> Cluster::live_nodes() const {
  std::vector<unsigned> out;
  for (unsigned e = 1; e <= params().n; ++e) {
    if (is_live(e)) out.push_back(e);
  }
  return out;
}

ShareFile Cluster::read_share(unsigned node) const {
  ShareFile share = ShareFile::parse(read_file(share_path(node)));
  if (share.params != params() || share.node != node) {
    throw Error(Errc::format_error, kModule,
                "share header of node " + std::to_string(node) + " does not match the manifest");
  }
  if (share.chunks.size() != manifest_.chunk_count) {
    throw Error(Errc::format_error, kModule,
                "share of node " + std::to_string(node) + " has the wrong chunk count");
  }
  return share;
}

std::vector<std::uint8_t> Cluster::reconstruct() const {
  auto live = live_nodes();
  if (live.size() < params().k) {
    throw Error(Errc::insufficient_nodes, kModule,
                "reconstruction needs k=" + std::to_string(params().k) + " live nodes, have " +
                    std::to_string(live.size()));
  }
  live.resize(params().k);
  std::vector<ShareFile> shares;
  for (unsigned e : live) shares.push_back(read_share(e));

  const auto plan = codec_.inner().reconstruction_plan(live);
  std::vector<Vector> chunks(manifest_.chunk_count);
  std::vector<Vector> per_node(live.size());
  for (std::size_t c = 0; c < chunks.size(); ++c) {
    for (std::size_t i = 0; i < live.size(); ++i) per_node[i] = shares[i].chunks[c];
    chunks[c] = codec_.coset_decode(plan.decode(per_node));
  }
  auto bytes = unchunk(chunks, params().m, manifest_.original_length);
  if (sha256_hex(bytes) != manifest_.sha256) {
    throw Error(Errc::digest_mismatch, kModule, "reconstructed data fails the digest check");
  }
  return bytes;
}

void Cluster::fail(unsigned node) {
  WriterLock lock(root_);
  const fs::path path = share_path(node);
  if (!fs::exists(path)) {
    throw Error(Errc::invalid_argument, kModule,
                "node " + std::to_string(node) + " has already failed");
  }
  fs::remove(path);
}

RepairStats Cluster::repair(unsigned node) {
  WriterLock lock(root_);
  if (is_live(node)) {
    throw Error(Errc::invalid_argument, kModule,
                "node " + std::to_string(node) + " is live; fail it before repairing");
  }
  auto helpers = live_nodes();
  const unsigned d = params().d;
  if (helpers.size() < d) {
    throw Error(Errc::insufficient_nodes, kModule,
                "repair needs d=" + std::to_string(d) + " live helpers, have " +
                    std::to_string(helpers.size()));
  }
  helpers.resize(d);
  std::vector<ShareFile> helper_shares;
  for (unsigned h : helpers) helper_shares.push_back(read_share(h));

  const auto& inner = codec_.inner();
  const auto plan = inner.repair_plan(node, helpers);
  ShareFile repaired;
  repaired.params = params();
  repaired.node = node;
  repaired.chunks.reserve(manifest_.chunk_count);

  RepairStats stats;
  stats.failed = node;
  stats.helpers = helpers;
  stats.chunks = manifest_.chunk_count;
  stats.symbols_per_chunk = d;
  Vector sent(d);
  for (std::size_t c = 0; c < manifest_.chunk_count; ++c) {
    for (std::size_t i = 0; i < d; ++i) {
      sent[i] = inner.helper_symbol(helpers[i], node, helper_shares[i].chunks[c]);
      ++stats.symbols_downloaded;
    }
    repaired.chunks.push_back(plan.regenerate(sent));
  }
  write_file(share_path(node), repaired.serialize());
  return stats;
}

std::vector<Vector> Cluster::eavesdrop(unsigned node) const {
  return read_share(node).chunks;
}

}  // namespace weavesafe::store
