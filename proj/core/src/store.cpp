#include <array>
#include <cstring>

#include <json.hpp>
#include <sodium.h>

#include "weavesafe/error.hpp"
#include "weavesafe/store.hpp"

namespace weavesafe::store {
namespace {

constexpr std::string_view kModule = "store";
constexpr std::array<std::uint8_t, 4> kMagic = {'W', 'S', 'R', 'C'};

[[noreturn]] void bad_format(const std::string& what) {
  throw Error(Errc::format_error, kModule, what);
}

}  // namespace

std::vector<Vector> chunk_plaintext(std::span<const std::uint8_t> bytes, unsigned m,
                                    std::size_t chunk_symbols) {
  if (m < gf::kMinDegree || m > gf::kMaxDegree || chunk_symbols == 0) {
    throw Error(Errc::invalid_argument, kModule, "bad chunk geometry");
  }
  const std::uint64_t bits = static_cast<std::uint64_t>(bytes.size()) * 8;
  const std::uint64_t symbols = (bits + m - 1) / m;
  const std::uint64_t chunks = (symbols + chunk_symbols - 1) / chunk_symbols;

  std::vector<Vector> out(chunks, Vector(chunk_symbols));
  std::uint32_t acc = 0;
  unsigned have = 0;
  std::uint64_t next = 0;
  auto emit = [&](std::uint32_t v) {
    out[next / chunk_symbols][next % chunk_symbols] = Element(v);
    ++next;
  };
  for (std::uint8_t byte : bytes) {
    acc = (acc << 8) | byte;
    have += 8;
    while (have >= m) {
      have -= m;
      emit((acc >> have) & ((1u << m) - 1));
    }
    acc &= (1u << have) - 1;
  }
  if (have > 0) emit((acc << (m - have)) & ((1u << m) - 1));
  return out;
}

std::vector<Vector> chunk_plaintext(std::span<const std::uint8_t> bytes,
                                    const CodeParams& params) {
  return chunk_plaintext(bytes, params.m, params.secure_size());
}

std::vector<std::uint8_t> unchunk(std::span<const Vector> chunks, unsigned m,
                                  std::size_t length) {
  std::vector<std::uint8_t> out;
  out.reserve(length);
  std::uint32_t acc = 0;
  unsigned have = 0;
  for (const Vector& chunk : chunks) {
    for (Element s : chunk) {
      if (out.size() == length) return out;
      acc = (acc << m) | s.value();
      have += m;
      while (have >= 8 && out.size() < length) {
        have -= 8;
        out.push_back(static_cast<std::uint8_t>(acc >> have));
      }
      acc &= (1u << have) - 1;
    }
  }
  if (out.size() != length) {
    throw Error(Errc::format_error, kModule, "chunks hold fewer bytes than recorded");
  }
  return out;
}

std::string sha256_hex(std::span<const std::uint8_t> bytes) {
  std::array<unsigned char, crypto_hash_sha256_BYTES> digest{};
  crypto_hash_sha256(digest.data(), bytes.data(), bytes.size());
  std::array<char, 2 * crypto_hash_sha256_BYTES + 1> hex{};
  sodium_bin2hex(hex.data(), hex.size(), digest.data(), digest.size());
  return std::string(hex.data());
}

std::vector<std::uint8_t> ShareFile::serialize() const {
  const auto field = gf::Field::create(params.m);
  const std::size_t sb = field->symbol_bytes();
  const std::uint32_t count = static_cast<std::uint32_t>(chunks.size());

  std::vector<std::uint8_t> out(kShareHeaderBytes + chunks.size() * params.d * sb);
  std::memcpy(out.data(), kMagic.data(), kMagic.size());
  out[4] = kShareVersion;
  out[5] = static_cast<std::uint8_t>(params.m);
  out[6] = static_cast<std::uint8_t>(params.n);
  out[7] = static_cast<std::uint8_t>(params.k);
  out[8] = static_cast<std::uint8_t>(params.d);
  out[9] = static_cast<std::uint8_t>(node);
  out[10] = out[11] = 0;
  for (int i = 0; i < 4; ++i) out[12 + i] = static_cast<std::uint8_t>(count >> (8 * i));

  std::size_t pos = kShareHeaderBytes;
  for (const Vector& chunk : chunks) {
    if (chunk.size() != params.d) {
      throw Error(Errc::dimension_mismatch, kModule, "share chunk must hold d symbols");
    }
    for (Element s : chunk) {
      field->write_symbol(s, std::span(out).subspan(pos, sb));
      pos += sb;
    }
  }
  return out;
}

ShareFile ShareFile::parse(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < kShareHeaderBytes) bad_format("share file shorter than its header");
  if (!std::equal(kMagic.begin(), kMagic.end(), bytes.begin())) bad_format("bad magic");
  if (bytes[4] != kShareVersion) {
    bad_format("unsupported share version " + std::to_string(bytes[4]));
  }
  if (bytes[10] != 0 || bytes[11] != 0) bad_format("reserved header bytes are not zero");

  ShareFile share;
  try {
    share.params = pm_mbr::params_new(bytes[6], bytes[7], bytes[8], bytes[5]);
  } catch (const Error& e) {
    bad_format(std::string("header parameters invalid: ") + e.what());
  }
  share.node = bytes[9];
  if (share.node < 1 || share.node > share.params.n) bad_format("header node out of range");

  std::uint32_t count = 0;
  for (int i = 0; i < 4; ++i) count |= static_cast<std::uint32_t>(bytes[12 + i]) << (8 * i);

  const auto field = gf::Field::create(share.params.m);
  const std::size_t sb = field->symbol_bytes();
  const std::size_t d = share.params.d;
  if (bytes.size() - kShareHeaderBytes != static_cast<std::size_t>(count) * d * sb) {
    bad_format("payload length does not match chunk count");
  }
  share.chunks.assign(count, Vector(d));
  std::size_t pos = kShareHeaderBytes;
  for (auto& chunk : share.chunks) {
    for (auto& s : chunk) {
      s = field->read_symbol(bytes.subspan(pos, sb));
      pos += sb;
    }
  }
  return share;
}

std::string Manifest::to_json() const {
  nlohmann::ordered_json j;
  j["format_version"] = format_version;
  j["params"] = {{"n", params.n}, {"k", params.k}, {"d", params.d}, {"m", params.m}};
  j["original_length"] = original_length;
  j["chunk_count"] = chunk_count;
  j["share_files"] = share_files;
  j["sha256"] = sha256;
  return j.dump(2) + "\n";
}

Manifest Manifest::from_json(const std::string& text) {
  Manifest m;
  try {
    const auto j = nlohmann::json::parse(text);
    m.format_version = j.at("format_version").get<unsigned>();
    if (m.format_version != kManifestVersion) {
      bad_format("unsupported manifest version " + std::to_string(m.format_version));
    }
    const auto& p = j.at("params");
    m.params = pm_mbr::params_new(p.at("n").get<unsigned>(), p.at("k").get<unsigned>(),
                                  p.at("d").get<unsigned>(), p.at("m").get<unsigned>());
    m.original_length = j.at("original_length").get<std::uint64_t>();
    m.chunk_count = j.at("chunk_count").get<std::uint64_t>();
    m.share_files = j.at("share_files").get<std::vector<std::string>>();
    m.sha256 = j.at("sha256").get<std::string>();
  } catch (const nlohmann::json::exception& e) {
    bad_format(std::string("manifest: ") + e.what());
  }
  if (m.share_files.size() != m.params.n) bad_format("manifest lists the wrong number of shares");
  const std::uint64_t bits = m.original_length * 8;
  const std::uint64_t symbols = (bits + m.params.m - 1) / m.params.m;
  const std::uint64_t bs = m.params.secure_size();
  if (m.chunk_count != (symbols + bs - 1) / bs) bad_format("manifest chunk count mismatch");
  return m;
}

}  // namespace weavesafe::store
