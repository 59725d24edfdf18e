// weavesafe: store a file on simulated nodes, break and repair them, and audit
// the secrecy of the code.

#include <fstream>
#include <iomanip>
#include <iostream>
#include <iterator>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "weavesafe/audit.hpp"
#include "weavesafe/error.hpp"
#include "weavesafe/store.hpp"

namespace ws = weavesafe;
namespace fs = std::filesystem;

namespace {

enum Exit : int {
  kOk = 0,
  kOther = 1,
  kUsage = 2,
  kParams = 3,
  kNodes = 4,
  kSecrecy = 5,
  kCap = 6,
};

int exit_code(ws::Errc code) {
  switch (code) {
    case ws::Errc::parameter_invalid: return kParams;
    case ws::Errc::insufficient_nodes: return kNodes;
    case ws::Errc::secrecy_violation: return kSecrecy;
    case ws::Errc::cap_exceeded: return kCap;
    default: return kOther;
  }
}

struct ParamFlags {
  unsigned n = 0;
  unsigned k = 0;
  unsigned d = 0;
  unsigned m = 0;  // 0: pick

  void add_to(CLI::App* app, bool required) {
    auto* on = app->add_option("-n", n, "number of storage nodes");
    auto* ok = app->add_option("-k", k, "nodes needed to reconstruct");
    auto* od = app->add_option("-d", d, "helpers contacted during repair");
    if (required) {
      on->required();
      ok->required();
      od->required();
    }
    app->add_option("-m", m, "field degree (default: smallest of 4, 8, 16 that fits)");
  }

  bool given() const { return n != 0 || k != 0 || d != 0; }

  ws::pm_mbr::CodeParams resolve() const {
    unsigned degree = m;
    if (degree == 0) {
      const unsigned long need = static_cast<unsigned long>(n) + 2ul * d;
      for (unsigned cand : {4u, 8u, 16u}) {
        if ((1ul << cand) >= need) {
          degree = cand;
          break;
        }
      }
      if (degree == 0) degree = 16;  // let params_new report it
    }
    return ws::pm_mbr::params_new(n, k, d, degree);
  }
};

std::vector<std::uint8_t> slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ws::Error(ws::Errc::io_error, "cli", "cannot read " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void spill(const fs::path& path, std::span<const std::uint8_t> bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw ws::Error(ws::Errc::io_error, "cli", "cannot write " + path.string());
}

void require_node(const ws::store::Cluster& cluster, unsigned node) {
  if (node < 1 || node > cluster.params().n) {
    throw ws::Error(ws::Errc::parameter_invalid, "cli",
                    "node index out of range: " + std::to_string(node) + " (n=" +
                        std::to_string(cluster.params().n) + ")");
  }
}

std::string hex_symbols(std::span<const ws::gf::Element> v, unsigned m) {
  std::ostringstream out;
  const int width = static_cast<int>((m + 3) / 4);
  out << std::hex << std::setfill('0');
  for (std::size_t i = 0; i < v.size(); ++i) {
    out << (i ? " " : "") << std::setw(width) << v[i].value();
  }
  return out.str();
}

// Checks stored shares against G_e X for every chunk, with X decoded from k
// live nodes.
nlohmann::json observe_cluster(const ws::store::Cluster& cluster) {
  const auto& codec = cluster.codec();
  const auto& p = cluster.params();
  auto live = cluster.live_nodes();
  nlohmann::json j = {{"root", cluster.root().string()},
                      {"chunks", cluster.manifest().chunk_count},
                      {"live_nodes", live}};
  if (live.size() < p.k) {
    j["checked"] = false;
    return j;
  }
  std::vector<ws::store::ShareFile> shares;
  for (unsigned e : live) shares.push_back(cluster.read_share(e));
  std::vector<unsigned> decoders(live.begin(), live.begin() + p.k);
  const auto plan = codec.inner().reconstruction_plan(decoders);

  std::vector<ws::linalg::Matrix> g;
  std::vector<std::size_t> observed;
  for (unsigned e : live) {
    g.push_back(codec.inner().generator_matrix(e));
    observed.push_back(ws::linalg::rank(g.back()));
  }
  bool match = true;
  std::vector<ws::linalg::Vector> per_node(p.k);
  for (std::size_t c = 0; c < cluster.manifest().chunk_count && match; ++c) {
    for (std::size_t i = 0; i < p.k; ++i) per_node[i] = shares[i].chunks[c];
    const auto x = plan.decode(per_node);
    for (std::size_t i = 0; i < live.size(); ++i) {
      if (ws::linalg::mat_vec(g[i], x) != shares[i].chunks[c]) match = false;
    }
  }
  j["checked"] = true;
  j["shares_equal_generator_times_codeword"] = match;
  j["independent_symbols_per_node"] = observed;
  return j;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"weakly secure regenerating-code storage simulator"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "weavesafe 0.1.0");

  ParamFlags params;
  std::string input, root, output, seed, format = "text";
  unsigned node = 0;
  std::optional<std::size_t> guesses;
  std::optional<std::uint64_t> cap;
  bool baseline = false;
  bool no_grid = false;

  auto* encode = app.add_subcommand("encode", "encode FILE into a cluster at ROOT");
  params.add_to(encode, true);
  encode->add_option("--seed", seed, "deterministic coset randomness (testing only)");
  encode->add_option("file", input)->required()->check(CLI::ExistingFile);
  encode->add_option("root", root)->required();

  auto* reconstruct = app.add_subcommand("reconstruct", "decode ROOT into OUT");
  reconstruct->add_option("root", root)->required()->check(CLI::ExistingDirectory);
  reconstruct->add_option("out", output)->required();

  auto* fail = app.add_subcommand("fail", "delete the share of NODE");
  fail->add_option("root", root)->required()->check(CLI::ExistingDirectory);
  fail->add_option("node", node)->required();

  auto* repair = app.add_subcommand("repair", "regenerate the share of failed NODE");
  repair->add_option("root", root)->required()->check(CLI::ExistingDirectory);
  repair->add_option("node", node)->required();

  auto* eavesdrop = app.add_subcommand("eavesdrop", "dump what NODE stores, per chunk");
  eavesdrop->add_option("root", root)->required()->check(CLI::ExistingDirectory);
  eavesdrop->add_option("node", node)->required();
  eavesdrop->add_option("out", output, "write here instead of stdout");
  eavesdrop->add_option("--format", format)->check(CLI::IsMember({"text", "json"}));

  auto* audit = app.add_subcommand("audit", "check weak secrecy by rank computation");
  params.add_to(audit, false);
  audit->add_option("--root", root, "audit the code of an existing cluster")
      ->check(CLI::ExistingDirectory);
  audit->add_option("-g", guesses, "guesses to verify (default d+k-4)");
  audit->add_flag("--baseline", baseline, "audit the code without the outer coset code");
  audit->add_option("--cap", cap, "maximum rank checks (overrides WEAVESAFE_AUDIT_CAP)");
  audit->add_flag("--no-grid", no_grid, "skip the completion certificate grid");
  audit->add_option("--format", format)->check(CLI::IsMember({"text", "json"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }

  try {
    if (*encode) {
      const auto p = params.resolve();
      const auto bytes = slurp(input);
      std::optional<std::string> s;
      if (!seed.empty()) s = seed;
      const auto cluster = ws::store::Cluster::store(root, bytes, p, s);
      std::cout << "stored " << bytes.size() << " bytes as " << cluster.manifest().chunk_count
                << " chunks on " << p.n << " nodes (n=" << p.n << " k=" << p.k
                << " d=" << p.d << " m=" << p.m << ")\n";
    } else if (*reconstruct) {
      const auto cluster = ws::store::Cluster::open(root);
      const auto bytes = cluster.reconstruct();
      spill(output, bytes);
      std::cout << "reconstructed " << bytes.size() << " bytes, sha256 ok\n";
    } else if (*fail) {
      auto cluster = ws::store::Cluster::open(root);
      require_node(cluster, node);
      cluster.fail(node);
      std::cout << "node " << node << " failed\n";
    } else if (*repair) {
      auto cluster = ws::store::Cluster::open(root);
      require_node(cluster, node);
      const auto stats = cluster.repair(node);
      std::cout << "node " << node << " repaired from helpers";
      for (unsigned h : stats.helpers) std::cout << ' ' << h;
      std::cout << "\nchunks: " << stats.chunks
                << "\nsymbols_per_chunk: " << stats.symbols_per_chunk
                << "\nsymbols_downloaded: " << stats.symbols_downloaded << '\n';
    } else if (*eavesdrop) {
      const auto cluster = ws::store::Cluster::open(root);
      require_node(cluster, node);
      const auto chunks = cluster.eavesdrop(node);
      std::ostringstream out;
      if (format == "json") {
        nlohmann::json j = {{"node", node}, {"m", cluster.params().m}};
        auto& rows = j["chunks"] = nlohmann::json::array();
        for (const auto& c : chunks) {
          std::vector<std::uint32_t> v;
          for (auto s : c) v.push_back(s.value());
          rows.push_back(v);
        }
        out << j.dump() << '\n';
      } else {
        for (const auto& c : chunks) out << hex_symbols(c, cluster.params().m) << '\n';
      }
      if (output.empty()) {
        std::cout << out.str();
      } else {
        const std::string text = out.str();
        spill(output, {reinterpret_cast<const std::uint8_t*>(text.data()), text.size()});
      }
    } else if (*audit) {
      std::optional<ws::store::Cluster> cluster;
      ws::pm_mbr::CodeParams p;
      if (!root.empty()) {
        if (params.given()) {
          throw CLI::ValidationError("--root", "give either --root or -n/-k/-d, not both");
        }
        cluster = ws::store::Cluster::open(root);
        p = cluster->params();
      } else {
        if (params.n == 0 || params.k == 0 || params.d == 0) {
          throw CLI::ValidationError("audit", "needs -n, -k and -d, or --root");
        }
        p = params.resolve();
      }
      ws::audit::AuditOptions options;
      options.guesses = guesses;
      options.baseline = baseline;
      options.completion_grid = !no_grid;
      options.limits = ws::audit::AuditLimits::from_environment();
      if (cap) options.limits.check_cap = *cap;

      const auto codec =
          cluster ? cluster->codec() : ws::weaksec::SecureCodec::create(p);
      const auto report = ws::audit::audit_report(codec, options);
      if (format == "json") {
        auto j = nlohmann::json::parse(report.to_json());
        if (cluster) j["cluster"] = observe_cluster(*cluster);
        std::cout << j.dump(2) << '\n';
      } else {
        std::cout << report.to_text();
        if (cluster) {
          const auto obs = observe_cluster(*cluster);
          std::cout << "\n[cluster]\n";
          for (const auto& [key, value] : obs.items()) std::cout << key << ": " << value.dump() << '\n';
        }
      }
      return report.verdict.passed() ? kOk : kSecrecy;
    }
  } catch (const CLI::ValidationError& e) {
    std::cerr << "weavesafe: " << e.what() << '\n';
    return kUsage;
  } catch (const ws::Error& e) {
    std::cerr << "weavesafe: " << e.what() << '\n';
    return exit_code(e.code());
  } catch (const std::exception& e) {
    std::cerr << "weavesafe: " << e.what() << '\n';
    return kOther;
  }
  return kOk;
}
