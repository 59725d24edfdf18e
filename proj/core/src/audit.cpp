#include <cstdlib>
#include <numeric>
#include <string>
#include <unordered_map>

#include "weavesafe/audit.hpp"
#include "weavesafe/combinations.hpp"
#include "weavesafe/error.hpp"

namespace weavesafe::audit {
namespace {

constexpr std::string_view kModule = "audit";

std::vector<Matrix> node_generators(const SecureCodec& codec) {
  std::vector<Matrix> out;
  for (unsigned e = 1; e <= codec.params().n; ++e) {
    out.push_back(codec.inner().generator_matrix(e));
  }
  return out;
}

void check_node(const SecrecyModel& model, unsigned node) {
  if (node < 1 || node > model.node_count()) {
    throw Error(Errc::invalid_argument, kModule,
                "node index out of range: " + std::to_string(node));
  }
}

void check_subset(const SecrecyModel& model, std::span<const std::size_t> subset) {
  for (std::size_t r : subset) {
    if (r >= model.message_size()) {
      throw Error(Errc::invalid_argument, kModule,
                  "message index " + std::to_string(r + 1) + " outside 1.." +
                      std::to_string(model.message_size()));
    }
  }
}

// Packs symbols as 2-byte big-endian chunks; used as a hash key.
void append_key(std::string& key, std::span<const Element> symbols) {
  for (Element s : symbols) {
    key.push_back(static_cast<char>(s.value() >> 8));
    key.push_back(static_cast<char>(s.value() & 0xFF));
  }
}

// Exponent j with value == q^j, or nullopt.
std::optional<int> log_q(std::uint64_t value, std::uint64_t q) {
  int j = 0;
  while (value > 1) {
    if (value % q != 0) return std::nullopt;
    value /= q;
    ++j;
  }
  return value == 1 ? std::optional<int>(j) : std::nullopt;
}

}  // namespace

SecrecyModel construction_model(const SecureCodec& codec) {
  return SecrecyModel{"construction", codec.outer().H(), node_generators(codec)};
}

SecrecyModel baseline_model(const SecureCodec& codec) {
  const std::size_t b = codec.params().message_size();
  return SecrecyModel{"baseline", Matrix::identity(codec.field(), b), node_generators(codec)};
}

std::size_t leakage(const Matrix& h_sub, const Matrix& g) {
  if (h_sub.cols() != g.cols()) {
    throw Error(Errc::dimension_mismatch, kModule,
                "H_sub has " + std::to_string(h_sub.cols()) + " columns, G has " +
                    std::to_string(g.cols()));
  }
  const std::size_t stacked = linalg::rank(linalg::vstack(h_sub, g));
  return linalg::rank(h_sub) + linalg::rank(g) - stacked;
}

LeakageReport leakage_report(const SecrecyModel& model, std::span<const std::size_t> subset,
                             unsigned node) {
  check_node(model, node);
  check_subset(model, subset);
  const Matrix h_sub = linalg::select_rows(model.parity_check, subset);
  return LeakageReport{node, {subset.begin(), subset.end()},
                       leakage(h_sub, model.node_generators[node - 1])};
}

AuditLimits AuditLimits::from_environment() {
  AuditLimits limits;
  if (const char* env = std::getenv("WEAVESAFE_AUDIT_CAP"); env != nullptr && *env != '\0') {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (end == env || *end != '\0') {
      throw Error(Errc::invalid_argument, kModule,
                  std::string("WEAVESAFE_AUDIT_CAP is not a number: ") + env);
    }
    limits.check_cap = v;
  }
  return limits;
}

std::uint64_t weak_secrecy_checks(const SecrecyModel& model, std::size_t guesses) {
  std::uint64_t subsets = 0;
  for (std::size_t s = 1; s <= guesses + 1 && s <= model.message_size(); ++s) {
    const std::uint64_t c = binomial(model.message_size(), s);
    subsets = (c > UINT64_MAX - subsets) ? UINT64_MAX : subsets + c;
  }
  const std::uint64_t n = model.node_count();
  return (n != 0 && subsets > UINT64_MAX / n) ? UINT64_MAX : subsets * n;
}

SecrecyVerdict verify_weak_secrecy(const SecrecyModel& model, std::size_t guesses,
                                   std::uint64_t check_cap) {
  if (guesses + 1 > model.message_size()) {
    throw Error(Errc::invalid_argument, kModule,
                "g=" + std::to_string(guesses) + " must be below Bs=" +
                    std::to_string(model.message_size()));
  }
  const std::uint64_t total = weak_secrecy_checks(model, guesses);
  if (total > check_cap) {
    throw Error(Errc::cap_exceeded, kModule,
                std::to_string(total) + " rank checks exceed the cap of " +
                    std::to_string(check_cap));
  }
  std::vector<std::size_t> g_ranks;
  for (const Matrix& g : model.node_generators) g_ranks.push_back(linalg::rank(g));

  SecrecyVerdict verdict;
  verdict.guesses = guesses;
  for (std::size_t size = 1; size <= guesses + 1; ++size) {
    auto subset = first_combination(size);
    do {
      const Matrix h_sub = linalg::select_rows(model.parity_check, subset);
      const std::size_t h_rank = linalg::rank(h_sub);
      for (std::size_t e = 0; e < model.node_count(); ++e) {
        ++verdict.checks;
        const std::size_t stacked =
            linalg::rank(linalg::vstack(h_sub, model.node_generators[e]));
        const std::size_t leaked = h_rank + g_ranks[e] - stacked;
        if (leaked != 0) {
          verdict.counterexample =
              LeakageReport{static_cast<unsigned>(e + 1), subset, leaked};
          return verdict;
        }
      }
    } while (next_combination(subset, model.message_size()));
  }
  return verdict;
}

std::string Rational::to_string() const {
  if (den == 1) return std::to_string(num);
  return std::to_string(num) + "/" + std::to_string(den);
}

Rational exhaustive_mi_oracle(const SecrecyModel& model, std::span<const std::size_t> subset,
                              unsigned node, std::uint64_t oracle_cap) {
  check_node(model, node);
  check_subset(model, subset);
  const Matrix& g = model.node_generators[node - 1];
  const std::size_t b = g.cols();
  const std::uint64_t q = g.field().order();
  // counts are multiplied pairwise below; keep them within 32 bits
  oracle_cap = std::min<std::uint64_t>(oracle_cap, std::uint64_t{1} << 32);

  std::uint64_t total = 1;
  for (std::size_t i = 0; i < b; ++i) {
    if (total > oracle_cap / q) {
      throw Error(Errc::cap_exceeded, kModule,
                  "q^B exceeds the oracle cap of " + std::to_string(oracle_cap));
    }
    total *= q;
  }
  if (total > oracle_cap) {
    throw Error(Errc::cap_exceeded, kModule,
                "q^B exceeds the oracle cap of " + std::to_string(oracle_cap));
  }

  const Matrix h_sub = linalg::select_rows(model.parity_check, subset);
  std::unordered_map<std::string, std::uint64_t> joint;
  std::unordered_map<std::string, std::uint64_t> by_secret;
  std::unordered_map<std::string, std::uint64_t> by_observation;

  Vector x(b);
  std::string s_key;
  std::string e_key;
  for (std::uint64_t count = 0; count < total; ++count) {
    s_key.clear();
    e_key.clear();
    append_key(s_key, linalg::mat_vec(h_sub, x));
    append_key(e_key, linalg::mat_vec(g, x));
    ++by_secret[s_key];
    ++by_observation[e_key];
    ++joint[s_key + '|' + e_key];
    // odometer increment over GF(q)^B.
    for (std::size_t i = 0; i < b; ++i) {
      const std::uint32_t next = x[i].value() + 1;
      if (next < q) {
        x[i] = Element(next);
        break;
      }
      x[i] = Element(0);
    }
  }

  // I = sum p(s,e) log_q( p(s,e) / (p(s) p(e)) ); for uniform X under linear
  // maps every ratio is an exact power of q.
  const std::size_t s_len = 2 * subset.size();
  std::int64_t weighted = 0;
  for (const auto& [key, c_se] : joint) {
    const std::uint64_t c_s = by_secret.at(key.substr(0, s_len));
    const std::uint64_t c_e = by_observation.at(key.substr(s_len + 1));
    std::uint64_t num = total * c_se;
    std::uint64_t den = c_s * c_e;
    const std::uint64_t common = std::gcd(num, den);
    num /= common;
    den /= common;
    std::optional<int> j;
    if (den == 1) {
      j = log_q(num, q);
    } else if (num == 1) {
      if (auto neg = log_q(den, q)) j = -*neg;
    }
    if (!j) {
      throw Error(Errc::inconsistent_system, kModule,
                  "joint distribution ratio is not a power of q");
    }
    weighted += static_cast<std::int64_t>(c_se) * *j;
  }
  const std::int64_t den = static_cast<std::int64_t>(total);
  const std::int64_t g_common = std::gcd(weighted < 0 ? -weighted : weighted, den);
  return Rational{weighted / g_common, den / g_common};
}

}  // namespace weavesafe::audit
