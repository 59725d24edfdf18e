#include <sstream>

#include <json.hpp>

#include "weavesafe/audit.hpp"
#include "weavesafe/combinations.hpp"
#include "weavesafe/error.hpp"

namespace weavesafe::audit {
namespace {

std::optional<SecrecyVerdict> verify_if_affordable(const SecrecyModel& model, std::size_t g,
                                                   const AuditLimits& limits) {
  if (g + 1 > model.message_size()) return std::nullopt;
  if (weak_secrecy_checks(model, g) > limits.check_cap) return std::nullopt;
  return verify_weak_secrecy(model, g, limits.check_cap);
}

std::optional<CompletionSummary> completion_grid(const SecureCodec& codec,
                                                 const AuditLimits& limits) {
  const auto& p = codec.params();
  const std::size_t bs = p.secure_size();
  const std::size_t max_subset = std::min<std::size_t>(p.d + p.k - 3, bs);
  std::uint64_t total = 0;
  for (std::size_t s = 0; s <= max_subset; ++s) total += binomial(bs, s) * p.n;
  if (total > limits.check_cap) return std::nullopt;

  CompletionSummary summary;
  summary.max_subset = max_subset;
  for (std::size_t s = 0; s <= max_subset; ++s) {
    auto subset = first_combination(s);
    do {
      for (unsigned e = 1; e <= p.n; ++e) {
        ++summary.instances;
        if (!certify_completion(codec, subset, e).success) ++summary.failures;
      }
    } while (next_combination(subset, bs));
  }
  return summary;
}

std::string one_based(const std::vector<std::size_t>& subset) {
  std::ostringstream out;
  out << '{';
  for (std::size_t i = 0; i < subset.size(); ++i) {
    out << (i ? "," : "") << subset[i] + 1;
  }
  out << '}';
  return out.str();
}

void verdict_lines(std::ostringstream& out, const std::string& prefix,
                   const SecrecyVerdict& v) {
  out << prefix << ".guesses: " << v.guesses << '\n';
  out << prefix << ".checks: " << v.checks << '\n';
  out << prefix << ".verdict: " << (v.passed() ? "pass" : "fail") << '\n';
  if (v.counterexample) {
    out << prefix << ".counterexample.node: " << v.counterexample->node << '\n';
    out << prefix << ".counterexample.subset: " << one_based(v.counterexample->subset) << '\n';
    out << prefix << ".counterexample.size: " << v.counterexample->subset.size() << '\n';
    out << prefix << ".counterexample.leaked_symbols: "
        << v.counterexample->leaked_symbols << '\n';
  }
}

nlohmann::json verdict_json(const SecrecyVerdict& v) {
  nlohmann::json j = {{"guesses", v.guesses}, {"checks", v.checks}, {"passed", v.passed()}};
  if (v.counterexample) {
    std::vector<std::size_t> subset;
    for (std::size_t r : v.counterexample->subset) subset.push_back(r + 1);
    j["counterexample"] = {{"node", v.counterexample->node},
                           {"subset", subset},
                           {"leaked_symbols", v.counterexample->leaked_symbols}};
  }
  return j;
}

template <typename T, typename F>
nlohmann::json optional_json(const std::optional<T>& v, F&& f) {
  return v ? f(*v) : nlohmann::json(nullptr);
}

}  // namespace

AuditReport audit_report(const SecureCodec& codec, const AuditOptions& options) {
  const auto& p = codec.params();
  AuditReport r;
  r.params = p;
  r.capacity = p.message_size();
  r.secure_capacity = p.secure_size();
  r.max_guesses = p.max_guesses();
  r.perfect_capacity = weaksec::perfect_capacity(p.k, p.d, 1);
  r.baseline_guesses = p.k - 2;
  r.improvement = r.max_guesses - r.baseline_guesses;
  r.theta = codec.outer().theta();

  const SecrecyModel construction = construction_model(codec);
  const SecrecyModel baseline = baseline_model(codec);
  const SecrecyModel& subject = options.baseline ? baseline : construction;
  r.subject = subject.label;
  r.verdict = verify_weak_secrecy(subject, options.guesses.value_or(r.max_guesses),
                                  options.limits.check_cap);

  r.beyond_guarantee = verify_if_affordable(construction, r.max_guesses + 1, options.limits);
  r.baseline_at_k_minus_2 = verify_if_affordable(baseline, p.k - 2, options.limits);
  r.baseline_at_k_minus_1 = verify_if_affordable(baseline, p.k - 1, options.limits);

  const DecodeCertificate cert = certify_H_prime(codec);
  r.h_prime_certified = cert.success;
  r.h_prime_steps = cert.steps.size();
  if (options.completion_grid) r.completion = completion_grid(codec, options.limits);
  return r;
}

std::string AuditReport::to_text() const {
  std::ostringstream out;
  out << "[parameters]\n"
      << "n: " << params.n << "\nk: " << params.k << "\nd: " << params.d
      << "\nm: " << params.m << "\nalpha: " << params.alpha() << "\nbeta: " << params.beta()
      << "\n\n[capacity]\n"
      << "B: " << capacity << "\nBs: " << secure_capacity
      << "\nperfect_secrecy_capacity: " << perfect_capacity
      << "\nweak_secrecy_gain_over_perfect: " << secure_capacity - perfect_capacity
      << "\ntheta:";
  for (unsigned t : theta) out << ' ' << t;
  out << "\n\n[guarantees]\n"
      << "g_max: " << max_guesses << "\nbaseline_g: " << baseline_guesses
      << "\nimprovement: " << improvement << "\n\n[verification]\n"
      << "subject: " << subject << '\n';
  verdict_lines(out, "requested", verdict);
  if (beyond_guarantee) {
    out << "\n[beyond_guarantee]\nnote: observed only; not covered by the construction\n";
    verdict_lines(out, "construction", *beyond_guarantee);
  }
  out << "\n[baseline]\n";
  if (baseline_at_k_minus_2) {
    verdict_lines(out, "k_minus_2", *baseline_at_k_minus_2);
  } else {
    out << "k_minus_2: skipped\n";
  }
  if (baseline_at_k_minus_1) {
    verdict_lines(out, "k_minus_1", *baseline_at_k_minus_1);
  } else {
    out << "k_minus_1: skipped\n";
  }
  out << "\n[certificates]\n"
      << "h_prime: " << (h_prime_certified ? "success" : "failure")
      << "\nh_prime.steps: " << h_prime_steps << '\n';
  if (completion) {
    out << "completion.max_subset: " << completion->max_subset
        << "\ncompletion.instances: " << completion->instances
        << "\ncompletion.failures: " << completion->failures << '\n';
  } else {
    out << "completion: skipped\n";
  }
  return out.str();
}

std::string AuditReport::to_json() const {
  nlohmann::json j;
  j["parameters"] = {{"n", params.n}, {"k", params.k}, {"d", params.d}, {"m", params.m},
                     {"alpha", params.alpha()}, {"beta", params.beta()}};
  j["capacity"] = {{"B", capacity},
                   {"Bs", secure_capacity},
                   {"perfect_secrecy_capacity", perfect_capacity},
                   {"theta", theta}};
  j["guarantees"] = {
      {"g_max", max_guesses}, {"baseline_g", baseline_guesses}, {"improvement", improvement}};
  j["subject"] = subject;
  j["verification"] = verdict_json(verdict);
  j["beyond_guarantee"] = optional_json(beyond_guarantee, verdict_json);
  j["baseline"] = {{"k_minus_2", optional_json(baseline_at_k_minus_2, verdict_json)},
                   {"k_minus_1", optional_json(baseline_at_k_minus_1, verdict_json)}};
  j["certificates"] = {
      {"h_prime", {{"success", h_prime_certified}, {"steps", h_prime_steps}}},
      {"completion", optional_json(completion, [](const CompletionSummary& c) {
         return nlohmann::json{{"max_subset", c.max_subset},
                               {"instances", c.instances},
                               {"failures", c.failures}};
       })}};
  return j.dump(2);
}

}  // namespace weavesafe::audit
