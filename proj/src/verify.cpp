#include "dsieve/verify.hpp"

#include <boost/math/distributions/chi_squared.hpp>

#include "dsieve/circuit.hpp"
#include "dsieve/errors.hpp"
#include "dsieve/sieve.hpp"

namespace dsieve {

std::optional<std::uint64_t> brute_force_shift(const HiddenShiftInstance& instance) {
  std::optional<std::uint64_t> found;
  for (std::uint64_t candidate = 0; candidate < instance.size(); ++candidate) {
    bool fits = true;
    for (std::uint64_t x = 0; x < instance.size() && fits; ++x) {
      fits = instance.f(x) == instance.g(x + candidate);
    }
    if (!fits) continue;
    if (found) throw VerificationFailure("two shifts fit; tables are not injective");
    found = candidate;
  }
  return found;
}

namespace {

double chi_square_tail(double statistic, double dof) {
  if (dof <= 0) return 1.0;
  boost::math::chi_squared dist(dof);
  return boost::math::cdf(boost::math::complement(dist, statistic));
}

StatReport finish(std::string name, double p, std::uint64_t samples, std::string detail) {
  StatReport report;
  report.name = std::move(name);
  report.statistic = p;
  report.threshold = kSignificance;
  report.pass_above = true;
  report.pass = p > kSignificance;
  report.samples = samples;
  report.detail = std::move(detail);
  return report;
}

}  // namespace

StatReport chi_square_uniform(std::span<const std::uint64_t> samples, std::uint64_t M,
                              const std::string& name) {
  if (M < 2) throw InvalidParameters("uniformity test needs M >= 2");
  if (samples.size() < 16 * M) throw InvalidParameters("uniformity test needs at least 16 * M samples");
  std::vector<double> counts(M, 0.0);
  for (std::uint64_t s : samples) {
    if (s >= M) throw InvalidParameters("sample outside Z_M");
    counts[s] += 1.0;
  }
  const double expected = static_cast<double>(samples.size()) / static_cast<double>(M);
  double chi2 = 0.0;
  for (double c : counts) chi2 += (c - expected) * (c - expected) / expected;
  const double p = chi_square_tail(chi2, static_cast<double>(M - 1));
  return finish(name, p, samples.size(), "chi2=" + std::to_string(chi2) + " dof=" + std::to_string(M - 1));
}

StatReport chi_square_two_sample(std::span<const std::uint64_t> a, std::span<const std::uint64_t> b,
                                 std::uint64_t M, const std::string& name) {
  if (a.empty() || b.empty()) throw InvalidParameters("two-sample test needs non-empty samples");
  std::vector<double> ca(M, 0.0);
  std::vector<double> cb(M, 0.0);
  for (std::uint64_t s : a) ca.at(s) += 1.0;
  for (std::uint64_t s : b) cb.at(s) += 1.0;
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  double chi2 = 0.0;
  int used = 0;
  for (std::uint64_t v = 0; v < M; ++v) {
    const double column = ca[v] + cb[v];
    if (column == 0.0) continue;
    ++used;
    const double ea = column * na / (na + nb);
    const double eb = column * nb / (na + nb);
    chi2 += (ca[v] - ea) * (ca[v] - ea) / ea + (cb[v] - eb) * (cb[v] - eb) / eb;
  }
  const double p = chi_square_tail(chi2, static_cast<double>(used - 1));
  return finish(name, p, a.size() + b.size(),
                "chi2=" + std::to_string(chi2) + " dof=" + std::to_string(used - 1));
}

BackendComparison compare_samplers(const RoundSampler& circuit, const RoundSampler& analytic,
                                   std::uint64_t M, std::uint64_t rounds,
                                   const std::function<std::optional<double>(std::uint64_t)>& circuit_fidelity) {
  BackendComparison out;
  out.circuit_labels.reserve(rounds);
  out.analytic_labels.reserve(rounds);
  for (std::uint64_t i = 0; i < rounds; ++i) {
    out.circuit_labels.push_back(circuit(i).l);
    if (circuit_fidelity) {
      if (auto f = circuit_fidelity(i)) {
        ++out.fidelity_checks;
        out.min_fidelity = std::min(out.min_fidelity, *f);
        if (!(*f > 1.0 - kFidelityTolerance)) ++out.fidelity_failures;
      }
    }
    out.analytic_labels.push_back(analytic(i).l);
  }
  out.histogram = chi_square_two_sample(out.circuit_labels, out.analytic_labels, M, "compare_backends");
  out.pass = out.histogram.pass && out.fidelity_failures == 0;
  return out;
}

BackendComparison compare_backends(const HiddenShiftInstance& instance, int t, std::uint64_t rounds,
                                   Rng& rng) {
  std::optional<Decomposition> dec;
  std::optional<ComparatorSchedule> schedule;
  std::uint64_t M = instance.size();
  if (t >= 1) {
    dec.emplace(instance, t);
    schedule.emplace(build_comparator_schedule(dec->node_count(), dec->m()));
    M = dec->suffix_size();
  }
  const Rng circuit_rng = rng.child("circuit");
  const Rng analytic_rng = rng.child("analytic");
  std::optional<double> last_fidelity;

  RoundSampler circuit = [&](std::uint64_t i) {
    Rng round = circuit_rng.child(i);
    RoundResult result = dec ? run_label_round(*dec, *schedule, round) : run_label_round(instance, round);
    last_fidelity = result.fidelity;
    return result.label;
  };
  RoundSampler analytic = [&](std::uint64_t i) {
    Rng round = analytic_rng.child(i);
    return sample_label(M, round);
  };
  return compare_samplers(circuit, analytic, M, rounds, [&](std::uint64_t) { return last_fidelity; });
}

}  // namespace dsieve
