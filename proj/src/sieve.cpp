#include "dsieve/sieve.hpp"

#include <bit>
#include <cmath>
#include <deque>
#include <sstream>

#include "dsieve/statevector.hpp"

namespace dsieve {

int log2_modulus(std::uint64_t M) {
  if (M < 2 || !std::has_single_bit(M)) throw InvalidParameters("modulus must be a power of two >= 2");
  return std::countr_zero(M);
}

int stage_width(int k) {
  if (k < 2) return 0;
  return static_cast<int>(std::ceil(std::sqrt(static_cast<double>(k - 1)) - 1e-12));
}

int stage_count(int k) {
  const int width = stage_width(k);
  if (width == 0) return 0;
  return (k - 1 + width - 1) / width;
}

std::uint64_t default_budget(int k) {
  const int root = static_cast<int>(std::ceil(std::sqrt(static_cast<double>(k)) - 1e-12));
  const int log = k <= 1 ? 0 : std::bit_width(static_cast<unsigned>(k - 1));
  const int exponent = std::min(root * log, 40);
  return std::uint64_t{64} << exponent;
}

PhaseLabel sample_label(std::uint64_t M, Rng& rng) {
  log2_modulus(M);
  return PhaseLabel{rng.below(M), M, 1, std::nullopt};
}

CombineResult combine(const PhaseLabel& x, const PhaseLabel& y, Rng& rng) {
  if (x.M != y.M) throw ModulusMismatch("cannot combine labels with different moduli");
  const std::uint64_t mask = x.M - 1;
  const std::uint64_t cost = x.cost + y.cost;

  if (!x.qubit || !y.qubit) {
    const bool difference = rng.coin();
    const std::uint64_t l = difference ? (x.l - y.l) & mask : (x.l + y.l) & mask;
    return {PhaseLabel{l, x.M, cost, std::nullopt}, difference};
  }

  RegisterLayout layout;
  layout.add("control", 1).add("target", 1);
  StateVector<double> state(layout);
  for (int b1 = 0; b1 < 2; ++b1) {
    for (int b2 = 0; b2 < 2; ++b2) state.amplitudes()(2 * b1 + b2) = (*x.qubit)[b1] * (*y.qubit)[b2];
  }
  apply_basis_map(state, [](std::uint64_t i) { return (i & 2U) ? i ^ 1U : i; });
  const auto record = measure(state, "target", rng);
  const bool difference = record.value == 1;
  QubitState residual{state.amplitude(record.value), state.amplitude(2 | record.value)};
  const double norm = std::sqrt(std::norm(residual[0]) + std::norm(residual[1]));
  residual[0] /= norm;
  residual[1] /= norm;
  const std::uint64_t l = difference ? (x.l - y.l) & mask : (x.l + y.l) & mask;
  return {PhaseLabel{l, x.M, cost, residual}, difference};
}

namespace {

class Sieve {
 public:
  Sieve(std::uint64_t M, const SieveOptions& options, Rng& rng)
      : M_(M), k_(log2_modulus(M)), width_(stage_width(k_)), rng_(rng) {
    stats_.k = k_;
    stats_.M = M;
    stats_.stage_width = width_;
    stats_.salvage = options.salvage;
    const int stages = stage_count(k_);
    for (int j = 1; j <= stages; ++j) {
      StageStats st;
      st.stage = j;
      st.low_bit = (j - 1) * width_;
      st.width = std::min(width_, k_ - 1 - st.low_bit);
      stats_.stages.push_back(st);
      buckets_.emplace_back(std::size_t{1} << st.width);
    }
  }

  bool done() const { return found_.has_value(); }
  SieveStats& stats() { return stats_; }

  void admit_fresh(PhaseLabel label) {
    if (label.M != M_) throw ModulusMismatch("label source produced a different modulus");
    ++stats_.fresh_drawn;
    if (label.l == 0) {
      ++stats_.fresh_zero;
      drop(label);
      return;
    }
    if (label.l == M_ / 2) stats_.lucky_draw = true;
    admit(std::move(label), true);
  }

  SieveResult finish() {
    for (std::size_t j = 0; j < buckets_.size(); ++j) {
      for (const auto& bucket : buckets_[j]) {
        stats_.stages[j].survived += bucket.size();
        stats_.survived_total += bucket.size();
        for (const auto& label : bucket) stats_.survived_cost += label.cost;
      }
    }
    if (found_) {
      stats_.success = true;
      stats_.final_cost = found_->cost;
      return {*found_, stats_};
    }
    return {PhaseLabel{}, stats_};
  }

 private:
  // 1-based stage for a nonzero label other than M/2.
  int stage_of(std::uint64_t l) const {
    const int zeros = std::countr_zero(l);
    return std::min(zeros / width_ + 1, static_cast<int>(stats_.stages.size()));
  }

  void drop(const PhaseLabel& label) {
    ++stats_.discarded_total;
    stats_.discarded_cost += label.cost;
  }

  void admit(PhaseLabel label, bool fresh) {
    if (label.l == M_ / 2) {
      found_ = std::move(label);
      return;
    }
    const int j = stage_of(label.l);
    StageStats& st = stats_.stages[static_cast<std::size_t>(j - 1)];
    if ((label.l & ((std::uint64_t{1} << st.low_bit) - 1)) != 0)
      throw VerificationFailure("label admitted to a stage without its trailing zeros");
    ++st.admitted;
    if (fresh) ++st.drawn;

    const std::uint64_t key = (label.l >> st.low_bit) & ((std::uint64_t{1} << st.width) - 1);
    auto& bucket = buckets_[static_cast<std::size_t>(j - 1)][key];
    if (bucket.empty()) {
      bucket.push_back(std::move(label));
      return;
    }
    PhaseLabel partner = std::move(bucket.front());
    bucket.pop_front();

    Rng event = rng_.child("combine", combinations_++);
    CombineResult out = combine(partner, label, event);
    ++st.combined;
    ++stats_.combinations;

    const std::uint64_t l = out.label.l;
    if (l == 0) {
      ++st.discarded;
      drop(out.label);
      return;
    }
    if (out.difference) {
      ++st.produced;
      admit(std::move(out.label), false);
      return;
    }
    if (stats_.salvage && (l == M_ / 2 || stage_of(l) > j)) {
      ++st.salvaged;
      admit(std::move(out.label), false);
      return;
    }
    ++st.discarded;
    drop(out.label);
  }

  std::uint64_t M_;
  int k_;
  int width_;
  Rng& rng_;
  SieveStats stats_;
  std::vector<std::vector<std::deque<PhaseLabel>>> buckets_;
  std::optional<PhaseLabel> found_;
  std::uint64_t combinations_ = 0;
};

}  // namespace

SieveResult run_sieve(const LabelSource& source, std::uint64_t M, std::uint64_t budget, Rng& rng,
                      const SieveOptions& options) {
  Sieve sieve(M, options, rng);
  while (!sieve.done()) {
    if (sieve.stats().fresh_drawn >= budget) throw Exhausted(budget, sieve.finish().stats);
    sieve.admit_fresh(source(sieve.stats().fresh_drawn));
  }
  return sieve.finish();
}

int extract_parity(const PhaseLabel& label, std::optional<std::uint64_t> shift, Rng& rng) {
  if (label.l != label.M / 2)
    throw NotSievedToTarget("parity needs l = M/2, got l = " + std::to_string(label.l));
  QubitState qubit{};
  if (label.qubit) {
    qubit = *label.qubit;
  } else if (shift) {
    const double amp = 1.0 / std::sqrt(2.0);
    qubit = {std::complex<double>(amp), std::complex<double>((*shift & 1U) ? -amp : amp)};
  } else {
    throw MissingGroundTruth("analytic parity extraction needs the planted shift");
  }
  RegisterLayout layout;
  layout.add("q", 1);
  StateVector<double> state(layout);
  state.amplitudes()(0) = qubit[0];
  state.amplitudes()(1) = qubit[1];
  apply_hadamard(state, "q");
  return static_cast<int>(measure(state, "q", rng).value);
}

std::string sieve_stats_csv(const SieveStats& stats) {
  std::ostringstream os;
  os << "stage,drawn,combined,discarded,survived\n";
  for (const auto& st : stats.stages) {
    os << st.stage << ',' << st.drawn << ',' << st.combined << ',' << st.discarded << ','
       << st.survived << '\n';
  }
  return os.str();
}

}  // namespace dsieve
