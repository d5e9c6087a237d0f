#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "dsieve/errors.hpp"
#include "dsieve/instances.hpp"
#include "dsieve/rng.hpp"
#include "dsieve/sorting_network.hpp"

namespace dsieve {

/// A contiguous run of qubits. `shift` is the bit position of the register's
/// least significant qubit inside the flat amplitude index.
struct Register {
  std::string name;
  int width;
  int offset;  // first qubit, counted from the most significant end
  int shift;

  std::uint64_t mask() const { return (std::uint64_t{1} << width) - 1; }
  std::uint64_t value(std::uint64_t index) const { return (index >> shift) & mask(); }
  std::uint64_t with_value(std::uint64_t index, std::uint64_t v) const {
    return (index & ~(mask() << shift)) | ((v & mask()) << shift);
  }
};

/// Ordered registers. The flat index is the big-endian concatenation of the
/// register values in declaration order: the first register holds the most
/// significant bits, and within a register the first qubit is its MSB.
class RegisterLayout {
 public:
  RegisterLayout() = default;

  RegisterLayout& add(std::string name, int width);

  const Register& operator[](const std::string& name) const;
  bool contains(const std::string& name) const;
  const std::vector<Register>& registers() const { return registers_; }
  int qubits() const { return qubits_; }

  std::uint64_t index_of(std::span<const std::uint64_t> values) const;

 private:
  std::vector<Register> registers_;
  int qubits_ = 0;
};

struct MeasurementRecord {
  std::string register_name;
  std::uint64_t value;
  double probability;
};

/// Dense state vector over a register layout, initialized to |0...0>.
///
/// Amplitudes are stored densely. Alongside them the vector keeps an optional
/// support index: an ascending superset of the indices that can be nonzero.
/// Gate kernels iterate the index while it is small and fall back to full
/// scans once it exceeds an eighth of the dimension. Mutable access through
/// amplitudes() drops the index.
template <typename Scalar = double>
class StateVector {
 public:
  using Complex = std::complex<Scalar>;
  using Amplitudes = Eigen::Matrix<Complex, Eigen::Dynamic, 1>;
  using Support = std::vector<std::uint64_t>;

  explicit StateVector(RegisterLayout layout)
      : layout_(std::move(layout)),
        amplitudes_(Amplitudes::Zero(Eigen::Index{1} << layout_.qubits())),
        support_(Support{0}) {
    amplitudes_(0) = Complex(1);
  }

  const RegisterLayout& layout() const { return layout_; }
  const Register& reg(const std::string& name) const { return layout_[name]; }
  std::uint64_t dimension() const { return static_cast<std::uint64_t>(amplitudes_.size()); }

  const Amplitudes& amplitudes() const { return amplitudes_; }
  Amplitudes& amplitudes() {
    support_.reset();
    return amplitudes_;
  }
  Complex amplitude(std::uint64_t index) const { return amplitudes_(static_cast<Eigen::Index>(index)); }

  void set_basis(std::uint64_t index) {
    amplitudes_.setZero();
    amplitudes_(static_cast<Eigen::Index>(index)) = Complex(1);
    support_ = Support{index};
  }

  Scalar norm() const { return amplitudes_.norm(); }

  const std::optional<Support>& support() const { return support_; }
  /// Installs a support index (sorted and deduplicated here) for amplitudes
  /// a kernel has just written through raw().
  void set_support(Support support) {
    if (support.size() > dimension() / 8) {
      support_.reset();
      return;
    }
    std::ranges::sort(support);
    support.erase(std::unique(support.begin(), support.end()), support.end());
    support_ = std::move(support);
  }
  void drop_support() { support_.reset(); }
  /// Kernel access that leaves the support index alone.
  Amplitudes& raw() { return amplitudes_; }

  /// Calls fn(index, amplitude) for every nonzero amplitude, ascending.
  template <typename Fn>
  void for_each_nonzero(Fn&& fn) const {
    if (support_) {
      for (std::uint64_t i : *support_) {
        const Complex a = amplitudes_(static_cast<Eigen::Index>(i));
        if (a != Complex(0)) fn(i, a);
      }
      return;
    }
    for (Eigen::Index i = 0; i < amplitudes_.size(); ++i) {
      if (amplitudes_(i) != Complex(0)) fn(static_cast<std::uint64_t>(i), amplitudes_(i));
    }
  }

 private:
  RegisterLayout layout_;
  Amplitudes amplitudes_;
  std::optional<Support> support_;
};

/// |<a|b>|^2 / (|a|^2 |b|^2); insensitive to global phase.
template <typename Derived1, typename Derived2>
auto fidelity(const Eigen::MatrixBase<Derived1>& a, const Eigen::MatrixBase<Derived2>& b) {
  const auto overlap = a.dot(b);
  return std::norm(overlap) / (a.squaredNorm() * b.squaredNorm());
}

/// Rewrites every basis index through `map`, which must be a bijection.
/// Classical reversible gates (XOR oracles, U_sort) are applied this way.
template <typename Scalar, typename Map>
void apply_basis_map(StateVector<Scalar>& state, Map&& map) {
  using Complex = typename StateVector<Scalar>::Complex;
  using Amplitudes = typename StateVector<Scalar>::Amplitudes;
  auto& amp = state.raw();
  if (state.support()) {
    std::vector<std::pair<std::uint64_t, Complex>> moved;
    moved.reserve(state.support()->size());
    for (std::uint64_t i : *state.support()) {
      auto& a = amp(static_cast<Eigen::Index>(i));
      if (a == Complex(0)) continue;
      moved.emplace_back(map(i), a);
      a = Complex(0);
    }
    typename StateVector<Scalar>::Support support;
    support.reserve(moved.size());
    for (const auto& [j, a] : moved) {
      amp(static_cast<Eigen::Index>(j)) += a;
      support.push_back(j);
    }
    state.set_support(std::move(support));
    return;
  }
  Amplitudes out = Amplitudes::Zero(amp.size());
  for (Eigen::Index i = 0; i < amp.size(); ++i) {
    if (amp(i) == Complex(0)) continue;
    out(static_cast<Eigen::Index>(map(static_cast<std::uint64_t>(i)))) += amp(i);
  }
  amp = std::move(out);
}

namespace detail {

/// Support indices with the bits in `clear_mask` zeroed, deduplicated.
inline std::vector<std::uint64_t> support_bases(const std::vector<std::uint64_t>& support,
                                                std::uint64_t clear_mask) {
  std::vector<std::uint64_t> bases;
  bases.reserve(support.size());
  for (std::uint64_t i : support) bases.push_back(i & ~clear_mask);
  std::ranges::sort(bases);
  bases.erase(std::unique(bases.begin(), bases.end()), bases.end());
  return bases;
}

}  // namespace detail

template <typename Scalar>
void apply_hadamard(StateVector<Scalar>& state, const std::string& register_name) {
  using Complex = typename StateVector<Scalar>::Complex;
  const Register& r = state.reg(register_name);
  const Scalar scale = Scalar(1) / std::sqrt(Scalar(2));
  auto& amp = state.raw();
  auto butterfly = [&](Eigen::Index i, Eigen::Index bit) {
    const Complex a0 = amp(i);
    const Complex a1 = amp(i | bit);
    if (a0 == Complex(0) && a1 == Complex(0)) return;
    amp(i) = (a0 + a1) * scale;
    amp(i | bit) = (a0 - a1) * scale;
  };
  for (int q = 0; q < r.width; ++q) {
    const Eigen::Index bit = Eigen::Index{1} << (r.shift + q);
    if (state.support()) {
      auto bases = detail::support_bases(*state.support(), static_cast<std::uint64_t>(bit));
      typename StateVector<Scalar>::Support support;
      support.reserve(bases.size() * 2);
      for (std::uint64_t base : bases) {
        butterfly(static_cast<Eigen::Index>(base), bit);
        support.push_back(base);
        support.push_back(base | static_cast<std::uint64_t>(bit));
      }
      state.set_support(std::move(support));
      continue;
    }
    for (Eigen::Index i = 0; i < amp.size(); ++i) {
      if (!(i & bit)) butterfly(i, bit);
    }
  }
}

template <typename Scalar>
Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, Eigen::Dynamic> qft_matrix(int width,
                                                                                 bool inverse = false) {
  using Complex = std::complex<Scalar>;
  const Eigen::Index size = Eigen::Index{1} << width;
  Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic> dft(size, size);
  const Scalar sign = inverse ? Scalar(-1) : Scalar(1);
  const Scalar scale = Scalar(1) / std::sqrt(static_cast<Scalar>(size));
  for (Eigen::Index j = 0; j < size; ++j) {
    for (Eigen::Index x = 0; x < size; ++x) {
      // Reduce jx mod size before the trig call so phases stay exact.
      const auto turn = static_cast<Scalar>((j * x) & (size - 1)) / static_cast<Scalar>(size);
      dft(j, x) = std::polar(scale, sign * Scalar(2) * std::numbers::pi_v<Scalar> * turn);
    }
  }
  return dft;
}

/// QFT|x> = 2^{-w/2} sum_j e^{2 pi i j x / 2^w} |j> on one register.
template <typename Scalar>
void apply_qft(StateVector<Scalar>& state, const std::string& register_name, bool inverse = false) {
  using Complex = typename StateVector<Scalar>::Complex;
  using Vec = Eigen::Matrix<Complex, Eigen::Dynamic, 1>;
  const Register& r = state.reg(register_name);
  const auto dft = qft_matrix<Scalar>(r.width, inverse);
  const Eigen::Index size = dft.rows();
  auto& amp = state.raw();
  Vec block(size);
  auto transform = [&](Eigen::Index base) {
    bool any = false;
    for (Eigen::Index x = 0; x < size; ++x) {
      block(x) = amp(base | (x << r.shift));
      any = any || block(x) != Complex(0);
    }
    if (!any) return;
    const Vec out = dft * block;
    for (Eigen::Index j = 0; j < size; ++j) amp(base | (j << r.shift)) = out(j);
  };
  if (state.support()) {
    const auto bases = detail::support_bases(*state.support(), r.mask() << r.shift);
    typename StateVector<Scalar>::Support support;
    support.reserve(bases.size() * static_cast<std::size_t>(size));
    for (std::uint64_t base : bases) {
      transform(static_cast<Eigen::Index>(base));
      for (Eigen::Index j = 0; j < size; ++j) support.push_back(base | (static_cast<std::uint64_t>(j) << r.shift));
    }
    state.set_support(std::move(support));
    return;
  }
  for (Eigen::Index base = 0; base < amp.size(); ++base) {
    if (r.value(static_cast<std::uint64_t>(base)) == 0) transform(base);
  }
}

template <typename Scalar>
void apply_inverse_qft(StateVector<Scalar>& state, const std::string& register_name) {
  apply_qft(state, register_name, true);
}

/// Per-value outcome probabilities of one register.
template <typename Scalar>
std::vector<double> register_probabilities(const StateVector<Scalar>& state,
                                           const std::string& register_name) {
  const Register& r = state.reg(register_name);
  std::vector<double> probs(std::size_t{1} << r.width, 0.0);
  state.for_each_nonzero([&](std::uint64_t i, const auto& a) {
    probs[r.value(i)] += static_cast<double>(std::norm(a));
  });
  return probs;
}

/// Values of a register with probability above `threshold`.
template <typename Scalar>
std::vector<std::uint64_t> register_support(const StateVector<Scalar>& state,
                                            const std::string& register_name,
                                            double threshold = 1e-24) {
  const auto probs = register_probabilities(state, register_name);
  std::vector<std::uint64_t> support;
  for (std::size_t v = 0; v < probs.size(); ++v) {
    if (probs[v] > threshold) support.push_back(v);
  }
  return support;
}

/// Born-rule projective measurement of one register with collapse and
/// renormalization.
template <typename Scalar>
MeasurementRecord measure(StateVector<Scalar>& state, const std::string& register_name, Rng& rng) {
  using Complex = typename StateVector<Scalar>::Complex;
  const Register& r = state.reg(register_name);
  const auto probs = register_probabilities(state, register_name);
  double total = 0.0;
  for (double p : probs) total += p;

  const double target = rng.uniform() * total;
  std::uint64_t outcome = probs.size();
  double cumulative = 0.0;
  std::uint64_t last_nonzero = 0;
  for (std::uint64_t v = 0; v < probs.size(); ++v) {
    if (probs[v] <= 0.0) continue;
    last_nonzero = v;
    cumulative += probs[v];
    if (target < cumulative) {
      outcome = v;
      break;
    }
  }
  if (outcome == probs.size()) outcome = last_nonzero;

  const double p = probs[outcome] / total;
  const Scalar scale = static_cast<Scalar>(1.0 / std::sqrt(probs[outcome]));
  auto& amp = state.raw();
  if (state.support()) {
    typename StateVector<Scalar>::Support kept;
    for (std::uint64_t i : *state.support()) {
      auto& a = amp(static_cast<Eigen::Index>(i));
      if (r.value(i) == outcome) {
        a *= scale;
        kept.push_back(i);
      } else {
        a = Complex(0);
      }
    }
    state.set_support(std::move(kept));
  } else {
    for (Eigen::Index i = 0; i < amp.size(); ++i) {
      if (r.value(static_cast<std::uint64_t>(i)) == outcome)
        amp(i) *= scale;
      else
        amp(i) = Complex(0);
    }
  }
  return MeasurementRecord{register_name, outcome, p};
}

/// Per-node truth tables seen by the XOR oracle: node w reads f_nodes[w](x)
/// on branch 0 and g_nodes[w](x) on branch 1.
struct OracleTables {
  int input_width;
  int output_width;
  std::vector<std::span<const std::uint64_t>> f_nodes;
  std::vector<std::span<const std::uint64_t>> g_nodes;
};

OracleTables oracle_tables(const HiddenShiftInstance& instance);
OracleTables oracle_tables(const Decomposition& dec);

/// |b>|x>|y_w> -> |b>|x>|y_w XOR h_w(x)> with h = f (b=0) or g (b=1), one
/// target register per node. Self-inverse.
template <typename Scalar>
void apply_oracle(StateVector<Scalar>& state, const std::string& branch, const std::string& input,
                  std::span<const std::string> targets, const OracleTables& tables) {
  const Register& b = state.reg(branch);
  const Register& x = state.reg(input);
  if (b.width != 1) throw WidthMismatch("branch register must be one qubit");
  if (x.width != tables.input_width)
    throw WidthMismatch("input register '" + input + "' has width " + std::to_string(x.width) +
                        ", oracle expects " + std::to_string(tables.input_width));
  if (targets.size() != tables.f_nodes.size())
    throw WidthMismatch("need one target register per node");
  std::vector<const Register*> outs;
  for (const auto& name : targets) {
    const Register& r = state.reg(name);
    if (r.width != tables.output_width)
      throw WidthMismatch("target register '" + name + "' must be " +
                          std::to_string(tables.output_width) + " qubits");
    outs.push_back(&r);
  }
  apply_basis_map(state, [&](std::uint64_t index) {
    const bool use_g = b.value(index) != 0;
    const std::uint64_t xv = x.value(index);
    for (std::size_t w = 0; w < outs.size(); ++w) {
      const std::uint64_t h = use_g ? tables.g_nodes[w][xv] : tables.f_nodes[w][xv];
      index ^= h << outs[w]->shift;
    }
    return index;
  });
}

template <typename Scalar>
void apply_oracle(StateVector<Scalar>& state, const std::string& branch, const std::string& input,
                  std::span<const std::string> targets, const HiddenShiftInstance& instance) {
  apply_oracle(state, branch, input, targets, oracle_tables(instance));
}

template <typename Scalar>
void apply_oracle(StateVector<Scalar>& state, const std::string& branch, const std::string& input,
                  std::span<const std::string> targets, const Decomposition& dec) {
  apply_oracle(state, branch, input, targets, oracle_tables(dec));
}

/// Classical action of U_sort on one basis index: XOR the ascending-sorted
/// concatenation of the input registers into `sorted`, smallest value in the
/// most significant slot. Usable without a state vector.
template <typename Sorter>
class UsortIndexMap {
 public:
  UsortIndexMap(const RegisterLayout& layout, std::span<const std::string> inputs,
                const std::string& sorted, Sorter sorter)
      : out_(layout[sorted]), sorter_(std::move(sorter)) {
    if (inputs.empty()) throw WidthMismatch("U_sort needs at least one input register");
    for (const auto& name : inputs) regs_.push_back(layout[name]);
    m_ = regs_.front().width;
    for (const auto& r : regs_) {
      if (r.width != m_) throw WidthMismatch("U_sort inputs must share one width");
    }
    if (out_.width != m_ * static_cast<int>(regs_.size()))
      throw WidthMismatch("sorted register must be count * m qubits");
    values_.resize(regs_.size());
  }

  std::uint64_t operator()(std::uint64_t index) {
    for (std::size_t i = 0; i < regs_.size(); ++i) values_[i] = regs_[i].value(index);
    sorter_(std::span<std::uint64_t>(values_));
    auto shift = static_cast<std::uint64_t>(out_.shift + m_ * static_cast<int>(values_.size()));
    for (std::uint64_t v : values_) {
      shift -= static_cast<std::uint64_t>(m_);
      index ^= v << shift;
    }
    return index;
  }

 private:
  std::vector<Register> regs_;
  Register out_;
  int m_ = 0;
  Sorter sorter_;
  std::vector<std::uint64_t> values_;
};

inline auto usort_index_map(const RegisterLayout& layout, std::span<const std::string> inputs,
                            const std::string& sorted, const ComparatorSchedule& schedule) {
  if (schedule.count() != inputs.size())
    throw WidthMismatch("comparator schedule size does not match input count");
  auto sorter = [&schedule](std::span<std::uint64_t> v) { schedule.apply(v); };
  return UsortIndexMap<decltype(sorter)>(layout, inputs, sorted, sorter);
}

inline auto usort_direct_index_map(const RegisterLayout& layout, std::span<const std::string> inputs,
                                   const std::string& sorted) {
  auto sorter = [](std::span<std::uint64_t> v) { std::ranges::sort(v); };
  return UsortIndexMap<decltype(sorter)>(layout, inputs, sorted, sorter);
}

/// XORs the ascending-sorted concatenation of the input registers into
/// `sorted`, sorting with the given comparator network. Inputs unchanged.
template <typename Scalar>
void apply_usort(StateVector<Scalar>& state, std::span<const std::string> inputs,
                 const std::string& sorted, const ComparatorSchedule& schedule) {
  apply_basis_map(state, usort_index_map(state.layout(), inputs, sorted, schedule));
}

/// Same gate, sorting with std::sort; the reference for the network version.
template <typename Scalar>
void apply_usort_direct(StateVector<Scalar>& state, std::span<const std::string> inputs,
                        const std::string& sorted) {
  apply_basis_map(state, usort_direct_index_map(state.layout(), inputs, sorted));
}

/// JSON lines {"index":i,"re":x,"im":y} for amplitudes with |amp| > threshold.
template <typename Scalar>
void dump_amplitudes(const StateVector<Scalar>& state, std::ostream& os, double threshold = 1e-12) {
  const auto old_precision = os.precision(17);
  state.for_each_nonzero([&](std::uint64_t i, const auto& a) {
    if (std::abs(a) <= threshold) return;
    os << "{\"index\":" << i << ",\"re\":" << static_cast<double>(a.real())
       << ",\"im\":" << static_cast<double>(a.imag()) << "}\n";
  });
  os.precision(old_precision);
}

}  // namespace dsieve
