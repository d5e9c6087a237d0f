#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace dsieve {

/// Widest output alphabet supported; outputs are stored in one machine word.
inline constexpr int kMaxOutputBits = 63;
/// Widest domain supported by the tabular representation.
inline constexpr int kMaxDomainBits = 24;

/// Hidden shift instance over Z_{2^n}: injective f, g with m-bit outputs and
/// f(x) = g((x + a) mod 2^n).
///
/// Construction checks only the shape (table sizes, output widths, m >= n,
/// a < 2^n). Injectivity and the shift relation are properties that
/// generators assert and `check` reports on, so a corrupted file can still be
/// loaded and diagnosed.
class HiddenShiftInstance {
 public:
  HiddenShiftInstance(int n, int m, std::vector<std::uint64_t> f, std::vector<std::uint64_t> g,
                      std::optional<std::uint64_t> hidden_a = std::nullopt);

  int n() const { return n_; }
  int m() const { return m_; }
  std::uint64_t size() const { return std::uint64_t{1} << n_; }
  std::uint64_t mask() const { return size() - 1; }

  std::uint64_t f(std::uint64_t x) const { return f_[x & mask()]; }
  std::uint64_t g(std::uint64_t x) const { return g_[x & mask()]; }
  std::span<const std::uint64_t> f_table() const { return f_; }
  std::span<const std::uint64_t> g_table() const { return g_; }

  const std::optional<std::uint64_t>& hidden_a() const { return hidden_a_; }
  bool planted() const { return hidden_a_.has_value(); }

  bool is_injective() const;
  /// f(x) == g(x + a) for every x. Requires a planted shift.
  bool shift_holds() const;
  /// First x violating the shift relation, if any.
  std::optional<std::uint64_t> first_shift_violation() const;

  HiddenShiftInstance blind() const;

  bool operator==(const HiddenShiftInstance&) const = default;

 private:
  int n_;
  int m_;
  std::vector<std::uint64_t> f_;
  std::vector<std::uint64_t> g_;
  std::optional<std::uint64_t> hidden_a_;
};

/// Per-node view of an instance split on the t most significant input bits.
/// Node w sees f_w(u) = f(w * 2^(n-t) + u).
class Decomposition {
 public:
  Decomposition(HiddenShiftInstance instance, int t);

  const HiddenShiftInstance& instance() const { return instance_; }
  int t() const { return t_; }
  int n() const { return instance_.n(); }
  int m() const { return instance_.m(); }
  int suffix_width() const { return instance_.n() - t_; }
  std::uint64_t node_count() const { return std::uint64_t{1} << t_; }
  std::uint64_t suffix_size() const { return std::uint64_t{1} << suffix_width(); }

  std::uint64_t join(std::uint64_t w, std::uint64_t u) const { return (w << suffix_width()) | u; }
  std::uint64_t f_w(std::uint64_t w, std::uint64_t u) const { return instance_.f(join(w, u)); }
  std::uint64_t g_w(std::uint64_t w, std::uint64_t u) const { return instance_.g(join(w, u)); }

  /// Low n-t bits of the planted shift.
  std::optional<std::uint64_t> suffix_shift() const;
  /// High t bits of the planted shift.
  std::optional<std::uint64_t> prefix_shift() const;

 private:
  HiddenShiftInstance instance_;
  int t_;
};

/// F(u) and G(v): the 2^t node outputs for each suffix, sorted ascending.
/// Rows are stored as sorted tuples; lexicographic tuple order equals the
/// order of the concatenated (2^t * m)-bit strings.
class SortedStringTable {
 public:
  SortedStringTable(int t, int m, int suffix_width, std::vector<std::uint64_t> f_rows,
                    std::vector<std::uint64_t> g_rows);

  int t() const { return t_; }
  int m() const { return m_; }
  std::uint64_t rows() const { return std::uint64_t{1} << suffix_width_; }
  std::size_t row_length() const { return std::size_t{1} << t_; }

  std::span<const std::uint64_t> F(std::uint64_t u) const;
  std::span<const std::uint64_t> G(std::uint64_t v) const;
  bool equal(std::uint64_t u, std::uint64_t v) const;

  /// Big-endian bit string of the concatenation, segments separated by '|'.
  std::string F_bits(std::uint64_t u) const;
  std::string G_bits(std::uint64_t v) const;

 private:
  int t_;
  int m_;
  int suffix_width_;
  std::vector<std::uint64_t> f_rows_;
  std::vector<std::uint64_t> g_rows_;
};

struct Theorem1Counterexample {
  std::uint64_t u;
  std::uint64_t v;
  bool strings_equal;    // observed F(u) == G(v)
  bool shift_predicts;   // v == u + a2 mod 2^(n-t)
};

struct Theorem1Report {
  bool pass = true;
  std::uint64_t pairs_checked = 0;
  std::uint64_t suffix_shift = 0;
  std::optional<Theorem1Counterexample> counterexample;
};

/// Seeded instance with g a uniformly random injective map and
/// f(x) = g(x + a mod 2^n).
HiddenShiftInstance generate_instance(int n, int m, std::uint64_t a, std::uint64_t seed);

/// The 3-bit, 4-output experiment instance with shift 7. Throws
/// VerificationFailure if the embedded tables are inconsistent.
HiddenShiftInstance load_table1();

Decomposition decompose(const HiddenShiftInstance& instance, int t);

SortedStringTable sorted_strings(const Decomposition& dec);

/// Exhaustive check of F(u) = G(v) <=> v = u + a2 over all suffix pairs.
Theorem1Report check_theorem1(const Decomposition& dec);

/// f'(x) = f(2x), g'(x) = g(2x + a0); the planted shift becomes (a - a0) / 2.
HiddenShiftInstance halve_remap(const HiddenShiftInstance& instance, int a0);

/// Node-local halving: f'_w(u) = f_w(2u), g'_w(u) = g_w(2u + a0 mod 2^(n-t)).
/// Keeps t, so each node keeps its own subfunction. The planted shift
/// a1 || a2 becomes a1 || (a2 - a0) / 2.
Decomposition halve_suffix_remap(const Decomposition& dec, int a0);

/// t-bit instance F~(w) = f(w || 0), G~(w) = g(w || a2), whose hidden shift is
/// the prefix a1 (u = 0 plus a2 never carries into the prefix).
HiddenShiftInstance prefix_stage_instance(const Decomposition& dec, std::uint64_t a2);

}  // namespace dsieve
