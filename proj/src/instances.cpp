#include "dsieve/instances.hpp"

#include <algorithm>
#include <array>
#include <string_view>
#include <unordered_set>

#include "dsieve/errors.hpp"
#include "dsieve/rng.hpp"

namespace dsieve {

namespace {

std::string bits_of(std::uint64_t value, int width) {
  std::string out(static_cast<std::size_t>(width), '0');
  for (int i = 0; i < width; ++i) {
    if ((value >> (width - 1 - i)) & 1U) out[static_cast<std::size_t>(i)] = '1';
  }
  return out;
}

std::uint64_t parse_bits(std::string_view text) {
  std::uint64_t value = 0;
  for (char c : text) value = (value << 1) | static_cast<std::uint64_t>(c == '1');
  return value;
}

std::string join_bits(std::span<const std::uint64_t> row, int m) {
  std::string out;
  for (std::size_t i = 0; i < row.size(); ++i) {
    if (i) out += '|';
    out += bits_of(row[i], m);
  }
  return out;
}

}  // namespace

HiddenShiftInstance::HiddenShiftInstance(int n, int m, std::vector<std::uint64_t> f,
                                         std::vector<std::uint64_t> g,
                                         std::optional<std::uint64_t> hidden_a)
    : n_(n), m_(m), f_(std::move(f)), g_(std::move(g)), hidden_a_(hidden_a) {
  if (n_ < 1 || n_ > kMaxDomainBits) throw InvalidParameters("n must be in [1, 24]");
  if (m_ < n_) throw InvalidParameters("output width m must be >= n");
  if (m_ > kMaxOutputBits) throw InvalidParameters("output width m must be <= 63");
  if (f_.size() != size() || g_.size() != size())
    throw InvalidParameters("truth tables must have 2^n entries");
  const std::uint64_t limit = std::uint64_t{1} << m_;
  auto too_wide = [limit](std::uint64_t v) { return v >= limit; };
  if (std::ranges::any_of(f_, too_wide) || std::ranges::any_of(g_, too_wide))
    throw InvalidParameters("table entry wider than m bits");
  if (hidden_a_ && *hidden_a_ >= size()) throw InvalidParameters("hidden shift out of range");
}

bool HiddenShiftInstance::is_injective() const {
  auto distinct = [](std::vector<std::uint64_t> values) {
    std::ranges::sort(values);
    return std::ranges::adjacent_find(values) == values.end();
  };
  return distinct(f_) && distinct(g_);
}

std::optional<std::uint64_t> HiddenShiftInstance::first_shift_violation() const {
  if (!hidden_a_) throw MissingGroundTruth("instance has no planted shift");
  for (std::uint64_t x = 0; x < size(); ++x) {
    if (f(x) != g(x + *hidden_a_)) return x;
  }
  return std::nullopt;
}

bool HiddenShiftInstance::shift_holds() const { return !first_shift_violation().has_value(); }

HiddenShiftInstance HiddenShiftInstance::blind() const {
  return HiddenShiftInstance(n_, m_, f_, g_, std::nullopt);
}

Decomposition::Decomposition(HiddenShiftInstance instance, int t)
    : instance_(std::move(instance)), t_(t) {
  if (t_ < 1 || t_ >= instance_.n())
    throw InvalidParameters("prefix width t must satisfy 1 <= t < n (t=" + std::to_string(t_) +
                            ", n=" + std::to_string(instance_.n()) + ")");
}

std::optional<std::uint64_t> Decomposition::suffix_shift() const {
  if (!instance_.hidden_a()) return std::nullopt;
  return *instance_.hidden_a() & (suffix_size() - 1);
}

std::optional<std::uint64_t> Decomposition::prefix_shift() const {
  if (!instance_.hidden_a()) return std::nullopt;
  return *instance_.hidden_a() >> suffix_width();
}

SortedStringTable::SortedStringTable(int t, int m, int suffix_width,
                                     std::vector<std::uint64_t> f_rows,
                                     std::vector<std::uint64_t> g_rows)
    : t_(t), m_(m), suffix_width_(suffix_width), f_rows_(std::move(f_rows)),
      g_rows_(std::move(g_rows)) {}

std::span<const std::uint64_t> SortedStringTable::F(std::uint64_t u) const {
  return std::span(f_rows_).subspan(u * row_length(), row_length());
}

std::span<const std::uint64_t> SortedStringTable::G(std::uint64_t v) const {
  return std::span(g_rows_).subspan(v * row_length(), row_length());
}

bool SortedStringTable::equal(std::uint64_t u, std::uint64_t v) const {
  return std::ranges::equal(F(u), G(v));
}

std::string SortedStringTable::F_bits(std::uint64_t u) const { return join_bits(F(u), m_); }
std::string SortedStringTable::G_bits(std::uint64_t v) const { return join_bits(G(v), m_); }

HiddenShiftInstance generate_instance(int n, int m, std::uint64_t a, std::uint64_t seed) {
  if (n < 1 || n > kMaxDomainBits) throw InvalidParameters("n must be in [1, 24]");
  if (m < n) throw InvalidParameters("output width m must be >= n");
  if (m > kMaxOutputBits) throw InvalidParameters("output width m must be <= 63");
  const std::uint64_t size = std::uint64_t{1} << n;
  if (a >= size) throw InvalidParameters("shift a must be < 2^n");

  Rng rng = Rng(seed).child("generate_instance");
  const std::uint64_t universe = std::uint64_t{1} << m;

  // Floyd's sampling of a uniform `size`-subset of the m-bit strings, then a
  // Fisher-Yates shuffle to make the assignment order uniform too.
  std::vector<std::uint64_t> g;
  g.reserve(size);
  std::unordered_set<std::uint64_t> chosen;
  chosen.reserve(size * 2);
  for (std::uint64_t j = universe - size; j < universe; ++j) {
    const std::uint64_t r = rng.below(j + 1);
    const std::uint64_t pick = chosen.contains(r) ? j : r;
    chosen.insert(pick);
    g.push_back(pick);
  }
  for (std::uint64_t i = size - 1; i > 0; --i) std::swap(g[i], g[rng.below(i + 1)]);

  std::vector<std::uint64_t> f(size);
  for (std::uint64_t x = 0; x < size; ++x) f[x] = g[(x + a) & (size - 1)];

  HiddenShiftInstance instance(n, m, std::move(f), std::move(g), a);
  if (!instance.is_injective() || !instance.shift_holds())
    throw VerificationFailure("generated instance violates its invariants");
  return instance;
}

HiddenShiftInstance load_table1() {
  // x: g(x), f(x)
  static constexpr std::array<std::array<std::string_view, 2>, 8> kRows{{
      {"1001", "1000"},  // 000
      {"1100", "1001"},  // 001
      {"1010", "1100"},  // 010
      {"0101", "1010"},  // 011
      {"0111", "0101"},  // 100
      {"0011", "0111"},  // 101
      {"0001", "0011"},  // 110
      {"1000", "0001"},  // 111
  }};
  std::vector<std::uint64_t> f;
  std::vector<std::uint64_t> g;
  for (const auto& row : kRows) {
    g.push_back(parse_bits(row[0]));
    f.push_back(parse_bits(row[1]));
  }
  HiddenShiftInstance instance(3, 4, std::move(f), std::move(g), 7);
  if (!instance.is_injective()) throw VerificationFailure("embedded truth table is not injective");
  if (auto x = instance.first_shift_violation())
    throw VerificationFailure("embedded truth table violates f(x) = g(x + 7) at x = " +
                              std::to_string(*x));
  return instance;
}

Decomposition decompose(const HiddenShiftInstance& instance, int t) {
  return Decomposition(instance, t);
}

SortedStringTable sorted_strings(const Decomposition& dec) {
  const std::uint64_t rows = dec.suffix_size();
  const std::uint64_t width = dec.node_count();
  std::vector<std::uint64_t> f_rows(rows * width);
  std::vector<std::uint64_t> g_rows(rows * width);
  for (std::uint64_t u = 0; u < rows; ++u) {
    auto f_row = f_rows.begin() + static_cast<std::ptrdiff_t>(u * width);
    auto g_row = g_rows.begin() + static_cast<std::ptrdiff_t>(u * width);
    for (std::uint64_t w = 0; w < width; ++w) {
      f_row[static_cast<std::ptrdiff_t>(w)] = dec.f_w(w, u);
      g_row[static_cast<std::ptrdiff_t>(w)] = dec.g_w(w, u);
    }
    std::sort(f_row, f_row + static_cast<std::ptrdiff_t>(width));
    std::sort(g_row, g_row + static_cast<std::ptrdiff_t>(width));
  }
  return SortedStringTable(dec.t(), dec.m(), dec.suffix_width(), std::move(f_rows),
                           std::move(g_rows));
}

Theorem1Report check_theorem1(const Decomposition& dec) {
  const auto a2 = dec.suffix_shift();
  if (!a2) throw MissingGroundTruth("theorem check needs the planted shift");
  const SortedStringTable table = sorted_strings(dec);
  const std::uint64_t rows = dec.suffix_size();

  Theorem1Report report;
  report.suffix_shift = *a2;
  for (std::uint64_t u = 0; u < rows; ++u) {
    const std::uint64_t partner = (u + *a2) & (rows - 1);
    for (std::uint64_t v = 0; v < rows; ++v) {
      ++report.pairs_checked;
      const bool observed = table.equal(u, v);
      const bool predicted = v == partner;
      if (observed != predicted) {
        report.pass = false;
        report.counterexample = Theorem1Counterexample{u, v, observed, predicted};
        return report;
      }
    }
  }
  return report;
}

HiddenShiftInstance halve_remap(const HiddenShiftInstance& instance, int a0) {
  if (instance.n() < 2) throw InvalidParameters("halving needs n >= 2");
  if (a0 != 0 && a0 != 1) throw InvalidParameters("parity bit must be 0 or 1");
  const auto& a = instance.hidden_a();
  if (a && static_cast<int>(*a & 1U) != a0)
    throw InvalidParameters("parity bit disagrees with the planted shift");

  const std::uint64_t half = instance.size() / 2;
  std::vector<std::uint64_t> f(half);
  std::vector<std::uint64_t> g(half);
  for (std::uint64_t x = 0; x < half; ++x) {
    f[x] = instance.f(2 * x);
    g[x] = instance.g(2 * x + static_cast<std::uint64_t>(a0));
  }
  std::optional<std::uint64_t> shift;
  if (a) shift = (*a - static_cast<std::uint64_t>(a0)) / 2;
  HiddenShiftInstance out(instance.n() - 1, instance.m(), std::move(f), std::move(g), shift);
  if (shift && !out.shift_holds())
    throw VerificationFailure("halved instance lost the shift relation");
  return out;
}

Decomposition halve_suffix_remap(const Decomposition& dec, int a0) {
  const int k = dec.suffix_width();
  if (k < 2) throw InvalidParameters("node-local halving needs a suffix of at least 2 bits");
  if (a0 != 0 && a0 != 1) throw InvalidParameters("parity bit must be 0 or 1");
  const auto a2 = dec.suffix_shift();
  if (a2 && static_cast<int>(*a2 & 1U) != a0)
    throw InvalidParameters("parity bit disagrees with the planted shift");

  const std::uint64_t suffix = dec.suffix_size();
  const std::uint64_t new_suffix = suffix / 2;
  const std::uint64_t size = dec.node_count() * new_suffix;
  std::vector<std::uint64_t> f(size);
  std::vector<std::uint64_t> g(size);
  for (std::uint64_t w = 0; w < dec.node_count(); ++w) {
    for (std::uint64_t u = 0; u < new_suffix; ++u) {
      f[w * new_suffix + u] = dec.f_w(w, 2 * u);
      g[w * new_suffix + u] = dec.g_w(w, (2 * u + static_cast<std::uint64_t>(a0)) & (suffix - 1));
    }
  }
  std::optional<std::uint64_t> shift;
  if (a2) shift = (*dec.prefix_shift() << (k - 1)) | ((*a2 - static_cast<std::uint64_t>(a0)) / 2);
  HiddenShiftInstance out(dec.n() - 1, dec.m(), std::move(f), std::move(g), shift);
  if (shift && !out.shift_holds())
    throw VerificationFailure("node-local halving lost the shift relation");
  return Decomposition(std::move(out), dec.t());
}

HiddenShiftInstance prefix_stage_instance(const Decomposition& dec, std::uint64_t a2) {
  if (a2 >= dec.suffix_size()) throw InvalidParameters("suffix shift out of range");
  if (auto planted = dec.suffix_shift(); planted && *planted != a2)
    throw InvalidParameters("suffix shift disagrees with the planted shift");

  const std::uint64_t nodes = dec.node_count();
  std::vector<std::uint64_t> f(nodes);
  std::vector<std::uint64_t> g(nodes);
  for (std::uint64_t w = 0; w < nodes; ++w) {
    f[w] = dec.f_w(w, 0);
    g[w] = dec.g_w(w, a2);
  }
  HiddenShiftInstance out(dec.t(), dec.m(), std::move(f), std::move(g), dec.prefix_shift());
  if (out.planted() && !out.shift_holds())
    throw VerificationFailure("prefix-stage instance lost the shift relation");
  return out;
}

}  // namespace dsieve
