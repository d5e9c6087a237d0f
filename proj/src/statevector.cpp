#include "dsieve/statevector.hpp"

namespace dsieve {

RegisterLayout& RegisterLayout::add(std::string name, int width) {
  if (width < 1) throw InvalidParameters("register '" + name + "' must have positive width");
  if (contains(name)) throw InvalidParameters("duplicate register '" + name + "'");
  if (qubits_ + width > 62) throw InvalidParameters("layout exceeds 62 qubits");
  for (auto& r : registers_) r.shift += width;
  registers_.push_back(Register{std::move(name), width, qubits_, 0});
  qubits_ += width;
  return *this;
}

const Register& RegisterLayout::operator[](const std::string& name) const {
  for (const auto& r : registers_) {
    if (r.name == name) return r;
  }
  throw UnknownRegister(name);
}

bool RegisterLayout::contains(const std::string& name) const {
  for (const auto& r : registers_) {
    if (r.name == name) return true;
  }
  return false;
}

std::uint64_t RegisterLayout::index_of(std::span<const std::uint64_t> values) const {
  if (values.size() != registers_.size())
    throw InvalidParameters("need one value per register");
  std::uint64_t index = 0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (values[i] > registers_[i].mask())
      throw InvalidParameters("value too wide for register '" + registers_[i].name + "'");
    index = registers_[i].with_value(index, values[i]);
  }
  return index;
}

OracleTables oracle_tables(const HiddenShiftInstance& instance) {
  return OracleTables{instance.n(), instance.m(), {instance.f_table()}, {instance.g_table()}};
}

OracleTables oracle_tables(const Decomposition& dec) {
  OracleTables tables{dec.suffix_width(), dec.m(), {}, {}};
  const auto rows = static_cast<std::size_t>(dec.suffix_size());
  for (std::uint64_t w = 0; w < dec.node_count(); ++w) {
    const auto start = static_cast<std::size_t>(w) * rows;
    tables.f_nodes.push_back(dec.instance().f_table().subspan(start, rows));
    tables.g_nodes.push_back(dec.instance().g_table().subspan(start, rows));
  }
  return tables;
}

}  // namespace dsieve
