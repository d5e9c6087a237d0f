#pragma once

#include <filesystem>
#include <string>

#include "json.hpp"

#include "dsieve/distributed.hpp"
#include "dsieve/instances.hpp"
#include "dsieve/recover.hpp"
#include "dsieve/sieve.hpp"
#include "dsieve/verify.hpp"

namespace dsieve {

using Json = nlohmann::ordered_json;

/// {"n":..,"m":..,"a":..(optional),"f":[hex..],"g":[hex..]}; hex digits are
/// lowercase, zero-padded to ceil(m/4), an optional "0x" prefix is accepted
/// on input.
Json instance_to_json(const HiddenShiftInstance& instance);
HiddenShiftInstance instance_from_json(const Json& doc);

HiddenShiftInstance read_instance(const std::filesystem::path& path);
void write_instance(const std::filesystem::path& path, const HiddenShiftInstance& instance);

/// Two side-by-side column groups of x, g(x), f(x) in binary.
std::string format_truth_table(const HiddenShiftInstance& instance);

Json to_json(const SieveStats& stats);
Json to_json(const NodeCounters& counters);
Json to_json(const CommLedger& ledger);
Json to_json(const ResourceReport& report);
Json to_json(const SolveReport& report);
Json to_json(const StatReport& report);
Json to_json(const Theorem1Report& report);

/// Writes to a sibling temporary file, then renames over `path`.
void write_atomic(const std::filesystem::path& path, const std::string& contents);

}  // namespace dsieve
