#pragma once

// JSON and CSV serialization for bodies, distributions and reports.
//
// Body schema:
//   {"type":"polygon","vertices":[[x,y],...]}
//   {"type":"ball","center":[x,y],"radius":r}
//   {"type":"dilate","lambda":s,"body":{...}}
//   {"type":"lp_sum","p":q,"left":{...},"right":{...}}
// Distribution schema: {"weights":[...],"values":[...]}

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "lpstab/ball_sharpness.hpp"
#include "lpstab/jensen.hpp"
#include "lpstab/mixed_volume.hpp"
#include "lpstab/planar.hpp"

namespace lpstab::io {

using nlohmann::json;

/// Malformed input. `where` is "<file>:<json path>" of the offending field.
class InputError : public std::runtime_error {
public:
    InputError(std::string where, const std::string& message)
        : std::runtime_error(where + ": " + message), where_(std::move(where)) {}

    [[nodiscard]] const std::string& where() const noexcept { return where_; }

private:
    std::string where_;
};

[[nodiscard]] planar::SupportOracle body_from_json(const json& j, const std::string& path = "$");
[[nodiscard]] json body_to_json(const planar::SupportOracle& body);

[[nodiscard]] jensen::DiscreteDistribution distribution_from_json(const json& j, const std::string& path = "$");
[[nodiscard]] json distribution_to_json(const jensen::DiscreteDistribution& d);

/// Reads and parses a file; errors carry the file name as prefix of where().
[[nodiscard]] json read_json_file(const std::filesystem::path& file);
[[nodiscard]] planar::SupportOracle load_body(const std::filesystem::path& file);
[[nodiscard]] jensen::DiscreteDistribution load_distribution(const std::filesystem::path& file);

[[nodiscard]] json to_json(const jensen::JensenReport& r);
[[nodiscard]] json to_json(const jensen::PsiGridMinimum& r);
[[nodiscard]] json to_json(const mixed::StabilityReport& r);
[[nodiscard]] json to_json(const mixed::ProofChainReport& r);
[[nodiscard]] json to_json(const sharpness::EpsilonScan& scan);

/// 17 significant digits, enough for any double to round-trip.
[[nodiscard]] std::string format_double(double x);

inline constexpr std::string_view kStabilityCsvHeader = "seed,p,lhs,rhs,margin,A,sigma,N";
[[nodiscard]] std::string csv_row(std::uint64_t seed, const mixed::StabilityReport& r);

inline constexpr std::string_view kScanCsvHeader = "n,p,epsilon,delta_p,asymmetry,asymmetry_sq,beta_p";
[[nodiscard]] std::string scan_csv(const sharpness::EpsilonScan& scan);

/// Writes to a sibling temporary file and renames it over `file`.
void write_atomically(const std::filesystem::path& file, std::string_view content);

} // namespace lpstab::io
