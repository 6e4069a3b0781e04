#pragma once

// Command-line driver shared by the `lpstab` executable and the tests.
//
// Exit codes: 0 when every checked margin is >= -tolerance, 1 when some check
// fails beyond tolerance, 2 on usage or input errors.

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace lpstab::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitViolation = 1;
inline constexpr int kExitUsage = 2;

/// Environment variable that overrides the default seed.
inline constexpr const char* kSeedEnv = "LPSTAB_SEED";

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class Command { JensenCheck, PsiScan, MixedVolume, VerifyTheorem1, VerifyTheorem2, ProofChain, SharpnessScan };
enum class Format { Json, Csv };

struct RunConfig {
    Command command = Command::JensenCheck;
    std::optional<double> p;
    int n = 2;
    std::optional<std::size_t> directions;
    std::uint64_t seed = 0;
    std::optional<double> tolerance;
    std::size_t instances = 100;
    std::vector<std::string> inputs;
    std::optional<std::string> output;
    std::optional<Format> format;

    std::size_t a_steps = 99;
    std::size_t t_steps = 1000;
    bool include_beta = false;
    std::vector<double> epsilons;
    /// Multiplies every right-hand side; values > 1 provoke violations on purpose.
    double rhs_scale = 1.0;
};

[[nodiscard]] std::optional<Command> parse_command(const std::string& name);

/// Checks that the command has everything it needs. Throws UsageError.
void validate(const RunConfig& config);

/// Runs a validated configuration; reports go to `config.output` (atomically)
/// or to `out`, diagnostics to `err`.
[[nodiscard]] int run(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Parses argv (including the program name), then validates and runs.
[[nodiscard]] int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace lpstab::cli
