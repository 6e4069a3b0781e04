#include "lpstab/cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <limits>
#include <ostream>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "lpstab/ball_sharpness.hpp"
#include "lpstab/io.hpp"
#include "lpstab/jensen.hpp"
#include "lpstab/mixed_volume.hpp"
#include "lpstab/suite.hpp"

namespace lpstab::cli {

namespace {

using io::format_double;
using io::json;

struct CommandName {
    Command command;
    const char* name;
};

constexpr CommandName kCommands[] = {
    {Command::JensenCheck, "jensen-check"},       {Command::PsiScan, "psi-scan"},
    {Command::MixedVolume, "mixed-volume"},       {Command::VerifyTheorem1, "verify-theorem1"},
    {Command::VerifyTheorem2, "verify-theorem2"}, {Command::ProofChain, "proof-chain"},
    {Command::SharpnessScan, "sharpness-scan"},
};

const char* command_name(Command c) {
    for (const auto& entry : kCommands)
        if (entry.command == c) return entry.name;
    return "?";
}

std::uint64_t default_seed() {
    if (const char* env = std::getenv(kSeedEnv)) {
        try {
            return std::stoull(env);
        } catch (const std::exception&) {
            throw UsageError(std::string(kSeedEnv) + " must be an unsigned integer");
        }
    }
    return suite::kDefaultSeed;
}

void emit(const RunConfig& config, const std::string& content, std::ostream& out) {
    if (config.output) {
        io::write_atomically(*config.output, content);
    } else {
        out << content;
    }
}

Format format_or(const RunConfig& config, Format fallback) { return config.format.value_or(fallback); }

// Instances are either the explicit inputs (one instance) or a seeded suite.
struct PolygonPair {
    std::uint64_t seed = 0;
    planar::Polygon k;
    planar::Polygon l;
};

planar::Polygon polygon_input(const std::string& file) {
    const auto body = io::load_body(file);
    if (body.kind() != planar::SupportOracle::Kind::Polygon)
        throw io::InputError(file + ":$.type", "this command needs a polygon body");
    return body.as_polygon();
}

std::vector<PolygonPair> polygon_pairs(const RunConfig& config) {
    if (!config.inputs.empty()) return {{0, polygon_input(config.inputs[0]), polygon_input(config.inputs[1])}};
    return suite::parallel_map(config.instances, [&](std::size_t i) {
        const auto seed = suite::instance_seed(config.seed, i);
        suite::Rng rng(seed);
        auto k = suite::random_polygon(rng);
        auto l = suite::random_polygon(rng);
        return PolygonPair{seed, std::move(k), std::move(l)};
    });
}

int finish(const RunConfig& config, std::ostream& err, std::size_t checked, std::size_t violations,
           double min_margin) {
    err << fmt::format("{}: {} checks, min margin {}, {} violation(s)\n", command_name(config.command), checked,
                       format_double(min_margin), violations);
    return violations == 0 ? kExitOk : kExitViolation;
}

int run_jensen(const RunConfig& config, std::ostream& out, std::ostream& err) {
    const double p = *config.p;
    const double tol = config.tolerance.value_or(1e-10);
    std::vector<std::pair<std::uint64_t, jensen::DiscreteDistribution>> cases;
    if (!config.inputs.empty()) {
        for (std::size_t i = 0; i < config.inputs.size(); ++i) cases.emplace_back(i, io::load_distribution(config.inputs[i]));
    } else {
        auto drawn = suite::parallel_map(config.instances, [&](std::size_t i) {
            const auto seed = suite::instance_seed(config.seed, i);
            suite::Rng rng(seed);
            return std::pair(seed, suite::random_distribution(rng));
        });
        for (auto& d : drawn) cases.push_back(std::move(d));
    }
    auto reports = suite::parallel_map(cases.size(), [&](std::size_t i) {
        auto r = jensen::stability_check(cases[i].second, p);
        r.margin = r.deficit - config.rhs_scale * r.c_p * r.deviation * r.deviation;
        return r;
    });

    std::size_t violations = 0;
    double min_margin = std::numeric_limits<double>::infinity();
    for (const auto& r : reports) {
        min_margin = std::min(min_margin, r.margin);
        if (r.margin < -tol) ++violations;
    }
    if (format_or(config, Format::Csv) == Format::Csv) {
        std::string csv = "seed,p,deficit,deviation,c_p,margin\n";
        for (std::size_t i = 0; i < reports.size(); ++i) {
            const auto& r = reports[i];
            csv += fmt::format("{},{},{},{},{},{}\n", cases[i].first, format_double(r.p), format_double(r.deficit),
                               format_double(r.deviation), format_double(r.c_p), format_double(r.margin));
        }
        emit(config, csv, out);
    } else {
        json arr = json::array();
        for (std::size_t i = 0; i < reports.size(); ++i) {
            auto j = io::to_json(reports[i]);
            j["seed"] = cases[i].first;
            arr.push_back(j);
        }
        emit(config, json{{"command", "jensen-check"}, {"min_margin", min_margin}, {"violations", violations}, {"reports", arr}}.dump(2) + "\n", out);
    }
    return finish(config, err, reports.size(), violations, min_margin);
}

int run_psi(const RunConfig& config, std::ostream& out, std::ostream& err) {
    const double tol = config.tolerance.value_or(1e-10);
    const auto best = jensen::psi_grid_oracle(*config.p, config.a_steps, config.t_steps);
    const bool on_diagonal = best.t - best.a <= best.t_step * (1.0 + 1e-9);
    if (format_or(config, Format::Json) == Format::Json) {
        auto j = io::to_json(best);
        j["p"] = *config.p;
        j["a_steps"] = config.a_steps;
        j["t_steps"] = config.t_steps;
        j["argmin_on_diagonal"] = on_diagonal;
        emit(config, j.dump(2) + "\n", out);
    } else {
        emit(config,
             fmt::format("p,a_steps,t_steps,min,a,t\n{},{},{},{},{},{}\n", format_double(*config.p), config.a_steps,
                         config.t_steps, format_double(best.value), format_double(best.a), format_double(best.t)),
             out);
    }
    return finish(config, err, config.a_steps * config.t_steps, best.value < -tol ? 1 : 0, best.value);
}

int run_mixed_volume(const RunConfig& config, std::ostream& out, std::ostream&) {
    const auto k = polygon_input(config.inputs[0]);
    const auto l = io::load_body(config.inputs[1]);
    const double v = mixed::mixed_volume_p(k, l, *config.p);
    if (format_or(config, Format::Csv) == Format::Json) {
        emit(config, json{{"p", *config.p}, {"mixed_volume", v}}.dump(2) + "\n", out);
    } else {
        emit(config, format_double(v) + "\n", out);
    }
    return kExitOk;
}

int run_theorem(const RunConfig& config, std::ostream& out, std::ostream& err, bool second) {
    const double p = *config.p;
    const double tol = config.tolerance.value_or(1e-9);
    const std::size_t directions = config.directions.value_or(planar::kDefaultDirections);
    const auto pairs = polygon_pairs(config);
    const auto reports = suite::parallel_map(pairs.size(), [&](std::size_t i) {
        return second ? mixed::check_theorem_2(pairs[i].k, pairs[i].l, p, directions, config.rhs_scale)
                      : mixed::check_theorem_1(pairs[i].k, pairs[i].l, p, config.rhs_scale);
    });

    std::size_t violations = 0;
    double min_margin = std::numeric_limits<double>::infinity();
    for (const auto& r : reports) {
        min_margin = std::min(min_margin, r.margin);
        const double allowed = tol + (second ? 3.0 * r.numerical_error : 0.0);
        if (r.margin < -allowed) ++violations;
    }
    if (format_or(config, Format::Csv) == Format::Csv) {
        std::string csv(io::kStabilityCsvHeader);
        csv += '\n';
        for (std::size_t i = 0; i < reports.size(); ++i) csv += io::csv_row(pairs[i].seed, reports[i]) + "\n";
        emit(config, csv, out);
    } else {
        json arr = json::array();
        for (std::size_t i = 0; i < reports.size(); ++i) {
            auto j = io::to_json(reports[i]);
            j["seed"] = pairs[i].seed;
            arr.push_back(j);
        }
        emit(config, json{{"command", command_name(config.command)}, {"min_margin", min_margin}, {"violations", violations}, {"reports", arr}}.dump(2) + "\n", out);
    }
    return finish(config, err, reports.size(), violations, min_margin);
}

int run_proof_chain(const RunConfig& config, std::ostream& out, std::ostream& err) {
    const double p = *config.p;
    const double tol = config.tolerance.value_or(1e-9);
    const auto pairs = polygon_pairs(config);
    const auto reports = suite::parallel_map(
        pairs.size(), [&](std::size_t i) { return mixed::proof_chain(pairs[i].k, pairs[i].l, p); });

    std::size_t violations = 0;
    double min_margin = std::numeric_limits<double>::infinity();
    for (const auto& r : reports) {
        min_margin = std::min(min_margin, r.min_margin());
        if (r.min_margin() < -tol) ++violations;
    }
    if (format_or(config, Format::Json) == Format::Csv) {
        std::string csv = "seed,p,step,lhs,rhs,margin\n";
        for (std::size_t i = 0; i < reports.size(); ++i) {
            for (const auto& s : reports[i].steps) {
                csv += fmt::format("{},{},{},{},{},{}\n", pairs[i].seed, format_double(p), s.name, format_double(s.lhs),
                                   format_double(s.rhs), format_double(s.margin));
            }
        }
        emit(config, csv, out);
    } else {
        json arr = json::array();
        for (std::size_t i = 0; i < reports.size(); ++i) {
            auto j = io::to_json(reports[i]);
            j["seed"] = pairs[i].seed;
            arr.push_back(j);
        }
        emit(config, json{{"command", "proof-chain"}, {"min_margin", min_margin}, {"violations", violations}, {"reports", arr}}.dump(2) + "\n", out);
    }
    return finish(config, err, reports.size(), violations, min_margin);
}

int run_sharpness(const RunConfig& config, std::ostream& out, std::ostream& err) {
    const double p = *config.p;
    const double tol = config.tolerance.value_or(1e-12);
    const auto eps = config.epsilons.empty() ? sharpness::default_epsilon_grid() : config.epsilons;
    const auto scan = sharpness::sharpness_scan(config.n, p, eps, config.include_beta, config.directions.value_or(8192));

    std::size_t violations = 0;
    double min_margin = std::numeric_limits<double>::infinity();
    const double constant = config.rhs_scale * (p - 1.0) / (128.0 * config.n * config.n);
    for (const auto& row : scan.rows) {
        const double margin = row.delta_p - constant * row.asymmetry_sq;
        min_margin = std::min(min_margin, margin);
        if (margin < -tol) ++violations;
    }
    auto summary = io::to_json(scan);
    summary["theorem1_min_margin"] = min_margin;
    if (format_or(config, Format::Csv) == Format::Csv) {
        emit(config, io::scan_csv(scan), out);
        const std::string text = summary.dump(2) + "\n";
        if (config.output) {
            io::write_atomically(*config.output + ".summary.json", text);
            out << text;
        } else {
            err << text;
        }
    } else {
        json rows = json::array();
        for (const auto& r : scan.rows) {
            rows.push_back({{"epsilon", r.eps},
                            {"delta_p", r.delta_p},
                            {"asymmetry", r.asymmetry},
                            {"asymmetry_sq", r.asymmetry_sq},
                            {"beta_p", r.beta_p ? json(*r.beta_p) : json(nullptr)}});
        }
        summary["rows"] = rows;
        emit(config, summary.dump(2) + "\n", out);
    }
    return finish(config, err, scan.rows.size(), violations, min_margin);
}

} // namespace

std::optional<Command> parse_command(const std::string& name) {
    for (const auto& entry : kCommands)
        if (name == entry.name) return entry.command;
    return std::nullopt;
}

void validate(const RunConfig& config) {
    if (!config.p) throw UsageError("--p is required");
    const double p = *config.p;
    if (!std::isfinite(p) || p <= 0.0) throw UsageError("--p must be a positive number");
    if (config.tolerance && !(*config.tolerance >= 0.0)) throw UsageError("--tolerance must be nonnegative");
    if (!(config.rhs_scale > 0.0)) throw UsageError("--rhs-scale must be positive");
    switch (config.command) {
    case Command::JensenCheck:
        if (config.inputs.empty() && config.instances == 0) throw UsageError("--instances must be positive");
        break;
    case Command::PsiScan:
        if (p == 1.0) throw UsageError("psi-scan is defined for p != 1");
        if (config.a_steps < 2 || config.t_steps < 2) throw UsageError("--a-steps and --t-steps must be >= 2");
        if (!config.inputs.empty()) throw UsageError("psi-scan takes no input files");
        break;
    case Command::MixedVolume:
        if (p < 1.0) throw UsageError("mixed-volume needs p >= 1");
        if (config.inputs.size() != 2) throw UsageError("mixed-volume needs exactly two body files (K then L)");
        break;
    case Command::VerifyTheorem1:
    case Command::VerifyTheorem2:
    case Command::ProofChain:
        if (p <= 1.0) throw UsageError(std::string(command_name(config.command)) + " needs p > 1");
        if (!config.inputs.empty() && config.inputs.size() != 2)
            throw UsageError("give either two polygon files or none (random suite)");
        if (config.inputs.empty() && config.instances == 0) throw UsageError("--instances must be positive");
        if (config.command == Command::VerifyTheorem2 && config.directions && *config.directions < 64)
            throw UsageError("--directions must be at least 64");
        break;
    case Command::SharpnessScan:
        if (p <= 1.0) throw UsageError("sharpness-scan needs p > 1");
        if (config.n < 2) throw UsageError("--n must be at least 2");
        if (config.directions && *config.directions < 64) throw UsageError("--directions must be at least 64");
        if (!config.inputs.empty()) throw UsageError("sharpness-scan takes no input files");
        break;
    }
}

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
    try {
        validate(config);
        switch (config.command) {
        case Command::JensenCheck: return run_jensen(config, out, err);
        case Command::PsiScan: return run_psi(config, out, err);
        case Command::MixedVolume: return run_mixed_volume(config, out, err);
        case Command::VerifyTheorem1: return run_theorem(config, out, err, false);
        case Command::VerifyTheorem2: return run_theorem(config, out, err, true);
        case Command::ProofChain: return run_proof_chain(config, out, err);
        case Command::SharpnessScan: return run_sharpness(config, out, err);
        }
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << "\n";
    } catch (const io::InputError& e) {
        err << "input error: " << e.what() << "\n";
    } catch (const std::invalid_argument& e) {
        err << "invalid input: " << e.what() << "\n";
    } catch (const std::runtime_error& e) {
        err << "error: " << e.what() << "\n";
    }
    return kExitUsage;
}

int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Numerical laboratory for L_p mixed-volume and Jensen stability inequalities", "lpstab"};
    RunConfig config;
    std::string command;
    std::string format;
    double p = 0.0;
    std::size_t directions = 0;
    double tolerance = 0.0;
    std::string output;
    std::uint64_t seed = 0;

    std::string command_list;
    for (const auto& entry : kCommands) command_list += std::string(command_list.empty() ? "" : " | ") + entry.name;
    app.add_option("command", command, command_list)->required();
    app.add_option("inputs", config.inputs, "Input JSON files (bodies or distributions)");
    auto* p_opt = app.add_option("--p", p, "Exponent p");
    app.add_option("--n", config.n, "Dimension for sharpness-scan")->capture_default_str();
    auto* n_opt = app.add_option("-N,--directions", directions, "Number of discretization directions");
    auto* seed_opt = app.add_option("--seed", seed, std::string("Base seed (default ") +
                                                        std::to_string(suite::kDefaultSeed) + ", or $" + kSeedEnv + ")");
    auto* tol_opt = app.add_option("--tolerance", tolerance, "Allowed negative slack on margins");
    app.add_option("--instances", config.instances, "Random suite size")->capture_default_str();
    auto* out_opt = app.add_option("-o,--output", output, "Report path (written atomically)");
    auto* fmt_opt = app.add_option("--format", format, "json | csv")->check(CLI::IsMember({"json", "csv"}));
    app.add_option("--a-steps", config.a_steps, "psi-scan grid size in a")->capture_default_str();
    app.add_option("--t-steps", config.t_steps, "psi-scan grid size in t")->capture_default_str();
    app.add_flag("--beta", config.include_beta, "sharpness-scan: include beta_p (n = 2 only)");
    app.add_option("--eps", config.epsilons, "sharpness-scan: explicit epsilon values");
    app.add_option("--rhs-scale", config.rhs_scale, "Scale every right-hand side (fault injection)")
        ->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << "\n" << app.help();
        return kExitUsage;
    }

    const auto parsed = parse_command(command);
    if (!parsed) {
        err << "usage error: unknown command '" << command << "' (expected " << command_list << ")\n";
        return kExitUsage;
    }
    config.command = *parsed;
    if (p_opt->count() > 0) config.p = p;
    if (n_opt->count() > 0) config.directions = directions;
    if (tol_opt->count() > 0) config.tolerance = tolerance;
    if (out_opt->count() > 0) config.output = output;
    if (fmt_opt->count() > 0) config.format = format == "json" ? Format::Json : Format::Csv;
    try {
        config.seed = seed_opt->count() > 0 ? seed : default_seed();
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << "\n";
        return kExitUsage;
    }
    return run(config, out, err);
}

} // namespace lpstab::cli
