#pragma once

#include <iosfwd>
#include <optional>
#include <string>

#include "nc/serialize.hpp"
#include "nc/verify.hpp"

namespace nc {

inline constexpr std::uint64_t kDefaultSeed = 0x5EED;

struct CheckDescriptor {
    std::string check;
    std::optional<DomainSpec> domain;
    std::optional<NcMapExpr> map;
    int trials = 100;
    std::optional<double> tolerance;
    Json params = Json::object();
};

struct SuiteConfig {
    std::vector<CheckDescriptor> suite;
    std::uint64_t seed = kDefaultSeed;
    std::string output_path;
    std::string output_format = "json";  // "json" | "csv"
    int jobs = 1;
};

SuiteConfig suite_config_from_json(const Json& j);
Json to_json(const SuiteConfig& config);

// Canonical configuration covering the toolkit's identity catalog.
SuiteConfig builtin_paper_suite();

// Runs one named check. Throws ParseError on an unknown name or bad fields.
CheckReport run_check(const CheckDescriptor& desc, std::uint64_t seed);

struct SuiteResult {
    std::vector<CheckReport> reports;
    int exit_code = 0;  // 0 all passed, 1 runtime failures, 2 config errors
};

SuiteResult run_suite(const SuiteConfig& config, std::ostream& summary);

std::string reports_to_csv(const std::vector<CheckReport>& reports);
Json reports_to_json(const std::vector<CheckReport>& reports);

}  // namespace nc
