#pragma once

#include "fibercz/harness.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace fcz {

/// Invariant suite outcome. Every check carries its measured value and limit.
struct SuiteReport {
    std::string suite;
    std::uint64_t seed = 0;
    std::vector<Check> checks;
    io::Json data = io::Json::object();

    bool passed() const;
};

io::Json to_json(const SuiteReport& r);

/// Suites: czd, filters, operators, norms. "all" runs each in that order.
std::vector<std::string> suite_names();
std::vector<SuiteReport> run_verify(const std::string& suite, std::uint64_t seed, unsigned threads = 1);

SuiteReport verify_czd(std::uint64_t seed, unsigned threads = 1);
SuiteReport verify_filters(std::uint64_t seed, unsigned threads = 1);
SuiteReport verify_operators(std::uint64_t seed, unsigned threads = 1);
SuiteReport verify_norms(std::uint64_t seed, unsigned threads = 1);

} // namespace fcz
