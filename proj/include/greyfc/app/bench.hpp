#pragma once

#include <json.hpp>

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace greyfc::app {

/// One expectation compared against a computed value.
struct BenchCheck {
    std::string id;    ///< stable key, overridable via an expectation file
    std::string name;  ///< human-readable line
    double expected = 0.0;
    double computed = 0.0;
    double tolerance = 0.0;
    bool relative = false; ///< tolerance is a fraction of the expected value
    bool is_cell = false;  ///< table cell (summarised per column)
    bool informational = false; ///< reported but never counted as a failure
    std::string note;
    bool pass = false;
};

struct BenchSection {
    std::string title;
    std::vector<BenchCheck> checks;
};

struct BenchReport {
    std::vector<BenchSection> sections;
    std::size_t passed = 0;
    std::size_t failed = 0;
    std::size_t informational = 0;
};

/// Run every reproduction check against the bundled reference tables.
/// `expected_override_path` optionally points to a JSON object mapping
/// check ids to replacement expected values (harness self-test hook).
BenchReport run_bench(const std::optional<std::string>& expected_override_path =
                          std::nullopt);

std::string render_bench_text(const BenchReport& report);
nlohmann::ordered_json render_bench_json(const BenchReport& report);

} // namespace greyfc::app
