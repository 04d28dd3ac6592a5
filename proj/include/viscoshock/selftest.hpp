#pragma once

#include <filesystem>

#include <json.hpp>

namespace viscoshock {

/// Runs the invariant suites at small fixed sizes and writes their artifacts plus
/// selftest.json into `out_dir`. Output bytes depend only on the code, never on the
/// clock or the machine. Returns the summary; "all_pass" tells whether every check held.
nlohmann::json run_selftest(const std::filesystem::path& out_dir);

} // namespace viscoshock
