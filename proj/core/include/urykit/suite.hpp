#pragma once

// Randomized property suites over the whole library. Each property is run
// on `budget` seeded cases; the first failing case is serialized.

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "urykit/io.hpp"

namespace urykit {

struct PropertyResult {
  std::string suite;
  std::string property;
  std::size_t cases = 0;
  bool passed = true;
  std::optional<io::Json> counterexample;
};

struct SuiteReport {
  std::uint64_t seed = 0;
  std::size_t budget = 0;
  std::vector<PropertyResult> results;

  [[nodiscard]] bool passed() const;
  [[nodiscard]] io::Json to_json() const;
};

/// Replaceable pieces of the library, for checking that the suites catch
/// broken implementations.
struct SuiteHooks {
  std::function<Rat(const KatetovMap&, const KatetovMap&)> sup_dist;
};

/// name is one of katetov, lemma1, homotopy, stabilizer, all. Throws
/// ParseError for anything else.
SuiteReport run_suite(std::string_view name, std::uint64_t seed, std::size_t budget,
                      const SuiteHooks& hooks = {});

}  // namespace urykit
