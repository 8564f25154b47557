#pragma once

#include "accesswalk/accessibility.hpp"
#include "accesswalk/network.hpp"
#include "accesswalk/walk.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace accesswalk {

/// Raised when exhaustive enumeration would expand more partial paths than
/// the configured budget allows.
class BudgetExceeded : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline constexpr std::uint64_t kDefaultPathBudget = 10'000'000;

/// Exact per-step transition probabilities out of one source under the
/// uniform self-avoiding walk law (walks field is 0).
using ExactTransition = TransitionTable;

/// Enumerates every self-avoiding path of up to `max_steps` steps from
/// `source`. Each path carries the product of 1/(open neighbors) over its
/// choices. The budget counts expanded partial paths across the call.
ExactTransition exact_transitions(const StreetNetwork& net, NodeId source, int max_steps,
                                  std::uint64_t budget = kDefaultPathBudget);

using Rational = boost::multiprecision::cpp_rational;

struct RationalEntry {
    NodeId target = 0;
    Rational probability;
};

/// Same enumeration in exact rational arithmetic. Index h-1 holds step h.
std::vector<std::vector<RationalEntry>> exact_transitions_rational(
    const StreetNetwork& net, NodeId source, int max_steps,
    std::uint64_t budget = kDefaultPathBudget);

inline constexpr std::size_t kRationalCheckMaxNodes = 16;

/// Largest |float - rational| over every (source, step, target) entry.
double rational_discrepancy(const StreetNetwork& net, int max_steps,
                            std::uint64_t budget = kDefaultPathBudget);

/// Exact accessibility for every node (sources enumerated concurrently when
/// exec.threads > 1). The budget applies per source.
AccessibilityField exact_accessibility(const StreetNetwork& net, int max_steps,
                                       const AccessibilityOptions& options = {},
                                       std::uint64_t budget = kDefaultPathBudget,
                                       const ExecutionOptions& exec = {},
                                       TransitionDumpWriter* dump = nullptr);

/// Header text for golden transition files.
std::string golden_header(const StreetNetwork& net, int max_steps);

}  // namespace accesswalk
