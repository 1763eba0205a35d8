#pragma once

#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

namespace qfel::acceptance {

/// One measured quantity compared against its pinned limit.
struct Check {
  std::string label;
  double measured = 0.0;
  double limit = 0.0;
  std::string relation;  ///< "<=", ">=", "<", ">" or "==", read as `measured relation limit`
  bool passed = false;
};

struct CriterionResult {
  int id = 0;
  std::string title;
  std::vector<Check> checks;
  std::string error;  ///< set when the criterion threw before completing
  double seconds = 0.0;

  [[nodiscard]] bool passed() const;
};

inline constexpr int kCriterionCount = 9;

/// Runs acceptance criteria and keeps the expensive propagations so later
/// criteria can reuse them.
class Suite {
 public:
  Suite();
  ~Suite();
  Suite(const Suite&) = delete;
  Suite& operator=(const Suite&) = delete;

  /// Criterion `id` in [1, kCriterionCount]; exceptions are captured in `error`.
  CriterionResult run(int id);

  std::vector<CriterionResult> run_all();

  struct Cache;

 private:
  std::unique_ptr<Cache> cache_;
};

[[nodiscard]] std::string criterion_title(int id);

/// "PASS  3  <title>  (1.2 s)" style summary line.
void print_summary(std::ostream& out, const CriterionResult& result);

/// Every check of `result` with measured value and limit, one per line.
void print_details(std::ostream& out, const CriterionResult& result);

}  // namespace qfel::acceptance
