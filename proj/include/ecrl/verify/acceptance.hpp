#pragma once

#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

namespace ecrl::verify {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
};

struct AcceptanceOptions {
  std::filesystem::path tasks_dir = "tasks";
  std::vector<int> only;  // empty: all
};

CriterionResult check_language_equivalence();
CriterionResult check_reference_automaton();
CriterionResult check_eq1_exactness();
CriterionResult check_shaping_telescoping(const std::filesystem::path& tasks_dir);
CriterionResult check_gradients(const std::filesystem::path& tasks_dir);
CriterionResult check_tabular_convergence(const std::filesystem::path& tasks_dir);
CriterionResult check_directional_benefit(const std::filesystem::path& tasks_dir);
CriterionResult check_encoding_comparison(const std::filesystem::path& tasks_dir);
CriterionResult check_alpha_sweep(const std::filesystem::path& tasks_dir);

// Runs the selected criteria, printing one line per criterion as it finishes.
std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& options, std::ostream& os);
bool all_passed(const std::vector<CriterionResult>& results);

std::string format_line(const CriterionResult& r);

}  // namespace ecrl::verify
