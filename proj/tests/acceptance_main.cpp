#include <cstdlib>
#include <iostream>

#include "ecrl/verify/acceptance.hpp"

int main() {
  ecrl::verify::AcceptanceOptions options;
  options.tasks_dir = ECRL_TASKS_DIR;
  if (const char* dir = std::getenv("ECRL_TASKS")) options.tasks_dir = dir;
  auto results = ecrl::verify::run_acceptance(options, std::cout);
  return ecrl::verify::all_passed(results) ? 0 : 1;
}
