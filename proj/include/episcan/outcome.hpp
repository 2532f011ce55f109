// Outcome data for the four supported model families.
#pragma once

#include <cstdint>
#include <variant>
#include <vector>

#include "episcan/errors.hpp"

namespace episcan {

enum class ModelFamily { Linear, Logistic, Poisson, Cox };

const char* model_family_name(ModelFamily f);
ModelFamily model_family_from_name(const std::string& s);

struct ContinuousOutcome {
  std::vector<double> y;
};

struct BinaryOutcome {
  std::vector<double> y;  // 0/1
};

struct CountOutcome {
  std::vector<double> y;
  std::vector<double> offset;  // strictly positive, one per observation
};

struct SurvivalOutcome {
  std::vector<double> time;
  std::vector<std::uint8_t> event;
};

using Outcome =
    std::variant<ContinuousOutcome, BinaryOutcome, CountOutcome, SurvivalOutcome>;

std::size_t outcome_size(const Outcome& outcome);
ModelFamily outcome_family(const Outcome& outcome);

// Throws InvalidResponse when the outcome variant does not match the family.
void check_outcome_family(const Outcome& outcome, ModelFamily family);

}  // namespace episcan
