#include "episcan/outcome.hpp"

#include <string>

namespace episcan {

const char* model_family_name(ModelFamily f) {
  switch (f) {
    case ModelFamily::Linear:
      return "linear";
    case ModelFamily::Logistic:
      return "logistic";
    case ModelFamily::Poisson:
      return "poisson";
    case ModelFamily::Cox:
      return "cox";
  }
  return "?";
}

ModelFamily model_family_from_name(const std::string& s) {
  if (s == "linear" || s == "gaussian") return ModelFamily::Linear;
  if (s == "logistic") return ModelFamily::Logistic;
  if (s == "poisson") return ModelFamily::Poisson;
  if (s == "cox") return ModelFamily::Cox;
  throw_error(ErrorCode::ConfigError, "unknown family '" + s +
                                          "' (want linear|logistic|poisson|cox)");
}

std::size_t outcome_size(const Outcome& outcome) {
  return std::visit(
      [](const auto& o) -> std::size_t {
        using T = std::decay_t<decltype(o)>;
        if constexpr (std::is_same_v<T, SurvivalOutcome>)
          return o.time.size();
        else
          return o.y.size();
      },
      outcome);
}

ModelFamily outcome_family(const Outcome& outcome) {
  if (std::holds_alternative<ContinuousOutcome>(outcome)) return ModelFamily::Linear;
  if (std::holds_alternative<BinaryOutcome>(outcome)) return ModelFamily::Logistic;
  if (std::holds_alternative<CountOutcome>(outcome)) return ModelFamily::Poisson;
  return ModelFamily::Cox;
}

void check_outcome_family(const Outcome& outcome, ModelFamily family) {
  if (outcome_family(outcome) != family)
    throw_error(ErrorCode::InvalidResponse,
                std::string("outcome data does not match family '") +
                    model_family_name(family) + "'");
}

}  // namespace episcan
