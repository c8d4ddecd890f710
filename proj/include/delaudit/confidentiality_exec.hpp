#pragma once

#include <optional>

#include "delaudit/execution.hpp"

namespace delaudit {

// One run of the GGV-style execution: terminates on the environment's Finish
// message with the subject's delete forced if still outstanding. The ideal
// variant drops all subject<->controller traffic.
struct GgvOutcome {
  Bytes env_view;  // environment randomness + its controller-facing transcript
  std::optional<Bytes> controller_state;
  uint64_t tape_bits_consumed = 0;
};

GgvOutcome run_ggv(const RealParties& parties, const RealTapes& tapes, uint64_t max_steps,
                   bool drop_subject_traffic, bool enforce_silent_subject);

}  // namespace delaudit
