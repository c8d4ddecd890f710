#pragma once

#include <string>

#include "delaudit/ahi.hpp"
#include "delaudit/controllers.hpp"
#include "delaudit/fixtures.hpp"
#include "delaudit/pan_privacy.hpp"

namespace delaudit {

// Json-ish parameter bag the CLI config carries per component.
struct Params {
  std::string name;
  double eps = 1.0;
  double delta = 0.0;
  int k = 8;
  int horizon = 2;       // T
  int bound = 16;        // B
  int draw_width = 10;   // w
  int contacts = 2;
  int leak_bits = 16;
  int ops = 8;
  uint64_t seed = 1;
  int ticks = 1;
};

ControllerSpec make_controller(const Params& p);
ImplSpec make_impl(const Params& p);
MechanismSpec make_mechanism(const Params& p);
AhiAdversaryFactory make_ahi_adversary(const Params& p, const AdtSpec* adt);
PpAdversaryFactory make_pp_adversary(const Params& p);

// All controller names the registry resolves, for diagnostics.
std::vector<std::string> controller_names();

}  // namespace delaudit
