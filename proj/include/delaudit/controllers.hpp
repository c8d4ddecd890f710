#pragma once

#include <memory>
#include <optional>

#include "delaudit/batch.hpp"
#include "delaudit/execution.hpp"
#include "delaudit/layout.hpp"
#include "delaudit/pan_privacy.hpp"
#include "delaudit/pp_controller.hpp"

namespace delaudit {

// A controller packaged with everything audits need: the factory, the
// declared tape layout, and the delta surcharge its discrete noise carries.
struct ControllerSpec {
  std::string name;
  ControllerFactory make;
  TapeLayout layout;
  double tail_deficit = 0;

  // Set for batch controllers: the mechanism behind the tick.
  std::shared_ptr<const BatchMechanism> batch_mech;
  // Set for parallel compositions: index of the first segment belonging to
  // the second half, plus the halves themselves.
  std::optional<size_t> split_segment;
  std::shared_ptr<const ControllerSpec> half0, half1;
};

// k-bit state initialized from the tape; every well-formed k-bit Data
// payload is XORed in; nothing is ever sent.
ControllerSpec xor_controller_spec(int k_bits);

// Def-style controller relative to the sorted-list dictionary: operations
// are tagged with the incoming channel and answered on it.
ControllerSpec sorted_dict_controller_spec();

// Per-user dictionaries; only the originating channel can download its
// files; Delete removes the user's dictionary entirely.
ControllerSpec cloud_storage_controller_spec();

// Ordered list of (id, msg) posts readable by anyone; Delete removes all of
// the sender's posts preserving the order of the rest.
ControllerSpec bulletin_board_controller_spec();

// Write-only dictionary that lets a third channel blacklist another
// channel's future deletes.
ControllerSpec ignore_delete_controller_spec();

// Write-only dictionary that samples a trap time t in [1, horizon] per
// channel and defers a deletion arriving when |D| == t to the next
// activation. horizon must be a power of two; max_contacts bounds how many
// distinct channels the audits may touch.
ControllerSpec timing_controller_spec(int horizon, int max_contacts);

ControllerSpec batch_controller_spec(BatchMechanism mech);

// Event-to-user wrapper over an online mechanism (ticks pass through).
ControllerSpec pp_controller_spec(MechanismSpec mech);

// Runs both controllers on every query over disjoint tape regions and pairs
// their outputs and states.
ControllerSpec parallel_compose_spec(ControllerSpec c0, ControllerSpec c1);

// Public directory with DP usage statistics: both the direct build and the
// parallel-composition build (they are transcript-identical).
ControllerSpec directory_stats_monolithic_spec(int horizon, double eps, int bound,
                                               int draw_width);
ControllerSpec directory_stats_composed_spec(int horizon, double eps, int bound,
                                             int draw_width);

// Replays traces directly against the controller: true iff every reply goes
// out on the channel that delivered the query.
bool check_query_response(const ControllerSpec& spec, const std::vector<QuerySeq>& traces);

// Runs each trace under several tape seeds: true iff the reply transcripts
// are byte-identical across seeds.
bool check_deterministic_functionality(const ControllerSpec& spec,
                                       const std::vector<QuerySeq>& traces,
                                       const std::vector<uint64_t>& seeds);

// Wire vocabulary shared by fixtures and controllers.
Bytes wire_ins();
Bytes wire_set(const Bytes& value);
Bytes wire_get();
Bytes wire_block(const Bytes& token);
Bytes wire_post(const Bytes& msg);
Bytes wire_read();
Bytes wire_upload(const Bytes& name, const Bytes& file);
Bytes wire_download(const Bytes& name);
Bytes wire_dir_set(const Bytes& listing);
Bytes wire_dir_get(const Bytes& key);
Bytes wire_get_count();

}  // namespace delaudit
