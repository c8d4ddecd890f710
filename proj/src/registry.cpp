#include "delaudit/registry.hpp"

#include "delaudit/errors.hpp"
#include "delaudit/tree_counter.hpp"

namespace delaudit {

ControllerSpec make_controller(const Params& p) {
  if (p.name == "xor") return xor_controller_spec(p.k);
  if (p.name == "sorted_dict") return sorted_dict_controller_spec();
  if (p.name == "cloud_storage") return cloud_storage_controller_spec();
  if (p.name == "bulletin_board") return bulletin_board_controller_spec();
  if (p.name == "counterexample_ignore_delete") return ignore_delete_controller_spec();
  if (p.name == "counterexample_timing") return timing_controller_spec(p.horizon, p.contacts);
  if (p.name == "batch_noisy_count") {
    return batch_controller_spec(noisy_count_mechanism(p.eps, p.bound, p.draw_width));
  }
  if (p.name == "batch_noisy_sum") {
    return batch_controller_spec(noisy_sum_mechanism(p.eps, p.bound, p.draw_width));
  }
  if (p.name == "pp_tree_counter") {
    return pp_controller_spec(
        TreeCounterMechanism::spec(p.horizon, p.eps, p.bound, p.draw_width));
  }
  if (p.name == "directory_stats") {
    return directory_stats_composed_spec(p.horizon, p.eps, p.bound, p.draw_width);
  }
  if (p.name == "directory_stats_monolithic") {
    return directory_stats_monolithic_spec(p.horizon, p.eps, p.bound, p.draw_width);
  }
  throw ConfigError("unknown controller: " + p.name);
}

std::vector<std::string> controller_names() {
  return {"xor",
          "sorted_dict",
          "cloud_storage",
          "bulletin_board",
          "counterexample_ignore_delete",
          "counterexample_timing",
          "batch_noisy_count",
          "batch_noisy_sum",
          "pp_tree_counter",
          "directory_stats",
          "directory_stats_monolithic"};
}

ImplSpec make_impl(const Params& p) {
  if (p.name == "sorted_list_dict") return sorted_list_dict_spec();
  if (p.name == "bulletin_list") return bulletin_list_spec();
  if (p.name == "leaky_dict") return leaky_dict_spec(p.leak_bits);
  if (p.name == "batch_count") {
    return batch_count_spec(
        std::make_shared<TruncatedGeometricNoise>(p.eps, p.bound, p.draw_width));
  }
  if (p.name == "directory_counter") {
    return directory_counter_spec(p.horizon, p.eps, p.bound, p.draw_width);
  }
  throw ConfigError("unknown implementation: " + p.name);
}

MechanismSpec make_mechanism(const Params& p) {
  if (p.name == "tree_counter") {
    return TreeCounterMechanism::spec(p.horizon, p.eps, p.bound, p.draw_width);
  }
  throw ConfigError("unknown mechanism: " + p.name);
}

AhiAdversaryFactory make_ahi_adversary(const Params& p, const AdtSpec* adt) {
  if (p.name == "echo") return echo_adversary();
  if (p.name == "random_dict") return random_dict_adversary(adt, p.seed, p.ops);
  if (p.name == "shuffler") {
    OpSeq script;
    for (int i = 0; i < p.ops; ++i) {
      script.push_back(Op{i % 3 == 2 ? kOpDelete : kOpInsert,
                          Bytes(1, static_cast<char>('a' + i % 4)), {}});
    }
    return shuffling_adversary(adt, std::move(script), p.seed);
  }
  if (p.name == "batch_separation") {
    // n inserts, a tick, then the matching deletes; the canonical equivalent
    // sequence is the bare tick.
    OpSeq script;
    for (int i = 0; i < p.ops; ++i) {
      script.push_back(Op{kOpInsert, enc::u64(i), {}});
    }
    script.push_back(Op{kOpTick, {}, {}});
    for (int i = 0; i < p.ops; ++i) {
      script.push_back(Op{kOpDelete, enc::u64(i), {}});
    }
    return scripted_adversary(std::move(script), {Op{kOpTick, {}, {}}});
  }
  if (p.name == "directory_separation") {
    // Feed the counter through lookups, then delete every user: the counter
    // keeps their influence while the equivalent replay never saw them.
    OpSeq script;
    for (int i = 0; i < p.ops; ++i) script.push_back(Op{kOpGet, enc::u64(i), {}});
    for (int i = 0; i < p.ops; ++i) script.push_back(Op{kOpDelete, enc::u64(i), {}});
    return scripted_adversary(std::move(script), {});
  }
  throw ConfigError("unknown AHI adversary: " + p.name);
}

PpAdversaryFactory make_pp_adversary(const Params& p) {
  if (p.name == "tracing") return tracing_pp_adversary(p.ticks);
  if (p.name == "double_intrusion") return double_intrusion_adversary();
  throw ConfigError("unknown pan-privacy adversary: " + p.name);
}

}  // namespace delaudit
