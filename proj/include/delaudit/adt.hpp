#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "delaudit/bytes.hpp"

namespace delaudit {

// One data-structure operation, tagged by the id of the party issuing it.
struct Op {
  std::string kind;
  Bytes id;
  Bytes value;

  Bytes encode() const;
  bool operator==(const Op& o) const {
    return kind == o.kind && id == o.id && value == o.value;
  }
};

using OpSeq = std::vector<Op>;

std::string opseq_to_json(const OpSeq& seq);
OpSeq opseq_from_json(const std::string& text);

// Kinds understood by the dictionary family.
inline constexpr const char* kOpInsert = "ins";
inline constexpr const char* kOpDelete = "del";
inline constexpr const char* kOpSet = "set";
inline constexpr const char* kOpGet = "get";
inline constexpr const char* kOpTick = "tick";

// The default value insert(id) binds, making ins(id) == set(id, top).
Bytes top_value();
// Logical output marking "no value".
Bytes bot_output();

// An abstract data type: a deterministic transition on logical states.
// Logical states are canonical byte encodings, so logical equivalence is
// byte equality of final states.
class AdtSpec {
 public:
  virtual ~AdtSpec() = default;
  virtual std::string name() const = 0;
  virtual Bytes initial_state() const = 0;
  // (new logical state, logical output).
  virtual std::pair<Bytes, Bytes> transition(const Op& op, const Bytes& state) const = 0;
  // Map view of the logical state if the ADT is dictionary-shaped.
  virtual std::optional<std::map<Bytes, Bytes>> logical_map(const Bytes&) const {
    return std::nullopt;
  }
  // Finite op universe over the given id/value pools, for reachability
  // analyses.
  virtual std::vector<Op> op_universe(const std::vector<Bytes>& ids,
                                      const std::vector<Bytes>& values) const = 0;
};

Bytes final_logical_state(const AdtSpec& adt, const OpSeq& seq);
bool logically_equivalent(const AdtSpec& adt, const OpSeq& a, const OpSeq& b);

// Canonical representative of the equivalence class: one set(id, value) per
// surviving key, in byte order of id. Requires a map-shaped logical state.
OpSeq canonicalize(const AdtSpec& adt, const OpSeq& seq);

// Does appending delete(id*) match erasing all id*-tagged operations?
bool check_logical_deletion(const AdtSpec& adt, const OpSeq& seq, const Bytes& id_star);

// BFS over reachable logical states: true iff they are mutually reachable.
// Throws EnumerationCapError when more than state_bound states are reachable.
bool check_reversibility(const AdtSpec& adt, const std::vector<Bytes>& ids,
                         const std::vector<Bytes>& values, size_t state_bound);

// Key-value dictionary: ins/del/set/get plus an inert tick.
class DictionaryAdt : public AdtSpec {
 public:
  std::string name() const override { return "dictionary"; }
  Bytes initial_state() const override;
  std::pair<Bytes, Bytes> transition(const Op& op, const Bytes& state) const override;
  std::optional<std::map<Bytes, Bytes>> logical_map(const Bytes& state) const override;
  std::vector<Op> op_universe(const std::vector<Bytes>& ids,
                              const std::vector<Bytes>& values) const override;
};

// Remembers only the most recent id; reversible but without logical deletion.
class LastIdAdt : public AdtSpec {
 public:
  std::string name() const override { return "last-id"; }
  Bytes initial_state() const override;
  std::pair<Bytes, Bytes> transition(const Op& op, const Bytes& state) const override;
  std::vector<Op> op_universe(const std::vector<Bytes>& ids,
                              const std::vector<Bytes>& values) const override;
};

// Ordered list of (id, post) pairs; delete(id) removes all of id's posts
// preserving the order of the rest.
class BulletinAdt : public AdtSpec {
 public:
  std::string name() const override { return "bulletin"; }
  Bytes initial_state() const override;
  std::pair<Bytes, Bytes> transition(const Op& op, const Bytes& state) const override;
  std::vector<Op> op_universe(const std::vector<Bytes>& ids,
                              const std::vector<Bytes>& values) const override;
};

// Append-only log; states grow monotonically, so it is not reversible.
class AppendLogAdt : public AdtSpec {
 public:
  std::string name() const override { return "append-log"; }
  Bytes initial_state() const override;
  std::pair<Bytes, Bytes> transition(const Op& op, const Bytes& state) const override;
  std::vector<Op> op_universe(const std::vector<Bytes>& ids,
                              const std::vector<Bytes>& values) const override;
};

}  // namespace delaudit
