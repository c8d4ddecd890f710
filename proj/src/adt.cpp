#include "delaudit/adt.hpp"

#include <deque>
#include <set>

#include <json.hpp>

#include "delaudit/errors.hpp"

namespace delaudit {

Bytes Op::encode() const {
  Bytes out;
  enc::put_bytes(out, kind);
  enc::put_bytes(out, id);
  enc::put_bytes(out, value);
  return out;
}

std::string opseq_to_json(const OpSeq& seq) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& op : seq) {
    nlohmann::json j;
    j["op"] = op.kind;
    j["id"] = to_hex(op.id);
    j["value_hex"] = to_hex(op.value);
    arr.push_back(j);
  }
  return arr.dump();
}

OpSeq opseq_from_json(const std::string& text) {
  OpSeq seq;
  for (const auto& j : nlohmann::json::parse(text)) {
    Op op;
    op.kind = j.at("op").get<std::string>();
    op.id = from_hex(j.at("id").get<std::string>());
    op.value = from_hex(j.at("value_hex").get<std::string>());
    seq.push_back(std::move(op));
  }
  return seq;
}

Bytes top_value() { return Bytes("\x01\x54", 2); }
Bytes bot_output() { return Bytes("\x00", 1); }

Bytes final_logical_state(const AdtSpec& adt, const OpSeq& seq) {
  Bytes s = adt.initial_state();
  for (const auto& op : seq) s = adt.transition(op, s).first;
  return s;
}

bool logically_equivalent(const AdtSpec& adt, const OpSeq& a, const OpSeq& b) {
  return final_logical_state(adt, a) == final_logical_state(adt, b);
}

OpSeq canonicalize(const AdtSpec& adt, const OpSeq& seq) {
  auto m = adt.logical_map(final_logical_state(adt, seq));
  if (!m) throw UnsupportedCanonicalizationError("ADT logical state is not map-shaped");
  OpSeq out;
  for (const auto& [id, value] : *m) out.push_back(Op{kOpSet, id, value});
  return out;
}

bool check_logical_deletion(const AdtSpec& adt, const OpSeq& seq, const Bytes& id_star) {
  OpSeq with_delete = seq;
  with_delete.push_back(Op{kOpDelete, id_star, {}});
  OpSeq removed;
  for (const auto& op : seq) {
    if (op.id != id_star) removed.push_back(op);
  }
  return logically_equivalent(adt, with_delete, removed);
}

bool check_reversibility(const AdtSpec& adt, const std::vector<Bytes>& ids,
                         const std::vector<Bytes>& values, size_t state_bound) {
  const std::vector<Op> ops = adt.op_universe(ids, values);
  auto expand = [&](const Bytes& from, std::set<Bytes>* seen, std::deque<Bytes>* frontier) {
    for (const auto& op : ops) {
      Bytes next = adt.transition(op, from).first;
      if (seen->insert(next).second) frontier->push_back(next);
    }
  };

  std::set<Bytes> reachable{adt.initial_state()};
  std::deque<Bytes> frontier{adt.initial_state()};
  while (!frontier.empty()) {
    Bytes s = frontier.front();
    frontier.pop_front();
    expand(s, &reachable, &frontier);
    if (reachable.size() > state_bound) {
      throw EnumerationCapError("reachable state space exceeds bound");
    }
  }

  for (const auto& start : reachable) {
    std::set<Bytes> seen{start};
    std::deque<Bytes> q{start};
    while (!q.empty() && seen.size() < reachable.size() + 8) {
      Bytes s = q.front();
      q.pop_front();
      expand(s, &seen, &q);
    }
    for (const auto& target : reachable) {
      if (!seen.count(target)) return false;
    }
  }
  return true;
}

// ---- DictionaryAdt ----

static std::map<Bytes, Bytes> decode_map(const Bytes& state) {
  std::map<Bytes, Bytes> m;
  size_t pos = 0;
  auto read_u64 = [&]() {
    uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v = (v << 8) | static_cast<unsigned char>(state[pos++]);
    return v;
  };
  auto read_bytes = [&]() {
    uint64_t len = read_u64();
    Bytes b = state.substr(pos, len);
    pos += len;
    return b;
  };
  uint64_t n = read_u64();
  for (uint64_t i = 0; i < n; ++i) {
    Bytes k = read_bytes();
    Bytes v = read_bytes();
    m.emplace(std::move(k), std::move(v));
  }
  return m;
}

Bytes DictionaryAdt::initial_state() const { return enc::sorted_map({}); }

std::pair<Bytes, Bytes> DictionaryAdt::transition(const Op& op, const Bytes& state) const {
  std::map<Bytes, Bytes> m = decode_map(state);
  Bytes out = bot_output();
  if (op.kind == kOpInsert) {
    m[op.id] = top_value();
  } else if (op.kind == kOpSet) {
    m[op.id] = op.value;
  } else if (op.kind == kOpDelete) {
    m.erase(op.id);
  } else if (op.kind == kOpGet) {
    auto it = m.find(op.id);
    if (it != m.end()) out = enc::pair("v", it->second);
  }
  // Unknown kinds (tick among them) leave the logical state unchanged.
  return {enc::sorted_map(m), out};
}

std::optional<std::map<Bytes, Bytes>> DictionaryAdt::logical_map(const Bytes& state) const {
  return decode_map(state);
}

std::vector<Op> DictionaryAdt::op_universe(const std::vector<Bytes>& ids,
                                           const std::vector<Bytes>& values) const {
  std::vector<Op> ops;
  for (const auto& id : ids) {
    ops.push_back(Op{kOpInsert, id, {}});
    ops.push_back(Op{kOpDelete, id, {}});
    for (const auto& v : values) ops.push_back(Op{kOpSet, id, v});
  }
  return ops;
}

// ---- LastIdAdt ----

Bytes LastIdAdt::initial_state() const { return enc::bytes({}); }

std::pair<Bytes, Bytes> LastIdAdt::transition(const Op& op, const Bytes& state) const {
  if (op.kind == kOpDelete) {
    // The only candidate delete rule: forget the id if it is the current one.
    if (state == enc::bytes(op.id)) return {enc::bytes({}), bot_output()};
    return {state, bot_output()};
  }
  return {enc::bytes(op.id), bot_output()};
}

std::vector<Op> LastIdAdt::op_universe(const std::vector<Bytes>& ids,
                                       const std::vector<Bytes>& values) const {
  (void)values;
  std::vector<Op> ops;
  for (const auto& id : ids) {
    ops.push_back(Op{kOpInsert, id, {}});
    ops.push_back(Op{kOpDelete, id, {}});
  }
  return ops;
}

// ---- BulletinAdt ----

namespace {

std::vector<std::pair<Bytes, Bytes>> decode_posts(const Bytes& state) {
  std::vector<std::pair<Bytes, Bytes>> posts;
  size_t pos = 0;
  auto read_u64 = [&]() {
    uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v = (v << 8) | static_cast<unsigned char>(state[pos++]);
    return v;
  };
  auto read_bytes = [&]() {
    uint64_t len = read_u64();
    Bytes b = state.substr(pos, len);
    pos += len;
    return b;
  };
  uint64_t n = read_u64();
  for (uint64_t i = 0; i < n; ++i) {
    read_u64();  // skip the item's outer length prefix
    Bytes id = read_bytes();
    Bytes msg = read_bytes();
    posts.emplace_back(std::move(id), std::move(msg));
  }
  return posts;
}

Bytes encode_posts(const std::vector<std::pair<Bytes, Bytes>>& posts) {
  std::vector<Bytes> items;
  items.reserve(posts.size());
  for (const auto& [id, msg] : posts) items.push_back(enc::pair(id, msg));
  return enc::list(items);
}

}  // namespace

Bytes BulletinAdt::initial_state() const { return enc::list({}); }

std::pair<Bytes, Bytes> BulletinAdt::transition(const Op& op, const Bytes& state) const {
  auto posts = decode_posts(state);
  Bytes out = bot_output();
  if (op.kind == "post") {
    posts.emplace_back(op.id, op.value);
  } else if (op.kind == kOpDelete) {
    std::vector<std::pair<Bytes, Bytes>> kept;
    for (auto& p : posts) {
      if (p.first != op.id) kept.push_back(std::move(p));
    }
    posts = std::move(kept);
  } else if (op.kind == "read") {
    out = encode_posts(posts);
  }
  return {encode_posts(posts), out};
}

std::vector<Op> BulletinAdt::op_universe(const std::vector<Bytes>& ids,
                                         const std::vector<Bytes>& values) const {
  std::vector<Op> ops;
  for (const auto& id : ids) {
    ops.push_back(Op{kOpDelete, id, {}});
    for (const auto& v : values) ops.push_back(Op{"post", id, v});
  }
  return ops;
}

// ---- AppendLogAdt ----

Bytes AppendLogAdt::initial_state() const { return enc::list({}); }

std::pair<Bytes, Bytes> AppendLogAdt::transition(const Op& op, const Bytes& state) const {
  if (op.kind == kOpDelete) return {state, bot_output()};  // deletes are inert
  Bytes out = state;
  // Append without re-decoding: bump the count and push the entry.
  uint64_t n = 0;
  for (int i = 0; i < 8; ++i) n = (n << 8) | static_cast<unsigned char>(out[i]);
  ++n;
  for (int i = 0; i < 8; ++i) out[i] = static_cast<char>((n >> (8 * (7 - i))) & 0xff);
  enc::put_bytes(out, op.encode());
  return {out, bot_output()};
}

std::vector<Op> AppendLogAdt::op_universe(const std::vector<Bytes>& ids,
                                          const std::vector<Bytes>& values) const {
  (void)values;
  std::vector<Op> ops;
  for (const auto& id : ids) {
    ops.push_back(Op{kOpInsert, id, {}});
    ops.push_back(Op{kOpDelete, id, {}});
  }
  return ops;
}

}  // namespace delaudit
