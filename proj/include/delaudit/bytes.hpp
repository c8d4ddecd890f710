#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace delaudit {

// Byte strings are the lingua franca: payloads, canonical states, pmf atoms.
using Bytes = std::string;

std::string to_hex(const Bytes& b);
Bytes from_hex(const std::string& hex);

// Deterministic, injective encoders used to build canonical state encodings.
// Every composite value is length-prefixed so concatenations never collide.
namespace enc {

void put_u64(Bytes& out, uint64_t v);
void put_i64(Bytes& out, int64_t v);
void put_bytes(Bytes& out, const Bytes& b);

Bytes u64(uint64_t v);
Bytes i64(int64_t v);
Bytes bytes(const Bytes& b);
Bytes pair(const Bytes& a, const Bytes& b);
Bytes list(const std::vector<Bytes>& items);
// Map entries emitted in key byte order; equal maps encode to equal bytes.
Bytes sorted_map(const std::map<Bytes, Bytes>& m);

}  // namespace enc

}  // namespace delaudit
