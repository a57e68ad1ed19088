// Copyright 2026 The TopoClaw Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "topoclaw/topology.hpp"

namespace topoclaw {

enum class Role { owner, delegate, observer };

std::string_view to_string(Role role);
Role role_from_string(std::string_view text);

// Channels reserved for hub-to-node traffic are named "system" or
// "system:<node_id>".
inline constexpr std::string_view kSystemChannel = "system";
std::string system_channel(std::string_view node_id);
bool is_system_channel(std::string_view channel_id);

// The unit of all cross-boundary traffic: payload m, accountable human,
// originating twin, role, plus the provenance chain and an authentication
// tag over the canonical serialization of everything else.
struct AttributedEvent {
  std::string payload_m;
  std::string human_id;
  std::string twin_id;
  Role role_rho = Role::owner;
  std::vector<std::string> delegation_chain;
  std::uint64_t seq = 0;
  std::string channel_id{kSystemChannel};
  std::string auth_tag;

  // The twin that issued this particular event (last chain entry).
  const std::string& acting_twin() const { return delegation_chain.back(); }

  bool operator==(const AttributedEvent&) const = default;
};

struct Envelope {
  AttributedEvent event;
  std::string src_node;
  std::string dst_node;
  std::string channel_id;
  std::string delivery_id;

  bool operator==(const Envelope&) const = default;
};

// Pre-shared per-user secrets. Read-only once a run starts.
class KeyStore {
 public:
  void add_key(std::string key_ref, std::string secret);
  // Declares which key authenticates events attributed to `user`.
  void bind(const Identity& user);

  const std::string* secret(std::string_view key_ref) const;
  const std::string* secret_for_user(std::string_view user_id) const;

 private:
  std::map<std::string, std::string, std::less<>> secrets_;
  std::map<std::string, std::string, std::less<>> user_keys_;
};

// Fields in fixed order (payload_m, human_id, twin_id, role_rho,
// delegation_chain, seq, channel_id), each preceded by an 8-byte
// big-endian length. The chain is encoded as an 8-byte element count
// followed by each length-prefixed entry; seq is its 8-byte big-endian
// value.
std::string canonical_bytes(const AttributedEvent& e);

// HMAC-SHA256 of canonical_bytes(e) under `key`.
std::string compute_auth_tag(const AttributedEvent& e, std::string_view key);

enum class VerifyReason {
  ok,
  unknown_user_key,
  empty_chain,
  chain_origin_mismatch,
  tag_mismatch,
};

std::string_view to_string(VerifyReason reason);

struct Verification {
  VerifyReason reason = VerifyReason::ok;

  bool ok() const { return reason == VerifyReason::ok; }
  explicit operator bool() const { return ok(); }
};

Verification verify_attribution(const AttributedEvent& e, const KeyStore& keys);

// Issues events with per-(acting twin, channel) sequence numbers starting
// at 1. One factory per simulated run.
class EventFactory {
 public:
  explicit EventFactory(const KeyStore& keys) : keys_(keys) {}

  // Throws Error(unknown_key) when human.key_ref does not resolve.
  AttributedEvent attribute(std::string payload_m, const Identity& human,
                            std::string twin_id, Role rho,
                            std::string channel_id = std::string(kSystemChannel));

  // Appends `sub_twin_id` to the chain, keeps payload and human, role
  // becomes delegate. An empty `channel_id` keeps the parent's channel.
  // Throws Error(invalid_parent) when the parent does not verify.
  AttributedEvent delegate(const AttributedEvent& parent, std::string sub_twin_id,
                           std::string channel_id = {});

 private:
  std::uint64_t next_seq(const std::string& twin, const std::string& channel);
  void sign(AttributedEvent& e, std::string_view key) const;

  const KeyStore& keys_;
  std::map<std::pair<std::string, std::string>, std::uint64_t> seq_;
};

// Where each user's twin lives.
struct TwinAddress {
  std::string twin_id;
  std::string node_id;
};
using TwinDirectory = std::map<std::string, TwinAddress, std::less<>>;

// Unique delivery ids for one run.
class DeliveryIds {
 public:
  std::string next();

 private:
  std::uint64_t counter_ = 0;
};

// One envelope per member other than the sender, ascending user_id, each
// carrying the unmodified event on channel space.space_id.
// Errors: unverifiable (event fails verification), not_member (sender's
// human is not in the space), unknown_id (member missing from directory).
std::vector<Envelope> broadcast(const SharedSpace& space, const AttributedEvent& e,
                                const SocialGraph& g_soc, const TwinDirectory& twins,
                                const KeyStore& keys, DeliveryIds& ids);

nlohmann::json event_to_json(const AttributedEvent& e);
// Strict: unknown or missing keys, bad enums and non-canonical base64 are
// rejected with Error(schema/parse/bad_enum).
AttributedEvent event_from_json(const nlohmann::json& j);
nlohmann::json envelope_to_json(const Envelope& e);
Envelope envelope_from_json(const nlohmann::json& j);

}  // namespace topoclaw
