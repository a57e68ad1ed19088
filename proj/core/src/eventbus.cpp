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

#include "topoclaw/eventbus.hpp"

#include <algorithm>

#include <openssl/crypto.h>
#include <openssl/evp.h>
#include <openssl/hmac.h>

#include "json_reader.hpp"
#include "topoclaw/base64.hpp"
#include "topoclaw/error.hpp"

namespace topoclaw {

using nlohmann::json;

std::string_view to_string(Role role) {
  switch (role) {
    case Role::owner: return "owner";
    case Role::delegate: return "delegate";
    case Role::observer: return "observer";
  }
  return "owner";
}

Role role_from_string(std::string_view text) {
  if (text == "owner") return Role::owner;
  if (text == "delegate") return Role::delegate;
  if (text == "observer") return Role::observer;
  throw Error(ErrorKind::bad_enum, "unknown role \"" + std::string(text) + "\"");
}

std::string system_channel(std::string_view node_id) {
  return std::string(kSystemChannel) + ":" + std::string(node_id);
}

bool is_system_channel(std::string_view channel_id) {
  return channel_id == kSystemChannel ||
         channel_id.starts_with(std::string(kSystemChannel) + ":");
}

void KeyStore::add_key(std::string key_ref, std::string secret) {
  secrets_[std::move(key_ref)] = std::move(secret);
}

void KeyStore::bind(const Identity& user) { user_keys_[user.user_id] = user.key_ref; }

const std::string* KeyStore::secret(std::string_view key_ref) const {
  auto it = secrets_.find(key_ref);
  return it == secrets_.end() ? nullptr : &it->second;
}

const std::string* KeyStore::secret_for_user(std::string_view user_id) const {
  auto it = user_keys_.find(user_id);
  return it == user_keys_.end() ? nullptr : secret(it->second);
}

namespace {

void put_u64(std::string& out, std::uint64_t v) {
  for (int shift = 56; shift >= 0; shift -= 8) {
    out += static_cast<char>((v >> shift) & 0xff);
  }
}

void put_field(std::string& out, std::string_view bytes) {
  put_u64(out, bytes.size());
  out.append(bytes);
}

}  // namespace

std::string canonical_bytes(const AttributedEvent& e) {
  std::string out;
  put_field(out, e.payload_m);
  put_field(out, e.human_id);
  put_field(out, e.twin_id);
  put_field(out, to_string(e.role_rho));
  put_u64(out, e.delegation_chain.size());
  for (const auto& twin : e.delegation_chain) put_field(out, twin);
  put_u64(out, 8);
  put_u64(out, e.seq);
  put_field(out, e.channel_id);
  return out;
}

std::string compute_auth_tag(const AttributedEvent& e, std::string_view key) {
  const std::string message = canonical_bytes(e);
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int length = 0;
  HMAC(EVP_sha256(), key.data(), static_cast<int>(key.size()),
       reinterpret_cast<const unsigned char*>(message.data()), message.size(), digest,
       &length);
  return std::string(reinterpret_cast<const char*>(digest), length);
}

std::string_view to_string(VerifyReason reason) {
  switch (reason) {
    case VerifyReason::ok: return "ok";
    case VerifyReason::unknown_user_key: return "unknown user key";
    case VerifyReason::empty_chain: return "empty delegation chain";
    case VerifyReason::chain_origin_mismatch: return "chain origin mismatch";
    case VerifyReason::tag_mismatch: return "tag mismatch";
  }
  return "unknown";
}

Verification verify_attribution(const AttributedEvent& e, const KeyStore& keys) {
  const auto* key = keys.secret_for_user(e.human_id);
  if (!key) return {VerifyReason::unknown_user_key};
  if (e.delegation_chain.empty()) return {VerifyReason::empty_chain};
  if (e.delegation_chain.front() != e.twin_id) return {VerifyReason::chain_origin_mismatch};
  const auto expected = compute_auth_tag(e, *key);
  if (expected.size() != e.auth_tag.size() ||
      CRYPTO_memcmp(expected.data(), e.auth_tag.data(), expected.size()) != 0) {
    return {VerifyReason::tag_mismatch};
  }
  return {};
}

std::uint64_t EventFactory::next_seq(const std::string& twin, const std::string& channel) {
  return ++seq_[{twin, channel}];
}

void EventFactory::sign(AttributedEvent& e, std::string_view key) const {
  e.auth_tag = compute_auth_tag(e, key);
}

AttributedEvent EventFactory::attribute(std::string payload_m, const Identity& human,
                                        std::string twin_id, Role rho,
                                        std::string channel_id) {
  const auto* key = keys_.secret(human.key_ref);
  if (!key) {
    throw Error(ErrorKind::unknown_key, "unknown key_ref \"" + human.key_ref + "\"");
  }
  AttributedEvent e;
  e.payload_m = std::move(payload_m);
  e.human_id = human.user_id;
  e.twin_id = std::move(twin_id);
  e.role_rho = rho;
  e.delegation_chain = {e.twin_id};
  e.channel_id = std::move(channel_id);
  e.seq = next_seq(e.twin_id, e.channel_id);
  sign(e, *key);
  return e;
}

AttributedEvent EventFactory::delegate(const AttributedEvent& parent,
                                       std::string sub_twin_id, std::string channel_id) {
  auto check = verify_attribution(parent, keys_);
  if (!check) {
    throw Error(ErrorKind::invalid_parent,
                "cannot delegate an event that fails verification (" +
                    std::string(to_string(check.reason)) + ")");
  }
  AttributedEvent child = parent;
  child.delegation_chain.push_back(std::move(sub_twin_id));
  child.role_rho = Role::delegate;
  if (!channel_id.empty()) child.channel_id = std::move(channel_id);
  child.seq = next_seq(child.acting_twin(), child.channel_id);
  sign(child, *keys_.secret_for_user(parent.human_id));
  return child;
}

std::string DeliveryIds::next() { return "d" + std::to_string(++counter_); }

std::vector<Envelope> broadcast(const SharedSpace& space, const AttributedEvent& e,
                                const SocialGraph& g_soc, const TwinDirectory& twins,
                                const KeyStore& keys, DeliveryIds& ids) {
  if (auto check = verify_attribution(e, keys); !check) {
    throw Error(ErrorKind::unverifiable, "broadcast of unverifiable event (" +
                                             std::string(to_string(check.reason)) + ")");
  }
  const auto& members = space.members;
  if (std::find(members.begin(), members.end(), e.human_id) == members.end()) {
    throw Error(ErrorKind::not_member,
                e.human_id + " is not a member of space " + space.space_id);
  }
  auto sender = twins.find(e.human_id);
  if (sender == twins.end()) {
    throw Error(ErrorKind::unknown_id, "no twin registered for " + e.human_id);
  }
  std::vector<std::string> recipients;
  for (const auto& m : members) {
    g_soc.user(m);
    if (m != e.human_id) recipients.push_back(m);
  }
  std::sort(recipients.begin(), recipients.end());
  recipients.erase(std::unique(recipients.begin(), recipients.end()), recipients.end());

  std::vector<Envelope> out;
  for (const auto& r : recipients) {
    auto addr = twins.find(r);
    if (addr == twins.end()) {
      throw Error(ErrorKind::unknown_id, "no twin registered for " + r);
    }
    out.push_back({e, sender->second.node_id, addr->second.node_id, space.space_id,
                   ids.next()});
  }
  return out;
}

json event_to_json(const AttributedEvent& e) {
  return {{"payload_m", base64_encode(e.payload_m)},
          {"human_id", e.human_id},
          {"twin_id", e.twin_id},
          {"role_rho", to_string(e.role_rho)},
          {"delegation_chain", e.delegation_chain},
          {"seq", e.seq},
          {"channel_id", e.channel_id},
          {"auth_tag", base64_encode(e.auth_tag)}};
}

namespace {

std::string decode_field(detail::ObjectReader& r, const std::string& key) {
  auto decoded = base64_decode(r.string(key));
  if (!decoded) throw Error(ErrorKind::parse, "field \"" + key + "\" is not canonical base64");
  return *decoded;
}

}  // namespace

AttributedEvent event_from_json(const json& j) {
  detail::ObjectReader r(j, "event");
  AttributedEvent e;
  e.payload_m = decode_field(r, "payload_m");
  e.human_id = r.string("human_id");
  e.twin_id = r.string("twin_id");
  e.role_rho = role_from_string(r.string("role_rho"));
  e.delegation_chain = r.string_list("delegation_chain");
  const auto& seq = r.required("seq");
  if (!seq.is_number_unsigned()) throw Error(ErrorKind::schema, "\"seq\" must be unsigned");
  e.seq = seq.get<std::uint64_t>();
  e.channel_id = r.string("channel_id");
  e.auth_tag = decode_field(r, "auth_tag");
  r.finish();
  return e;
}

json envelope_to_json(const Envelope& e) {
  return {{"event", event_to_json(e.event)},
          {"src_node", e.src_node},
          {"dst_node", e.dst_node},
          {"channel_id", e.channel_id},
          {"delivery_id", e.delivery_id}};
}

Envelope envelope_from_json(const json& j) {
  detail::ObjectReader r(j, "envelope");
  Envelope e;
  e.event = event_from_json(r.required("event"));
  e.src_node = r.string("src_node");
  e.dst_node = r.string("dst_node");
  e.channel_id = r.string("channel_id");
  e.delivery_id = r.string("delivery_id");
  r.finish();
  return e;
}

}  // namespace topoclaw
