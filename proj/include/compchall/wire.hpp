#pragma once

/// Text wire format: one CRLF-terminated ASCII line per message, binary
/// fields as lowercase hex, fields separated by single spaces. User ids
/// are percent-encoded so they can carry spaces and arbitrary bytes.
///
/// Grammar:
///   LOGIN <user>
///   CHALLENGE <puzzle_hex> <salt_hex> <mac_hex> <k>
///   RESPOND <user> base|offline <h_rp_hex> <mac_hex>
///   RESPOND <user> lamport <r_decimal> <prev_chain_hex> <mac_hex>
///   RESULT OK|FAIL
///   ERR <code>

#include <string>
#include <string_view>
#include <variant>

#include "compchall/protocol.hpp"

namespace compchall::wire {

/// Lines longer than this (excluding the terminator) are a protocol error.
inline constexpr std::size_t kMaxLineLen = 8192;

struct Login {
    std::string user_id;
};

struct ChallengeMsg {
    Challenge challenge;
};

struct Respond {
    ResponsePayload payload;
};

struct Result {
    bool success = false;
};

struct Err {
    std::string code;
};

using Message = std::variant<Login, ChallengeMsg, Respond, Result, Err>;

/// Renders a message as a single line WITHOUT the CRLF terminator.
std::string encode_message(const Message& msg);

/// Parses one line (terminator already stripped). Throws ProtocolError on
/// anything that does not match the grammar; never crashes on arbitrary
/// bytes.
Message decode_message(std::string_view line);

std::string percent_encode(std::string_view raw);
std::string percent_decode(std::string_view encoded);  // throws ProtocolError

}  // namespace compchall::wire
