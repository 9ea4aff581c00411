#include "compchall/wire.hpp"

#include <charconv>
#include <vector>

#include "compchall/errors.hpp"

namespace compchall::wire {

namespace {

[[noreturn]] void bad(const std::string& what) {
    throw ProtocolError("malformed", what);
}

bool needs_escape(unsigned char c) {
    return c <= 0x20 || c >= 0x7f || c == '%';
}

std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (start <= line.size()) {
        const std::size_t sp = line.find(' ', start);
        if (sp == std::string_view::npos) {
            out.push_back(line.substr(start));
            break;
        }
        out.push_back(line.substr(start, sp - start));
        start = sp + 1;
    }
    for (std::string_view f : out) {
        if (f.empty()) {
            bad("empty field (leading, trailing or doubled space)");
        }
    }
    return out;
}

Bytes parse_hex_field(std::string_view tok, const char* what) {
    if (tok.empty()) {
        bad(std::string(what) + ": empty");
    }
    for (char c : tok) {
        if (!((c >= '0' && c <= '9') || (c >= 'a' && c <= 'f'))) {
            bad(std::string(what) + ": not lowercase hex");
        }
    }
    if (tok.size() % 2 != 0) {
        bad(std::string(what) + ": odd hex length");
    }
    return from_hex(tok);
}

std::uint64_t parse_decimal(std::string_view tok, std::uint64_t max, const char* what) {
    std::uint64_t value = 0;
    const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
    if (ec != std::errc{} || ptr != tok.data() + tok.size() || value > max) {
        bad(std::string(what) + ": bad decimal value");
    }
    return value;
}

}  // namespace

std::string percent_encode(std::string_view raw) {
    static constexpr char kDigits[] = "0123456789abcdef";
    std::string out;
    out.reserve(raw.size());
    for (unsigned char c : raw) {
        if (needs_escape(c)) {
            out.push_back('%');
            out.push_back(kDigits[c >> 4]);
            out.push_back(kDigits[c & 0x0f]);
        } else {
            out.push_back(static_cast<char>(c));
        }
    }
    return out;
}

std::string percent_decode(std::string_view encoded) {
    std::string out;
    out.reserve(encoded.size());
    for (std::size_t i = 0; i < encoded.size(); ++i) {
        const char c = encoded[i];
        if (c != '%') {
            out.push_back(c);
            continue;
        }
        if (i + 2 >= encoded.size()) {
            bad("truncated percent escape in user id");
        }
        auto nibble = [](char ch) -> int {
            if (ch >= '0' && ch <= '9') return ch - '0';
            if (ch >= 'a' && ch <= 'f') return ch - 'a' + 10;
            return -1;
        };
        const int hi = nibble(encoded[i + 1]);
        const int lo = nibble(encoded[i + 2]);
        if (hi < 0 || lo < 0) {
            bad("bad percent escape in user id");
        }
        out.push_back(static_cast<char>((hi << 4) | lo));
        i += 2;
    }
    return out;
}

std::string encode_message(const Message& msg) {
    struct Encoder {
        std::string operator()(const Login& m) const {
            return "LOGIN " + percent_encode(m.user_id);
        }
        std::string operator()(const ChallengeMsg& m) const {
            const Challenge& c = m.challenge;
            return "CHALLENGE " + c.puzzle_digest.hex() + " " + to_hex(c.salt) + " " +
                   c.mac.hex() + " " + std::to_string(c.k_bits);
        }
        std::string operator()(const Respond& m) const {
            const ResponsePayload& p = m.payload;
            std::string line = "RESPOND " + percent_encode(p.user_id) + " " +
                               std::string(variant_name(p.variant)) + " ";
            if (const auto* lamport = std::get_if<LamportProof>(&p.proof)) {
                line += std::to_string(lamport->r) + " " + to_hex(lamport->prev_chain);
            } else {
                line += std::get<Digest>(p.proof).hex();
            }
            line += " " + p.mac.hex();
            return line;
        }
        std::string operator()(const Result& m) const {
            return m.success ? "RESULT OK" : "RESULT FAIL";
        }
        std::string operator()(const Err& m) const { return "ERR " + m.code; }
    };
    return std::visit(Encoder{}, msg);
}

Message decode_message(std::string_view line) {
    if (line.size() > kMaxLineLen) {
        throw ProtocolError("oversize", "line exceeds " + std::to_string(kMaxLineLen) +
                                            " bytes");
    }
    const auto fields = split_fields(line);
    if (fields.empty()) {
        bad("empty line");
    }
    const std::string_view verb = fields[0];

    if (verb == "LOGIN") {
        if (fields.size() != 2) {
            bad("LOGIN takes exactly one field");
        }
        Login m{percent_decode(fields[1])};
        if (m.user_id.empty()) {
            bad("empty user id");
        }
        return m;
    }

    if (verb == "CHALLENGE") {
        if (fields.size() != 5) {
            bad("CHALLENGE takes exactly four fields");
        }
        ChallengeMsg m;
        m.challenge.puzzle_digest = Digest{parse_hex_field(fields[1], "puzzle digest")};
        const Bytes salt = parse_hex_field(fields[2], "salt");
        if (salt.size() != kSaltLen) {
            bad("salt must be exactly 16 bytes");
        }
        std::copy(salt.begin(), salt.end(), m.challenge.salt.begin());
        m.challenge.mac = Digest{parse_hex_field(fields[3], "mac")};
        m.challenge.k_bits =
            static_cast<std::uint32_t>(parse_decimal(fields[4], 32, "difficulty k"));
        return m;
    }

    if (verb == "RESPOND") {
        if (fields.size() < 5) {
            bad("RESPOND is missing fields");
        }
        Respond m;
        m.payload.user_id = percent_decode(fields[1]);
        if (m.payload.user_id.empty()) {
            bad("empty user id");
        }
        const auto variant = variant_from_name(fields[2]);
        if (!variant.has_value()) {
            bad("unknown variant token");
        }
        m.payload.variant = *variant;
        if (*variant == Variant::Lamport) {
            if (fields.size() != 6) {
                bad("lamport RESPOND takes exactly five fields");
            }
            LamportProof proof;
            proof.r = static_cast<std::uint32_t>(
                parse_decimal(fields[3], 0xffffffffULL, "nonce r"));
            proof.prev_chain = parse_hex_field(fields[4], "prev chain value");
            m.payload.proof = std::move(proof);
            m.payload.mac = Digest{parse_hex_field(fields[5], "mac")};
        } else {
            if (fields.size() != 5) {
                bad("RESPOND takes exactly four fields");
            }
            m.payload.proof = Digest{parse_hex_field(fields[3], "proof digest")};
            m.payload.mac = Digest{parse_hex_field(fields[4], "mac")};
        }
        return m;
    }

    if (verb == "RESULT") {
        if (fields.size() != 2 || (fields[1] != "OK" && fields[1] != "FAIL")) {
            bad("RESULT must be OK or FAIL");
        }
        return Result{fields[1] == "OK"};
    }

    if (verb == "ERR") {
        if (fields.size() != 2) {
            bad("ERR takes exactly one code");
        }
        return Err{std::string(fields[1])};
    }

    bad("unknown verb");
}

}  // namespace compchall::wire
