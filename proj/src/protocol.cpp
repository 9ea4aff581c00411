#include "compchall/protocol.hpp"

#include <stdexcept>

#include "compchall/errors.hpp"

namespace compchall {

std::string_view variant_name(Variant v) {
    switch (v) {
        case Variant::Base:
            return "base";
        case Variant::Lamport:
            return "lamport";
        case Variant::OfflineResistant:
            return "offline";
    }
    return "base";
}

std::optional<Variant> variant_from_name(std::string_view name) {
    if (name == "base") return Variant::Base;
    if (name == "lamport") return Variant::Lamport;
    if (name == "offline") return Variant::OfflineResistant;
    return std::nullopt;
}

void PuzzleParams::validate_policy() const {
    if (k_bits < 1 || k_bits > 32) {
        throw ConfigError("puzzle difficulty k must be in 1..=32, got " +
                          std::to_string(k_bits));
    }
}

ServerKey ServerKey::from_hex_string(std::string_view hex) {
    Bytes raw;
    try {
        raw = from_hex(hex);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("server key: ") + e.what());
    }
    if (raw.size() != kServerKeyLen) {
        throw ConfigError("server key must be exactly 32 bytes (64 hex digits)");
    }
    ServerKey key;
    std::copy(raw.begin(), raw.end(), key.bytes.begin());
    return key;
}

Digest proof_hash(std::uint32_t r, std::span<const std::uint8_t> password,
                  const HashConfig& cfg) {
    return hash_tuple(FieldTag::Proof,
                      {encode_r(r, 32), Bytes(password.begin(), password.end())}, cfg);
}

Digest mac_over_proof(const Digest& h_rp, std::string_view user_id, const ServerKey& key,
                      std::uint64_t fail_count, const HashConfig& cfg) {
    return hash_tuple(FieldTag::Mac,
                      {h_rp.bytes, utf8_bytes(user_id), key.to_bytes(), u64_be(fail_count)},
                      cfg);
}

Digest lamport_mac(std::uint32_t r, std::span<const std::uint8_t> chain_head,
                   std::string_view user_id, const ServerKey& key, std::uint64_t fail_count,
                   const HashConfig& cfg) {
    return hash_tuple(FieldTag::Mac,
                      {encode_r(r, 32), Bytes(chain_head.begin(), chain_head.end()),
                       utf8_bytes(user_id), key.to_bytes(), u64_be(fail_count)},
                      cfg);
}

Digest compute_mac(Variant variant, std::uint32_t r, const SecretMaterial& secret,
                   std::string_view user_id, const ServerKey& key, std::uint64_t fail_count,
                   const HashConfig& cfg) {
    if (variant == Variant::Lamport) {
        const auto* chain = std::get_if<ChainSecret>(&secret);
        if (chain == nullptr) {
            throw std::invalid_argument("Lamport variant requires chain secret material");
        }
        return lamport_mac(r, chain->head, user_id, key, fail_count, cfg);
    }
    const auto* pw = std::get_if<PasswordSecret>(&secret);
    if (pw == nullptr) {
        throw std::invalid_argument("variant requires password secret material");
    }
    return mac_over_proof(proof_hash(r, pw->password, cfg), user_id, key, fail_count, cfg);
}

namespace {

Digest puzzle_digest_for(Variant variant, std::uint32_t r,
                         std::span<const std::uint8_t, kSaltLen> salt,
                         std::span<const std::uint8_t> password, const HashConfig& cfg) {
    const Bytes salt_bytes(salt.begin(), salt.end());
    if (variant == Variant::OfflineResistant) {
        return hash_tuple(FieldTag::Chal,
                          {encode_r(r, 32), Bytes(password.begin(), password.end()), salt_bytes},
                          cfg);
    }
    return hash_tuple(FieldTag::Chal, {encode_r(r, 32), salt_bytes}, cfg);
}

}  // namespace

Challenge gen_challenge(const AccountState& account, std::string_view user_id,
                        const PuzzleParams& params, const ServerKey& key,
                        EntropySource& entropy, const HashConfig& cfg) {
    if (params.k_bits > 32) {
        throw ConfigError("puzzle difficulty k must not exceed 32 bits");
    }
    Challenge out;
    out.k_bits = params.k_bits;
    const std::uint32_t r = entropy.draw_r(params.k_bits);
    entropy.fill(out.salt);

    if (account.variant == Variant::OfflineResistant) {
        const auto& pw = std::get<PasswordSecret>(account.secret);
        out.puzzle_digest = puzzle_digest_for(account.variant, r, out.salt, pw.password, cfg);
    } else {
        out.puzzle_digest = puzzle_digest_for(account.variant, r, out.salt, {}, cfg);
    }
    out.mac = compute_mac(account.variant, r, account.secret, user_id, key,
                          account.fail_count, cfg);
    // r and the plaintext salt copy die here; nothing about this challenge
    // survives on the server side.
    return out;
}

SolveResult solve_puzzle(const Digest& puzzle_digest,
                         std::span<const std::uint8_t, kSaltLen> salt, std::uint32_t k_bits,
                         Variant variant, std::optional<std::string_view> password,
                         const HashConfig& cfg) {
    if (k_bits > 32) {
        throw std::domain_error("puzzle width k exceeds 32 bits");
    }
    const bool needs_password = variant == Variant::OfflineResistant;
    if (needs_password != password.has_value()) {
        throw std::invalid_argument(
            "password must be supplied exactly for the offline-resistant variant");
    }

    // Pre-encode the candidate tuple once; only the 4 nonce bytes change
    // between iterations.
    const Bytes salt_bytes(salt.begin(), salt.end());
    Bytes encoded;
    if (needs_password) {
        encoded = encode_fields(FieldTag::Chal,
                                {encode_r(0, 32), utf8_bytes(*password), salt_bytes});
    } else {
        encoded = encode_fields(FieldTag::Chal, {encode_r(0, 32), salt_bytes});
    }
    constexpr std::size_t kNonceOffset = 5;  // tag byte + 4-byte length prefix

    TupleHasher hasher(cfg);
    SolveResult result;
    const std::uint64_t space = std::uint64_t{1} << k_bits;
    for (std::uint64_t candidate = 0; candidate < space; ++candidate) {
        const auto r = static_cast<std::uint32_t>(candidate);
        encoded[kNonceOffset] = static_cast<std::uint8_t>(r >> 24);
        encoded[kNonceOffset + 1] = static_cast<std::uint8_t>(r >> 16);
        encoded[kNonceOffset + 2] = static_cast<std::uint8_t>(r >> 8);
        encoded[kNonceOffset + 3] = static_cast<std::uint8_t>(r);
        ++result.evaluations;
        if (hasher.hash(encoded) == puzzle_digest) {
            result.r = r;
            return result;
        }
    }
    return result;  // NotFound: corrupted challenge or wrong password guess
}

ResponsePayload make_response(Variant variant, std::string_view user_id, std::uint32_t r,
                              std::string_view password, const Digest& mac,
                              const HashConfig& cfg) {
    if (variant == Variant::Lamport) {
        throw std::invalid_argument("use make_lamport_response for the Lamport variant");
    }
    ResponsePayload resp;
    resp.user_id = std::string(user_id);
    resp.variant = variant;
    resp.proof = proof_hash(r, utf8_bytes(password), cfg);
    resp.mac = mac;
    return resp;
}

ResponsePayload make_lamport_response(std::string_view user_id, std::uint32_t r,
                                      std::string_view password, std::uint64_t chain_index,
                                      const Digest& mac, const HashConfig& cfg) {
    if (chain_index == 0) {
        throw ChainExhaustedError("Lamport chain index is 0; no logins remain");
    }
    ResponsePayload resp;
    resp.user_id = std::string(user_id);
    resp.variant = Variant::Lamport;
    resp.proof = LamportProof{r, hash_chain(utf8_bytes(password), chain_index - 1, cfg)};
    resp.mac = mac;
    return resp;
}

VerifyOutcome verify_response(const AccountState& account, std::string_view user_id,
                              const ResponsePayload& resp, const ServerKey& key,
                              const HashConfig& cfg) {
    VerifyOutcome fail{false, std::nullopt};

    if (account.variant == Variant::Lamport) {
        const auto& chain = std::get<ChainSecret>(account.secret);
        if (chain.index == 0) {
            throw ChainExhaustedError("Lamport chain for this account is exhausted");
        }
        const auto* proof = std::get_if<LamportProof>(&resp.proof);
        if (proof == nullptr) {
            return fail;  // wrong proof shape for this account: a failed attempt
        }
        const Digest expected_mac =
            lamport_mac(proof->r, chain.head, user_id, key, account.fail_count, cfg);
        const Digest stepped = hash_tuple(FieldTag::Chain, {proof->prev_chain}, cfg);
        const bool mac_ok = expected_mac == resp.mac;
        const bool chain_ok = ct_equal(stepped.bytes, chain.head);
        if (mac_ok && chain_ok) {
            return VerifyOutcome{true, ChainAdvance{proof->prev_chain, chain.index - 1}};
        }
        return fail;
    }

    const auto* h_rp = std::get_if<Digest>(&resp.proof);
    if (h_rp == nullptr) {
        return fail;
    }
    const Digest expected_mac = mac_over_proof(*h_rp, user_id, key, account.fail_count, cfg);
    if (expected_mac == resp.mac) {
        return VerifyOutcome{true, std::nullopt};
    }
    return fail;
}

void apply_outcome(AccountState& account, const VerifyOutcome& outcome) {
    if (!outcome.success) {
        account.fail_count += 1;
        return;
    }
    if (outcome.advance.has_value()) {
        auto* chain = std::get_if<ChainSecret>(&account.secret);
        if (chain == nullptr || chain->index == 0) {
            throw ChainExhaustedError("cannot advance an exhausted or non-chain account");
        }
        chain->head = outcome.advance->new_head;
        chain->index = outcome.advance->new_index;
    }
}

AccountState make_phantom_account(std::string_view user_id, Variant variant,
                                  const ServerKey& key, const HashConfig& cfg) {
    // Keyed, deterministic pseudo-password: repeated probes of the same
    // unknown id see a structurally ordinary account.
    const Digest seed = hash_tuple(
        FieldTag::Chain, {key.to_bytes(), utf8_bytes(user_id), utf8_bytes("phantom")}, cfg);
    AccountState account;
    if (variant == Variant::Lamport) {
        account.variant = Variant::Lamport;
        account.secret =
            ChainSecret{hash_chain(seed.bytes, kDefaultChainLength, cfg), kDefaultChainLength};
    } else {
        account.variant = variant;
        account.secret = PasswordSecret{seed.bytes};
    }
    return account;
}

}  // namespace compchall
