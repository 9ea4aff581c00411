#include "compchall/attacksim.hpp"

#include <cmath>
#include <fstream>

#include <json.hpp>

#include "compchall/errors.hpp"

namespace compchall {

namespace {

using nlohmann::json;

double pow2(std::uint32_t k_bits) { return std::ldexp(1.0, static_cast<int>(k_bits)); }

}  // namespace

double max_solve_time(std::uint32_t k_bits, double t_per_hash) {
    return pow2(k_bits) * t_per_hash;
}

double offline_attack_time_base(std::uint32_t k_bits, double t_per_hash, double n_guesses) {
    return pow2(k_bits) * t_per_hash + n_guesses * t_per_hash;
}

OfflineVariantCost offline_attack_time_variant(std::uint32_t k_bits, double t_per_hash,
                                               double n_guesses) {
    OfflineVariantCost cost;
    cost.seconds = pow2(k_bits) * n_guesses * t_per_hash;
    cost.years = cost.seconds / kSecondsPerYear;
    return cost;
}

std::string_view attempt_result_name(AttemptResult r) {
    switch (r) {
        case AttemptResult::Fail:
            return "FAIL";
        case AttemptResult::Success:
            return "OK";
        case AttemptResult::NotFound:
            return "NOTFOUND";
    }
    return "FAIL";
}

void AttackReport::finalize(double t) {
    t_per_hash = t;
    attempts = rows.size();
    total_hash_evals = 0;
    for (const AttemptRow& row : rows) {
        total_hash_evals += row.solve_evals;
    }
    virtual_elapsed = static_cast<double>(total_hash_evals) * t;
    guesses_per_second =
        virtual_elapsed > 0.0 ? static_cast<double>(attempts) / virtual_elapsed : 0.0;
}

namespace {

Challenge fetch_challenge(Store& store, const std::string& user_id,
                          const PuzzleParams& params, const ServerKey& key,
                          EntropySource& entropy) {
    return store.with_record(user_id, [&](const UserRecord& rec) {
        return std::pair{
            gen_challenge(rec.account, user_id, params, key, entropy, store.hash_config()),
            std::optional<VerifyOutcome>{}};
    });
}

bool submit(Store& store, const ResponsePayload& payload, const ServerKey& key) {
    return store.with_record(payload.user_id, [&](const UserRecord& rec) {
        const VerifyOutcome outcome = verify_response(rec.account, rec.user_id, payload, key,
                                                      store.hash_config());
        return std::pair{outcome.success, std::optional<VerifyOutcome>{outcome}};
    });
}

}  // namespace

AttackReport simulate_online_attack(const std::vector<std::string>& dictionary, Store& store,
                                    const std::string& user_id, const PuzzleParams& params,
                                    const ServerKey& key, EntropySource& entropy,
                                    double t_per_hash) {
    const HashConfig& cfg = store.hash_config();
    const Variant variant = store.get(user_id).account.variant;

    AttackReport report;
    std::uint64_t cum_evals = 0;

    for (std::size_t i = 0; i < dictionary.size(); ++i) {
        const std::string& guess = dictionary[i];

        // Fresh challenge per guess. After any failure n has advanced, so
        // an old challenge is worthless; after a success we are done.
        const Challenge challenge = fetch_challenge(store, user_id, params, key, entropy);
        report.challenge_macs.push_back(challenge.mac.hex());

        AttemptRow row;
        row.attempt = i + 1;

        const std::optional<std::string_view> solver_password =
            variant == Variant::OfflineResistant ? std::optional<std::string_view>(guess)
                                                 : std::nullopt;
        const SolveResult solved =
            solve_puzzle(challenge.puzzle_digest, challenge.salt, challenge.k_bits, variant,
                         solver_password, cfg);
        row.solve_evals = solved.evaluations;
        ++report.puzzle_solves;
        cum_evals += solved.evaluations;
        row.cum_virtual_secs = static_cast<double>(cum_evals) * t_per_hash;

        if (!solved.r.has_value()) {
            // Offline-resistant puzzle bound the password: the scan itself
            // ruled this guess out, at full 2^k cost, with nothing to submit.
            row.result = AttemptResult::NotFound;
            report.rows.push_back(row);
            continue;
        }

        ResponsePayload payload;
        if (variant == Variant::Lamport) {
            const AccountState account = store.get(user_id).account;
            const auto& chain = std::get<ChainSecret>(account.secret);
            if (chain.index == 0) {
                break;  // chain exhausted; nothing left to attack
            }
            payload = make_lamport_response(user_id, *solved.r, guess, chain.index,
                                            challenge.mac, cfg);
        } else {
            payload = make_response(variant, user_id, *solved.r, guess, challenge.mac, cfg);
        }

        const bool ok = submit(store, payload, key);
        row.result = ok ? AttemptResult::Success : AttemptResult::Fail;
        report.rows.push_back(row);
        if (ok) {
            report.succeeded = true;
            report.success_attempt = row.attempt;
            break;
        }
    }

    report.finalize(t_per_hash);
    return report;
}

AttackReport simulate_legit_user(const std::vector<LoginEvent>& pattern, Store& store,
                                 const std::string& user_id, const std::string& password,
                                 const PuzzleParams& params, const ServerKey& key,
                                 EntropySource& entropy, double t_per_hash) {
    const HashConfig& cfg = store.hash_config();
    const Variant variant = store.get(user_id).account.variant;
    const std::string wrong_password = password + "-typo";

    // Client-side reuse state, mirroring ClientCache: the solved nonce,
    // the MAC it was accepted under, and which password it belonged to.
    struct Cached {
        std::uint32_t r = 0;
        Digest mac;
        std::string password_used;
    };
    std::optional<Cached> cached;
    std::uint64_t client_chain_index = 0;
    if (variant == Variant::Lamport) {
        client_chain_index = std::get<ChainSecret>(store.get(user_id).account.secret).index;
    }

    AttackReport report;
    std::uint64_t cum_evals = 0;

    auto fresh_attempt = [&](const std::string& typed, AttemptRow& row) -> bool {
        const Challenge challenge = fetch_challenge(store, user_id, params, key, entropy);
        report.challenge_macs.push_back(challenge.mac.hex());
        const std::optional<std::string_view> solver_password =
            variant == Variant::OfflineResistant ? std::optional<std::string_view>(typed)
                                                 : std::nullopt;
        const SolveResult solved =
            solve_puzzle(challenge.puzzle_digest, challenge.salt, challenge.k_bits, variant,
                         solver_password, cfg);
        row.solve_evals += solved.evaluations;
        ++report.puzzle_solves;
        cum_evals += solved.evaluations;
        if (!solved.r.has_value()) {
            return false;  // offline variant with a typo: locally unsolvable
        }
        ResponsePayload payload =
            variant == Variant::Lamport
                ? make_lamport_response(user_id, *solved.r, typed, client_chain_index,
                                        challenge.mac, cfg)
                : make_response(variant, user_id, *solved.r, typed, challenge.mac, cfg);
        const bool ok = submit(store, payload, key);
        if (ok && variant == Variant::Lamport) {
            --client_chain_index;
        }
        if (ok && variant != Variant::Lamport) {
            cached = Cached{*solved.r, challenge.mac, typed};
        }
        return ok;
    };

    for (std::size_t i = 0; i < pattern.size(); ++i) {
        const std::string& typed = pattern[i].correct_password ? password : wrong_password;
        AttemptRow row;
        row.attempt = i + 1;

        bool ok = false;
        if (variant != Variant::Lamport && cached.has_value()) {
            // Reuse: one cheap proof hash over the typed password, no scan.
            const ResponsePayload payload =
                make_response(variant, user_id, cached->r, typed, cached->mac, cfg);
            const bool was_for_this_password = cached->password_used == typed;
            ok = submit(store, payload, key);
            if (!ok) {
                // The failure just advanced n, so the cache is dead either
                // way. Re-solve only when this same password succeeded
                // before — then the rejection means the counter moved, not
                // that the user mistyped.
                cached.reset();
                if (was_for_this_password) {
                    ok = fresh_attempt(typed, row);
                }
            }
        } else {
            ok = fresh_attempt(typed, row);
        }

        row.result = ok ? AttemptResult::Success : AttemptResult::Fail;
        row.cum_virtual_secs = static_cast<double>(cum_evals) * t_per_hash;
        report.rows.push_back(row);
    }

    report.finalize(t_per_hash);
    return report;
}

void emit_report(const AttackReport& report, ReportFormat format,
                 const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) {
        throw StoreError("cannot open " + path.string() + " for writing");
    }

    if (format == ReportFormat::Csv) {
        out << "attempt,solve_evals,result,cum_virtual_secs\n";
        for (const AttemptRow& row : report.rows) {
            out << row.attempt << ',' << row.solve_evals << ','
                << attempt_result_name(row.result) << ',' << row.cum_virtual_secs << '\n';
        }
        return;
    }

    json rows = json::array();
    for (const AttemptRow& row : report.rows) {
        rows.push_back({{"attempt", row.attempt},
                        {"solve_evals", row.solve_evals},
                        {"result", std::string(attempt_result_name(row.result))},
                        {"cum_virtual_secs", row.cum_virtual_secs}});
    }
    json j;
    j["attempts"] = report.attempts;
    j["total_hash_evals"] = report.total_hash_evals;
    j["puzzle_solves"] = report.puzzle_solves;
    j["t_per_hash"] = report.t_per_hash;
    j["virtual_elapsed_secs"] = report.virtual_elapsed;
    j["guesses_per_second"] = report.guesses_per_second;
    j["succeeded"] = report.succeeded;
    if (report.success_attempt.has_value()) {
        j["success_attempt"] = *report.success_attempt;
    }
    j["rows"] = std::move(rows);
    out << j.dump(2) << '\n';
}

AttackReport load_report_json(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw StoreError("cannot open report " + path.string());
    }
    json j;
    in >> j;

    AttackReport report;
    report.attempts = j.at("attempts").get<std::uint64_t>();
    report.total_hash_evals = j.at("total_hash_evals").get<std::uint64_t>();
    report.puzzle_solves = j.at("puzzle_solves").get<std::uint64_t>();
    report.t_per_hash = j.at("t_per_hash").get<double>();
    report.virtual_elapsed = j.at("virtual_elapsed_secs").get<double>();
    report.guesses_per_second = j.at("guesses_per_second").get<double>();
    report.succeeded = j.at("succeeded").get<bool>();
    if (j.contains("success_attempt")) {
        report.success_attempt = j.at("success_attempt").get<std::uint64_t>();
    }
    for (const json& jr : j.at("rows")) {
        AttemptRow row;
        row.attempt = jr.at("attempt").get<std::uint64_t>();
        row.solve_evals = jr.at("solve_evals").get<std::uint64_t>();
        const auto name = jr.at("result").get<std::string>();
        row.result = name == "OK"         ? AttemptResult::Success
                     : name == "NOTFOUND" ? AttemptResult::NotFound
                                          : AttemptResult::Fail;
        row.cum_virtual_secs = jr.at("cum_virtual_secs").get<double>();
        report.rows.push_back(row);
    }
    return report;
}

}  // namespace compchall
