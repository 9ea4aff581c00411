#pragma once

/// Cost model and online dictionary-attack simulator.
///
/// The simulator drives the real protocol operations against a real
/// in-memory store — no network — as an attacker that is optimal within
/// the protocol: it reuses a computation whenever verification would
/// still accept it and otherwise solves fresh. Time is virtual:
/// (puzzle-scan hash evaluations) x (seconds per hash), the same cost
/// unit the analytic formulas use. The one constant-cost proof hash per
/// submission is deliberately not on the clock; the puzzle scan is the
/// throttling mechanism being measured.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "compchall/entropy.hpp"
#include "compchall/protocol.hpp"
#include "compchall/userstore.hpp"

namespace compchall {

/// 365-day year, matching the published arithmetic.
inline constexpr double kSecondsPerYear = 31'536'000.0;

/// Inputs of the analytic cost model. t defaults to 0.005 ms per hash and
/// the dictionary size to 10^7 guesses.
struct CostInputs {
    std::uint32_t k_bits = kDefaultKBits;
    double t_per_hash = 5e-6;
    double n_guesses = 1e7;
};

/// Worst-case legitimate solve: 2^k * t.
double max_solve_time(std::uint32_t k_bits, double t_per_hash);

/// Offline dictionary attack against the base protocol: one full puzzle
/// scan, then one hash per password guess — 2^k*t + n*t.
double offline_attack_time_base(std::uint32_t k_bits, double t_per_hash, double n_guesses);

struct OfflineVariantCost {
    double seconds = 0.0;
    double years = 0.0;  // seconds / kSecondsPerYear
};

/// Offline dictionary attack against the offline-resistant variant: every
/// (password, nonce) combination must be tried — 2^k * n * t.
OfflineVariantCost offline_attack_time_variant(std::uint32_t k_bits, double t_per_hash,
                                               double n_guesses);

enum class AttemptResult {
    Fail,      ///< submitted and rejected (n advanced)
    Success,   ///< submitted and accepted
    NotFound,  ///< offline-resistant scan ruled the guess out locally
};

std::string_view attempt_result_name(AttemptResult r);

struct AttemptRow {
    std::uint64_t attempt = 0;  // 1-based
    std::uint64_t solve_evals = 0;
    AttemptResult result = AttemptResult::Fail;
    double cum_virtual_secs = 0.0;
};

struct AttackReport {
    std::uint64_t attempts = 0;
    std::uint64_t total_hash_evals = 0;
    std::uint64_t puzzle_solves = 0;  // attempts that ran a fresh scan
    double t_per_hash = 5e-6;
    double virtual_elapsed = 0.0;     // total_hash_evals * t_per_hash
    double guesses_per_second = 0.0;  // attempts / virtual_elapsed
    bool succeeded = false;
    std::optional<std::uint64_t> success_attempt;
    std::vector<AttemptRow> rows;
    /// MAC of each challenge the attacker received, for asserting that no
    /// two guesses ever rode one challenge.
    std::vector<std::string> challenge_macs;

    void finalize(double t);
};

/// Runs a dictionary through the live protocol against `user_id`'s record
/// in `store`. Each guess fetches a fresh challenge, pays for the scan,
/// and submits; any failure advances n server-side, which is exactly what
/// stops the attacker from amortizing work. Stops on success or when the
/// dictionary is exhausted.
AttackReport simulate_online_attack(const std::vector<std::string>& dictionary, Store& store,
                                    const std::string& user_id, const PuzzleParams& params,
                                    const ServerKey& key, EntropySource& entropy,
                                    double t_per_hash = 5e-6);

struct LoginEvent {
    bool correct_password = true;
};

/// Replays the reference client's reuse-cache policy for a sequence of
/// login events (with occasional typos) and reports how many puzzle
/// solves the user actually paid for. rows[i].solve_evals == 0 marks a
/// login that rode the cached computation.
AttackReport simulate_legit_user(const std::vector<LoginEvent>& pattern, Store& store,
                                 const std::string& user_id, const std::string& password,
                                 const PuzzleParams& params, const ServerKey& key,
                                 EntropySource& entropy, double t_per_hash = 5e-6);

enum class ReportFormat { Csv, Json };

/// Writes the per-attempt table. CSV columns, in order:
/// attempt, solve_evals, result, cum_virtual_secs. JSON carries the same
/// rows plus the totals.
void emit_report(const AttackReport& report, ReportFormat format,
                 const std::filesystem::path& path);

/// Reads back a JSON report written by emit_report.
AttackReport load_report_json(const std::filesystem::path& path);

}  // namespace compchall
