#include <doctest.h>

#include <cmath>
#include <fstream>
#include <set>

#include "compchall/attacksim.hpp"
#include "test_util.hpp"

using namespace compchall;
using testutil::temp_path;
using testutil::test_key;

namespace {

bool close_rel(double a, double b, double rel = 1e-9) {
    return std::abs(a - b) <= rel * std::max(std::abs(a), std::abs(b));
}

Store store_with(const std::string& user, const std::string& password, Variant variant,
                 std::uint64_t m = kDefaultChainLength) {
    Store store;
    store.enroll(user, password, variant, m);
    return store;
}

}  // namespace

TEST_CASE("cost model reproduces the published arithmetic") {
    const double t = 0.005 * 0.001;  // 0.005 ms per hash

    CHECK(close_rel(max_solve_time(20, t), 5.24288));
    CHECK(max_solve_time(0, t) == t);
    CHECK(close_rel(max_solve_time(10, 1e-3), 1.024));

    CHECK(close_rel(offline_attack_time_base(20, t, 1e7), 55.24288));
    CHECK(offline_attack_time_base(20, t, 0) == max_solve_time(20, t));
    CHECK(close_rel(offline_attack_time_base(20, t, 1), 5.242885));

    const OfflineVariantCost variant = offline_attack_time_variant(20, t, 1e7);
    CHECK(close_rel(variant.seconds, 52428800.0));
    char years[16];
    std::snprintf(years, sizeof(years), "%.4f", variant.years);
    CHECK(std::string(years) == "1.6625");
    CHECK(close_rel(offline_attack_time_variant(20, t, 1).seconds, max_solve_time(20, t)));
}

TEST_CASE("online attack: password at position 1 ends the attack immediately") {
    Store store = store_with("tina", "letmein", Variant::Base);
    SeededEntropy entropy(42);
    const AttackReport report = simulate_online_attack({"letmein", "other"}, store, "tina",
                                                       PuzzleParams{8}, test_key(), entropy);
    CHECK(report.attempts == 1);
    CHECK(report.succeeded);
    CHECK(report.success_attempt == 1);
    CHECK(report.rows[0].solve_evals <= 256);
    CHECK(store.get("tina").account.fail_count == 0);
}

TEST_CASE("online attack: 100 wrong guesses, k=12, every guess solves fresh") {
    std::vector<std::string> dictionary;
    for (int i = 0; i < 100; ++i) {
        dictionary.push_back("wrong" + std::to_string(i));
    }

    double total_mean = 0.0;
    const int reps = 20;
    for (int rep = 0; rep < reps; ++rep) {
        Store store = store_with("ulf", "correct-horse", Variant::Base);
        SeededEntropy entropy(1000 + rep);
        const AttackReport report = simulate_online_attack(dictionary, store, "ulf",
                                                           PuzzleParams{12}, test_key(),
                                                           entropy);
        CHECK(report.attempts == 100);
        CHECK_FALSE(report.succeeded);
        CHECK(report.puzzle_solves == 100);
        // n advanced on every attempt: no computation was ever reusable.
        CHECK(store.get("ulf").account.fail_count == 100);
        total_mean += static_cast<double>(report.total_hash_evals) / 100.0;

        // No free guesses: each attempt rode a fresh challenge.
        CHECK(report.challenge_macs.size() == 100);
        const std::set<std::string> distinct(report.challenge_macs.begin(),
                                             report.challenge_macs.end());
        CHECK(distinct.size() == 100);
    }
    const double mean = total_mean / reps;
    CHECK(mean > 2048.0 * 0.85);
    CHECK(mean < 2048.0 * 1.15);
}

TEST_CASE("online attack: k=0 control isolates the puzzle's contribution") {
    std::vector<std::string> dictionary;
    for (int i = 0; i < 100; ++i) {
        dictionary.push_back("wrong" + std::to_string(i));
    }

    Store store_hard = store_with("vic", "pw", Variant::Base);
    SeededEntropy e1(7);
    const AttackReport hard =
        simulate_online_attack(dictionary, store_hard, "vic", PuzzleParams{12}, test_key(), e1);

    Store store_easy = store_with("vic", "pw", Variant::Base);
    SeededEntropy e2(7);
    const AttackReport easy =
        simulate_online_attack(dictionary, store_easy, "vic", PuzzleParams{0}, test_key(), e2);

    CHECK(easy.total_hash_evals == 100);  // one evaluation per guess, nothing more
    const double ratio = hard.virtual_elapsed / easy.virtual_elapsed;
    CHECK(ratio > 2048.0 * 0.85);
    CHECK(ratio < 2048.0 * 1.15);
}

TEST_CASE("online attack: throttling-law invariants at k=8") {
    std::vector<std::string> dictionary;
    for (int i = 0; i < 40; ++i) {
        dictionary.push_back("no" + std::to_string(i));
    }
    double mean_sum = 0.0;
    const int reps = 20;
    for (int rep = 0; rep < reps; ++rep) {
        Store store = store_with("wes", "pw", Variant::Base);
        SeededEntropy entropy(50 + rep);
        const AttackReport report = simulate_online_attack(dictionary, store, "wes",
                                                           PuzzleParams{8}, test_key(),
                                                           entropy);
        CHECK(report.total_hash_evals >= report.attempts);
        CHECK(report.virtual_elapsed ==
              static_cast<double>(report.total_hash_evals) * report.t_per_hash);
        mean_sum += static_cast<double>(report.total_hash_evals) /
                    static_cast<double>(report.attempts);
    }
    const double mean = mean_sum / reps;
    CHECK(mean > 128.0 * 0.85);
    CHECK(mean < 128.0 * 1.15);
}

TEST_CASE("online attack: offline-resistant variant charges 2^k per wrong guess") {
    Store store = store_with("xia", "true-pw", Variant::OfflineResistant);
    SeededEntropy entropy(9);
    const AttackReport report =
        simulate_online_attack({"bad1", "bad2", "true-pw"}, store, "xia", PuzzleParams{8},
                               test_key(), entropy);
    REQUIRE(report.attempts == 3);
    CHECK(report.rows[0].result == AttemptResult::NotFound);
    CHECK(report.rows[0].solve_evals == 256);  // full scan proves the guess wrong
    CHECK(report.rows[1].result == AttemptResult::NotFound);
    CHECK(report.rows[2].result == AttemptResult::Success);
    // Wrong guesses never reached the server: n is untouched.
    CHECK(store.get("xia").account.fail_count == 0);
}

TEST_CASE("online attack: lamport target") {
    Store store = store_with("yve", "chainpw", Variant::Lamport, 50);
    SeededEntropy entropy(11);
    const AttackReport report = simulate_online_attack({"bad", "chainpw"}, store, "yve",
                                                       PuzzleParams{8}, test_key(), entropy);
    CHECK(report.attempts == 2);
    CHECK(report.succeeded);
    CHECK(store.get("yve").account.fail_count == 1);  // the one wrong guess
    CHECK(std::get<ChainSecret>(store.get("yve").account.secret).index == 49);
}

TEST_CASE("legit user: reuse arithmetic") {
    SUBCASE("10 consecutive correct logins -> exactly 1 puzzle solve") {
        Store store = store_with("zoe", "pw", Variant::Base);
        SeededEntropy entropy(21);
        const std::vector<LoginEvent> pattern(10, LoginEvent{true});
        const AttackReport report = simulate_legit_user(pattern, store, "zoe", "pw",
                                                        PuzzleParams{10}, test_key(), entropy);
        CHECK(report.attempts == 10);
        CHECK(report.puzzle_solves == 1);
        for (const auto& row : report.rows) {
            CHECK(row.result == AttemptResult::Success);
        }
        CHECK(store.get("zoe").account.fail_count == 0);
    }

    SUBCASE("correct, wrong, correct -> exactly 2 solves") {
        Store store = store_with("abe", "pw", Variant::Base);
        SeededEntropy entropy(22);
        const std::vector<LoginEvent> pattern{{true}, {false}, {true}};
        const AttackReport report = simulate_legit_user(pattern, store, "abe", "pw",
                                                        PuzzleParams{10}, test_key(), entropy);
        CHECK(report.puzzle_solves == 2);
        CHECK(report.rows[0].result == AttemptResult::Success);
        CHECK(report.rows[1].result == AttemptResult::Fail);
        CHECK(report.rows[1].solve_evals == 0);  // typo fails fast, no grind
        CHECK(report.rows[2].result == AttemptResult::Success);
    }

    SUBCASE("lamport: every login solves; chain advance forbids reuse") {
        Store store = store_with("cai", "pw", Variant::Lamport, 20);
        SeededEntropy entropy(23);
        const std::vector<LoginEvent> pattern(10, LoginEvent{true});
        const AttackReport report = simulate_legit_user(pattern, store, "cai", "pw",
                                                        PuzzleParams{8}, test_key(), entropy);
        CHECK(report.puzzle_solves == 10);
        CHECK(std::get<ChainSecret>(store.get("cai").account.secret).index == 10);
    }
}

TEST_CASE("emit_report") {
    SUBCASE("empty report -> header-only CSV") {
        const auto path = temp_path("report");
        AttackReport report;
        report.finalize(5e-6);
        emit_report(report, ReportFormat::Csv, path);
        std::ifstream in(path);
        std::string line;
        REQUIRE(std::getline(in, line));
        CHECK(line == "attempt,solve_evals,result,cum_virtual_secs");
        CHECK_FALSE(std::getline(in, line));
        std::filesystem::remove(path);
    }

    SUBCASE("3-attempt report -> 3 data rows") {
        const auto path = temp_path("report");
        Store store = store_with("dee", "pw", Variant::Base);
        SeededEntropy entropy(31);
        const AttackReport report = simulate_online_attack({"a", "b", "c"}, store, "dee",
                                                           PuzzleParams{4}, test_key(),
                                                           entropy);
        emit_report(report, ReportFormat::Csv, path);
        std::ifstream in(path);
        std::string line;
        int rows = -1;  // discount header
        while (std::getline(in, line)) {
            ++rows;
        }
        CHECK(rows == 3);
        std::filesystem::remove(path);
    }

    SUBCASE("JSON round trip reproduces the report") {
        const auto path = temp_path("report");
        Store store = store_with("eli", "b", Variant::Base);
        SeededEntropy entropy(33);
        const AttackReport report = simulate_online_attack({"a", "b"}, store, "eli",
                                                           PuzzleParams{4}, test_key(),
                                                           entropy);
        emit_report(report, ReportFormat::Json, path);
        const AttackReport loaded = load_report_json(path);
        CHECK(loaded.attempts == report.attempts);
        CHECK(loaded.total_hash_evals == report.total_hash_evals);
        CHECK(loaded.puzzle_solves == report.puzzle_solves);
        CHECK(loaded.virtual_elapsed == report.virtual_elapsed);
        CHECK(loaded.guesses_per_second == report.guesses_per_second);
        CHECK(loaded.succeeded == report.succeeded);
        CHECK(loaded.success_attempt == report.success_attempt);
        REQUIRE(loaded.rows.size() == report.rows.size());
        for (std::size_t i = 0; i < loaded.rows.size(); ++i) {
            CHECK(loaded.rows[i].attempt == report.rows[i].attempt);
            CHECK(loaded.rows[i].solve_evals == report.rows[i].solve_evals);
            CHECK(loaded.rows[i].result == report.rows[i].result);
            CHECK(loaded.rows[i].cum_virtual_secs == report.rows[i].cum_virtual_secs);
        }
        std::filesystem::remove(path);
    }
}
