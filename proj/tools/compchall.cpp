// compchall — reference CLI: server, client, enrollment, attack simulator
// and the analytic cost model.

#include <atomic>
#include <chrono>
#include <csignal>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>
#include <thread>

#include <CLI11.hpp>

#include "compchall/attacksim.hpp"
#include "compchall/client.hpp"
#include "compchall/errors.hpp"
#include "compchall/server.hpp"
#include "compchall/userstore.hpp"

namespace {

using namespace compchall;

std::atomic<bool> g_stop{false};

void on_signal(int) { g_stop = true; }

/// Fixed-point seconds with trailing zeros trimmed, so 5.24288 prints as
/// exactly that and 52428800 prints without a fraction.
std::string format_seconds(double value) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6f", value);
    std::string s(buf);
    while (!s.empty() && s.back() == '0') {
        s.pop_back();
    }
    if (!s.empty() && s.back() == '.') {
        s.pop_back();
    }
    return s;
}

std::pair<std::string, std::uint16_t> split_host_port(const std::string& addr) {
    const auto pos = addr.rfind(':');
    if (pos == std::string::npos || pos == 0 || pos + 1 >= addr.size()) {
        throw CLI::ValidationError("address must be host:port, got \"" + addr + "\"");
    }
    const int port = std::stoi(addr.substr(pos + 1));
    if (port < 0 || port > 65535) {
        throw CLI::ValidationError("port out of range in \"" + addr + "\"");
    }
    return {addr.substr(0, pos), static_cast<std::uint16_t>(port)};
}

Variant parse_variant(const std::string& name) {
    const auto v = variant_from_name(name);
    if (!v.has_value()) {
        throw CLI::ValidationError("variant must be base, lamport or offline");
    }
    return *v;
}

int cmd_serve(const std::string& config_path, const std::string& store_path,
              const std::string& listen) {
    const ServerConfig config = ServerConfig::from_file(config_path);
    auto store = std::make_shared<Store>(
        Store::load(store_path, config.hash.algorithm));
    store->bind(store_path);

    auto [host, port] = split_host_port(listen);
    Server server(config, store);
    server.start(host, port);
    std::cout << "listening on " << host << ":" << server.port() << std::endl;
    std::cout << "store: " << store_path << " (" << store->size() << " users), k="
              << config.k_bits << ", hash=" << config.hash.algorithm << std::endl;

    std::signal(SIGINT, on_signal);
    std::signal(SIGTERM, on_signal);
    while (!g_stop.load()) {
        std::this_thread::sleep_for(std::chrono::milliseconds(100));
    }
    server.stop();
    std::cout << "shut down" << std::endl;
    return 0;
}

int cmd_useradd(const std::string& store_path, const std::string& user,
                const std::string& password, const std::string& variant_name_str,
                std::uint64_t chain_length) {
    const Variant variant = parse_variant(variant_name_str);
    Store store = std::filesystem::exists(store_path) ? Store::load(store_path) : Store();
    store.enroll(user, password, variant, chain_length);
    store.save(store_path);
    std::cout << "enrolled " << user << " (" << variant_name(variant) << ")";
    if (variant == Variant::Lamport) {
        std::cout << ", chain length " << chain_length
                  << " — first login must use --chain-index " << chain_length;
    }
    std::cout << std::endl;
    return 0;
}

int cmd_login(const std::string& server_addr, const std::string& user,
              const std::string& password, const std::string& variant_name_str,
              std::uint64_t chain_index, bool have_chain_index,
              const std::string& cache_path) {
    auto [host, port] = split_host_port(server_addr);

    LoginOptions options;
    options.variant = parse_variant(variant_name_str);
    if (have_chain_index) {
        options.lamport_index = chain_index;
    }

    ClientCache cache;
    ClientCache* cache_ptr = nullptr;
    if (!cache_path.empty()) {
        cache = ClientCache::load(cache_path);
        cache_ptr = &cache;
    }

    const LoginResult result = client_login(host, port, user, password, options, cache_ptr);
    if (cache_ptr != nullptr) {
        cache.save(cache_path);
    }

    if (result.puzzle_not_found) {
        std::cout << "puzzle unsolvable (wrong password for the offline variant, or a "
                     "corrupted challenge)"
                  << std::endl;
        return 2;
    }
    std::cout << "result: " << (result.success ? "OK" : "FAIL") << std::endl;
    if (result.used_cache) {
        std::cout << "reused previous computation (0 puzzle evaluations)" << std::endl;
    } else {
        std::cout << "k: " << result.k_bits << " bits" << std::endl;
        std::cout << "puzzle evaluations: " << result.solve_evaluations << std::endl;
        std::cout << "solve time: " << format_seconds(result.solve_seconds) << " s"
                  << std::endl;
        if (result.solve_seconds > 0.0) {
            std::cout << "hash throughput: "
                      << static_cast<std::uint64_t>(
                             static_cast<double>(result.solve_evaluations) /
                             result.solve_seconds)
                      << " hashes/s" << std::endl;
        }
    }
    return result.success ? 0 : 1;
}

int cmd_cost(std::uint32_t k, double t_ms, double guesses, const std::string& only_variant) {
    const double t = t_ms * 0.001;
    const double solve = max_solve_time(k, t);
    const double base = offline_attack_time_base(k, t, guesses);
    const OfflineVariantCost variant = offline_attack_time_variant(k, t, guesses);

    char years[32];
    std::snprintf(years, sizeof(years), "%.4f", variant.years);

    std::cout << "cost model (k=" << k << ", t=" << format_seconds(t_ms)
              << " ms/hash, guesses=" << format_seconds(guesses) << ")\n";
    std::cout << "max solve time          : " << format_seconds(solve) << " s\n";
    if (only_variant.empty() || only_variant == "base") {
        std::cout << "offline attack (base)   : " << format_seconds(base) << " s\n";
    }
    if (only_variant.empty() || only_variant == "offline") {
        std::cout << "offline attack (variant): " << format_seconds(variant.seconds)
                  << " s = " << years << " years\n";
    }
    return 0;
}

int cmd_attack(const std::string& store_path, const std::string& user,
               const std::string& dict_path, std::uint32_t k, std::uint64_t seed,
               double t_ms, const std::string& out_path, const std::string& format_name) {
    Store store = Store::load(store_path);
    if (!store.contains(user)) {
        std::cerr << "user " << user << " is not enrolled in " << store_path << std::endl;
        return 1;
    }

    std::vector<std::string> dictionary;
    {
        std::ifstream in(dict_path);
        if (!in) {
            std::cerr << "cannot open dictionary " << dict_path << std::endl;
            return 1;
        }
        std::string line;
        while (std::getline(in, line)) {
            if (!line.empty() && line.back() == '\r') {
                line.pop_back();
            }
            if (!line.empty()) {
                dictionary.push_back(line);
            }
        }
    }
    if (dictionary.empty()) {
        std::cerr << "dictionary is empty" << std::endl;
        return 1;
    }

    // The attack runs in-memory against a copy of the record; the key is
    // irrelevant to attacker cost, so a seeded one keeps runs reproducible.
    SeededEntropy entropy(seed);
    ServerKey key;
    entropy.fill(key.bytes);

    const AttackReport report = simulate_online_attack(
        dictionary, store, user, PuzzleParams{k}, key, entropy, t_ms * 0.001);

    if (!out_path.empty()) {
        const ReportFormat format =
            format_name == "json" ? ReportFormat::Json : ReportFormat::Csv;
        emit_report(report, format, out_path);
        std::cout << "report written to " << out_path << std::endl;
    }

    std::cout << "attempts          : " << report.attempts << "\n";
    std::cout << "puzzle solves     : " << report.puzzle_solves << "\n";
    std::cout << "total hash evals  : " << report.total_hash_evals << "\n";
    std::cout << "virtual elapsed   : " << format_seconds(report.virtual_elapsed) << " s\n";
    std::cout << "guesses per second: " << format_seconds(report.guesses_per_second) << "\n";
    std::cout << "outcome           : "
              << (report.succeeded
                      ? "password found at attempt " + std::to_string(*report.success_attempt)
                      : "dictionary exhausted")
              << std::endl;
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"CompChall challenge-response authentication toolkit"};
    app.require_subcommand(1);

    // serve
    std::string config_path, store_path, listen = "127.0.0.1:7777";
    auto* serve = app.add_subcommand("serve", "Run the reference TCP server");
    serve->add_option("--config", config_path, "Server config JSON")->required();
    serve->add_option("--store", store_path, "User store file")->required();
    serve->add_option("--listen", listen, "host:port to listen on");

    // useradd
    std::string ua_store, ua_user, ua_password, ua_variant = "base";
    std::uint64_t ua_chain = kDefaultChainLength;
    auto* useradd = app.add_subcommand("useradd", "Enroll a user into a store file");
    useradd->add_option("--store", ua_store, "User store file")->required();
    useradd->add_option("--user", ua_user, "User id")->required();
    useradd->add_option("--password", ua_password, "Password")->required();
    useradd->add_option("--variant", ua_variant, "base|lamport|offline");
    useradd->add_option("--chain-length", ua_chain, "Lamport chain length m");

    // login
    std::string li_server, li_user, li_password, li_variant = "base", li_cache;
    std::uint64_t li_chain_index = 0;
    auto* login = app.add_subcommand("login", "Log in against a running server");
    login->add_option("--server", li_server, "host:port")->required();
    login->add_option("--user", li_user, "User id")->required();
    login->add_option("--password", li_password, "Password")->required();
    login->add_option("--variant", li_variant, "base|lamport|offline");
    auto* chain_opt =
        login->add_option("--chain-index", li_chain_index,
                          "Lamport: index i such that the server holds H^i(P)");
    login->add_option("--cache", li_cache,
                      "Reuse-cache file; lets repeat logins skip the puzzle");

    // cost
    std::uint32_t cost_k = kDefaultKBits;
    double cost_t_ms = 0.005, cost_guesses = 1e7;
    std::string cost_variant;
    auto* cost = app.add_subcommand("cost", "Print the analytic cost model");
    cost->add_option("--k", cost_k, "Puzzle difficulty in bits");
    cost->add_option("--t-ms", cost_t_ms, "Milliseconds per hash");
    cost->add_option("--guesses", cost_guesses, "Average dictionary size");
    cost->add_option("--variant", cost_variant,
                     "Restrict the offline-attack line to base|offline");

    // attack
    std::string at_store, at_user, at_dict, at_out, at_format = "csv";
    std::uint32_t at_k = 12;
    std::uint64_t at_seed = 1;
    double at_t_ms = 0.005;
    auto* attack = app.add_subcommand("attack", "Simulate an online dictionary attack");
    attack->add_option("--store", at_store, "User store file")->required();
    attack->add_option("--user", at_user, "Target user id")->required();
    attack->add_option("--dict", at_dict, "Dictionary file, one password per line")
        ->required();
    attack->add_option("--k", at_k, "Puzzle difficulty in bits");
    attack->add_option("--seed", at_seed, "RNG seed (reproducible runs)");
    attack->add_option("--t-ms", at_t_ms, "Milliseconds per hash for the virtual clock");
    attack->add_option("--out", at_out, "Report path");
    attack->add_option("--format", at_format, "csv|json");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*serve) {
            return cmd_serve(config_path, store_path, listen);
        }
        if (*useradd) {
            return cmd_useradd(ua_store, ua_user, ua_password, ua_variant, ua_chain);
        }
        if (*login) {
            return cmd_login(li_server, li_user, li_password, li_variant, li_chain_index,
                             chain_opt->count() > 0, li_cache);
        }
        if (*cost) {
            if (!cost_variant.empty() && cost_variant != "base" && cost_variant != "offline") {
                throw CLI::ValidationError("--variant must be base or offline");
            }
            return cmd_cost(cost_k, cost_t_ms, cost_guesses, cost_variant);
        }
        if (*attack) {
            return cmd_attack(at_store, at_user, at_dict, at_k, at_seed, at_t_ms, at_out,
                              at_format);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << std::endl;
        return 1;
    }
    return 0;
}
