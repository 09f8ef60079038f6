// cmatch: command-line front end.
//
// Exit codes: 0 ok, 1 a check failed, 2 unreadable/invalid input,
// 3 instance too large for an exhaustive scan.

#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "cmatch/cmatch.hpp"
#include "cmatch/io/instance_file.hpp"
#include "cmatch/io/report.hpp"

using namespace cmatch;
using nlohmann::json;

namespace {

constexpr int kOk = 0;
constexpr int kCheckFailed = 1;
constexpr int kBadInput = 2;
constexpr int kTooLarge = 3;

struct Options {
    std::string path;
    bool json = false;
    int proposer = 1;
    bool trace = false;
    bool require_stable = false;
    std::string mode = "singleton";
    std::string check = "all";
    std::string agreement;
    bool has_agreement = false;
    std::string query_op;
    int side = 1;
    std::string set_a;
    std::string set_b;
    std::string kind = "coherent";
    std::uint64_t seed = 1;
    int max_contracts = 0;
};

void emit(const json& j) { std::cout << j.dump(2) << "\n"; }

void with_seed(json& j, const io::InstanceFile& f) {
    if (f.seed) j["seed"] = *f.seed;
}

ContractSet parse_names(const Instance& inst, const std::string& text, const std::string& flag) {
    ContractSet s;
    std::stringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) {
        const auto b = item.find_first_not_of(" \t");
        const auto e = item.find_last_not_of(" \t");
        if (b == std::string::npos) continue;
        item = item.substr(b, e - b + 1);
        auto it = std::find(inst.names.begin(), inst.names.end(), item);
        if (it == inst.names.end()) throw parse_error("unknown contract '" + item + "'", flag);
        s.insert(static_cast<ContractId>(it - inst.names.begin()));
    }
    return s;
}

std::string render_violation(const Instance& inst, const ViolationReport& v) {
    std::ostringstream os;
    os << axiom_name(v.axiom) << ": A = " << inst.render(v.a);
    if (v.axiom == Axiom::local_monotonicity || v.axiom == Axiom::substitutes || v.axiom == Axiom::path_independence)
        os << ", B = " << inst.render(v.b);
    if (v.x) os << ", x = " << inst.name_of(*v.x);
    return os.str();
}

// --- validate --------------------------------------------------------------

// Aggregated sides are checked agent by agent: the declared functions are
// the parts, and coherent parts give a coherent side.
struct DeclaredCheck {
    std::string name;
    ContractSet scope;  // global ids the function ranges over
    CoherenceReport report;
};

std::vector<DeclaredCheck> check_declared(const Instance& inst, int side, const CheckLimits& limits) {
    std::vector<DeclaredCheck> out;
    const ChoiceSpec& f = inst.side(side);
    if (const auto* agg = f.as<AggregateChoice>()) {
        const auto& names = side == 1 ? inst.agents_i : inst.agents_j;
        for (const auto& part : agg->parts) {
            CoherenceReport r = check_coherent(part.spec, limits);
            // report witnesses in global ids
            for (auto* list : {&r.contraction, &r.irc, &r.substitutes, &r.path_independence})
                for (auto& v : *list) {
                    v.a = expand(v.a, part.slice);
                    v.b = expand(v.b, part.slice);
                    if (v.x) v.x = expand(ContractSet::single(*v.x), part.slice).first();
                }
            out.push_back({names.at(static_cast<std::size_t>(part.agent.index)), part.slice, std::move(r)});
        }
    } else {
        out.push_back({"f" + std::to_string(side), inst.full(), check_coherent(f, limits)});
    }
    return out;
}

int cmd_validate(const Options& o) {
    const io::Loaded loaded = io::load_instance(o.path);
    const Instance& inst = loaded.instance;
    const CheckLimits limits = CheckLimits::from_env();
    bool ok = true;
    json report = {{"contracts", inst.universe}};
    std::vector<std::vector<DeclaredCheck>> sides;
    for (int side = 1; side <= 2; ++side) {
        sides.push_back(check_declared(inst, side, limits));
        json list = json::array();
        for (const auto& d : sides.back()) {
            json entry = io::coherence_json(inst, d.report);
            entry["function"] = d.name;
            list.push_back(entry);
            ok = ok && d.report.coherent();
        }
        report["f" + std::to_string(side)] = list;
    }
    std::optional<MoneyReport> money;
    std::optional<NoShortageReport> shortage;
    if (loaded.economy) {
        money = check_money_monotone(*loaded.economy);
        shortage = check_no_shortage(*loaded.economy, {});
        ok = ok && money->ok() && shortage->missing.empty();
        report["money"] = io::money_json(*loaded.economy, *money);
        report["no_shortage_tuples"] = io::no_shortage_json(*loaded.economy, *shortage);
    }
    report["ok"] = ok;
    with_seed(report, loaded.file);

    if (o.json) {
        emit(report);
    } else {
        for (int side = 1; side <= 2; ++side) {
            for (const auto& d : sides[static_cast<std::size_t>(side - 1)]) {
                const std::string label = d.name == "f" + std::to_string(side) ? d.name : "f" + std::to_string(side) + "/" + d.name;
                std::cout << label << ": ";
                if (d.report.coherent()) {
                    std::cout << "coherent\n";
                    continue;
                }
                std::cout << "not coherent\n";
                for (const auto* list : {&d.report.contraction, &d.report.irc, &d.report.substitutes})
                    for (const auto& v : *list) std::cout << "  " << render_violation(inst, v) << "\n";
            }
        }
        if (money) {
            std::cout << "money monotone: " << (money->ok() ? "yes" : "no") << "\n";
            std::cout << "every tuple present: " << (shortage->missing.empty() ? "yes" : "no") << "\n";
        }
    }
    return ok ? kOk : kCheckFailed;
}

// --- solve -----------------------------------------------------------------

int cmd_solve(const Options& o) {
    const io::Loaded loaded = io::load_instance(o.path);
    const Instance& inst = loaded.instance;
    const SolveResult r = run(inst, o.proposer);
    if (o.json) {
        json report = io::solve_json(inst, r, o.trace);
        with_seed(report, loaded.file);
        emit(report);
    } else {
        std::cout << "S = " << inst.render(r.outcome) << "\n";
        std::cout << "iterations: " << r.trace.iterations() << "\n";
        std::cout << "agreement: " << (r.verdict.agreement.holds ? "yes" : "no") << "\n";
        std::cout << "stable: " << (r.verdict.stability.holds ? "yes" : "no");
        if (r.verdict.stability.blocking_contract)
            std::cout << " (blocked by " << inst.name_of(*r.verdict.stability.blocking_contract) << ")";
        std::cout << "\n";
        std::cout << "verdict: " << (r.verdict.holds() ? "stable agreement" : "not stable") << "\n";
        if (!r.guarantees_apply) std::cout << "note: coherence not established, optimality not guaranteed\n";
        if (o.trace) std::cout << io::trace_text(inst, r.trace);
    }
    return o.require_stable && !r.verdict.holds() ? kCheckFailed : kOk;
}

// --- oracle / lattice --------------------------------------------------------

OracleMode oracle_mode(const std::string& mode) { return mode == "full" ? OracleMode::full : OracleMode::singleton; }

int cmd_oracle(const Options& o) {
    const io::Loaded loaded = io::load_instance(o.path);
    const Instance& inst = loaded.instance;
    const StableSetCatalog cat = enumerate_stable_agreements(inst, oracle_mode(o.mode));
    json report = io::catalog_json(inst, cat);
    json matrix = json::array();
    for (std::size_t a = 0; a < cat.size(); ++a) {
        json row = json::array();
        for (std::size_t b = 0; b < cat.size(); ++b) row.push_back(cat.leq(a, b) ? 1 : 0);
        matrix.push_back(row);
    }
    report["matrix"] = matrix;
    report["mode"] = o.mode;
    with_seed(report, loaded.file);
    emit(report);
    return kOk;
}

int cmd_lattice(const Options& o) {
    const io::Loaded loaded = io::load_instance(o.path);
    const Instance& inst = loaded.instance;
    const StableSetCatalog cat = enumerate_stable_agreements(inst, oracle_mode(o.mode));

    json failures = json::array();
    std::size_t pairs = 0;
    for (std::size_t b = 0; b < cat.size(); ++b) {
        for (std::size_t c = 0; c < cat.size(); ++c) {
            ++pairs;
            const ContractSet sb = cat.agreements[b];
            const ContractSet sc = cat.agreements[c];
            const auto glb = brute_glb(cat, sb, sc);
            const auto lub = brute_lub(cat, sb, sc);
            const ContractSet m = meet(inst, sb, sc);
            const ContractSet j = join(inst, sb, sc);
            if (!glb || *glb != m)
                failures.push_back({{"op", "meet"},
                                    {"b", io::names_json(inst, sb)},
                                    {"c", io::names_json(inst, sc)},
                                    {"engine", io::names_json(inst, m)},
                                    {"oracle", glb ? io::names_json(inst, *glb) : json(nullptr)}});
            if (!lub || *lub != j)
                failures.push_back({{"op", "join"},
                                    {"b", io::names_json(inst, sb)},
                                    {"c", io::names_json(inst, sc)},
                                    {"engine", io::names_json(inst, j)},
                                    {"oracle", lub ? io::names_json(inst, *lub) : json(nullptr)}});
        }
    }
    // covering pairs of ≤_1
    json hasse = json::array();
    std::vector<std::pair<std::size_t, std::size_t>> covering;
    for (std::size_t a = 0; a < cat.size(); ++a) {
        for (std::size_t b = 0; b < cat.size(); ++b) {
            if (a == b || !cat.leq(a, b)) continue;
            bool covers = true;
            for (std::size_t c = 0; c < cat.size() && covers; ++c)
                if (c != a && c != b && cat.leq(a, c) && cat.leq(c, b)) covers = false;
            if (!covers) continue;
            hasse.push_back({io::names_json(inst, cat.agreements[a]), io::names_json(inst, cat.agreements[b])});
            covering.emplace_back(a, b);
        }
    }
    const bool ok = failures.empty();
    if (o.json) {
        json report = io::catalog_json(inst, cat);
        report["hasse"] = hasse;
        report["pairs_checked"] = pairs;
        report["failures"] = failures;
        report["ok"] = ok;
        with_seed(report, loaded.file);
        emit(report);
    } else {
        std::cout << cat.size() << " stable agreements\n";
        for (const auto& a : cat.agreements) std::cout << "  " << inst.render(a) << "\n";
        if (!hasse.empty()) std::cout << "covering pairs (lower <_1 upper):\n";
        for (const auto& [a, b] : covering)
            std::cout << "  " << inst.render(cat.agreements[a]) << " < " << inst.render(cat.agreements[b]) << "\n";
        std::cout << "meet/join checks: " << pairs << " pairs, " << failures.size() << " failures\n";
        for (const auto& f : failures) std::cout << "  " << f.dump() << "\n";
    }
    return ok ? kOk : kCheckFailed;
}

// --- market ----------------------------------------------------------------

int cmd_market(const Options& o) {
    const io::Loaded loaded = io::load_instance(o.path);
    if (!loaded.economy) throw parse_error("file has no market data (template/price per contract)", "/contracts");
    const MEconomy& e = *loaded.economy;
    const Instance& inst = e.instance;
    const bool all = o.check == "all";

    std::vector<ContractSet> agreements;
    bool agreements_stable = true;
    if (o.has_agreement) {
        const ContractSet a = parse_names(inst, o.agreement, "--agreement");
        agreements.push_back(a);
        agreements_stable = is_stable_agreement(inst, a).holds();
    } else {
        agreements = enumerate_stable_agreements(inst).agreements;
    }

    json report;
    bool ok = true;
    std::optional<bool> money_ok, shortage_ok;
    if (all || o.check == "money" || o.check == "two-prices") {
        const MoneyReport r = check_money_monotone(e);
        money_ok = r.ok();
        if (all || o.check == "money") {
            report["money"] = io::money_json(e, r);
            ok = ok && r.ok();
        }
    }
    if (all || o.check == "no-shortage" || o.check == "two-prices") {
        const NoShortageReport r = check_no_shortage(e, agreements);
        shortage_ok = r.ok();
        if (all || o.check == "no-shortage") {
            report["no_shortage"] = io::no_shortage_json(e, r);
            ok = ok && r.ok();
        }
    }
    if (all || o.check == "two-prices") {
        const bool hypotheses = agreements_stable && money_ok.value_or(false) && shortage_ok.value_or(false) &&
                                inst.known_coherent();
        json list = json::array();
        for (const ContractSet& a : agreements) {
            const TwoPricesReport r = check_two_prices(e, a, hypotheses);
            json entry = io::two_prices_json(e, a, r);
            json blockers = json::array();
            for (const auto& g : r.gaps)
                if (auto z = mid_price_blocker(e, a, g)) blockers.push_back(inst.name_of(*z));
            entry["mid_price_blockers"] = blockers;
            entry["stable"] = is_stable_agreement(inst, a).holds();
            list.push_back(entry);
            ok = ok && r.ok();
        }
        report["two_prices"] = list;
    }
    report["check"] = o.check;
    report["ok"] = ok;
    with_seed(report, loaded.file);

    if (o.json) {
        emit(report);
    } else {
        if (report.contains("money")) std::cout << "money monotone: " << (report["money"]["ok"].get<bool>() ? "pass" : "FAIL") << "\n";
        if (report.contains("no_shortage"))
            std::cout << "no shortage: " << (report["no_shortage"]["ok"].get<bool>() ? "pass" : "FAIL") << "\n";
        if (report.contains("two_prices")) {
            for (const auto& entry : report["two_prices"]) {
                std::cout << "two prices on " << entry["agreement"].dump() << ": "
                          << (entry["ok"].get<bool>() ? "pass" : "FAIL") << (entry["advisory"].get<bool>() ? " (advisory)" : "")
                          << "\n";
                for (const auto& g : entry["gaps"])
                    std::cout << "  " << g["low"].get<std::string>() << " and " << g["high"].get<std::string>()
                              << " straddle price " << g["between_price"] << "\n";
                for (const auto& z : entry["mid_price_blockers"])
                    std::cout << "  blocked by " << z.get<std::string>() << "\n";
            }
        }
    }
    return ok ? kOk : kCheckFailed;
}

// --- query -----------------------------------------------------------------

int cmd_query(const Options& o) {
    const io::Loaded loaded = io::load_instance(o.path);
    const Instance& inst = loaded.instance;
    const ChoiceSpec& f = inst.side(o.side);
    const ContractSet a = parse_names(inst, o.set_a, "--a");
    json report = {{"op", o.query_op}, {"side", o.side}, {"a", io::names_json(inst, a)}};
    if (o.query_op == "closure") {
        const ContractSet c = closure(f, a);
        report["closure"] = io::names_json(inst, c);
        if (!o.json) std::cout << "I_f" << o.side << "(" << inst.render(a) << ") = " << inst.render(c) << "\n";
    } else {
        const ContractSet b = parse_names(inst, o.set_b, "--b");
        report["b"] = io::names_json(inst, b);
        if (o.query_op == "prefers") {
            const PreferenceVerdict v = prefers(f, a, b, inst.status(o.side));
            report["holds"] = v.holds;
            report["witness"] = io::names_json(inst, v.witness);
            report["coherence_known"] = v.coherence_known;
            if (!o.json) {
                std::cout << inst.render(b) << " <=_f" << o.side << " " << inst.render(a) << ": "
                          << (v.holds ? "yes" : "no") << "  (f(A u B) = " << inst.render(v.witness) << ")\n";
                if (!v.coherence_known) std::cout << "note: coherence not established, relation may not be transitive\n";
            }
        } else {
            const bool same = indifferent(f, a, b);
            report["holds"] = same;
            if (!o.json) std::cout << inst.render(a) << " ~_f" << o.side << " " << inst.render(b) << ": " << (same ? "yes" : "no") << "\n";
        }
    }
    if (o.json) emit(report);
    return kOk;
}

// --- generate --------------------------------------------------------------

int cmd_generate(const Options& o) {
    io::InstanceFile f;
    if (o.kind == "coherent") {
        gen::CoherentShape shape;
        if (o.max_contracts > 0) shape.max_contracts = o.max_contracts;
        f = io::agent_file(gen::random_coherent_instance(o.seed, shape));
    } else if (o.kind == "marriage") {
        const auto p = gen::random_marriage(o.seed, o.max_contracts > 0 ? o.max_contracts : 4);
        f = io::marriage_file(p.men, p.women);
    } else {
        const auto recipe = gen::random_economy_recipe(o.seed, o.max_contracts > 0 ? o.max_contracts : 14);
        f = io::economy_file(recipe, gen::economy_from_recipe(recipe));
    }
    f.seed = o.seed;
    emit(io::to_json(f));
    return kOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"cmatch: matching with contracts"};
    app.require_subcommand(1);
    Options o;

    auto add_path = [&](CLI::App* sub) { sub->add_option("file", o.path, "instance file (JSON)")->required(); };
    auto add_json = [&](CLI::App* sub) { sub->add_flag("--json", o.json, "print a JSON report"); };
    auto add_mode = [&](CLI::App* sub) {
        sub->add_option("--mode", o.mode, "stability notion for the catalog")
            ->check(CLI::IsMember({"singleton", "full"}));
    };

    auto* validate = app.add_subcommand("validate", "check both sides for coherence (and market conditions)");
    add_path(validate);
    add_json(validate);

    auto* solve = app.add_subcommand("solve", "run deferred acceptance");
    add_path(solve);
    add_json(solve);
    solve->add_option("--proposer", o.proposer, "proposing side")->check(CLI::IsMember({1, 2}));
    solve->add_flag("--trace", o.trace, "include the per-iteration trace");
    solve->add_flag("--require-stable", o.require_stable, "exit 1 unless the outcome is a stable agreement");

    auto* lattice = app.add_subcommand("lattice", "catalog stable agreements and cross-check meet/join");
    add_path(lattice);
    add_json(lattice);
    add_mode(lattice);

    auto* oracle = app.add_subcommand("oracle", "brute-force catalog and relation matrix as JSON");
    add_path(oracle);
    add_mode(oracle);

    auto* market = app.add_subcommand("market", "price checks on a money economy");
    add_path(market);
    add_json(market);
    market->add_option("--check", o.check, "which check")
        ->check(CLI::IsMember({"no-shortage", "money", "two-prices", "all"}));
    market->add_option("--agreement", o.agreement, "comma-separated contract names (default: every stable agreement)");

    auto* query = app.add_subcommand("query", "revealed-preference queries");
    query->add_option("op", o.query_op, "prefers | indifferent | closure")
        ->required()
        ->check(CLI::IsMember({"prefers", "indifferent", "closure"}));
    add_path(query);
    add_json(query);
    query->add_option("--side", o.side, "1 or 2")->check(CLI::IsMember({1, 2}));
    query->add_option("--a", o.set_a, "comma-separated contract names")->required();
    query->add_option("--b", o.set_b, "comma-separated contract names");

    auto* generate = app.add_subcommand("generate", "write a seeded random instance file to stdout");
    generate->add_option("kind", o.kind, "coherent | marriage | economy")
        ->check(CLI::IsMember({"coherent", "marriage", "economy"}));
    generate->add_option("--seed", o.seed, "random seed")->required();
    generate->add_option("--max", o.max_contracts, "size cap (contracts; agents per side for marriage)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kBadInput;
    }
    o.has_agreement = market->count("--agreement") > 0;

    try {
        if (*validate) return cmd_validate(o);
        if (*solve) return cmd_solve(o);
        if (*lattice) return cmd_lattice(o);
        if (*oracle) return cmd_oracle(o);
        if (*market) return cmd_market(o);
        if (*query) {
            if (o.query_op != "closure" && query->count("--b") == 0) {
                std::cerr << "error: " << o.query_op << " needs --b\n";
                return kBadInput;
            }
            return cmd_query(o);
        }
        if (*generate) return cmd_generate(o);
    } catch (const parse_error& e) {
        std::cerr << "error: " << e.what();
        if (!e.where().empty()) std::cerr << " at " << e.where();
        std::cerr << "\n";
        return kBadInput;
    } catch (const size_error& e) {
        std::cerr << "error: " << e.what() << " (size " << e.size() << " exceeds bound " << e.bound() << ")\n";
        return kTooLarge;
    } catch (const spec_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kBadInput;
    } catch (const domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kBadInput;
    } catch (const precondition_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kCheckFailed;
    }
    return kOk;
}
