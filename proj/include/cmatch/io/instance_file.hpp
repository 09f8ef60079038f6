#pragma once

// JSON instance files.
//
//   {
//     "schema_version": 1,
//     "contracts": ["a", "b"]                       plain names, or objects
//                | [{"name": "m1:w1", "producer": "m1", "consumer": "w1",
//                    "template": "t1", "price": 10}, ...],
//     "agents":    {"I": ["m1", ...], "J": ["w1", ...]},
//     "sides":     {"f1": <spec>, "f2": <spec>},    side-level functions, or
//     "choices":   {"m1": <spec>, "w1": <spec>},    per-agent functions
//     "prices":    [10, 11, 12],                    market data (optional)
//     "templates": ["t1"],
//     "seed":      42                               generator seed (optional)
//   }
//
// A side without an entry in "sides" is aggregated from the "choices" of
// its agents. Specs name contracts of their own scope: the whole universe
// for side-level specs, the agent's contracts for per-agent ones. Subsets
// are always written as name arrays in contract order.
//
// <spec> is one of
//   {"type": "identity"}
//   {"type": "table", "rows": [{"in": [...], "out": [...]}, ...]}   all 2^k rows
//   {"type": "top_of_order", "order": [...]}
//   {"type": "responsive_quota", "order": [...], "quota": q}
//   {"type": "union_of_orders", "orders": [[...], ...]}
//   {"type": "valuation", "values": [{"set": [...], "value": "3/2"}, ...],
//        optional "epsilon": "1/8", "prices": ["1/16", ...]}
//   {"type": "linear_producer", "unit_cost": {"t1": 10}}           market only
//   {"type": "unit_demand", "willingness": {"t1": 12}}             market only

#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"

#include "cmatch/aggregation.hpp"
#include "cmatch/choice.hpp"
#include "cmatch/generators.hpp"
#include "cmatch/instance.hpp"
#include "cmatch/market.hpp"

namespace cmatch::io {

using nlohmann::json;

inline constexpr int kSchemaVersion = 1;

/// Market builder parameters, kept symbolic so files round-trip.
struct LinearProducerDoc {
    std::vector<std::int64_t> unit_cost;  // per template
    friend bool operator==(const LinearProducerDoc&, const LinearProducerDoc&) = default;
};

struct UnitDemandDoc {
    std::vector<std::int64_t> willingness;  // per template
    friend bool operator==(const UnitDemandDoc&, const UnitDemandDoc&) = default;
};

using SpecDoc = std::variant<ChoiceSpec, LinearProducerDoc, UnitDemandDoc>;

/// Parsed contents of an instance file.
struct InstanceFile {
    int schema_version = kSchemaVersion;
    std::vector<std::string> contracts;
    std::vector<std::string> agents_i;
    std::vector<std::string> agents_j;
    std::optional<std::vector<ContractLabel>> labels;
    std::optional<std::vector<MarketContract>> market;
    std::optional<PriceGrid> grid;
    std::vector<std::string> templates;
    std::optional<ChoiceSpec> f1;
    std::optional<ChoiceSpec> f2;
    std::map<AgentId, SpecDoc> choices;
    std::optional<std::uint64_t> seed;

    friend bool operator==(const InstanceFile& a, const InstanceFile& b) {
        return a.schema_version == b.schema_version && a.contracts == b.contracts && a.agents_i == b.agents_i &&
               a.agents_j == b.agents_j && a.labels == b.labels && a.market == b.market &&
               ((!a.grid && !b.grid) || (a.grid && b.grid && a.grid->values == b.grid->values)) &&
               a.templates == b.templates && a.f1 == b.f1 && a.f2 == b.f2 && a.choices == b.choices &&
               a.seed == b.seed;
    }
};

/// An instance ready to solve, plus its economy when the file had market data.
struct Loaded {
    InstanceFile file;
    Instance instance;
    std::optional<MEconomy> economy;
};

// ---------------------------------------------------------------------------

namespace detail {

class Scope {
public:
    Scope(const std::vector<std::string>& all, ContractSet members) : all_(&all), members_(members) {
        int local = 0;
        for (ContractId id : members) index_[all[static_cast<std::size_t>(id)]] = local++;
    }

    int size() const { return members_.size(); }

    ContractId local(const std::string& name, const std::string& where) const {
        auto it = index_.find(name);
        if (it == index_.end()) throw parse_error("unknown contract '" + name + "' in this scope", where);
        return it->second;
    }

    std::string name(ContractId local) const {
        return (*all_)[static_cast<std::size_t>(expand(ContractSet::single(local), members_).first())];
    }

    ContractSet set(const json& arr, const std::string& where) const {
        if (!arr.is_array()) throw parse_error("expected an array of contract names", where);
        ContractSet s;
        for (std::size_t k = 0; k < arr.size(); ++k) {
            if (!arr[k].is_string()) throw parse_error("expected a contract name", where + "/" + std::to_string(k));
            s.insert(local(arr[k].get<std::string>(), where + "/" + std::to_string(k)));
        }
        return s;
    }

    std::vector<ContractId> order(const json& arr, const std::string& where) const {
        if (!arr.is_array()) throw parse_error("expected an array of contract names", where);
        std::vector<ContractId> out;
        for (std::size_t k = 0; k < arr.size(); ++k) {
            if (!arr[k].is_string()) throw parse_error("expected a contract name", where + "/" + std::to_string(k));
            out.push_back(local(arr[k].get<std::string>(), where + "/" + std::to_string(k)));
        }
        return out;
    }

    json names(ContractSet local_set) const {
        json arr = json::array();
        for (ContractId x : local_set) arr.push_back(name(x));
        return arr;
    }

    json names(const std::vector<ContractId>& order) const {
        json arr = json::array();
        for (ContractId x : order) arr.push_back(name(x));
        return arr;
    }

private:
    const std::vector<std::string>* all_;
    ContractSet members_;
    std::map<std::string, int> index_;
};

inline Rational parse_rational(const json& j, const std::string& where) {
    try {
        if (j.is_number_integer()) return Rational(j.get<std::int64_t>());
        if (j.is_string()) {
            const std::string s = j.get<std::string>();
            const auto slash = s.find('/');
            if (slash == std::string::npos) return Rational(std::stoll(s));
            return Rational(std::stoll(s.substr(0, slash)), std::stoll(s.substr(slash + 1)));
        }
    } catch (const std::exception&) {
    }
    throw parse_error("expected an integer or a \"p/q\" rational", where);
}

inline json rational_json(const Rational& r) {
    if (r.denominator() == 1) return r.numerator();
    return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

inline const json& need(const json& obj, const char* key, const std::string& where) {
    if (!obj.is_object() || !obj.contains(key)) throw parse_error(std::string("missing field '") + key + "'", where);
    return obj.at(key);
}

inline std::string need_string(const json& j, const std::string& where) {
    if (!j.is_string()) throw parse_error("expected a string", where);
    return j.get<std::string>();
}

template <typename Fn>
auto wrap_spec_errors(const std::string& where, Fn&& fn) {
    try {
        return fn();
    } catch (const spec_error& e) {
        throw parse_error(e.what(), where);
    }
}

inline std::vector<std::int64_t> per_template(const json& obj, const std::vector<std::string>& templates,
                                              const std::string& where) {
    if (!obj.is_object()) throw parse_error("expected an object keyed by template", where);
    std::vector<std::int64_t> out(templates.size(), 0);
    std::vector<char> seen(templates.size(), 0);
    for (const auto& [key, value] : obj.items()) {
        auto it = std::find(templates.begin(), templates.end(), key);
        if (it == templates.end()) throw parse_error("unknown template '" + key + "'", where + "/" + key);
        if (!value.is_number_integer()) throw parse_error("expected an integer", where + "/" + key);
        const auto t = static_cast<std::size_t>(it - templates.begin());
        out[t] = value.get<std::int64_t>();
        seen[t] = 1;
    }
    for (std::size_t t = 0; t < templates.size(); ++t) {
        if (!seen[t]) throw parse_error("no value for template '" + templates[t] + "'", where);
    }
    return out;
}

inline json per_template_json(const std::vector<std::int64_t>& values, const std::vector<std::string>& templates) {
    json obj = json::object();
    for (std::size_t t = 0; t < templates.size() && t < values.size(); ++t) obj[templates[t]] = values[t];
    return obj;
}

} // namespace detail

/// Spec kinds that are coherent whatever their parameters. Market builder
/// docs are too; tables and valuations need checking.
inline bool coherent_by_construction(const ChoiceSpec& spec) {
    if (const auto* agg = spec.as<AggregateChoice>()) {
        return std::all_of(agg->parts.begin(), agg->parts.end(),
                           [](const AgentPart& p) { return coherent_by_construction(p.spec); });
    }
    return spec.as<IdentityChoice>() || spec.as<TopOfOrderChoice>() || spec.as<ResponsiveQuotaChoice>() ||
           spec.as<UnionOfOrdersChoice>();
}

/// Parses one <spec> block over `scope`.
inline SpecDoc parse_spec(const json& j, const detail::Scope& scope, const std::vector<std::string>& templates,
                          bool market, const std::string& where) {
    using namespace detail;
    if (!j.is_object()) throw parse_error("expected a choice-spec object", where);
    const std::string type = need_string(need(j, "type", where), where + "/type");
    const int k = scope.size();

    if (type == "identity") return identity_choice(k);

    if (type == "table") {
        const json& rows = need(j, "rows", where);
        if (!rows.is_array()) throw parse_error("expected an array of rows", where + "/rows");
        std::vector<std::optional<ContractSet>> table(std::size_t{1} << k);
        for (std::size_t r = 0; r < rows.size(); ++r) {
            const std::string rw = where + "/rows/" + std::to_string(r);
            const ContractSet in = scope.set(need(rows[r], "in", rw), rw + "/in");
            const ContractSet out = scope.set(need(rows[r], "out", rw), rw + "/out");
            if (table[in.mask()]) throw parse_error("duplicate row", rw);
            table[in.mask()] = out;
        }
        std::vector<ContractSet> full(table.size());
        for (std::size_t m = 0; m < table.size(); ++m) {
            if (!table[m]) {
                json missing = scope.names(ContractSet::from_mask(m));
                throw parse_error("table has no row for " + missing.dump(), where + "/rows");
            }
            full[m] = *table[m];
        }
        return wrap_spec_errors(where, [&] { return table_choice(k, std::move(full)); });
    }

    if (type == "top_of_order") {
        auto order = scope.order(need(j, "order", where), where + "/order");
        return wrap_spec_errors(where, [&] { return top_of_order(k, std::move(order)); });
    }

    if (type == "responsive_quota") {
        auto order = scope.order(need(j, "order", where), where + "/order");
        const json& q = need(j, "quota", where);
        if (!q.is_number_integer()) throw parse_error("expected an integer quota", where + "/quota");
        return wrap_spec_errors(where, [&] { return responsive_quota(k, std::move(order), q.get<int>()); });
    }

    if (type == "union_of_orders") {
        const json& orders = need(j, "orders", where);
        if (!orders.is_array()) throw parse_error("expected an array of orders", where + "/orders");
        std::vector<std::vector<ContractId>> list;
        for (std::size_t r = 0; r < orders.size(); ++r)
            list.push_back(scope.order(orders[r], where + "/orders/" + std::to_string(r)));
        return wrap_spec_errors(where, [&] { return union_of_orders_choice(k, std::move(list)); });
    }

    if (type == "valuation") {
        const json& values = need(j, "values", where);
        if (!values.is_array()) throw parse_error("expected an array of values", where + "/values");
        std::vector<std::optional<Rational>> table(std::size_t{1} << k);
        for (std::size_t r = 0; r < values.size(); ++r) {
            const std::string rw = where + "/values/" + std::to_string(r);
            const ContractSet s = scope.set(need(values[r], "set", rw), rw + "/set");
            if (table[s.mask()]) throw parse_error("duplicate valuation entry", rw);
            table[s.mask()] = parse_rational(need(values[r], "value", rw), rw + "/value");
        }
        std::vector<Rational> full(table.size());
        for (std::size_t m = 0; m < table.size(); ++m) {
            if (!table[m]) throw parse_error("valuation misses " + scope.names(ContractSet::from_mask(m)).dump(), where);
            full[m] = *table[m];
        }
        PerturbationScheme scheme = dyadic_scheme(full, k);
        if (j.contains("epsilon")) {
            scheme.epsilon = parse_rational(j["epsilon"], where + "/epsilon");
            if (j.contains("prices")) {
                const json& prices = j["prices"];
                if (!prices.is_array() || prices.size() != static_cast<std::size_t>(k))
                    throw parse_error("expected one price per contract", where + "/prices");
                scheme.prices.clear();
                for (std::size_t x = 0; x < prices.size(); ++x)
                    scheme.prices.push_back(parse_rational(prices[x], where + "/prices/" + std::to_string(x)));
            } else {
                if (scheme.epsilon <= Rational{}) throw parse_error("epsilon must be positive", where + "/epsilon");
                scheme = dyadic_scheme(k, scheme.epsilon);
            }
        }
        return wrap_spec_errors(where, [&] { return valuation_choice(std::move(full), std::move(scheme)); });
    }

    if (type == "linear_producer" || type == "unit_demand") {
        if (!market) throw parse_error("'" + type + "' requires market contracts", where + "/type");
        if (type == "linear_producer")
            return LinearProducerDoc{per_template(need(j, "unit_cost", where), templates, where + "/unit_cost")};
        return UnitDemandDoc{per_template(need(j, "willingness", where), templates, where + "/willingness")};
    }

    throw parse_error("unknown choice-spec type '" + type + "'", where + "/type");
}

/// Writes one spec over `scope`.
inline json spec_to_json(const SpecDoc& doc, const detail::Scope& scope, const std::vector<std::string>& templates) {
    using namespace detail;
    if (const auto* lp = std::get_if<LinearProducerDoc>(&doc))
        return {{"type", "linear_producer"}, {"unit_cost", per_template_json(lp->unit_cost, templates)}};
    if (const auto* ud = std::get_if<UnitDemandDoc>(&doc))
        return {{"type", "unit_demand"}, {"willingness", per_template_json(ud->willingness, templates)}};

    const ChoiceSpec& spec = std::get<ChoiceSpec>(doc);
    json j;
    j["type"] = spec.kind();
    if (spec.as<IdentityChoice>()) return j;
    if (const auto* t = spec.as<TableChoice>()) {
        json rows = json::array();
        for (std::size_t m = 0; m < t->rows.size(); ++m)
            rows.push_back({{"in", scope.names(ContractSet::from_mask(m))}, {"out", scope.names(t->rows[m])}});
        j["rows"] = rows;
    } else if (const auto* o = spec.as<TopOfOrderChoice>()) {
        j["order"] = scope.names(o->order);
    } else if (const auto* q = spec.as<ResponsiveQuotaChoice>()) {
        j["order"] = scope.names(q->order);
        j["quota"] = q->quota;
    } else if (const auto* u = spec.as<UnionOfOrdersChoice>()) {
        json orders = json::array();
        for (const auto& order : u->orders) orders.push_back(scope.names(order));
        j["orders"] = orders;
    } else if (const auto* v = spec.as<ValuationChoice>()) {
        json values = json::array();
        for (std::size_t m = 0; m < v->values.size(); ++m)
            values.push_back({{"set", scope.names(ContractSet::from_mask(m))}, {"value", rational_json(v->values[m])}});
        j["values"] = values;
        j["epsilon"] = rational_json(v->scheme.epsilon);
        json prices = json::array();
        for (const auto& p : v->scheme.prices) prices.push_back(rational_json(p));
        j["prices"] = prices;
    } else {
        throw spec_error("aggregate specs are written as per-agent choices");
    }
    return j;
}

// ---------------------------------------------------------------------------

inline InstanceFile parse_instance_json(const json& root) {
    using namespace detail;
    if (!root.is_object()) throw parse_error("instance file must be a JSON object", "");
    InstanceFile f;
    if (root.contains("schema_version")) {
        if (!root["schema_version"].is_number_integer() || root["schema_version"].get<int>() != kSchemaVersion)
            throw parse_error("unsupported schema_version", "/schema_version");
    }
    if (root.contains("seed")) {
        if (!root["seed"].is_number_unsigned()) throw parse_error("seed must be a non-negative integer", "/seed");
        f.seed = root["seed"].get<std::uint64_t>();
    }
    if (root.contains("agents")) {
        const json& agents = root["agents"];
        for (const char* side : {"I", "J"}) {
            if (!agents.contains(side)) continue;
            auto& out = std::string(side) == "I" ? f.agents_i : f.agents_j;
            const json& list = agents[side];
            if (!list.is_array()) throw parse_error("expected an array of agent names", std::string("/agents/") + side);
            for (std::size_t k = 0; k < list.size(); ++k)
                out.push_back(need_string(list[k], std::string("/agents/") + side + "/" + std::to_string(k)));
        }
    }
    auto agent_index = [&](const std::vector<std::string>& names, const std::string& who, const std::string& where) {
        auto it = std::find(names.begin(), names.end(), who);
        if (it == names.end()) throw parse_error("unknown agent '" + who + "'", where);
        return static_cast<int>(it - names.begin());
    };

    if (root.contains("templates")) {
        const json& t = root["templates"];
        if (!t.is_array()) throw parse_error("expected an array of template names", "/templates");
        for (std::size_t k = 0; k < t.size(); ++k) f.templates.push_back(need_string(t[k], "/templates/" + std::to_string(k)));
    }
    if (root.contains("prices")) {
        const json& p = root["prices"];
        if (!p.is_array()) throw parse_error("expected an array of prices", "/prices");
        PriceGrid grid;
        for (std::size_t k = 0; k < p.size(); ++k) {
            if (!p[k].is_number_integer()) throw parse_error("expected an integer price", "/prices/" + std::to_string(k));
            grid.values.push_back(p[k].get<std::int64_t>());
        }
        wrap_spec_errors("/prices", [&] { grid.validate(); return 0; });
        f.grid = grid;
    }

    const json& contracts = need(root, "contracts", "");
    if (!contracts.is_array()) throw parse_error("expected an array of contracts", "/contracts");
    if (contracts.size() > static_cast<std::size_t>(kMaxContracts))
        throw parse_error("more than 64 contracts", "/contracts");
    std::vector<ContractLabel> labels;
    std::vector<MarketContract> market;
    bool any_labels = false, any_market = false;
    for (std::size_t k = 0; k < contracts.size(); ++k) {
        const std::string where = "/contracts/" + std::to_string(k);
        const json& c = contracts[k];
        if (c.is_string()) {
            f.contracts.push_back(c.get<std::string>());
            continue;
        }
        f.contracts.push_back(need_string(need(c, "name", where), where + "/name"));
        if (c.contains("producer") || c.contains("consumer")) {
            any_labels = true;
            const int i = agent_index(f.agents_i, need_string(need(c, "producer", where), where + "/producer"), where + "/producer");
            const int j = agent_index(f.agents_j, need_string(need(c, "consumer", where), where + "/consumer"), where + "/consumer");
            labels.resize(k + 1);
            labels[k] = {{Side::I, i}, {Side::J, j}};
        }
        if (c.contains("template") || c.contains("price")) {
            any_market = true;
            if (!f.grid) throw parse_error("market contracts need a 'prices' grid", where);
            const std::string t = need_string(need(c, "template", where), where + "/template");
            auto it = std::find(f.templates.begin(), f.templates.end(), t);
            if (it == f.templates.end()) throw parse_error("unknown template '" + t + "'", where + "/template");
            const json& price = need(c, "price", where);
            if (!price.is_number_integer()) throw parse_error("expected an integer price", where + "/price");
            const auto level = f.grid->level_of(price.get<std::int64_t>());
            if (!level) throw parse_error("price not on the grid", where + "/price");
            market.resize(k + 1);
            market[k].item = static_cast<int>(it - f.templates.begin());
            market[k].price = *level;
        }
    }
    {
        std::vector<std::string> sorted = f.contracts;
        std::sort(sorted.begin(), sorted.end());
        if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
            throw parse_error("duplicate contract name", "/contracts");
    }
    const std::size_t n = f.contracts.size();
    if (any_labels) {
        if (labels.size() != n) labels.resize(n, ContractLabel{{Side::I, -1}, {Side::J, -1}});
        for (std::size_t k = 0; k < n; ++k) {
            if (!contracts[k].is_object() || !contracts[k].contains("producer"))
                throw parse_error("every contract needs 'producer' and 'consumer' once any has", "/contracts/" + std::to_string(k));
        }
        f.labels = labels;
    }
    if (any_market) {
        if (!any_labels) throw parse_error("market contracts need 'producer' and 'consumer'", "/contracts");
        for (std::size_t k = 0; k < n; ++k) {
            if (!contracts[k].is_object() || !contracts[k].contains("template"))
                throw parse_error("every contract needs 'template' and 'price' once any has",
                                  "/contracts/" + std::to_string(k));
            market[k].producer = labels[k].producer;
            market[k].consumer = labels[k].consumer;
        }
        f.market = market;
    }

    const ContractSet universe = ContractSet::full(static_cast<int>(n));
    const Scope whole(f.contracts, universe);
    if (root.contains("sides")) {
        const json& sides = root["sides"];
        if (!sides.is_object()) throw parse_error("expected an object", "/sides");
        for (const auto& [key, value] : sides.items()) {
            if (key != "f1" && key != "f2") throw parse_error("unknown side '" + key + "'", "/sides/" + key);
            SpecDoc doc = parse_spec(value, whole, f.templates, false, "/sides/" + key);
            (key == "f1" ? f.f1 : f.f2) = std::get<ChoiceSpec>(doc);
        }
    }
    if (root.contains("choices")) {
        const json& choices = root["choices"];
        if (!choices.is_object()) throw parse_error("expected an object", "/choices");
        if (!f.labels) throw parse_error("per-agent choices need contracts with 'producer' and 'consumer'", "/choices");
        for (const auto& [key, value] : choices.items()) {
            const std::string where = "/choices/" + key;
            std::optional<AgentId> agent;
            for (std::size_t a = 0; a < f.agents_i.size(); ++a)
                if (f.agents_i[a] == key) agent = AgentId{Side::I, static_cast<int>(a)};
            for (std::size_t a = 0; a < f.agents_j.size(); ++a)
                if (f.agents_j[a] == key) {
                    if (agent) throw parse_error("agent name '" + key + "' is on both sides", where);
                    agent = AgentId{Side::J, static_cast<int>(a)};
                }
            if (!agent) throw parse_error("unknown agent '" + key + "'", where);
            const Scope slice(f.contracts, slice_of(owners_on(*f.labels, agent->side), *agent));
            f.choices.emplace(*agent, parse_spec(value, slice, f.templates, f.market.has_value(), where));
        }
    }
    for (int side = 1; side <= 2; ++side) {
        const bool has_side = side == 1 ? f.f1.has_value() : f.f2.has_value();
        if (has_side) continue;
        const auto& agents = side == 1 ? f.agents_i : f.agents_j;
        const Side s = side == 1 ? Side::I : Side::J;
        if (!f.labels) throw parse_error("side f" + std::to_string(side) + " has no choice function", "/sides");
        for (std::size_t a = 0; a < agents.size(); ++a) {
            if (!f.choices.count(AgentId{s, static_cast<int>(a)}))
                throw parse_error("agent '" + agents[a] + "' has no choice function", "/choices");
        }
    }
    return f;
}

inline json to_json(const InstanceFile& f) {
    using namespace detail;
    json root;
    root["schema_version"] = f.schema_version;
    if (f.seed) root["seed"] = *f.seed;
    if (!f.agents_i.empty() || !f.agents_j.empty()) root["agents"] = {{"I", f.agents_i}, {"J", f.agents_j}};
    if (f.grid) root["prices"] = f.grid->values;
    if (!f.templates.empty()) root["templates"] = f.templates;
    json contracts = json::array();
    for (std::size_t k = 0; k < f.contracts.size(); ++k) {
        if (!f.labels) {
            contracts.push_back(f.contracts[k]);
            continue;
        }
        json c = {{"name", f.contracts[k]},
                  {"producer", f.agents_i.at(static_cast<std::size_t>((*f.labels)[k].producer.index))},
                  {"consumer", f.agents_j.at(static_cast<std::size_t>((*f.labels)[k].consumer.index))}};
        if (f.market) {
            c["template"] = f.templates.at(static_cast<std::size_t>((*f.market)[k].item));
            c["price"] = f.grid->value((*f.market)[k].price);
        }
        contracts.push_back(c);
    }
    root["contracts"] = contracts;
    const Scope whole(f.contracts, ContractSet::full(static_cast<int>(f.contracts.size())));
    if (f.f1 || f.f2) {
        json sides = json::object();
        if (f.f1) sides["f1"] = spec_to_json(*f.f1, whole, f.templates);
        if (f.f2) sides["f2"] = spec_to_json(*f.f2, whole, f.templates);
        root["sides"] = sides;
    }
    if (!f.choices.empty()) {
        json choices = json::object();
        for (const auto& [agent, doc] : f.choices) {
            const auto& names = agent.side == Side::I ? f.agents_i : f.agents_j;
            const Scope slice(f.contracts, slice_of(owners_on(*f.labels, agent.side), agent));
            choices[names.at(static_cast<std::size_t>(agent.index))] = spec_to_json(doc, slice, f.templates);
        }
        root["choices"] = choices;
    }
    return root;
}

/// Resolves the file into an Instance (and an MEconomy with market data).
inline Loaded build(const InstanceFile& f) {
    Loaded out;
    out.file = f;
    const int n = static_cast<int>(f.contracts.size());

    std::map<AgentId, ChoiceSpec> compiled;
    for (const auto& [agent, doc] : f.choices) {
        if (const auto* spec = std::get_if<ChoiceSpec>(&doc)) {
            compiled.emplace(agent, *spec);
            continue;
        }
        const auto local = local_contracts(*f.market, slice_of(owners_on(*f.labels, agent.side), agent));
        if (const auto* lp = std::get_if<LinearProducerDoc>(&doc)) {
            if (agent.side != Side::I) throw parse_error("linear_producer must be a side-I agent", "/choices");
            compiled.emplace(agent, build_linear_producer(local, *f.grid, lp->unit_cost));
        } else {
            const auto& ud = std::get<UnitDemandDoc>(doc);
            if (agent.side != Side::J) throw parse_error("unit_demand must be a side-J agent", "/choices");
            compiled.emplace(agent, build_unit_demand_consumer(local, *f.grid, ud.willingness));
        }
    }

    auto settle_status = [&](Instance& inst) {
        for (int side = 1; side <= 2; ++side) {
            const std::optional<ChoiceSpec>& own = side == 1 ? f.f1 : f.f2;
            const Side s = side == 1 ? Side::I : Side::J;
            bool structural = own ? coherent_by_construction(*own) : true;
            if (!own) {
                for (const auto& [agent, doc] : f.choices) {
                    if (agent.side != s) continue;
                    const auto* spec = std::get_if<ChoiceSpec>(&doc);
                    if (spec && !coherent_by_construction(*spec)) structural = false;
                }
            }
            (side == 1 ? inst.status1 : inst.status2) =
                structural ? CoherenceStatus::asserted : CoherenceStatus::unknown;
        }
    };

    if (f.market) {
        out.economy = build_economy(*f.market, *f.grid, f.templates, f.agents_i, f.agents_j, compiled, f.contracts);
        out.instance = out.economy->instance;
        if (f.f1) out.instance.f1 = *f.f1;
        if (f.f2) out.instance.f2 = *f.f2;
        settle_status(out.instance);
        out.economy->instance = out.instance;
        return out;
    }

    Instance& inst = out.instance;
    inst.universe = n;
    inst.names = f.contracts;
    inst.agents_i = f.agents_i;
    inst.agents_j = f.agents_j;
    inst.labels = f.labels;
    auto side_from_agents = [&](Side side) {
        std::map<AgentId, ChoiceSpec> parts;
        for (const auto& [agent, spec] : compiled)
            if (agent.side == side) parts.emplace(agent, spec);
        try {
            return aggregate_side(parts, owners_on(*f.labels, side));
        } catch (const spec_error& e) {
            throw parse_error(e.what(), "/choices");
        }
    };
    inst.f1 = f.f1 ? *f.f1 : side_from_agents(Side::I);
    inst.f2 = f.f2 ? *f.f2 : side_from_agents(Side::J);
    settle_status(inst);
    return out;
}

inline InstanceFile parse_instance_text(const std::string& text) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& e) {
        throw parse_error(std::string("invalid JSON: ") + e.what(), "");
    }
    return parse_instance_json(root);
}

inline Loaded load_instance(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw parse_error("cannot open '" + path + "'", "");
    std::stringstream buf;
    buf << in.rdbuf();
    return build(parse_instance_text(buf.str()));
}

/// Instance file for a marriage profile (per-agent top-of-order choices).
inline InstanceFile marriage_file(const std::vector<PreferenceList>& men, const std::vector<PreferenceList>& women) {
    const Instance inst = build_marriage_instance(men, women);
    InstanceFile f;
    f.contracts = inst.names;
    f.agents_i = inst.agents_i;
    f.agents_j = inst.agents_j;
    f.labels = inst.labels;
    for (const auto& part : inst.f1.as<AggregateChoice>()->parts) f.choices.emplace(part.agent, part.spec);
    for (const auto& part : inst.f2.as<AggregateChoice>()->parts) f.choices.emplace(part.agent, part.spec);
    return f;
}

/// Instance file for any agent-built instance (both sides aggregates).
inline InstanceFile agent_file(const Instance& inst) {
    InstanceFile f;
    f.contracts = inst.names;
    f.agents_i = inst.agents_i;
    f.agents_j = inst.agents_j;
    f.labels = inst.labels;
    for (const ChoiceSpec* side : {&inst.f1, &inst.f2}) {
        const auto* agg = side->as<AggregateChoice>();
        if (!agg) throw spec_error("agent_file needs aggregate sides");
        for (const auto& part : agg->parts) f.choices.emplace(part.agent, part.spec);
    }
    return f;
}

/// Instance file for a generated economy.
inline InstanceFile economy_file(const gen::EconomyRecipe& r, const MEconomy& e) {
    InstanceFile f;
    f.contracts = e.instance.names;
    f.agents_i = e.instance.agents_i;
    f.agents_j = e.instance.agents_j;
    f.labels = e.instance.labels;
    f.market = e.contracts;
    f.grid = e.grid;
    f.templates = e.templates;
    for (int i = 0; i < r.producers; ++i)
        f.choices.emplace(AgentId{Side::I, i}, LinearProducerDoc{r.unit_cost[static_cast<std::size_t>(i)]});
    for (int j = 0; j < r.consumers; ++j)
        f.choices.emplace(AgentId{Side::J, j}, UnitDemandDoc{r.willingness[static_cast<std::size_t>(j)]});
    return f;
}

} // namespace cmatch::io
