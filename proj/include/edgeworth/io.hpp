#pragma once

#include <optional>
#include <set>
#include <string>

#include <json.hpp>

#include "oracle.hpp"

namespace edgeworth {

using json = nlohmann::ordered_json;

namespace detail {
inline json number_or_null(double v)
{
    if (std::isfinite(v))
        return v;
    return nullptr;
}

inline void reject_unknown(const json& j, const std::set<std::string>& known, const char* what)
{
    if (!j.is_object())
        throw InvalidProfile(std::string(what) + ": expected a JSON object");
    for (const auto& [k, v] : j.items())
        if (!known.count(k))
            throw InvalidProfile(std::string(what) + ": unknown field \"" + k + "\"");
}

template <class T>
std::optional<T> opt_field(const json& j, const char* key)
{
    if (!j.contains(key) || j.at(key).is_null())
        return std::nullopt;
    try {
        return j.at(key).get<T>();
    } catch (const json::exception&) {
        throw InvalidProfile(std::string("field \"") + key + "\" has the wrong type");
    }
}
} // namespace detail

inline json to_json(const MomentProfile& p)
{
    return {{"n", p.n},
            {"K4", p.K4},
            {"K3", p.K3},
            {"K3_tilde", p.K3_tilde},
            {"lambda3", p.lambda3},
            {"setting", to_string(p.setting)},
            {"no_skew", p.no_skew}};
}

// Missing K3, K3_tilde, lambda3 take their worst-case defaults.
inline MomentProfile profile_from_json(const json& j, const ProfileOptions& opt = {})
{
    detail::reject_unknown(j, {"n", "K4", "K3", "K3_tilde", "lambda3", "setting", "no_skew"}, "profile");
    const auto n = detail::opt_field<std::int64_t>(j, "n");
    const auto K4 = detail::opt_field<double>(j, "K4");
    if (!n || !K4)
        throw InvalidProfile("profile: fields \"n\" and \"K4\" are required");
    const auto setting = detail::opt_field<std::string>(j, "setting");
    return make_profile(*n, *K4, detail::opt_field<double>(j, "K3"), detail::opt_field<double>(j, "K3_tilde"),
                        detail::opt_field<double>(j, "lambda3"), setting ? parse_setting(*setting) : Setting::inid,
                        detail::opt_field<bool>(j, "no_skew").value_or(false), opt);
}

inline json to_json(const std::vector<Term>& ts)
{
    json a = json::array();
    for (const auto& t : ts)
        a.push_back({{"label", t.label}, {"value", detail::number_or_null(t.value)}});
    return a;
}

inline json to_json(const BoundResult& r)
{
    return {{"total", detail::number_or_null(r.total)},
            {"finite", r.finite},
            {"leading", r.leading},
            {"second_order", r.second_order},
            {"remainder", detail::number_or_null(r.remainder)},
            {"integral_term", detail::number_or_null(r.integral_term)},
            {"regime", to_string(r.regime)},
            {"theorem", to_string(r.theorem)},
            {"breakdown", to_json(r.breakdown)},
            {"reference", to_json(r.reference)}};
}

inline json to_json(const VerifiedConstant& c)
{
    return {{"name", c.name},
            {"reference_value", c.reference_value},
            {"derived_value", c.derived_value},
            {"method", c.method},
            {"tolerance", c.tolerance},
            {"sup_type", c.sup_type},
            {"argmax", detail::number_or_null(c.argmax)},
            {"ok", c.ok()},
            {"tight", c.tight()}};
}

inline json to_json(const PValueBracket& b)
{
    return {{"naive", b.naive},   {"center", b.center},       {"delta", b.delta},
            {"lower", b.lower},   {"upper", b.upper},         {"width", b.width},
            {"raw_lower", b.raw_lower}, {"raw_upper", b.raw_upper}, {"clipped", b.clipped}};
}

inline json to_json(const DistortionVerdict& v)
{
    return {{"verdict", to_string(v.verdict)}, {"threshold", v.threshold}, {"x", v.x}, {"delta", v.delta}};
}

inline json to_json(const SupDistanceEstimate& e)
{
    return {{"point", e.point}, {"std_error", e.std_error}, {"reps", e.reps}, {"grid_spec", e.grid_spec}};
}

// {"name": "...", "support": [[value, prob], ...]}
inline DiscreteDistribution distribution_from_json(const json& j)
{
    detail::reject_unknown(j, {"name", "support"}, "distribution");
    if (!j.contains("support") || !j.at("support").is_array())
        throw InvalidProfile("distribution: \"support\" must be an array of [value, prob] pairs");
    std::vector<Atom> atoms;
    for (const auto& e : j.at("support")) {
        if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number())
            throw InvalidProfile("distribution: each support entry must be [value, prob]");
        atoms.push_back({e[0].get<double>(), e[1].get<double>()});
    }
    return DiscreteDistribution(std::move(atoms), j.value("name", std::string("custom")));
}

} // namespace edgeworth
