#include "lcc/family_io.hpp"

#include <fstream>
#include <sstream>

namespace lcc {

using nlohmann::json;
using nlohmann::ordered_json;

ordered_json family_to_json(const MatchingFamily& fam) {
    ordered_json j;
    j["n"] = fam.n();
    j["field_char"] = fam.field_char();
    if (!fam.identity_negation()) j["negation"] = fam.negation();
    ordered_json mm = ordered_json::array();
    for (const auto& hu : fam.matchings()) {
        ordered_json row = ordered_json::array();
        for (const auto& c : hu) row.push_back({c[0], c[1], c[2]});
        mm.push_back(std::move(row));
    }
    j["matchings"] = std::move(mm);
    return j;
}

namespace {

std::uint64_t get_uint(const json& v, const std::string& ptr) {
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0))
        throw InstanceParseError(ptr, "expected a non-negative integer");
    return v.get<std::uint64_t>();
}

}  // namespace

MatchingFamily family_from_json(const json& j) {
    if (!j.is_object()) throw InstanceParseError("/", "expected an object");
    if (!j.contains("n")) throw InstanceParseError("/n", "missing field");
    if (!j.contains("matchings")) throw InstanceParseError("/matchings", "missing field");
    const std::uint64_t n = get_uint(j["n"], "/n");
    unsigned p = 2;
    if (j.contains("field_char")) p = static_cast<unsigned>(get_uint(j["field_char"], "/field_char"));
    const auto& mj = j["matchings"];
    if (!mj.is_array()) throw InstanceParseError("/matchings", "expected an array");
    if (mj.size() != n)
        throw InstanceParseError("/matchings", "expected " + std::to_string(n) + " entries, got " +
                                                   std::to_string(mj.size()));
    std::vector<std::vector<Triple>> mm(n);
    for (std::size_t u = 0; u < n; ++u) {
        const std::string pu = "/matchings/" + std::to_string(u);
        if (!mj[u].is_array()) throw InstanceParseError(pu, "expected an array of triples");
        for (std::size_t e = 0; e < mj[u].size(); ++e) {
            const std::string pe = pu + "/" + std::to_string(e);
            const auto& t = mj[u][e];
            if (!t.is_array() || t.size() != 3)
                throw InstanceParseError(pe, "expected a triple");
            Triple c{};
            for (std::size_t i = 0; i < 3; ++i) {
                std::uint64_t v = get_uint(t[i], pe + "/" + std::to_string(i));
                if (v >= n) throw InstanceParseError(pe + "/" + std::to_string(i), "vertex out of range");
                c[i] = static_cast<Vertex>(v);
            }
            mm[u].push_back(c);
        }
    }
    std::vector<Vertex> neg;
    if (j.contains("negation")) {
        const auto& nj = j["negation"];
        if (!nj.is_array() || nj.size() != n)
            throw InstanceParseError("/negation", "expected an array of length n");
        for (std::size_t u = 0; u < n; ++u) {
            std::uint64_t v = get_uint(nj[u], "/negation/" + std::to_string(u));
            if (v >= n) throw InstanceParseError("/negation/" + std::to_string(u), "out of range");
            neg.push_back(static_cast<Vertex>(v));
        }
    }
    try {
        return MatchingFamily(n, std::move(mm), std::move(neg), p);
    } catch (const std::invalid_argument& e) {
        throw InstanceParseError("/", e.what());
    }
}

MatchingFamily parse_family(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw InstanceParseError("byte " + std::to_string(e.byte), e.what());
    }
    return family_from_json(j);
}

MatchingFamily load_family(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InstanceParseError(path, "cannot open file");
    std::stringstream ss;
    ss << in.rdbuf();
    try {
        return parse_family(ss.str());
    } catch (const InstanceParseError& e) {
        const std::string msg = std::string(e.what()).substr(e.where().size() + 2);
        throw InstanceParseError(path + " " + e.where(), msg);
    }
}

void save_family(const MatchingFamily& fam, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << family_to_json(fam).dump() << "\n";
}

ordered_json solution_space_to_json(const SolutionSpace& sol) {
    ordered_json j;
    j["n"] = sol.n;
    j["field_char"] = sol.field_char;
    j["dimension"] = sol.dimension;
    j["information_set"] = sol.information_set;
    j["basis"] = sol.basis;
    return j;
}

}  // namespace lcc
