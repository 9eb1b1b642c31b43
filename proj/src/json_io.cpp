#include "wnafcert/json_io.hpp"

namespace wnafcert {

namespace {

Json pair_json(const ZTau& z) { return Json::array({z.a().get_str(), z.b().get_str()}); }

Json expansion_json(const Expansion& e) {
    Json arr = Json::array();
    for (const ZTau& d : e.digits) arr.push_back(pair_json(d));
    return arr;
}

Integer parse_int(const Json& j) {
    if (j.is_number_integer()) return Integer(j.get<long>());
    if (j.is_string()) {
        try {
            return Integer(j.get<std::string>());
        } catch (const std::invalid_argument&) {
            throw Error("certificate document: bad integer literal");
        }
    }
    throw Error("certificate document: expected integer or decimal string");
}

ZTau parse_pair(const Json& j, Params params) {
    if (!j.is_array() || j.size() != 2)
        throw Error("certificate document: coefficient pair must have two entries");
    return ZTau(parse_int(j[0]), parse_int(j[1]), params);
}

Expansion parse_expansion(const Json& j, Params params, long w) {
    if (!j.is_array()) throw Error("certificate document: expansion must be an array");
    Expansion e{params, w, {}};
    for (const Json& d : j) e.digits.push_back(parse_pair(d, params));
    return e;
}

}  // namespace

const char* tool_version() { return "wnafcert 1.0.0"; }

std::string verdict_name(Verdict::Tag tag) {
    switch (tag) {
        case Verdict::Tag::NonOptimal: return "NonOptimal";
        case Verdict::Tag::KnownOptimal: return "KnownOptimal";
        case Verdict::Tag::Unresolved: return "Unresolved";
    }
    return "Unresolved";
}

Json certificate_to_json(const Certificate& cert, bool verified) {
    Json doc;
    doc["schema_version"] = "1";
    doc["q"] = cert.params.q;
    doc["p"] = cert.params.p;
    doc["w"] = cert.w;
    doc["delta"] = pair_json(cert.delta);
    doc["C"] = pair_json(cert.C);
    doc["A"] = pair_json(cert.A);
    doc["B"] = pair_json(cert.B);
    doc["D"] = pair_json(cert.D);
    doc["z"] = pair_json(cert.z);
    doc["alt_expansion"] = expansion_json(cert.alt_expansion);
    doc["wnaf"] = expansion_json(cert.wnaf_z);
    doc["weights"] = Json{{"alt", weight(cert.alt_expansion)}, {"wnaf", weight(cert.wnaf_z)}};
    doc["verified"] = verified;
    doc["tool_version"] = tool_version();
    return doc;
}

Certificate certificate_from_json(const Json& doc) {
    if (!doc.is_object()) throw Error("certificate document: not an object");
    if (!doc.contains("schema_version") || doc["schema_version"] != "1")
        throw Error("certificate document: unsupported schema_version");
    for (const char* key : {"q", "p", "w", "delta", "C", "A", "B", "D", "alt_expansion", "wnaf"})
        if (!doc.contains(key)) throw Error(std::string("certificate document: missing ") + key);

    Params params(doc["q"].get<long>(), doc["p"].get<int>());
    long w = doc["w"].get<long>();
    if (w < 2) throw Error("certificate document: w must be >= 2");

    ZTau delta = parse_pair(doc["delta"], params);
    ZTau C = parse_pair(doc["C"], params);
    ZTau A = parse_pair(doc["A"], params);
    ZTau B = parse_pair(doc["B"], params);
    ZTau D = parse_pair(doc["D"], params);
    Expansion alt = parse_expansion(doc["alt_expansion"], params, w);
    Expansion wnaf_z = parse_expansion(doc["wnaf"], params, w);
    ZTau z = doc.contains("z") ? parse_pair(doc["z"], params) : value(alt);
    return Certificate{params, w, C, delta, A, B, D, z, std::move(alt), std::move(wnaf_z)};
}

Json verdict_to_json(Params params, long w, const Verdict& verdict) {
    if (verdict.tag == Verdict::Tag::NonOptimal && verdict.certificate.has_value()) {
        Json doc = certificate_to_json(*verdict.certificate, true);
        Json out;
        out["schema_version"] = "1";
        out["q"] = params.q;
        out["p"] = params.p;
        out["w"] = w;
        out["verdict"] = verdict_name(verdict.tag);
        for (auto& [key, val] : doc.items())
            if (key != "schema_version" && key != "q" && key != "p" && key != "w")
                out[key] = val;
        return out;
    }
    Json out;
    out["schema_version"] = "1";
    out["q"] = params.q;
    out["p"] = params.p;
    out["w"] = w;
    out["verdict"] = verdict_name(verdict.tag);
    if (verdict.tag == Verdict::Tag::Unresolved) out["reason"] = verdict.reason;
    out["tool_version"] = tool_version();
    return out;
}

}  // namespace wnafcert
