#pragma once

#include <json.hpp>

#include <string>

#include "wnafcert/certify.hpp"

namespace wnafcert {

using Json = nlohmann::ordered_json;

const char* tool_version();

/// Certificate document, schema_version "1". All coefficients are decimal
/// strings so round trips stay exact at any magnitude.
Json certificate_to_json(const Certificate& cert, bool verified);

/// Parses a certificate document; throws Error on malformed input.
Certificate certificate_from_json(const Json& doc);

/// Verdict document for one (q, p, w); includes the certificate when
/// the verdict is NonOptimal.
Json verdict_to_json(Params params, long w, const Verdict& verdict);

std::string verdict_name(Verdict::Tag tag);

}  // namespace wnafcert
