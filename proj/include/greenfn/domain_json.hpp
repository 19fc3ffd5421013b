#pragma once

#include <string>

#include "greenfn/convergence.hpp"
#include "greenfn/geometry.hpp"

namespace greenfn {

/// Canonical JSON encoding of a domain.  decode(encode(d)) == d exactly and
/// encode(decode(s)) == s for canonically formatted documents.
std::string domain_to_json(const DomainSpec& d);

/// Strict decoder: unknown fields, wrong shapes, and invariant violations are
/// rejected with an error message naming the offending field.
DomainSpec domain_from_json(const std::string& text);

DomainSpec load_domain_file(const std::string& path);

/// Explicit domain-sequence document:
///   {"limit": <domain>, "pole": [x, y], "domains": [{"n": 2, "domain": ...}]}
/// 3-D sequences say "pole3": [x, y, z] instead of "pole".
DomainSequence load_sequence_file(const std::string& path);
DomainSequence sequence_from_json(const std::string& text);

}  // namespace greenfn
