#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

#include "tbn/model.hpp"

namespace tbn {

struct QueryResult;  // defined in tbn/queries.hpp

struct ParseError : std::runtime_error {
  ParseError(int line, const std::string& message)
      : std::runtime_error("line " + std::to_string(line) + ": " + message),
        line(line) {}
  int line;
};

struct ParseOptions {
  // Reject TBNs containing a monomer with two complementary sites of its own.
  bool strict = false;
};

// One monomer per line: `(<count> "x")? (<label> ":")? <site>+` where a site
// is an identifier with an optional trailing `*`. `#` starts a comment.
// A count prefix like `3x` repeats the monomer as distinct instances.
Tbn parse_tbn(std::string_view text, const ParseOptions& options = {});

// Canonical round-trippable text: runs of identical monomers fold back into
// a count prefix, labels are preserved.
std::string serialize_tbn(const Tbn& t);

// JSON result document (schema_version 1, see schemas/result.schema.json).
// Site references are "<monomer-index>.<slot>" strings.
std::string emit_result_json(const QueryResult& r, const Tbn& t);

std::string site_ref_string(const Tbn& t, int site);

}  // namespace tbn
