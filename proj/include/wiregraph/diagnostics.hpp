#pragma once

#include <optional>
#include <string>
#include <vector>

namespace wiregraph {

/// Structured, non-fatal pipeline anomaly. Serialized one per line as
/// {"blob": id|null, "kind": "...", "objects": [ids], "detail": "..."}.
struct Diagnostic {
    std::string kind;
    std::optional<int> blob;
    std::vector<int> objects;
    std::string detail;

    friend bool operator==(const Diagnostic&, const Diagnostic&) = default;
};

using Diagnostics = std::vector<Diagnostic>;

std::string to_json_line(const Diagnostic& d);
std::string to_json_lines(const Diagnostics& ds);

}  // namespace wiregraph
