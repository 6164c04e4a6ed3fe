#pragma once
// JSON round trips for the core objects plus report files.  A report file
// is {"schema", "header", "payload"}: the header carries the timestamp and
// nothing else, so the payload bytes are a pure function of the inputs and
// can be diffed across reruns.
#include <cstdint>
#include <filesystem>
#include <string>

#include "json.hpp"
#include "sumlab/experiments.hpp"

namespace sumlab {

using ordered_json = nlohmann::ordered_json;

ordered_json space_to_json(const SpaceSpec& s);
SpaceSpec space_from_json(const ordered_json& j);

ordered_json op_to_json(const AnyOp& op);
AnyOp op_from_json(const ordered_json& j);

ordered_json sequence_to_json(const VecSequence& seq);
VecSequence sequence_from_json(const ordered_json& j);

ordered_json certificate_to_json(const DominationCertificate& cert);
DominationCertificate certificate_from_json(const ordered_json& j);

ordered_json bracket_to_json(const BracketRow& row);

// Deterministic content: everything in the Report, no clock anywhere.
ordered_json report_payload(const Report& rep);

// Full document: schema tag, volatile header, payload.
ordered_json report_document(const Report& rep);

// Compact dump used for digests and byte comparisons.
std::string canonical_dump(const ordered_json& j);

uint64_t fnv1a64(const std::string& bytes);
std::string digest_hex(uint64_t h);
std::string operator_digest(const AnyOp& op);

// Wraps a payload as {"schema", "header" (timestamp), "payload"}.
ordered_json wrap_document(const ordered_json& payload);

// Writes <out_dir>/reports/<experiment>/<stem>.json and returns the path.
std::filesystem::path write_document(const ordered_json& payload, const std::string& experiment,
                                     const std::string& stem,
                                     const std::filesystem::path& out_dir);

// Same, with the payload taken from the report and the stem defaulting to
// the operator label, falling back to the experiment name.
std::filesystem::path write_report(const Report& rep, const std::filesystem::path& out_dir,
                                   const std::string& stem = "");

// Parse failures and unreadable files surface as input_error.
ordered_json load_json_file(const std::filesystem::path& path);

}  // namespace sumlab
