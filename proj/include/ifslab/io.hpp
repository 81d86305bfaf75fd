#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "ifslab/dimension.hpp"
#include "ifslab/family.hpp"
#include "ifslab/pressure.hpp"
#include "ifslab/system.hpp"
#include "ifslab/topology.hpp"

namespace ifslab {

using Json = nlohmann::ordered_json;

inline constexpr const char* kSchema = "ifslab/1";

/// [re, im]
Json complex_to_json(Complex z);
Complex complex_from_json(const Json& j);
/// {"lo": .., "hi": ..} or {"infinite": true}
Json bracket_to_json(const Bracket& b);
Bracket bracket_from_json(const Json& j);

Json system_to_json(const SystemSpec& spec);
/// ParseError on schema violations.
SystemSpec system_from_json(const Json& j);

Json family_to_json(const FamilySpec& family);
FamilySpec family_from_json(const Json& j);

/// {"points": [[re, im], ...]}; a bare array of points is accepted too.
std::vector<Complex> grid_from_json(const Json& j);
Json grid_to_json(const std::vector<Complex>& grid);
/// {"re": [...], "im": [...]}
ParameterMesh mesh_from_json(const Json& j);
Json mesh_to_json(const ParameterMesh& mesh);

Json regularity_to_json(const RegularityReport& r);
Json dimension_to_json(const DimensionResult& r);
Json verdict_to_json(const FamilyVerdict& v);
Json locus_to_json(const std::vector<Polyline>& locus);
Json lambda_to_json(const LambdaReport& r);

/// Columns gamma_re, gamma_im, theta_lo, theta_hi, p_theta_lo, p_theta_hi, class, h_lo, h_hi.
/// Infinite brackets are written as inf; records with errors carry class ERROR and nan fields.
std::string sweep_to_csv(const std::vector<SweepRecord>& records);
std::vector<SweepRecord> sweep_from_csv(const std::string& text);

/// IoError when unreadable, ParseError on malformed JSON.
Json read_json(const std::filesystem::path& path);
std::string read_text(const std::filesystem::path& path);
void write_text(const std::filesystem::path& path, const std::string& text);
/// Pretty-printed with a trailing newline.
std::string dump(const Json& j);

/// Systems in a directory, files *.json sorted by name.
std::vector<SystemSpec> read_sequence(const std::filesystem::path& dir);

/// Writes the bundled example corpus into dir and returns the relative paths written.
std::vector<std::string> write_corpus(const std::filesystem::path& dir);

} // namespace ifslab
