#pragma once

#include <filesystem>

#include "json.hpp"
#include "opmeans/hermitian.hpp"

namespace opmeans {

// {"n": int, "re": [[...]], "im": [[...]]}, row-major; "im" optional.
nlohmann::json matrix_to_json(const CMatrix& m);
CMatrix matrix_from_json(const nlohmann::json& j);

// Readers verify Hermitian symmetry to kHermitianReadTol.
HermitianMatrix hermitian_from_json(const nlohmann::json& j);
HermitianMatrix read_matrix(const std::filesystem::path& path);
void write_matrix(const std::filesystem::path& path, const HermitianMatrix& h);

nlohmann::json read_json_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace opmeans
