#include "opmeans/matrix_io.hpp"

#include <fstream>
#include <sstream>

#include "opmeans/errors.hpp"

namespace opmeans {

using nlohmann::json;

json matrix_to_json(const CMatrix& m) {
  const std::size_t n = m.dim();
  json re = json::array();
  json im = json::array();
  for (std::size_t i = 0; i < n; ++i) {
    json rr = json::array();
    json ir = json::array();
    for (std::size_t j = 0; j < n; ++j) {
      rr.push_back(m(i, j).real() + 0.0);  // no negative zeros in files
      ir.push_back(m(i, j).imag() + 0.0);
    }
    re.push_back(std::move(rr));
    im.push_back(std::move(ir));
  }
  return json{{"n", n}, {"re", std::move(re)}, {"im", std::move(im)}};
}

namespace {

void read_part(const json& rows, std::size_t n, CMatrix& m, bool imag) {
  if (!rows.is_array() || rows.size() != n) throw FormatError("matrix: wrong number of rows");
  for (std::size_t i = 0; i < n; ++i) {
    const json& row = rows[i];
    if (!row.is_array() || row.size() != n) throw FormatError("matrix: wrong row length");
    for (std::size_t j = 0; j < n; ++j) {
      if (!row[j].is_number()) throw FormatError("matrix: non-numeric entry");
      const double v = row[j].get<double>();
      m(i, j) = imag ? cplx(m(i, j).real(), v) : cplx(v, m(i, j).imag());
    }
  }
}

}  // namespace

CMatrix matrix_from_json(const json& j) {
  if (!j.is_object() || !j.contains("n") || !j.contains("re"))
    throw FormatError("matrix: expected object with \"n\" and \"re\"");
  if (!j["n"].is_number_integer() || j["n"].get<long long>() < 1)
    throw FormatError("matrix: \"n\" must be a positive integer");
  const auto n = j["n"].get<std::size_t>();
  CMatrix m(n);
  read_part(j["re"], n, m, false);
  if (j.contains("im")) read_part(j["im"], n, m, true);
  return m;
}

HermitianMatrix hermitian_from_json(const json& j) {
  return HermitianMatrix::checked(matrix_from_json(j));
}

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

HermitianMatrix read_matrix(const std::filesystem::path& path) {
  return hermitian_from_json(read_json_file(path));
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FormatError("cannot write " + path.string());
  out << text;
}

void write_matrix(const std::filesystem::path& path, const HermitianMatrix& h) {
  write_text_file(path, matrix_to_json(h.matrix()).dump(2) + "\n");
}

}  // namespace opmeans
