#include "kahler/serialization.hpp"

#include <fstream>
#include <sstream>
#include <vector>

#include "kahler/errors.hpp"

namespace kahler {

using nlohmann::json;

json to_json(const KahlerCurvatureTensor& t) {
  const int n = t.dim();
  json entries = json::array();
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        for (int d = 0; d < n; ++d) {
          const Complex v = t(a, b, c, d);
          entries.push_back({a + 1, b + 1, c + 1, d + 1, v.real(), v.imag()});
        }
  return json{{"schema", kTensorSchema}, {"n", n}, {"entries", std::move(entries)}};
}

std::string serialize(const KahlerCurvatureTensor& t) { return to_json(t).dump(); }

void save_tensor(const KahlerCurvatureTensor& t, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw TensorFileError("cannot write " + path.string());
  out << serialize(t) << '\n';
}

namespace {

enum class Origin : unsigned char { None, Implied, Given };

std::string label(const Index4& i) {
  std::ostringstream s;
  s << '(' << i[0] + 1 << ',' << i[1] + 1 << ',' << i[2] + 1 << ',' << i[3] + 1 << ')';
  return s.str();
}

}  // namespace

LoadedTensor from_json(const json& doc, double tol) {
  if (!doc.is_object()) throw TensorFileError("tensor file must hold a JSON object");
  if (!doc.contains("schema") || doc["schema"] != kTensorSchema) {
    throw TensorFileError(std::string("schema must be \"") + kTensorSchema + "\"");
  }
  if (!doc.contains("n") || !doc["n"].is_number_integer() || doc["n"].get<int>() < 1) {
    throw TensorFileError("n must be a positive integer");
  }
  if (!doc.contains("entries") || !doc["entries"].is_array()) throw TensorFileError("entries must be an array");

  const int n = doc["n"].get<int>();
  KahlerCurvatureTensor t(n);
  const auto flat_index = [n](const Index4& i) { return ((i[0] * n + i[1]) * n + i[2]) * n + i[3]; };
  std::vector<Origin> origin(static_cast<std::size_t>(n) * n * n * n, Origin::None);
  std::vector<std::string> problems;

  const auto& entries = doc["entries"];
  // Listed values first, so that implied values never overwrite them.
  std::vector<std::pair<Index4, Complex>> listed;
  listed.reserve(entries.size());
  for (std::size_t k = 0; k < entries.size(); ++k) {
    const auto& e = entries[k];
    if (!e.is_array() || e.size() != 6) throw TensorFileError("entry " + std::to_string(k) + " must have 6 fields");
    Index4 idx{};
    for (int s = 0; s < 4; ++s) {
      if (!e[s].is_number_integer()) throw TensorFileError("entry " + std::to_string(k) + " has a non-integer index");
      idx[s] = e[s].get<int>() - 1;
      if (idx[s] < 0 || idx[s] >= n) throw TensorFileError("entry " + std::to_string(k) + " index out of range");
    }
    if (!e[4].is_number() || !e[5].is_number()) {
      throw TensorFileError("entry " + std::to_string(k) + " has a non-numeric value");
    }
    const Complex v(e[4].get<double>(), e[5].get<double>());
    const auto at = flat_index(idx);
    if (origin[at] == Origin::Given) {
      if (std::abs(t(idx) - v) > tol) problems.push_back("conflicting duplicates at " + label(idx));
      continue;
    }
    origin[at] = Origin::Given;
    t(idx) = v;
    listed.emplace_back(idx, v);
  }

  int implied = 0;
  for (const auto& [idx, v] : listed) {
    for (const auto& m : symmetry_orbit(idx)) {
      const Complex w = m.conjugated ? std::conj(v) : v;
      const auto at = flat_index(m.indices);
      if (origin[at] == Origin::None) {
        origin[at] = Origin::Implied;
        t(m.indices) = w;
        ++implied;
      } else if (std::abs(t(m.indices) - w) > tol) {
        problems.push_back("entry " + label(idx) + " disagrees with " + label(m.indices));
      }
    }
  }
  if (!problems.empty()) {
    std::ostringstream msg;
    msg << "inconsistent tensor file:";
    for (const auto& p : problems) msg << "\n  " << p;
    throw TensorFileError(msg.str());
  }
  // Any imaginary part on a self-conjugate component also shows up here.
  const auto defects = validate(t, tol);
  if (!defects.empty()) {
    std::ostringstream msg;
    msg << "tensor fails validation:";
    for (const auto& d : defects) msg << "\n  " << label(d.indices) << " vs " << label(d.partner) << " defect " << d.defect;
    throw TensorFileError(msg.str());
  }
  return {std::move(t), static_cast<int>(listed.size()), implied};
}

LoadedTensor deserialize(const std::string& text, double tol) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw TensorFileError(std::string("not valid JSON: ") + e.what());
  }
  return from_json(doc, tol);
}

LoadedTensor load_tensor(const std::filesystem::path& path, double tol) {
  std::ifstream in(path);
  if (!in) throw TensorFileError("cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return deserialize(buf.str(), tol);
}

}  // namespace kahler
