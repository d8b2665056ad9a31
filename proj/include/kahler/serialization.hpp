#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "kahler/tensor.hpp"

namespace kahler {

inline constexpr const char* kTensorSchema = "kct-1";

struct LoadedTensor {
  KahlerCurvatureTensor tensor;
  int given_entries;
  int completed_entries;  // filled in by the symmetry closure
  bool completed() const { return completed_entries > 0; }
};

/// {schema: "kct-1", n, entries: [[a, b, c, d, re, im], ...]}, 1-based,
/// every one of the n^4 components written out.
nlohmann::json to_json(const KahlerCurvatureTensor& t);
std::string serialize(const KahlerCurvatureTensor& t);
void save_tensor(const KahlerCurvatureTensor& t, const std::filesystem::path& path);

/// Entries may be any generating set; the rest of each orbit is filled in by
/// symmetry and untouched orbits are zero. Listed entries are kept verbatim.
/// Throws TensorFileError on schema problems, on two listed or implied values
/// for one component differing by more than `tol`, and when the result does
/// not validate at `tol`.
LoadedTensor from_json(const nlohmann::json& doc, double tol = 1e-8);
LoadedTensor deserialize(const std::string& text, double tol = 1e-8);
LoadedTensor load_tensor(const std::filesystem::path& path, double tol = 1e-8);

}  // namespace kahler
