#pragma once

#include <cstddef>
#include <iosfwd>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "rcc/curve.hpp"

namespace rcc {

inline constexpr std::size_t kCanonicalDorfCurveCount = 201;

struct DorfRecord {
  ResponseCurve curve;
  std::string type;
};

/// Forward response curves of a DoRF-layout database. Inverses are built
/// on first request and cached; the cache is safe to share across threads.
class DorfDatabase {
 public:
  DorfDatabase() = default;
  explicit DorfDatabase(std::vector<DorfRecord> records, std::vector<std::string> warnings = {});

  std::size_t size() const noexcept { return records_.size(); }
  bool empty() const noexcept { return records_.empty(); }
  const DorfRecord& record(std::size_t i) const { return records_.at(i); }
  const ResponseCurve& curve(std::size_t i) const { return records_.at(i).curve; }
  const ResponseCurve& inverse(std::size_t i) const;

  /// Curves dropped during parsing, one message each.
  const std::vector<std::string>& warnings() const noexcept { return warnings_; }

 private:
  struct InverseCache {
    explicit InverseCache(std::size_t n) : slots(n) {}
    std::mutex mutex;
    std::vector<std::optional<ResponseCurve>> slots;
  };

  std::vector<DorfRecord> records_;
  std::vector<std::string> warnings_;
  std::shared_ptr<InverseCache> cache_;
};

/// Maximum monotonicity violation repaired by cumulative max; larger
/// violations reject the curve.
inline constexpr double kDorfRepairTolerance = 1e-4;

/// Parses blocks of (name line, type line, irradiance values, brightness
/// values). Value runs may be introduced by "I =" / "B =" label lines and
/// may span several lines; without labels each run is exactly one line.
DorfDatabase parse_dorf(std::istream& in);
DorfDatabase load_dorf(const std::string& path);

/// Parses named blocks ("E =", "f0 =" or "g0 =", "h(1)=" / "hinv(1)=" ...)
/// each followed by whitespace-separated reals.
EmorBasis parse_emor(std::istream& in, EmorKind kind);
EmorBasis load_emor(const std::string& path, EmorKind kind);

void write_dorf(std::ostream& out, const DorfDatabase& db);
void write_emor(std::ostream& out, const EmorBasis& basis);

/// Artifact-native curve file: {"name": ..., "samples": [...]}.
std::string curve_to_json(const ResponseCurve& curve);
ResponseCurve curve_from_json(const std::string& text);

}  // namespace rcc
