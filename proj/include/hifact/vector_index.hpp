#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "hifact/types.hpp"

namespace hifact {

struct SearchHit {
  std::string evidence_id;
  double distance = 0.0;  // squared L2, not rooted
  std::size_t rank = 0;

  bool operator==(const SearchHit&) const = default;
};

/// Exact nearest-neighbour index: every query scans all entries.
///
/// Vectors are stored as float32 (the on-disk precision), so a saved and
/// reloaded index answers every query bit-identically. Distances are
/// accumulated in double. Hits are ordered by (distance, insertion order).
///
/// File format, little-endian:
///   "HFIX" | u32 version=1 | u32 dim | u64 count |
///   count x ( u32 id_len | id bytes | dim x f32 )
class FlatIndex {
 public:
  static constexpr std::uint32_t kVersion = 1;

  explicit FlatIndex(std::size_t dim = Embedding::kDim);

  // Throws Error(DimensionMismatch) or Error(DuplicateId).
  void add(std::string evidence_id, std::span<const double> vector);
  void add(std::string evidence_id, const Embedding& vector) {
    add(std::move(evidence_id), vector.values());
  }

  // min(k, size()) hits. Throws Error(EmptyIndex), Error(DimensionMismatch),
  // Error(InvalidArgument) for k == 0.
  std::vector<SearchHit> search(std::span<const double> query, std::size_t k) const;
  std::vector<SearchHit> search(const Embedding& query, std::size_t k) const {
    return search(query.values(), k);
  }

  std::size_t dim() const { return dim_; }
  std::size_t size() const { return ids_.size(); }
  bool empty() const { return ids_.empty(); }
  bool contains(std::string_view id) const;
  std::optional<std::size_t> position_of(std::string_view id) const;

  const std::string& id_at(std::size_t i) const { return ids_[i]; }
  std::span<const float> vector_at(std::size_t i) const {
    return {data_.data() + i * dim_, dim_};
  }

  void write(std::ostream& out) const;
  // Throws Error(Format) with the byte offset of the problem.
  static FlatIndex read(std::istream& in);

  void save(const std::string& path) const;
  static FlatIndex load(const std::string& path);

 private:
  std::size_t dim_;
  std::vector<std::string> ids_;
  std::vector<float> data_;
  std::unordered_map<std::string, std::size_t> positions_;
};

// Squared L2 between a stored float vector and a double query.
double squared_l2(std::span<const double> query, std::span<const float> stored);

}  // namespace hifact
