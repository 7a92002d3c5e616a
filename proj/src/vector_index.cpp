#include "hifact/vector_index.hpp"

#include <algorithm>
#include <bit>
#include <cstring>
#include <fstream>
#include <numeric>

#include "hifact/error.hpp"

namespace hifact {

static_assert(std::endian::native == std::endian::little,
              "index I/O assumes a little-endian host");

namespace {

constexpr char kMagic[4] = {'H', 'F', 'I', 'X'};

template <typename T>
void put(std::ostream& out, T value) {
  out.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

class Reader {
 public:
  explicit Reader(std::istream& in) : in_(in) {}

  void bytes(char* dst, std::size_t n, const char* what) {
    in_.read(dst, static_cast<std::streamsize>(n));
    if (static_cast<std::size_t>(in_.gcount()) != n) {
      throw Error(ErrorCode::Format,
                  std::string("truncated ") + what + " at byte " + std::to_string(offset_),
                  offset_);
    }
    offset_ += n;
  }

  template <typename T>
  T get(const char* what) {
    T value;
    bytes(reinterpret_cast<char*>(&value), sizeof(T), what);
    return value;
  }

  std::uint64_t offset() const { return offset_; }

 private:
  std::istream& in_;
  std::uint64_t offset_ = 0;
};

}  // namespace

double squared_l2(std::span<const double> query, std::span<const float> stored) {
  double sum = 0.0;
  for (std::size_t i = 0; i < query.size(); ++i) {
    const double d = query[i] - static_cast<double>(stored[i]);
    sum += d * d;
  }
  return sum;
}

FlatIndex::FlatIndex(std::size_t dim) : dim_(dim) {
  if (dim == 0) throw Error(ErrorCode::InvalidArgument, "index dimension must be >= 1");
}

bool FlatIndex::contains(std::string_view id) const {
  return positions_.count(std::string(id)) != 0;
}

std::optional<std::size_t> FlatIndex::position_of(std::string_view id) const {
  const auto it = positions_.find(std::string(id));
  if (it == positions_.end()) return std::nullopt;
  return it->second;
}

void FlatIndex::add(std::string evidence_id, std::span<const double> vector) {
  if (vector.size() != dim_) {
    throw Error(ErrorCode::DimensionMismatch,
                "vector dimension " + std::to_string(vector.size()) +
                    " != index dimension " + std::to_string(dim_));
  }
  if (positions_.count(evidence_id)) {
    throw Error(ErrorCode::DuplicateId, "evidence id '" + evidence_id + "' already indexed");
  }
  positions_.emplace(evidence_id, ids_.size());
  ids_.push_back(std::move(evidence_id));
  for (double x : vector) data_.push_back(static_cast<float>(x));
}

std::vector<SearchHit> FlatIndex::search(std::span<const double> query,
                                         std::size_t k) const {
  if (query.size() != dim_) {
    throw Error(ErrorCode::DimensionMismatch,
                "query dimension " + std::to_string(query.size()) +
                    " != index dimension " + std::to_string(dim_));
  }
  if (k == 0) throw Error(ErrorCode::InvalidArgument, "k must be >= 1");
  if (empty()) throw Error(ErrorCode::EmptyIndex, "index has no entries");

  std::vector<double> dist(size());
  for (std::size_t i = 0; i < size(); ++i) dist[i] = squared_l2(query, vector_at(i));

  std::vector<std::size_t> order(size());
  std::iota(order.begin(), order.end(), 0);
  const std::size_t take = std::min(k, size());
  const auto closer = [&](std::size_t a, std::size_t b) {
    return dist[a] < dist[b] || (dist[a] == dist[b] && a < b);
  };
  std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(take),
                    order.end(), closer);

  std::vector<SearchHit> hits;
  hits.reserve(take);
  for (std::size_t r = 0; r < take; ++r) {
    hits.push_back({ids_[order[r]], dist[order[r]], r});
  }
  return hits;
}

void FlatIndex::write(std::ostream& out) const {
  out.write(kMagic, 4);
  put<std::uint32_t>(out, kVersion);
  put<std::uint32_t>(out, static_cast<std::uint32_t>(dim_));
  put<std::uint64_t>(out, static_cast<std::uint64_t>(size()));
  for (std::size_t i = 0; i < size(); ++i) {
    put<std::uint32_t>(out, static_cast<std::uint32_t>(ids_[i].size()));
    out.write(ids_[i].data(), static_cast<std::streamsize>(ids_[i].size()));
    out.write(reinterpret_cast<const char*>(data_.data() + i * dim_),
              static_cast<std::streamsize>(dim_ * sizeof(float)));
  }
}

FlatIndex FlatIndex::read(std::istream& in) {
  Reader r(in);
  char magic[4];
  r.bytes(magic, 4, "magic");
  if (std::memcmp(magic, kMagic, 4) != 0) {
    throw Error(ErrorCode::Format, "bad magic at byte 0", 0);
  }
  const auto version_at = r.offset();
  const auto version = r.get<std::uint32_t>("version");
  if (version != kVersion) {
    throw Error(ErrorCode::Format,
                "unsupported version " + std::to_string(version) + " at byte " +
                    std::to_string(version_at),
                version_at);
  }
  const auto dim_at = r.offset();
  const auto dim = r.get<std::uint32_t>("dimension");
  if (dim == 0) throw Error(ErrorCode::Format, "zero dimension at byte 8", dim_at);
  const auto count = r.get<std::uint64_t>("count");

  FlatIndex index(dim);
  std::vector<float> raw(dim);
  for (std::uint64_t i = 0; i < count; ++i) {
    const auto len_at = r.offset();
    const auto len = r.get<std::uint32_t>("id length");
    if (len == 0 || len > (1u << 20)) {
      throw Error(ErrorCode::Format, "implausible id length at byte " + std::to_string(len_at),
                  len_at);
    }
    std::string id(len, '\0');
    r.bytes(id.data(), len, "id");
    r.bytes(reinterpret_cast<char*>(raw.data()), dim * sizeof(float), "vector");
    if (index.contains(id)) {
      throw Error(ErrorCode::Format, "duplicate id '" + id + "' at byte " +
                                         std::to_string(len_at),
                  len_at);
    }
    index.positions_.emplace(id, index.ids_.size());
    index.ids_.push_back(std::move(id));
    index.data_.insert(index.data_.end(), raw.begin(), raw.end());
  }
  if (in.peek() != std::char_traits<char>::eof()) {
    throw Error(ErrorCode::Format,
                "trailing bytes at byte " + std::to_string(r.offset()), r.offset());
  }
  return index;
}

void FlatIndex::save(const std::string& path) const {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::Io, "cannot write index '" + path + "'");
  write(out);
  if (!out) throw Error(ErrorCode::Io, "write failed for '" + path + "'");
}

FlatIndex FlatIndex::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot read index '" + path + "'");
  return read(in);
}

}  // namespace hifact
