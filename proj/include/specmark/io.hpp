#pragma once

#include <filesystem>
#include <fstream>
#include <iterator>
#include <string>
#include <system_error>
#include <utility>
#include <vector>

#include "specmark/error.hpp"
#include "specmark/image.hpp"
#include "specmark/key_file.hpp"

namespace specmark {

inline Bytes read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  Bytes data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) throw IoError("read failed for '" + path.string() + "'");
  return data;
}

/// Stages files next to their destinations and renames them into place on
/// commit(). Anything staged but not committed is removed on destruction, so
/// a failure never leaves partial outputs behind.
class AtomicFileSet {
 public:
  AtomicFileSet() = default;
  AtomicFileSet(const AtomicFileSet&) = delete;
  AtomicFileSet& operator=(const AtomicFileSet&) = delete;

  ~AtomicFileSet() {
    std::error_code ec;
    for (const auto& [tmp, dest] : staged_) std::filesystem::remove(tmp, ec);
  }

  void stage(const std::filesystem::path& dest, const Bytes& data) {
    auto tmp = dest;
    tmp += ".partial";
    {
      std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
      if (!out) throw IoError("cannot open '" + dest.string() + "' for writing");
      staged_.emplace_back(tmp, dest);
      out.write(reinterpret_cast<const char*>(data.data()), static_cast<std::streamsize>(data.size()));
      out.flush();
      if (!out) throw IoError("write failed for '" + dest.string() + "'");
    }
  }

  void commit() {
    std::vector<std::filesystem::path> done;
    for (const auto& [tmp, dest] : staged_) {
      std::error_code ec;
      std::filesystem::rename(tmp, dest, ec);
      if (ec) {
        for (const auto& d : done) std::filesystem::remove(d, ec);
        throw IoError("cannot move output into place at '" + dest.string() + "': " + ec.message());
      }
      done.push_back(dest);
    }
    staged_.clear();
  }

 private:
  std::vector<std::pair<std::filesystem::path, std::filesystem::path>> staged_;
};

inline void write_file_atomic(const std::filesystem::path& path, const Bytes& data) {
  AtomicFileSet files;
  files.stage(path, data);
  files.commit();
}

inline GrayImage load_pgm(const std::filesystem::path& path) {
  const Bytes bytes = read_file(path);
  try {
    return read_pgm(bytes);
  } catch (const ParseError& e) {
    throw e.with_context(path.string());
  }
}

inline EmbedKey load_key(const std::filesystem::path& path) { return read_key(read_file(path)); }

}  // namespace specmark
