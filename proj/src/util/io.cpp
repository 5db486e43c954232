//
// retrochem - retrosynthesis evaluation and instruction-data toolkit
// SPDX-License-Identifier: Apache-2.0
//

#include "retrochem/util/io.h"

#include <sstream>
#include <system_error>

#include <unistd.h>

namespace retrochem {

std::string read_file(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw IoError("cannot read " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

AtomicWriter::AtomicWriter(std::filesystem::path path)
    : path_(std::move(path)) {
  tmp_ = path_;
  tmp_ += ".tmp." + std::to_string(::getpid());
  if (path_.has_parent_path())
    std::filesystem::create_directories(path_.parent_path());
  out_.open(tmp_, std::ios::binary | std::ios::trunc);
  if (!out_)
    throw IoError("cannot write " + tmp_.string());
}

AtomicWriter::~AtomicWriter() {
  if (done_)
    return;
  out_.close();
  std::error_code ec;
  std::filesystem::remove(tmp_, ec);
}

void AtomicWriter::commit() {
  out_.flush();
  if (!out_)
    throw IoError("write failed for " + tmp_.string());
  out_.close();
  std::filesystem::rename(tmp_, path_);
  done_ = true;
}

void AtomicWriter::keep_partial() {
  out_.close();
  std::filesystem::path partial = path_;
  partial += ".partial";
  std::filesystem::rename(tmp_, partial);
  done_ = true;
}

void write_file_atomic(const std::filesystem::path &path,
                       std::string_view content) {
  AtomicWriter w(path);
  w.stream().write(content.data(), static_cast<std::streamsize>(content.size()));
  w.commit();
}

}  // namespace retrochem
