#include "junctionlab/csv.hpp"

#include <charconv>
#include <fstream>
#include <stdexcept>

namespace junctionlab {

std::string fmt_double(double v) {
  if (v == 0.0) return "0";  // folds -0 as well
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc{}) throw std::runtime_error("fmt_double: conversion failed");
  return std::string(buf, end);
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open " + path.string() + " for writing");
  f << text;
  if (!f) throw std::runtime_error("write failed for " + path.string());
}

}  // namespace junctionlab
