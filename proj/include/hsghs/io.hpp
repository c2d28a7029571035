#pragma once

// File formats.
//
// CSV: no header, comma separated, one matrix row per line, every value
// printed with 17 significant digits so doubles round-trip exactly.
//
// Sample stream (all integers and floats little-endian):
//   bytes 0-3   magic "HSGS"
//   bytes 4-7   u32 version = 1
//   bytes 8-39  u64 n, p, q, nmc
//   then nmc records, each pq f64 (beta in vec(B') order) followed by
//   q(q+1)/2 f64 (omega upper triangle, row-major over k <= l).

#include <armadillo>

#include <cstdint>
#include <filesystem>
#include <string>

#include "hsghs/types.hpp"

namespace hsghs {

inline constexpr char kSampleMagic[4] = {'H', 'S', 'G', 'S'};
inline constexpr std::uint32_t kSampleVersion = 1;
inline constexpr std::size_t kSampleHeaderBytes = 40;

std::string format_csv(const arma::mat& m);
arma::mat parse_csv(const std::string& text);

arma::mat read_csv(const std::filesystem::path& path);
// Writes through a temporary file and renames it into place.
void write_csv(const arma::mat& m, const std::filesystem::path& path);

struct SampleHeader {
  std::uint32_t version = kSampleVersion;
  Dims dims;
  std::uint64_t nmc = 0;
};

std::string encode_samples(const PosteriorSamples& samples);
// Draws and dims only; config.nmc is filled, the rest stays default.
PosteriorSamples decode_samples(const std::string& bytes);
SampleHeader decode_sample_header(const std::string& bytes);

void write_samples(const PosteriorSamples& samples, const std::filesystem::path& path);
PosteriorSamples read_samples(const std::filesystem::path& path);

std::string read_file(const std::filesystem::path& path);
void write_file_atomic(const std::filesystem::path& path, const std::string& contents);

}  // namespace hsghs
