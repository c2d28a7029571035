#include "hsghs/io.hpp"

#include <bit>
#include <charconv>
#include <cstring>
#include <fstream>
#include <sstream>
#include <vector>

namespace hsghs {

static_assert(std::endian::native == std::endian::little,
              "sample stream encoding assumes a little-endian host");

namespace {

void append_number(std::string& out, double v) {
  char buf[40];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  out.append(buf, res.ptr);
}

double parse_number(std::string_view field, std::size_t line) {
  while (!field.empty() && (field.front() == ' ' || field.front() == '\t')) field.remove_prefix(1);
  while (!field.empty() && (field.back() == ' ' || field.back() == '\t' || field.back() == '\r')) {
    field.remove_suffix(1);
  }
  if (!field.empty() && field.front() == '+') field.remove_prefix(1);
  double v = 0.0;
  const auto res = std::from_chars(field.data(), field.data() + field.size(), v);
  if (field.empty() || res.ec != std::errc{} || res.ptr != field.data() + field.size()) {
    throw Error(ErrorCode::Format, "malformed CSV value '" + std::string(field) + "' on line " +
                                       std::to_string(line));
  }
  return v;
}

template <typename T>
void put(std::string& out, T value) {
  char raw[sizeof(T)];
  std::memcpy(raw, &value, sizeof(T));
  out.append(raw, sizeof(T));
}

template <typename T>
T get(const std::string& bytes, std::size_t& at) {
  if (at + sizeof(T) > bytes.size()) throw Error(ErrorCode::Format, "sample stream is truncated");
  T value;
  std::memcpy(&value, bytes.data() + at, sizeof(T));
  at += sizeof(T);
  return value;
}

}  // namespace

std::string format_csv(const arma::mat& m) {
  std::string out;
  out.reserve(m.n_elem * 24);
  for (arma::uword i = 0; i < m.n_rows; ++i) {
    for (arma::uword j = 0; j < m.n_cols; ++j) {
      if (j > 0) out.push_back(',');
      append_number(out, m(i, j));
    }
    out.push_back('\n');
  }
  return out;
}

arma::mat parse_csv(const std::string& text) {
  std::vector<std::vector<double>> rows;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string::npos) end = text.size();
    std::string_view line(text.data() + start, end - start);
    ++line_no;
    start = end + 1;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.find_first_not_of(" \t") == std::string_view::npos) continue;

    std::vector<double> row;
    std::size_t from = 0;
    while (true) {
      const std::size_t comma = line.find(',', from);
      row.push_back(parse_number(line.substr(from, comma - from), line_no));
      if (comma == std::string_view::npos) break;
      from = comma + 1;
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw Error(ErrorCode::Format, "CSV line " + std::to_string(line_no) + " has " +
                                         std::to_string(row.size()) + " fields, expected " +
                                         std::to_string(rows.front().size()));
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw Error(ErrorCode::Format, "CSV has no rows");
  arma::mat m(rows.size(), rows.front().size());
  for (arma::uword i = 0; i < m.n_rows; ++i) {
    for (arma::uword j = 0; j < m.n_cols; ++j) m(i, j) = rows[i][j];
  }
  return m;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw Error(ErrorCode::Io, "read failed for " + path.string());
  return std::move(buf).str();
}

void write_file_atomic(const std::filesystem::path& path, const std::string& contents) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::Io, "cannot write " + tmp.string());
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    out.flush();
    if (!out) throw Error(ErrorCode::Io, "write failed for " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw Error(ErrorCode::Io, "cannot move " + tmp.string() + " into place: " + ec.message());
}

arma::mat read_csv(const std::filesystem::path& path) {
  try {
    return parse_csv(read_file(path));
  } catch (const Error& e) {
    if (e.code() == ErrorCode::Format) throw Error(ErrorCode::Format, path.string() + ": " + e.what());
    throw;
  }
}

void write_csv(const arma::mat& m, const std::filesystem::path& path) {
  write_file_atomic(path, format_csv(m));
}

std::string encode_samples(const PosteriorSamples& s) {
  const std::uint64_t pq = s.dims.p * s.dims.q;
  const std::uint64_t tri = s.dims.q * (s.dims.q + 1) / 2;
  if (s.beta_draws.n_cols != pq || s.omega_draws.n_cols != tri ||
      s.beta_draws.n_rows != s.omega_draws.n_rows) {
    throw Error(ErrorCode::DimensionMismatch, "sample matrices do not match their dims");
  }
  const std::uint64_t nmc = s.beta_draws.n_rows;
  std::string out;
  out.reserve(kSampleHeaderBytes + nmc * (pq + tri) * sizeof(double));
  out.append(kSampleMagic, 4);
  put<std::uint32_t>(out, kSampleVersion);
  put<std::uint64_t>(out, s.dims.n);
  put<std::uint64_t>(out, s.dims.p);
  put<std::uint64_t>(out, s.dims.q);
  put<std::uint64_t>(out, nmc);
  for (arma::uword r = 0; r < nmc; ++r) {
    for (arma::uword c = 0; c < pq; ++c) put<double>(out, s.beta_draws(r, c));
    for (arma::uword c = 0; c < tri; ++c) put<double>(out, s.omega_draws(r, c));
  }
  return out;
}

SampleHeader decode_sample_header(const std::string& bytes) {
  if (bytes.size() < kSampleHeaderBytes || std::memcmp(bytes.data(), kSampleMagic, 4) != 0) {
    throw Error(ErrorCode::Format, "not an HSGS sample stream");
  }
  std::size_t at = 4;
  SampleHeader h;
  h.version = get<std::uint32_t>(bytes, at);
  if (h.version != kSampleVersion) {
    throw Error(ErrorCode::Format, "unsupported sample stream version " + std::to_string(h.version));
  }
  h.dims.n = get<std::uint64_t>(bytes, at);
  h.dims.p = get<std::uint64_t>(bytes, at);
  h.dims.q = get<std::uint64_t>(bytes, at);
  h.nmc = get<std::uint64_t>(bytes, at);
  if (h.dims.p == 0 || h.dims.q == 0) throw Error(ErrorCode::Format, "sample stream has p or q = 0");
  return h;
}

PosteriorSamples decode_samples(const std::string& bytes) {
  const SampleHeader h = decode_sample_header(bytes);
  const std::uint64_t pq = h.dims.p * h.dims.q;
  const std::uint64_t tri = h.dims.q * (h.dims.q + 1) / 2;
  const std::uint64_t expected = kSampleHeaderBytes + h.nmc * (pq + tri) * sizeof(double);
  if (bytes.size() != expected) {
    throw Error(ErrorCode::Format, "sample stream has " + std::to_string(bytes.size()) +
                                       " bytes, header implies " + std::to_string(expected));
  }
  PosteriorSamples s;
  s.dims = h.dims;
  s.config.nmc = h.nmc;
  s.beta_draws.set_size(h.nmc, pq);
  s.omega_draws.set_size(h.nmc, tri);
  std::size_t at = kSampleHeaderBytes;
  for (arma::uword r = 0; r < h.nmc; ++r) {
    for (arma::uword c = 0; c < pq; ++c) s.beta_draws(r, c) = get<double>(bytes, at);
    for (arma::uword c = 0; c < tri; ++c) s.omega_draws(r, c) = get<double>(bytes, at);
  }
  return s;
}

void write_samples(const PosteriorSamples& samples, const std::filesystem::path& path) {
  write_file_atomic(path, encode_samples(samples));
}

PosteriorSamples read_samples(const std::filesystem::path& path) {
  return decode_samples(read_file(path));
}

}  // namespace hsghs
