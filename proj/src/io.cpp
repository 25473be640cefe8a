#include "wheelins/io.h"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "wheelins/errors.h"
#include "wheelins/number_format.h"

namespace wheelins::io {

namespace {

// Splits one data row into exactly n numbers.
template <std::size_t N>
std::array<double, N> parse_row(const std::string& line, const std::string& source,
                                std::size_t line_no) {
  std::array<double, N> out{};
  std::size_t pos = 0;
  for (std::size_t i = 0; i < N; ++i) {
    const std::size_t comma = line.find(',', pos);
    const bool last = i + 1 == N;
    if (!last && comma == std::string::npos) {
      throw ParseError(source, line_no, line.size() + 1,
                       "expected " + std::to_string(N) + " fields, got " +
                           std::to_string(i + 1));
    }
    const std::size_t end = last ? line.size() : comma;
    if (last && comma != std::string::npos) {
      throw ParseError(source, line_no, comma + 1,
                       "more than " + std::to_string(N) + " fields");
    }
    const char* b = line.data() + pos;
    const char* e = line.data() + end;
    const auto [ptr, ec] = std::from_chars(b, e, out[i]);
    if (b == e || ec != std::errc() || ptr != e || !std::isfinite(out[i])) {
      throw ParseError(source, line_no, pos + 1,
                       "invalid number '" + line.substr(pos, end - pos) + "'");
    }
    pos = end + 1;
  }
  return out;
}

template <std::size_t N, class Row>
void parse_table(std::istream& in, const std::string& source,
                 const std::string& header, Row&& row) {
  std::string line;
  std::size_t line_no = 0;
  const auto next = [&]() {
    if (!std::getline(in, line)) return false;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return true;
  };
  if (!next()) throw ParseError(source, 1, 1, "missing header");
  if (line != header) {
    std::size_t col = 0;
    while (col < line.size() && col < header.size() && line[col] == header[col]) ++col;
    throw ParseError(source, 1, col + 1, "expected header '" + header + "'");
  }
  double last = -INFINITY;
  while (next()) {
    if (line.empty()) continue;
    const auto v = parse_row<N>(line, source, line_no);
    if (!(v[0] > last)) {
      throw ParseError(source, line_no, 1, "time does not increase");
    }
    last = v[0];
    row(v);
  }
}

std::ifstream open(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(path, 0, 0, "cannot open file");
  return in;
}

void append_row(std::string& out, std::initializer_list<double> values) {
  bool first = true;
  for (double v : values) {
    if (!first) out += ',';
    out += format_number(v);
    first = false;
  }
  out += '\n';
}

}  // namespace

std::vector<ImuSample> parse_imu_csv(std::istream& in, const std::string& source) {
  std::vector<ImuSample> out;
  parse_table<7>(in, source, kImuHeader, [&](const std::array<double, 7>& v) {
    out.push_back({v[0], Vec3(v[1], v[2], v[3]), Vec3(v[4], v[5], v[6])});
  });
  return out;
}

std::vector<ImuSample> read_imu_csv(const std::string& path) {
  auto in = open(path);
  return parse_imu_csv(in, path);
}

std::vector<eval::TrajectoryRecord> parse_trajectory_csv(std::istream& in,
                                                         const std::string& source) {
  std::vector<eval::TrajectoryRecord> out;
  parse_table<10>(in, source, kTrajectoryHeader, [&](const std::array<double, 10>& v) {
    out.push_back({v[0], Vec3(v[1], v[2], v[3]), Vec3(v[4], v[5], v[6]), v[7],
                   v[8], v[9]});
  });
  return out;
}

std::vector<eval::TrajectoryRecord> read_trajectory_csv(const std::string& path) {
  auto in = open(path);
  return parse_trajectory_csv(in, path);
}

std::string imu_csv(const std::vector<ImuSample>& samples) {
  std::string out = std::string(kImuHeader) + "\n";
  out.reserve(samples.size() * 100);
  for (const auto& s : samples) {
    append_row(out, {s.time, s.gyro.x(), s.gyro.y(), s.gyro.z(), s.accel.x(),
                     s.accel.y(), s.accel.z()});
  }
  return out;
}

std::string trajectory_csv(const std::vector<eval::TrajectoryRecord>& records) {
  std::string out = std::string(kTrajectoryHeader) + "\n";
  out.reserve(records.size() * 140);
  for (const auto& r : records) {
    append_row(out, {r.time, r.position.x(), r.position.y(), r.position.z(),
                     r.velocity.x(), r.velocity.y(), r.velocity.z(), r.roll,
                     r.pitch, r.yaw});
  }
  return out;
}

std::string error_series_csv(const eval::ErrorSeries& series) {
  std::string out = std::string(kErrorHeader) + "\n";
  for (const auto& s : series) {
    append_row(out, {s.time, s.position.x(), s.position.y(), s.position.z(),
                     s.horizontal, s.heading, s.distance});
  }
  return out;
}

OutputSet::OutputSet(std::string dir) : dir_(std::move(dir)) {
  std::filesystem::create_directories(dir_);
}

OutputSet::~OutputSet() {
  if (keep_) return;
  std::error_code ec;
  for (const auto& p : written_) std::filesystem::remove(p, ec);
}

void OutputSet::write(const std::string& name, const std::string& content) {
  const std::filesystem::path path = std::filesystem::path(dir_) / name;
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.close();
    if (!out) {
      std::error_code ec;
      std::filesystem::remove(tmp, ec);
      throw Error("cannot write '" + path.string() + "'");
    }
  }
  std::filesystem::rename(tmp, path);
  written_.push_back(path.string());
}

}  // namespace wheelins::io
