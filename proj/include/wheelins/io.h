#pragma once

#include <istream>
#include <string>
#include <vector>

#include "wheelins/eval.h"
#include "wheelins/mechanization.h"

namespace wheelins::io {

inline constexpr const char* kImuHeader = "t,gx,gy,gz,ax,ay,az";
inline constexpr const char* kTrajectoryHeader = "t,pn,pe,pd,vn,ve,vd,roll,pitch,yaw";
inline constexpr const char* kErrorHeader =
    "t,err_n,err_e,err_d,err_horizontal,err_heading,distance";

// Readers throw ParseError with 1-based line and column. Timestamps must
// increase strictly.
std::vector<ImuSample> parse_imu_csv(std::istream& in, const std::string& source);
std::vector<ImuSample> read_imu_csv(const std::string& path);
std::vector<eval::TrajectoryRecord> parse_trajectory_csv(std::istream& in,
                                                         const std::string& source);
std::vector<eval::TrajectoryRecord> read_trajectory_csv(const std::string& path);

std::string imu_csv(const std::vector<ImuSample>& samples);
std::string trajectory_csv(const std::vector<eval::TrajectoryRecord>& records);
std::string error_series_csv(const eval::ErrorSeries& series);

// Files written into one directory. Each file goes through a temporary
// and a rename; unless keep() is called, everything written is removed
// when the set is destroyed.
class OutputSet {
 public:
  explicit OutputSet(std::string dir);
  ~OutputSet();
  OutputSet(const OutputSet&) = delete;
  OutputSet& operator=(const OutputSet&) = delete;

  void write(const std::string& name, const std::string& content);
  void keep() { keep_ = true; }

 private:
  std::string dir_;
  std::vector<std::string> written_;
  bool keep_ = false;
};

}  // namespace wheelins::io
