#include "driftfuse/logs.hpp"

#include <array>
#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace driftfuse {

namespace {

const char* kStateSuffixes[12] = {"x",  "y",  "z", "roll", "pitch", "yaw",
                                  "vx", "vy", "vz", "p",   "q",     "r"};
const char* kDriftSuffixes[8] = {"x", "vx", "y", "vy", "z", "vz", "yaw", "r"};
const char* kGroupNames[4] = {"position", "orientation", "velocity",
                              "angular_velocity"};

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) {
    throw DataError("cannot write file: " + path);
  }
  return out;
}

void append_state12(std::string& line, const State12& s) {
  for (const Vec3* v : {&s.position, &s.euler, &s.velocity, &s.rates}) {
    for (int i = 0; i < 3; ++i) {
      line += ',';
      line += format_double((*v)(i));
    }
  }
}

void append_vio(std::string& line, const WorldOdometry& s) {
  for (const Vec3* v :
       {&s.position, &s.euler, &s.velocity_body, &s.body_rates}) {
    for (int i = 0; i < 3; ++i) {
      line += ',';
      line += format_double((*v)(i));
    }
  }
}

void append_drift(std::string& line, const Vec8& d) {
  for (int i = 0; i < 8; ++i) {
    line += ',';
    line += format_double(d(i));
  }
}

void append_fused_row(std::string& line, double t, const State12& fused,
                      const Vec8& drift) {
  line += format_double(t);
  append_state12(line, fused);
  append_drift(line, drift);
}

std::string fused_header() {
  std::string header = "t";
  for (const char* s : kStateSuffixes) {
    header += ",fused_";
    header += s;
  }
  for (const char* s : kDriftSuffixes) {
    header += ",drift_";
    header += s;
  }
  return header;
}

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
  std::uint64_t skipped = 0;

  int column(const std::string& name) const {
    for (std::size_t i = 0; i < header.size(); ++i) {
      if (header[i] == name) {
        return static_cast<int>(i);
      }
    }
    return -1;
  }
};

bool parse_row(const std::string& line, std::size_t expected,
               std::vector<double>& out) {
  out.clear();
  std::size_t begin = 0;
  while (true) {
    const std::size_t end = line.find(',', begin);
    const std::string_view field(line.data() + begin,
                                 (end == std::string::npos ? line.size() : end) -
                                     begin);
    double value = 0.0;
    const auto [ptr, ec] =
        std::from_chars(field.data(), field.data() + field.size(), value);
    if (ec != std::errc() || ptr != field.data() + field.size()) {
      return false;
    }
    out.push_back(value);
    if (end == std::string::npos) {
      break;
    }
    begin = end + 1;
  }
  return out.size() == expected;
}

CsvTable read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw DataError("cannot open log file: " + path);
  }
  CsvTable table;
  std::string line;
  if (!std::getline(in, line)) {
    throw DataError(path + ": empty file");
  }
  if (!line.empty() && line.back() == '\r') {
    line.pop_back();
  }
  std::stringstream header(line);
  std::string name;
  while (std::getline(header, name, ',')) {
    table.header.push_back(name);
  }
  std::vector<double> row;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') {
      line.pop_back();
    }
    if (line.empty()) {
      continue;
    }
    if (parse_row(line, table.header.size(), row)) {
      table.rows.push_back(row);
    } else {
      ++table.skipped;
    }
  }
  return table;
}

void enforce_row_quality(const CsvTable& table, const std::string& path) {
  if (table.rows.empty()) {
    throw DataError(path + ": no valid data rows");
  }
  const double total = static_cast<double>(table.rows.size() + table.skipped);
  if (static_cast<double>(table.skipped) > 0.01 * total) {
    throw DataError(path + ": more than 1% malformed rows (" +
                    std::to_string(table.skipped) + " skipped)");
  }
}

}  // namespace

std::string format_double(double v) {
  std::array<char, 32> buf;
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), ptr);
}

void write_run_log(const RunLog& log, const std::string& dir) {
  const std::filesystem::path base(dir);

  {
    auto out = open_out((base / "run.csv").string());
    std::string header = "t";
    for (const char* prefix : {"gt_", "vio_", "fused_"}) {
      for (const char* s : kStateSuffixes) {
        header += ',';
        header += prefix;
        header += s;
      }
    }
    for (const char* s : kDriftSuffixes) {
      header += ",drift_";
      header += s;
    }
    out << header << '\n';
    std::string line;
    for (const RunLogRow& row : log.rows) {
      line.clear();
      line += format_double(row.t);
      append_state12(line, row.gt);
      append_vio(line, row.vio);
      append_state12(line, row.fused);
      append_drift(line, row.drift);
      out << line << '\n';
    }
  }

  {
    auto out = open_out((base / "measurements.csv").string());
    out << "t_meas,t_delivered,x,y,z,yaw,c_ld,accepted\n";
    for (const MeasurementRecord& m : log.measurements) {
      out << format_double(m.t_meas) << ',' << format_double(m.t_delivered)
          << ',' << format_double(m.position.x()) << ','
          << format_double(m.position.y()) << ','
          << format_double(m.position.z()) << ',' << format_double(m.yaw)
          << ',' << format_double(m.confidence) << ',' << (m.accepted ? 1 : 0)
          << '\n';
    }
  }

  {
    auto out = open_out((base / "imu.csv").string());
    out << "t,roll,pitch,p,q\n";
    for (const ImuRecord& s : log.imu) {
      out << format_double(s.t) << ',' << format_double(s.channels.roll) << ','
          << format_double(s.channels.pitch) << ','
          << format_double(s.channels.roll_rate) << ','
          << format_double(s.channels.pitch_rate) << '\n';
    }
  }

  {
    auto out = open_out((base / "fused.csv").string());
    out << fused_header() << '\n';
    std::string line;
    for (const RunLogRow& row : log.rows) {
      line.clear();
      append_fused_row(line, row.t, row.fused, row.drift);
      out << line << '\n';
    }
  }
}

void write_fused_log(std::span<const FusedRow> rows, const std::string& path) {
  auto out = open_out(path);
  out << fused_header() << '\n';
  std::string line;
  for (const FusedRow& row : rows) {
    const State12 state{row.state.position, row.state.orientation_rpy,
                        row.state.velocity_world, row.state.body_rates};
    line.clear();
    append_fused_row(line, row.t, state, row.drift);
    out << line << '\n';
  }
}

void write_summary(const RunStats& stats, const std::string& path) {
  auto out = open_out(path);
  out << "stream,state,rmse,mean,stddev,max\n";
  const std::array<std::pair<const char*, const ErrorStats*>, 2> streams = {
      {{"fused", &stats.fused}, {"vio", &stats.vio}}};
  for (const auto& [name, errors] : streams) {
    const GroupStats* groups[4] = {&errors->position, &errors->orientation,
                                   &errors->velocity, &errors->angular_rate};
    for (int g = 0; g < 4; ++g) {
      out << name << ',' << kGroupNames[g] << ','
          << format_double(groups[g]->rmse) << ','
          << format_double(groups[g]->mean) << ','
          << format_double(groups[g]->stddev) << ','
          << format_double(groups[g]->max_error) << '\n';
    }
  }
}

void write_sweep_outputs(const SweepResult& result, const std::string& dir) {
  const std::filesystem::path base(dir);

  {
    auto out = open_out((base / "sweep.csv").string());
    out << "delay,sigma_p,sigma_yaw,trials";
    for (const char* prefix : {"fused_", "vio_"}) {
      for (const char* g : kGroupNames) {
        out << ',' << prefix << g << "_rmse";
      }
    }
    out << '\n';
    for (const SweepCell& cell : result.cells) {
      out << format_double(cell.delay) << ',' << format_double(cell.sigma_p)
          << ',' << format_double(cell.sigma_yaw) << ',' << result.trials;
      for (const auto* rmse : {&cell.fused_rmse, &cell.vio_rmse}) {
        for (double v : *rmse) {
          out << ',' << format_double(v);
        }
      }
      out << '\n';
    }
  }

  {
    auto out = open_out((base / "seeds.csv").string());
    out << "delay,sigma_p,sigma_yaw,trial,seed\n";
    for (const SweepCell& cell : result.cells) {
      for (std::size_t trial = 0; trial < cell.seeds.size(); ++trial) {
        out << format_double(cell.delay) << ',' << format_double(cell.sigma_p)
            << ',' << format_double(cell.sigma_yaw) << ',' << trial << ','
            << cell.seeds[trial] << '\n';
      }
    }
  }

  {
    // Markdown table shaped like the simulation-study report: one block of
    // rows per delay, one row per state group, column pairs ours / VIO.
    auto out = open_out((base / "sweep.md").string());
    std::vector<double> delays;
    for (const SweepCell& cell : result.cells) {
      if (delays.empty() || delays.back() != cell.delay) {
        delays.push_back(cell.delay);
      }
    }
    const std::size_t per_delay = result.cells.size() / delays.size();

    char buf[64];
    out << "| delay [ms] | state |";
    for (const char* prefix : {" ours s_p=", " vio s_p="}) {
      for (std::size_t i = 0; i < per_delay; ++i) {
        std::snprintf(buf, sizeof buf, "%s%g |", prefix,
                      result.cells[i].sigma_p);
        out << buf;
      }
    }
    out << '\n' << "|---|---|";
    for (std::size_t i = 0; i < 2 * per_delay; ++i) {
      out << "---|";
    }
    out << '\n';

    const char* group_labels[4] = {"p [m]", "theta [rad]", "v [m/s]",
                                   "omega [rad/s]"};
    for (std::size_t d = 0; d < delays.size(); ++d) {
      for (int g = 0; g < 4; ++g) {
        std::snprintf(buf, sizeof buf, "| %g | %s |", delays[d] * 1000.0,
                      group_labels[g]);
        out << buf;
        for (auto member : {&SweepCell::fused_rmse, &SweepCell::vio_rmse}) {
          for (std::size_t i = 0; i < per_delay; ++i) {
            const SweepCell& cell = result.cells[d * per_delay + i];
            std::snprintf(buf, sizeof buf, " %.4f |", (cell.*member)[g]);
            out << buf;
          }
        }
        out << '\n';
      }
    }
  }
}

ReplayInput read_replay_input(const std::string& dir) {
  const std::filesystem::path base(dir);
  ReplayInput input;

  const std::string run_path = (base / "run.csv").string();
  const CsvTable run = read_csv(run_path);
  enforce_row_quality(run, run_path);
  input.skipped_rows += run.skipped;

  const int t_col = run.column("t");
  if (t_col < 0) {
    throw DataError(run_path + ": missing column `t`");
  }
  std::array<int, 12> vio_cols{};
  for (int i = 0; i < 12; ++i) {
    vio_cols[i] = run.column(std::string("vio_") + kStateSuffixes[i]);
    if (vio_cols[i] < 0) {
      throw DataError(run_path + ": missing column `vio_" +
                      std::string(kStateSuffixes[i]) + "`");
    }
  }
  std::array<int, 12> gt_cols{};
  input.has_gt = true;
  for (int i = 0; i < 12; ++i) {
    gt_cols[i] = run.column(std::string("gt_") + kStateSuffixes[i]);
    if (gt_cols[i] < 0) {
      input.has_gt = false;
    }
  }

  input.odometry.reserve(run.rows.size());
  for (const auto& row : run.rows) {
    WorldOdometry s;
    s.t = row[t_col];
    s.position = Vec3(row[vio_cols[0]], row[vio_cols[1]], row[vio_cols[2]]);
    s.euler = Vec3(row[vio_cols[3]], row[vio_cols[4]], row[vio_cols[5]]);
    s.velocity_body = Vec3(row[vio_cols[6]], row[vio_cols[7]], row[vio_cols[8]]);
    s.body_rates = Vec3(row[vio_cols[9]], row[vio_cols[10]], row[vio_cols[11]]);
    input.odometry.push_back(s);
    if (input.has_gt) {
      State12 g;
      g.position = Vec3(row[gt_cols[0]], row[gt_cols[1]], row[gt_cols[2]]);
      g.euler = Vec3(row[gt_cols[3]], row[gt_cols[4]], row[gt_cols[5]]);
      g.velocity = Vec3(row[gt_cols[6]], row[gt_cols[7]], row[gt_cols[8]]);
      g.rates = Vec3(row[gt_cols[9]], row[gt_cols[10]], row[gt_cols[11]]);
      input.gt.push_back(g);
    }
  }

  const std::string meas_path = (base / "measurements.csv").string();
  if (std::filesystem::exists(meas_path)) {
    const CsvTable meas = read_csv(meas_path);
    input.skipped_rows += meas.skipped;
    const int c_t = meas.column("t_meas");
    const int c_del = meas.column("t_delivered");
    const int c_x = meas.column("x");
    const int c_y = meas.column("y");
    const int c_z = meas.column("z");
    const int c_yaw = meas.column("yaw");
    const int c_conf = meas.column("c_ld");
    if (c_t < 0 || c_del < 0 || c_x < 0 || c_y < 0 || c_z < 0 || c_yaw < 0 ||
        c_conf < 0) {
      throw DataError(meas_path + ": missing measurement columns");
    }
    for (const auto& row : meas.rows) {
      DeliveredMeasurement d;
      d.measurement.t = row[c_t];
      d.measurement.position = Vec3(row[c_x], row[c_y], row[c_z]);
      d.measurement.yaw = row[c_yaw];
      d.measurement.confidence = row[c_conf];
      d.t_delivered = row[c_del];
      input.measurements.push_back(d);
    }
  }

  const std::string imu_path = (base / "imu.csv").string();
  if (std::filesystem::exists(imu_path)) {
    const CsvTable imu = read_csv(imu_path);
    input.skipped_rows += imu.skipped;
    const int c_t = imu.column("t");
    const int c_roll = imu.column("roll");
    const int c_pitch = imu.column("pitch");
    const int c_p = imu.column("p");
    const int c_q = imu.column("q");
    if (c_t < 0 || c_roll < 0 || c_pitch < 0 || c_p < 0 || c_q < 0) {
      throw DataError(imu_path + ": missing IMU columns");
    }
    for (const auto& row : imu.rows) {
      input.imu.push_back(
          {row[c_t], {row[c_roll], row[c_pitch], row[c_p], row[c_q]}});
    }
  }

  return input;
}

}  // namespace driftfuse
