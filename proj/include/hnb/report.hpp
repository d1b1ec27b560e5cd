#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "hnb/integrator.hpp"

namespace hnb {

// One body at one time. Hyperboloid runs store the disk image in pos/vel and the
// point on the sheet in `sheet`.
struct CsvRow {
    double t = 0.0;
    std::size_t body = 0;
    Chart chart = Chart::disk;
    cplx pos;
    cplx vel;
    double h = 0.0;
    double c1 = 0.0;
    double c2 = 0.0;
    double c3 = 0.0;
    std::optional<Vec3> sheet;

    friend bool operator==(const CsvRow&, const CsvRow&) = default;
};

// 17 significant digits, enough to round-trip every double.
std::string format_double(double v);

std::string csv_header(bool with_sheet);
std::string csv_line(const CsvRow& row);

std::vector<CsvRow> trajectory_rows(const Trajectory& traj);
std::vector<CsvRow> trajectory_rows(const SpatialTrajectory& traj);

void write_csv(std::ostream& out, const std::vector<CsvRow>& rows);
// Throws std::runtime_error on malformed input.
std::vector<CsvRow> read_csv(std::istream& in);

}  // namespace hnb
