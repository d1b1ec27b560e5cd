#include "hnb/report.hpp"

#include <cstdio>
#include <cstdlib>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace hnb {

namespace {

constexpr const char* base_header = "t,body,chart,pos_re,pos_im,vel_re,vel_im,h,c1,c2,c3";

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) out.push_back(field);
    return out;
}

double parse_double(const std::string& s) {
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (s.empty() || end != s.c_str() + s.size()) throw std::runtime_error("bad number '" + s + "' in CSV");
    return v;
}

}  // namespace

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string csv_header(bool with_sheet) {
    std::string h = base_header;
    if (with_sheet) h += ",pos_x,pos_y,pos_z";
    return h;
}

std::string csv_line(const CsvRow& r) {
    std::string line = format_double(r.t) + "," + std::to_string(r.body) + "," + chart_name(r.chart);
    for (double v : {r.pos.real(), r.pos.imag(), r.vel.real(), r.vel.imag(), r.h, r.c1, r.c2, r.c3}) {
        line += "," + format_double(v);
    }
    if (r.sheet) {
        for (double v : {r.sheet->x, r.sheet->y, r.sheet->z}) line += "," + format_double(v);
    }
    return line;
}

std::vector<CsvRow> trajectory_rows(const Trajectory& traj) {
    std::vector<CsvRow> rows;
    for (std::size_t i = 0; i < traj.times.size(); ++i) {
        const auto& cfg = traj.states[i];
        const auto& f = traj.integrals[i];
        for (std::size_t k = 0; k < cfg.bodies.size(); ++k) {
            rows.push_back({traj.times[i], k, cfg.chart, cfg.bodies[k].pos, cfg.bodies[k].vel, f.h, f.c1, f.c2, f.c3,
                            std::nullopt});
        }
    }
    return rows;
}

std::vector<CsvRow> trajectory_rows(const SpatialTrajectory& traj) {
    std::vector<CsvRow> rows;
    for (std::size_t i = 0; i < traj.times.size(); ++i) {
        const auto& cfg = traj.states[i];
        const auto& f = traj.integrals[i];
        for (std::size_t k = 0; k < cfg.bodies.size(); ++k) {
            const auto& b = cfg.bodies[k];
            const PlanarState disk = disk_state_from_hyperboloid(cfg.ctx, SpatialState{b.pos, b.vel});
            rows.push_back({traj.times[i], k, Chart::hyperboloid, disk.pos, disk.vel, f.h, f.c1, f.c2, f.c3, b.pos});
        }
    }
    return rows;
}

void write_csv(std::ostream& out, const std::vector<CsvRow>& rows) {
    const bool sheet = !rows.empty() && rows.front().sheet.has_value();
    out << csv_header(sheet) << '\n';
    for (const auto& r : rows) out << csv_line(r) << '\n';
}

std::vector<CsvRow> read_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("empty CSV");
    bool sheet = false;
    if (line == csv_header(true)) {
        sheet = true;
    } else if (line != csv_header(false)) {
        throw std::runtime_error("unexpected CSV header");
    }
    const std::size_t width = sheet ? 14 : 11;
    std::vector<CsvRow> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto f = split(line);
        if (f.size() != width) throw std::runtime_error("CSV row has the wrong number of fields");
        CsvRow r;
        r.t = parse_double(f[0]);
        r.body = static_cast<std::size_t>(std::stoull(f[1]));
        r.chart = chart_from_name(f[2].c_str());
        r.pos = {parse_double(f[3]), parse_double(f[4])};
        r.vel = {parse_double(f[5]), parse_double(f[6])};
        r.h = parse_double(f[7]);
        r.c1 = parse_double(f[8]);
        r.c2 = parse_double(f[9]);
        r.c3 = parse_double(f[10]);
        if (sheet) r.sheet = Vec3{parse_double(f[11]), parse_double(f[12]), parse_double(f[13])};
        rows.push_back(r);
    }
    return rows;
}

}  // namespace hnb
