#include "ctsid/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "ctsid/errors.hpp"

namespace ctsid {

namespace {

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::vector<double> split_doubles(const std::string& line, const std::string& where) {
    std::vector<double> out;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) {
        try {
            std::size_t pos = 0;
            out.push_back(std::stod(field, &pos));
        } catch (const std::exception&) {
            throw IoError("malformed numeric field '" + field + "' in " + where);
        }
    }
    return out;
}

}  // namespace

void write_dataset_csv(const std::string& path, const SampledSignal& u,
                       const SampledSignal& y) {
    validate(u);
    validate(y);
    if (u.times != y.times) throw DimensionMismatch("write_dataset_csv: u/y grids differ");
    std::ofstream out(path);
    if (!out) throw IoError("write_dataset_csv: cannot open " + path);
    out << "t,u,y\n";
    for (std::size_t k = 0; k < u.size(); ++k)
        out << fmt(u.times[k]) << ',' << fmt(u.values[k]) << ',' << fmt(y.values[k]) << '\n';
    if (!out) throw IoError("write_dataset_csv: write failure on " + path);
}

std::pair<SampledSignal, SampledSignal> read_dataset_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("read_dataset_csv: cannot open " + path);
    std::string line;
    if (!std::getline(in, line) || line.rfind("t,u,y", 0) != 0)
        throw IoError("read_dataset_csv: missing t,u,y header in " + path);
    SampledSignal u, y;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const std::vector<double> row = split_doubles(line, path);
        if (row.size() != 3) throw IoError("read_dataset_csv: expected 3 columns in " + path);
        u.times.push_back(row[0]);
        y.times.push_back(row[0]);
        u.values.push_back(row[1]);
        y.values.push_back(row[2]);
    }
    validate(u);
    validate(y);
    return {u, y};
}

void write_multisine(const std::string& path, const Multisine& ms) {
    std::ofstream out(path);
    if (!out) throw IoError("write_multisine: cannot open " + path);
    out << "offset=" << fmt(ms.offset) << '\n';
    out << "amp,freq_rad_s,phase_rad\n";
    for (const auto& c : ms.components)
        out << fmt(c.amp) << ',' << fmt(c.omega) << ',' << fmt(c.phase) << '\n';
    if (!out) throw IoError("write_multisine: write failure on " + path);
}

Multisine read_multisine(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("read_multisine: cannot open " + path);
    std::string line;
    if (!std::getline(in, line) || line.rfind("offset=", 0) != 0)
        throw IoError("read_multisine: missing offset line in " + path);
    Multisine ms;
    try {
        ms.offset = std::stod(line.substr(7));
    } catch (const std::exception&) {
        throw IoError("read_multisine: malformed offset in " + path);
    }
    if (!std::getline(in, line) || line.rfind("amp,freq_rad_s,phase_rad", 0) != 0)
        throw IoError("read_multisine: missing component header in " + path);
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const std::vector<double> row = split_doubles(line, path);
        if (row.size() != 3) throw IoError("read_multisine: expected 3 columns in " + path);
        ms.components.push_back({row[0], row[1], row[2]});
    }
    validate(ms);
    return ms;
}

void write_report(const std::string& path, const EstimationResult& result,
                  const std::string& estimator_name) {
    std::ofstream out(path);
    if (!out) throw IoError("write_report: cannot open " + path);
    out << "estimator=" << estimator_name << '\n';
    out << "converged=" << (result.converged ? 1 : 0) << '\n';
    out << "iterations=" << result.iterations.size() << '\n';
    out << "theta=";
    for (int p = 0; p < result.theta.packed.size(); ++p) {
        if (p) out << ',';
        out << fmt(result.theta.packed(p));
    }
    out << '\n';
    out << "iter,relative_step,reflected,condition,theta...\n";
    for (const auto& rec : result.iterations) {
        out << rec.index << ',' << fmt(rec.relative_step) << ',' << (rec.reflected ? 1 : 0)
            << ',' << fmt(rec.condition_estimate);
        for (int p = 0; p < rec.theta.packed.size(); ++p) out << ',' << fmt(rec.theta.packed(p));
        out << '\n';
    }
    if (!out) throw IoError("write_report: write failure on " + path);
}

}  // namespace ctsid
