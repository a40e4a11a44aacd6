#include "geopth/dataset_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <unordered_map>
#include <vector>

#include "geopth/errors.hpp"

namespace geopth {

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        if (comma == std::string::npos) {
            fields.push_back(line.substr(start));
            break;
        }
        fields.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
    for (auto& f : fields) {
        const std::size_t b = f.find_first_not_of(" \t\r");
        const std::size_t e = f.find_last_not_of(" \t\r");
        f = (b == std::string::npos) ? std::string() : f.substr(b, e - b + 1);
    }
    return fields;
}

bool parse_int(const std::string& s, long long& out) {
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc() && ptr == s.data() + s.size();
}

bool parse_double(const std::string& s, double& out) {
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc() && ptr == s.data() + s.size();
}

struct PendingTrajectory {
    std::string id;
    std::string category;
    std::vector<long long> seqs;
    std::vector<std::size_t> lines;   // source line per point, for error messages
    std::vector<double> coords;       // row-major, aligned with seqs
};

}  // namespace

Dataset load_dataset(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw InputError("cannot open dataset file: " + path);
    }

    std::vector<PendingTrajectory> pending;
    std::unordered_map<std::string, std::size_t> slot_by_id;
    std::size_t dim = 0;
    std::size_t line_no = 0;
    std::string line;
    bool saw_data = false;

    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r") {
            continue;
        }
        const std::vector<std::string> fields = split_csv_line(line);
        if (fields.size() < 4) {
            throw InputError(path + ":" + std::to_string(line_no) +
                             ": expected traj_id,category,seq and at least one coordinate, got " +
                             std::to_string(fields.size()) + " columns");
        }
        long long seq = 0;
        if (!parse_int(fields[2], seq)) {
            // A non-numeric seq on the first row is a header; afterwards it is
            // a malformed row.
            if (!saw_data && pending.empty()) {
                continue;
            }
            throw InputError(path + ":" + std::to_string(line_no) + ": seq value '" + fields[2] +
                             "' is not an integer");
        }
        saw_data = true;
        const std::size_t row_dim = fields.size() - 3;
        if (dim == 0) {
            dim = row_dim;
        } else if (row_dim != dim) {
            throw InputError(path + ":" + std::to_string(line_no) + ": row has " +
                             std::to_string(row_dim) + " coordinates, file established " +
                             std::to_string(dim));
        }

        auto it = slot_by_id.find(fields[0]);
        if (it == slot_by_id.end()) {
            it = slot_by_id.emplace(fields[0], pending.size()).first;
            pending.push_back(PendingTrajectory{fields[0], fields[1], {}, {}, {}});
        }
        PendingTrajectory& t = pending[it->second];
        if (t.category != fields[1]) {
            throw InputError(path + ":" + std::to_string(line_no) + ": trajectory '" + fields[0] +
                             "' changes category from '" + t.category + "' to '" + fields[1] + "'");
        }
        for (std::size_t c = 0; c < row_dim; ++c) {
            double v = 0.0;
            if (!parse_double(fields[3 + c], v)) {
                throw InputError(path + ":" + std::to_string(line_no) + ": coordinate '" +
                                 fields[3 + c] + "' is not a number");
            }
            if (!std::isfinite(v)) {
                throw InputError(path + ":" + std::to_string(line_no) +
                                 ": non-finite coordinate '" + fields[3 + c] + "'");
            }
            t.coords.push_back(v);
        }
        t.seqs.push_back(seq);
        t.lines.push_back(line_no);
    }
    if (pending.empty()) {
        throw InputError(path + ": no trajectory rows found");
    }

    std::vector<Trajectory> trajectories;
    trajectories.reserve(pending.size());
    for (PendingTrajectory& t : pending) {
        std::vector<std::size_t> order(t.seqs.size());
        std::iota(order.begin(), order.end(), std::size_t(0));
        std::sort(order.begin(), order.end(),
                  [&](std::size_t a, std::size_t b) { return t.seqs[a] < t.seqs[b]; });
        for (std::size_t i = 1; i < order.size(); ++i) {
            if (t.seqs[order[i]] == t.seqs[order[i - 1]]) {
                throw InputError(path + ": trajectory '" + t.id + "' repeats seq " +
                                 std::to_string(t.seqs[order[i]]) + " (lines " +
                                 std::to_string(t.lines[order[i - 1]]) + " and " +
                                 std::to_string(t.lines[order[i]]) + ")");
            }
        }
        std::vector<double> coords;
        coords.reserve(t.coords.size());
        for (const std::size_t i : order) {
            for (std::size_t c = 0; c < dim; ++c) {
                coords.push_back(t.coords[i * dim + c]);
            }
        }
        trajectories.emplace_back(std::move(t.id), std::move(t.category), std::move(coords), dim);
    }
    return Dataset(std::move(trajectories));
}

void save_dataset(const Dataset& ds, const std::string& path) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) {
        throw InputError("cannot open file for writing: " + path);
    }
    out << "traj_id,category,seq";
    if (ds.dim() == 2) {
        out << ",x,y";
    } else {
        for (std::size_t c = 0; c < ds.dim(); ++c) {
            out << ",x" << (c + 1);
        }
    }
    out << '\n';
    char buf[64];
    for (const Trajectory& t : ds.trajectories()) {
        for (std::size_t i = 0; i < t.size(); ++i) {
            out << t.id() << ',' << t.category() << ',' << i;
            const PointView p = t.point(i);
            for (const double v : p) {
                std::snprintf(buf, sizeof(buf), "%.17g", v);
                out << ',' << buf;
            }
            out << '\n';
        }
    }
    if (!out) {
        throw InputError("write failed: " + path);
    }
}

}  // namespace geopth
