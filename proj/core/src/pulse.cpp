#include "blockade/pulse.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include "blockade/matrix_io.hpp"

namespace blockade {

void PulseSequence::validate() const {
    if (dt <= 0.0) throw std::invalid_argument("PulseSequence: dt must be > 0");
    if (channel_names.size() != channels.size())
        throw std::invalid_argument("PulseSequence: name/channel count mismatch");
    for (const auto& ch : channels)
        if (ch.size() != channels[0].size())
            throw std::invalid_argument("PulseSequence: channels have unequal lengths");
}

PulseSequence PulseSequence::constant(double dt, int steps, const std::vector<std::string>& names,
                                      const std::vector<Complex>& amplitudes) {
    if (names.size() != amplitudes.size())
        throw std::invalid_argument("PulseSequence::constant: name/amplitude count mismatch");
    PulseSequence p;
    p.dt = dt;
    p.channel_names = names;
    for (Complex a : amplitudes)
        p.channels.emplace_back(static_cast<std::size_t>(steps), a);
    p.validate();
    return p;
}

void PulseSequence::save_csv(const std::string& path) const {
    validate();
    std::ofstream os(path);
    if (!os) throw std::runtime_error("PulseSequence::save_csv: cannot open " + path);
    os << "time";
    for (const auto& n : channel_names) os << ",re(" << n << "),im(" << n << ")";
    os << "\n";
    for (int k = 0; k < steps(); ++k) {
        os << format_double(k * dt);
        for (const auto& ch : channels)
            os << "," << format_double(ch[k].real()) << "," << format_double(ch[k].imag());
        os << "\n";
    }
}

PulseSequence PulseSequence::load_csv(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("PulseSequence::load_csv: cannot open " + path);
    std::string header;
    if (!std::getline(is, header))
        throw std::runtime_error("PulseSequence::load_csv: empty file " + path);

    PulseSequence p;
    {
        std::stringstream ss(header);
        std::string col;
        bool first = true;
        while (std::getline(ss, col, ',')) {
            if (first) {
                first = false;
                continue;
            }
            if (col.rfind("re(", 0) == 0 && col.back() == ')')
                p.channel_names.push_back(col.substr(3, col.size() - 4));
        }
    }
    p.channels.resize(p.channel_names.size());

    std::vector<double> times;
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string cell;
        std::vector<double> row;
        while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
        if (row.size() != 1 + 2 * p.channel_names.size())
            throw std::runtime_error("PulseSequence::load_csv: malformed row in " + path);
        times.push_back(row[0]);
        for (std::size_t c = 0; c < p.channel_names.size(); ++c)
            p.channels[c].emplace_back(row[1 + 2 * c], row[2 + 2 * c]);
    }
    if (times.size() < 1)
        throw std::runtime_error("PulseSequence::load_csv: no samples in " + path);
    p.dt = times.size() >= 2 ? times[1] - times[0] : times[0];
    if (p.dt <= 0.0) throw std::runtime_error("PulseSequence::load_csv: non-positive dt");
    p.validate();
    return p;
}

} // namespace blockade
