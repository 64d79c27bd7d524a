#include "latdiff/io.hpp"

#include <cstdio>
#include <ostream>
#include <stdexcept>

namespace latdiff {

std::string format_double(double v) {
    char buf[40];
    // shortest representation that round-trips
    for (int prec = 15; prec <= 17; ++prec) {
        std::snprintf(buf, sizeof(buf), "%.*g", prec, v);
        double back = 0.0;
        std::sscanf(buf, "%lf", &back);
        if (back == v) break;
    }
    return buf;
}

void write_points_csv(std::ostream& os, int dim, const std::vector<LatticeVector>& points) {
    for (int i = 0; i < dim; ++i) os << 'x' << (i + 1) << ',';
    os << "content\n";
    for (const auto& p : points) {
        if (static_cast<int>(p.size()) != dim)
            throw std::invalid_argument("write_points_csv: point dimension mismatch");
        for (std::int64_t c : p) os << c << ',';
        const std::uint64_t cont = content(p);
        if (cont == kContentInfinite)
            os << "inf\n";
        else
            os << cont << '\n';
    }
}

void write_integers_csv(std::ostream& os, const std::vector<std::int64_t>& values) {
    for (std::int64_t v : values) os << v << '\n';
}

void write_convergence_csv(std::ostream& os, const std::vector<ConvergenceRow>& rows) {
    os << "R,count,estimate,theory,abs_error\n";
    for (const auto& r : rows) {
        os << format_double(r.radius) << ',' << r.count << ',' << format_double(r.estimate)
           << ',' << format_double(r.theory) << ',' << format_double(r.abs_error) << '\n';
    }
}

void write_peaks_csv(std::ostream& os, int dim, const std::vector<WeightedPeak>& peaks) {
    for (int i = 0; i < dim; ++i) os << "num_" << (i + 1) << ',';
    os << "q,intensity,amplitude\n";
    for (const auto& p : peaks) {
        if (static_cast<int>(p.location.numerator.size()) != dim)
            throw std::invalid_argument("write_peaks_csv: peak dimension mismatch");
        for (std::int64_t c : p.location.numerator) os << c << ',';
        os << p.location.q << ',' << format_double(p.intensity) << ','
           << format_double(p.amplitude) << '\n';
    }
}

void write_pgm(std::ostream& os, const RasterImage& image, const std::string& comment) {
    if (image.width <= 0 || image.height <= 0 ||
        image.pixels.size() != static_cast<std::size_t>(image.width) * image.height)
        throw std::invalid_argument("write_pgm: malformed image");
    if (comment.find('\n') != std::string::npos)
        throw std::invalid_argument("write_pgm: comment must be a single line");
    os << "P5\n# " << comment << '\n' << image.width << ' ' << image.height << "\n255\n";
    os.write(reinterpret_cast<const char*>(image.pixels.data()),
             static_cast<std::streamsize>(image.pixels.size()));
}

}  // namespace latdiff
