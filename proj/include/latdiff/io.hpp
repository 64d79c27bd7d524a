#ifndef LATDIFF_IO_HPP
#define LATDIFF_IO_HPP

// Machine-readable artifact writers: point clouds and convergence tables
// as CSV, peak lists as CSV, intensity maps as binary 8-bit PGM (P5).
// All output is deterministic for a given input.

#include <iosfwd>
#include <string>
#include <vector>

#include "latdiff/diffraction.hpp"
#include "latdiff/lattice.hpp"
#include "latdiff/stats.hpp"

namespace latdiff {

// formats a double with enough digits to round-trip ("%.17g" trimmed)
std::string format_double(double v);

// header x1,...,xn,content; one row per point in the given order; the
// origin's content prints as "inf"
void write_points_csv(std::ostream& os, int dim, const std::vector<LatticeVector>& points);

// one integer per line, in the given order
void write_integers_csv(std::ostream& os, const std::vector<std::int64_t>& values);

// header R,count,estimate,theory,abs_error
void write_convergence_csv(std::ostream& os, const std::vector<ConvergenceRow>& rows);

// header num_1,...,num_n,q,intensity,amplitude
void write_peaks_csv(std::ostream& os, int dim, const std::vector<WeightedPeak>& peaks);

// binary P5, maxval 255, one '#' comment line after the magic
void write_pgm(std::ostream& os, const RasterImage& image, const std::string& comment);

}  // namespace latdiff

#endif
