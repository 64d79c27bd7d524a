#ifndef LATDIFF_LATTICE_HPP
#define LATDIFF_LATTICE_HPP

// Lattice geometry for desk-scale dimensions (n <= 8): basis/dual/volume,
// content and visibility of lattice vectors, exact point enumeration in
// balls, a componentwise Chinese remainder solver, and the CRT sieve
// construction of arbitrarily large holes in the set of visible points.
//
// A point x (integer coordinates w.r.t. the basis) is "visible" when the
// gcd of its coordinates -- its content -- is 1, i.e. the open segment
// from the origin to x contains no other lattice point.

#include <cstdint>
#include <functional>
#include <limits>
#include <span>
#include <vector>

namespace latdiff {

// integer coordinates relative to the owning lattice basis
using LatticeVector = std::vector<std::int64_t>;

// cont(0) = infinity, kept as a distinguished value so that the zero
// vector never passes a finite-content filter
inline constexpr std::uint64_t kContentInfinite = std::numeric_limits<std::uint64_t>::max();

inline constexpr std::uint64_t kDefaultCountCeiling = std::uint64_t(1) << 32;

// gcd of the coordinates; kContentInfinite for the zero vector.
// Basis-independent (unimodular coordinate changes preserve it).
std::uint64_t content(std::span<const std::int64_t> x);

// content(x) == 1.  Throws std::domain_error for x = 0, where the
// characteristic function of the visible points is undefined.
bool is_visible(std::span<const std::int64_t> x);

// volume of the unit ball in R^n
double unit_ball_volume(int n);

class Lattice {
public:
    static constexpr int kMaxDim = 8;

    // Z^n
    explicit Lattice(int dim);

    // basis vectors are the columns of a column-major n x n matrix
    Lattice(int dim, std::vector<double> basis_col_major);

    int dim() const { return dim_; }
    double det_abs() const { return det_abs_; }
    double volume() const { return det_abs_; }
    double density() const { return 1.0 / det_abs_; }
    bool identity_basis() const { return identity_; }

    // entry (row, col); column `col` is the basis vector b_col
    double basis_entry(int row, int col) const { return basis_[static_cast<std::size_t>(col) * dim_ + row]; }
    std::span<const double> basis_col_major() const { return basis_; }

    // row-major inverse of the basis matrix
    std::span<const double> inverse_row_major() const { return inv_; }

    // dual (reciprocal) lattice: basis is the inverse transpose, so
    // dens(dual) = vol(this) and dual().dual() == *this
    Lattice dual() const;

    // length of the shortest nonzero lattice vector, found by exhaustive
    // search in a ball of radius twice the largest basis-column norm
    double shortest_vector_length() const { return shortest_len_; }

    // physical position B*x of a coordinate vector
    void position_into(std::span<const std::int64_t> coords, std::span<double> out) const;
    std::vector<double> position(std::span<const std::int64_t> coords) const;

private:
    int dim_;
    std::vector<double> basis_;  // column-major
    std::vector<double> inv_;    // row-major inverse
    double det_abs_;
    double shortest_len_;
    bool identity_;

    void init();
};

struct PointFilter {
    enum class Kind { All, Visible, Content };
    Kind kind = Kind::All;
    std::uint64_t content_value = 1;

    static PointFilter all() { return {Kind::All, 1}; }
    static PointFilter visible() { return {Kind::Visible, 1}; }
    static PointFilter with_content(std::uint64_t m) { return {Kind::Content, m}; }

    bool passes(std::span<const std::int64_t> coords) const {
        switch (kind) {
            case Kind::All: return true;
            case Kind::Visible: return content(coords) == 1;
            case Kind::Content: return content(coords) == content_value;
        }
        return false;
    }
};

// Visit every coordinate vector x with |Bx - center| < R (strict) that
// passes the filter, in lexicographic coordinate order.  Throws
// SizeLimitError when the volume bound on the in-ball point count
// exceeds count_ceiling.
void for_each_in_ball(const Lattice& lat, std::span<const double> center, double radius,
                      const PointFilter& filter,
                      const std::function<void(std::span<const std::int64_t>)>& fn,
                      std::uint64_t count_ceiling = kDefaultCountCeiling);

std::vector<LatticeVector> points_in_ball(const Lattice& lat, std::span<const double> center,
                                          double radius, const PointFilter& filter,
                                          std::uint64_t count_ceiling = kDefaultCountCeiling);

// Exact count, partitioned into `slabs` first-coordinate slabs that may
// run concurrently (integer reduction, order-independent).
std::uint64_t count_in_ball(const Lattice& lat, std::span<const double> center, double radius,
                            const PointFilter& filter, int slabs = 1,
                            std::uint64_t count_ceiling = kDefaultCountCeiling);

// Componentwise CRT: the unique a (componentwise, 0 <= a_i < prod moduli)
// with a == residues[j] mod moduli[j]*Z^n for every j.  Moduli must be
// pairwise coprime and > 1.
LatticeVector crt_lattice(const std::vector<LatticeVector>& residues,
                          const std::vector<std::uint64_t>& moduli);

// Translation t such that every config point c_j lands in moduli[j]*Gamma
// under c_j + t, hence is invisible; built by the CRT sieve and verified
// with is_visible before returning.  Default moduli: the first s primes.
LatticeVector find_hole(const Lattice& lat, const std::vector<LatticeVector>& config,
                        std::vector<std::uint64_t> moduli = {});

// For n >= 2, any lattice vector is a difference of two visible points:
// x = (x1+1, 1, x3, ..., xn) - (1, 1-x2, 0, ..., 0).  Returns that pair.
std::pair<LatticeVector, LatticeVector> visible_difference_witness(const Lattice& lat,
                                                                   const LatticeVector& x);

}  // namespace latdiff

#endif
