#pragma once

/*
 * grid.hpp — dyadic geometry on the unit torus / cube.
 *
 * The domain is [0,1)^d discretized into 2^{Kd} cells of side h = 2^{-K}.
 * Levels run k = 0..K; the level-k dyadic cubes have side 2^{-k}, and level 0
 * is the whole domain as a single cube. A cell is addressed by integer
 * coordinates in {0..2^K-1}^d; the level-k cube containing it has coordinates
 * c >> (K-k).
 *
 * Ball geometry (radius 2^{-k}) is discretized by cell-center membership:
 * a cell belongs to B_k iff its center lies at distance < 2^{-k} from the
 * evaluation cell's center. In torus mode distances wrap; in zero-extension
 * mode the ball lives on the infinite lattice and cells outside [0,1)^d read
 * as zero. The discrete sphere of a ball is the set of member cells with at
 * least one axis-neighbor outside the ball. Consequences worth knowing:
 *
 *   - M_K is the identity (only the cell itself is closer than 2^{-K});
 *   - in torus mode a coarse ball may cover everything, so its sphere is
 *     empty and every truncated average through it vanishes.
 */

#include <array>
#include <cstdint>
#include <vector>

#include "nclab/errors.hpp"

namespace nclab {

enum class Boundary { torus, zero };

struct DyadicGrid {
    int      d = 1;        // spatial dimension, 1 or 2
    int      K = 3;        // finest level
    Boundary boundary = Boundary::torus;
    int      matdim = 1;   // matrix dimension n of the fiber M_n(C)

    DyadicGrid() = default;
    DyadicGrid(int d_, int K_, Boundary b_, int n_);

    int  side() const { return 1 << K; }
    long cell_count() const { return 1L << (K * d); }
    double cell_volume() const { return 1.0 / static_cast<double>(cell_count()); }
    double spacing() const { return 1.0 / static_cast<double>(side()); }

    long cube_count(int level) const { return 1L << (level * d); }
    long cells_per_cube(int level) const { return 1L << ((K - level) * d); }

    bool operator==(const DyadicGrid&) const = default;
};

using Coord = std::array<int, 2>; // second entry unused when d == 1

long  cell_index(const DyadicGrid& g, const Coord& c);
Coord cell_coord(const DyadicGrid& g, long index);

// Index of the level-k cube containing a finest cell.
long  cube_of_cell(const DyadicGrid& g, int level, long cell);
// Finest-cell indices of a level-k cube, in lexicographic order.
std::vector<long> cube_cells(const DyadicGrid& g, int level, long cube);

// Discrete ball of radius 2^{-k}, as cell offsets relative to the evaluation
// cell. Torus mode stores residues in [0, side)^d (each cell class once);
// zero mode stores signed lattice offsets. `sphere[i]` flags boundary cells.
struct BallStencil {
    int                 k = 0;
    std::vector<Coord>  offsets;
    std::vector<char>   sphere;
    double              volume = 0.0; // |B_k| = count * cell volume

    std::vector<Coord> sphere_offsets() const {
        std::vector<Coord> s;
        for (size_t i = 0; i < offsets.size(); ++i)
            if (sphere[i]) s.push_back(offsets[i]);
        return s;
    }
};

BallStencil ball_stencil(const DyadicGrid& g, int k);

// Offsets within Euclidean distance sqrt(d) * 2^{-m} of some sphere cell of
// B_j (the smoothing annulus I_{j,m}). Requires j < m <= K.
std::vector<Coord> annulus_stencil(const DyadicGrid& g, int j, int m);

// Resolve an offset against a base cell: returns the target cell index, or -1
// in zero mode when the target leaves the domain.
long resolve_offset(const DyadicGrid& g, const Coord& base, const Coord& offset);

void check_level(const DyadicGrid& g, int k, const char* who);

} // namespace nclab
