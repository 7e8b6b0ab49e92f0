#pragma once

#include <array>
#include <vector>

namespace rbmlab {

// Two-dimensional discrete torus (Z/LZ)^2 carrying the band-width scale W.
// Sites are indexed row-major: index = x + L*y. Distances are Euclidean
// lengths of minimal-image displacements.
class TorusLattice {
public:
    TorusLattice(int L, int W);

    int side() const { return L_; }
    int band_width() const { return W_; }
    int volume() const { return L_ * L_; }

    int index(int x, int y) const;               // wraps coordinates mod L
    std::array<int, 2> coords(int i) const;      // {x, y}
    int neighbor(int i, int dir) const;          // dir in {+x, -x, +y, -y}

    // minimal-image displacement components, each in [-L/2, L/2]
    std::array<int, 2> displacement(int i, int j) const;
    double distance(int i, int j) const;

private:
    int L_;
    int W_;
};

// Partition of the torus into axis-aligned square blocks of side `side`.
// Requires side | L. Blocks are indexed row-major over the block grid.
class BlockPartition {
public:
    BlockPartition(const TorusLattice& lat, int side);

    int block_side() const { return side_; }
    int n_blocks() const { return nb_ * nb_; }
    int block_of(int site) const { return block_of_[site]; }
    const std::vector<int>& sites_of(int block) const { return sites_[block]; }

private:
    int L_, side_, nb_;
    std::vector<int> block_of_;
    std::vector<std::vector<int>> sites_;
};

// Default block side round(W * (ln W)^(alpha/2)), clamped to [1, L].
int default_block_side(int W, int L, double alpha = 0.5);

}  // namespace rbmlab
