#include "rbmlab/lattice.hpp"

#include <cmath>
#include <stdexcept>

namespace rbmlab {

TorusLattice::TorusLattice(int L, int W) : L_(L), W_(W) {
    if (L < 1) throw std::invalid_argument("TorusLattice: L must be >= 1");
    if (W < 1) throw std::invalid_argument("TorusLattice: W must be >= 1");
}

int TorusLattice::index(int x, int y) const {
    x %= L_;
    y %= L_;
    if (x < 0) x += L_;
    if (y < 0) y += L_;
    return x + L_ * y;
}

std::array<int, 2> TorusLattice::coords(int i) const {
    return {i % L_, i / L_};
}

int TorusLattice::neighbor(int i, int dir) const {
    auto [x, y] = coords(i);
    switch (dir) {
        case 0: return index(x + 1, y);
        case 1: return index(x - 1, y);
        case 2: return index(x, y + 1);
        case 3: return index(x, y - 1);
        default: throw std::invalid_argument("TorusLattice: dir must be in 0..3");
    }
}

std::array<int, 2> TorusLattice::displacement(int i, int j) const {
    auto a = coords(i);
    auto b = coords(j);
    std::array<int, 2> d{};
    for (int c = 0; c < 2; ++c) {
        int v = (a[c] - b[c]) % L_;
        if (v < 0) v += L_;
        if (v > L_ / 2) v -= L_;   // minimal image, ties resolved to +L/2
        d[c] = v;
    }
    return d;
}

double TorusLattice::distance(int i, int j) const {
    auto d = displacement(i, j);
    return std::sqrt(double(d[0]) * d[0] + double(d[1]) * d[1]);
}

BlockPartition::BlockPartition(const TorusLattice& lat, int side)
    : L_(lat.side()), side_(side) {
    if (side < 1 || L_ % side != 0)
        throw std::invalid_argument("BlockPartition: block side must divide L");
    nb_ = L_ / side_;
    block_of_.resize(lat.volume());
    sites_.resize(size_t(nb_) * nb_);
    for (int i = 0; i < lat.volume(); ++i) {
        auto [x, y] = lat.coords(i);
        int b = (x / side_) + nb_ * (y / side_);
        block_of_[i] = b;
        sites_[b].push_back(i);
    }
}

int default_block_side(int W, int L, double alpha) {
    double lw = std::log(double(W));
    double s = W * std::pow(std::max(lw, 0.0), alpha / 2.0);
    int side = int(std::lround(s));
    if (side < 1) side = 1;
    if (side > L) side = L;
    return side;
}

}  // namespace rbmlab
