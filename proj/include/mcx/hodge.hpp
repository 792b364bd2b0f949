#pragma once

#include "mcx/multicomplex.hpp"

#include <map>

namespace mcx {

// Operators attached to one bidegree (a, b).
struct HodgeBlock {
    Matrix delta0; // C_{a,b} -> C_{a,b-1}, transpose of d_0
    Matrix box0;   // C_{a,b} -> C_{a,b}
    Matrix d0inv;  // C_{a,b} -> C_{a,b-1}
    Matrix pi0;    // orthogonal projection onto e0
    Subspace e0;
    Subspace im_d0;
    Subspace im_delta0;
};

class HodgeKit {
  public:
    std::map<Bidegree, HodgeBlock> blocks;

    bool has(Bidegree bd) const { return blocks.count(bd) > 0; }

    const HodgeBlock &at(Bidegree bd) const {
        auto it = blocks.find(bd);
        if (it == blocks.end())
            throw std::out_of_range("no space at " + to_string(bd));
        return it->second;
    }

    Subspace e0(Bidegree bd) const { return has(bd) ? at(bd).e0 : Subspace(0); }

    std::size_t e0_dim(Bidegree bd) const { return has(bd) ? at(bd).e0.dim() : 0; }

    // d_0^{-1} leaving bd, zero of the right shape when absent
    Matrix d0inv(Bidegree bd, std::size_t target_dim) const {
        return has(bd) ? at(bd).d0inv : Matrix(target_dim, 0);
    }
};

inline HodgeKit build_hodge_kit(const MulticomplexData &mc) {
    HodgeKit kit;
    for (const auto &bd : mc.bidegrees()) {
        Bidegree below{bd.a, bd.b - 1};
        Matrix d_in = mc.d(0, below); // C_{a,b-1} -> C_{a,b}
        Matrix d_out = mc.d(0, bd);   // C_{a,b} -> C_{a,b+1}
        HodgeBlock blk;
        blk.delta0 = d_in.transpose();
        blk.box0 = d_in * blk.delta0 + d_out.transpose() * d_out;
        blk.d0inv = pseudo_inverse(d_in);
        Matrix out_inv = pseudo_inverse(d_out); // C_{a,b+1} -> C_{a,b}
        blk.pi0 = Matrix::identity(mc.dim(bd)) - out_inv * d_out - d_in * blk.d0inv;
        blk.e0 = kernel(blk.box0);
        blk.im_d0 = image(d_in);
        blk.im_delta0 = image(d_out.transpose());
        kit.blocks[bd] = std::move(blk);
    }
    return kit;
}

struct HodgeParts {
    Vector check; // in Im d_0
    Vector bar;   // in ker Box_0
    Vector hat;   // in Im delta_0
};

inline HodgeParts hodge_split(const MulticomplexData &mc, const HodgeKit &kit, Bidegree bd,
                              const Vector &x) {
    const auto &blk = kit.at(bd);
    Matrix d_in = mc.d(0, {bd.a, bd.b - 1});
    Matrix d_out = mc.d(0, bd);
    HodgeParts parts;
    parts.check = d_in * (blk.d0inv * x);
    parts.bar = blk.pi0 * x;
    parts.hat = pseudo_inverse(d_out) * (d_out * x);
    return parts;
}

inline Subspace harmonic_space(const HodgeKit &kit, int a, int b) { return kit.e0({a, b}); }

} // namespace mcx
