#pragma once

#include "hsl/grid.hpp"
#include "hsl/model.hpp"

namespace hsl {

/// Snapshot of the coupled system. `pi` is the fluid pressure returned by the
/// most recent projection.
struct State {
    double t = 0.0;
    ScalarField n;
    ScalarField c;
    VectorField u;
    ScalarField pi;

    explicit State(const Grid2D& grid) : n(grid), c(grid), u(grid), pi(grid) {}
    static State from_initial(const InitialData& data) {
        State s(data.n0.grid());
        s.n = data.n0;
        s.c = data.c0;
        s.u = data.u0;
        return s;
    }

    const Grid2D& grid() const noexcept { return n.grid(); }
    bool all_finite() const noexcept {
        return n.all_finite() && c.all_finite() && u.all_finite() && pi.all_finite();
    }
};

} // namespace hsl
