#pragma once

// Seeded random group elements and momenta.

#include "coorbit/groups.hpp"
#include "coorbit/momenta.hpp"
#include "coorbit/sampling.hpp"

namespace coorbit {

inline Mat4 random_lorentz(Sampler& rng, double max_speed = 0.8) {
  return lorentz_from_boost_rotation(rng.velocity(max_speed), rng.rotation());
}

// Boost parameters with 1 + w^2 b*b kept away from zero.
inline Vec4 random_boost_param(const Flavor& f, Sampler& rng) {
  for (;;) {
    const Vec4 b = rng.vec<4>(-1, 1);
    if (1.0 + f.w2() * minkowski().dot(b, b) > 0.05) return b;
  }
}

inline GroupElement random_element(const Flavor& f, Sampler& rng) {
  ElementParams prm;
  prm.C = rng.vec<4>(-2, 2);
  prm.PL = random_lorentz(rng);
  if (f.five_dim()) {
    prm.xi = rng.uniform(-2, 2);
    prm.b = random_boost_param(f, rng);
  }
  return make_element(f, prm);
}

// Entries in [-2, 2], rejected unless timelike with margin 0.1.
inline Momentum random_momentum(const Flavor& f, Sampler& rng) {
  for (;;) {
    Momentum mu = from_components(f, rng.vec(momentum_dim(f), -2, 2));
    if (mass_square(mu) >= 0.1) return mu;
  }
}

}  // namespace coorbit
