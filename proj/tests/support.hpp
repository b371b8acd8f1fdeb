#pragma once

// Random draws shared by the unit tests and the acceptance runner.

#include "coorbit/groups.hpp"
#include "coorbit/momenta.hpp"
#include "coorbit/random.hpp"
#include "coorbit/sampling.hpp"

namespace coorbit::testing {

using coorbit::random_boost_param;
using coorbit::random_element;
using coorbit::random_lorentz;
using coorbit::random_momentum;

struct Frame4 {
  Vec4 i, j;
};

inline Frame4 random_frame4(Sampler& rng) {
  const Mat4 p = random_lorentz(rng);
  return {p.col(0), p.col(1)};
}

struct Frame5 {
  Vec5 i, j1, j2;
};

// Image of (e_t, e_x, e_y) under the linear part of a random G_w element.
inline Frame5 random_frame5(const Flavor& f, Sampler& rng) {
  const MatrixXd p = random_element(f, rng).P();
  return {p.col(0), p.col(1), p.col(2)};
}

}  // namespace coorbit::testing
