#pragma once

#include <random>

#include "ddelta/exppoly.hpp"

namespace testing_util {

using namespace ddelta;

inline PolyC P(std::initializer_list<long> c) { return PolyC::from_ints(c); }
inline const ExpPoly S = ExpPoly::sigma(1);
inline const ExpPoly Z = ExpPoly::z();
inline ExpPoly C(long c) { return ExpPoly(GaussianRational(c)); }

inline GaussianRational random_gr(std::mt19937& rng, int range = 3, bool complex = true) {
  std::uniform_int_distribution<long> d(-range, range);
  std::uniform_int_distribution<long> den(1, 3);
  GaussianRational re = GaussianRational::from_fraction(d(rng), den(rng));
  if (!complex) return re;
  std::bernoulli_distribution coin(0.3);
  if (!coin(rng)) return re;
  return re + GaussianRational::from_fraction(d(rng), den(rng)) * GaussianRational::i();
}

inline PolyC random_poly(std::mt19937& rng, int max_deg, bool complex = true) {
  std::uniform_int_distribution<int> dd(0, max_deg);
  int deg = dd(rng);
  std::vector<GaussianRational> c;
  for (int k = 0; k <= deg; ++k) c.push_back(random_gr(rng, 3, complex));
  return PolyC(std::move(c));
}

inline ExpPoly random_ep(std::mt19937& rng, int lo, int hi, int max_deg, bool complex = true) {
  ExpPoly out;
  std::bernoulli_distribution keep(0.7);
  for (int j = lo; j <= hi; ++j)
    if (keep(rng)) out += ExpPoly::term(j, random_poly(rng, max_deg, complex));
  return out;
}

}  // namespace testing_util
