#include "torus_holonomy/random_fields.hpp"

#include <map>

namespace torus {

TorusFourierField random_real_field(int dimension, int bandwidth, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> value(-1.0, 1.0);
  std::bernoulli_distribution present(0.5);
  std::map<Shift, Complex> coefficients;
  const int side = 2 * bandwidth + 1;
  int total = 1;
  for (int k = 0; k < dimension; ++k) total *= side;
  for (int index = 0; index < total; ++index) {
    Shift c(dimension);
    int rest = index;
    for (int k = dimension - 1; k >= 0; --k) {
      c[k] = rest % side - bandwidth;
      rest /= side;
    }
    Shift minus(dimension);
    for (int k = 0; k < dimension; ++k) minus[k] = -c[k];
    if (c == minus) {
      coefficients[c] = value(rng);
    } else if (minus < c && present(rng)) {
      const Complex v(value(rng), value(rng));
      coefficients[c] = v;
      coefficients[minus] = std::conj(v);
    }
  }
  return TorusFourierField(dimension, std::move(coefficients));
}

AffineObservable random_affine(int dimension, int bandwidth, std::mt19937_64& rng) {
  std::vector<TorusFourierField> a;
  for (int k = 0; k < dimension; ++k) a.push_back(random_real_field(dimension, bandwidth, rng));
  TorusFourierField b = random_real_field(dimension, bandwidth, rng);
  return AffineObservable(std::move(a), std::move(b));
}

}  // namespace torus
