// Agreement and label correlation on small hand-made inputs.

#include <cstdio>

#include "pejor/pejor.hpp"

int main() {
  using namespace pejor;

  AnnotationSet set;
  const int a[] = {1, 1, 0, 0};
  const int b[] = {1, 0, 0, 0};
  for (int i = 0; i < 4; ++i) {
    set.add("A", "item" + std::to_string(i), a[i]);
    set.add("B", "item" + std::to_string(i), b[i]);
  }
  std::printf("alpha (2 annotators x 4 items) = %.6f\n", krippendorff_alpha(set));

  ContingencyTable t{391, 6, 190, 613};
  std::printf("phi(misogynous, pejorative)    = %.4f\n", phi_correlation(t));
}
