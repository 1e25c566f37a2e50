// Usage sample: compute the first twelve stop/continue thresholds with
// certified brackets and show how much oracle work the cache absorbed.

#include <iostream>

#include "neartop/critical.hpp"
#include "neartop/rational.hpp"

int main() {
  neartop::SignCache cache;
  auto records =
      neartop::critical_table(12, neartop::make_rational(1, 10000000), 1,
                              &cache);

  std::cout << "n   threshold  bracket\n";
  for (const auto& rec : records) {
    std::cout << rec.n << (rec.n < 10 ? "   " : "  ") << rec.decimal6 << "   ";
    if (rec.exact)
      std::cout << "= " << neartop::to_string(*rec.exact);
    else
      std::cout << "[" << neartop::to_string(rec.bracket.lo) << ", "
                << neartop::to_string(rec.bracket.hi) << "]";
    std::cout << "\n";
  }
  std::cout << "\nsign queries: " << cache.queries()
            << ", table passes: " << cache.passes() << "\n";
  return 0;
}
