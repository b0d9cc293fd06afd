#include "chernforge/form_basis.hpp"

#include <algorithm>
#include <map>
#include <memory>
#include <mutex>
#include <utility>

#include "chernforge/errors.hpp"

namespace chernforge {

long long binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  long long r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

namespace {
void enumerate(int m, int p, int start, FormKey &cur, std::vector<FormKey> &out) {
  if (static_cast<int>(cur.size()) == p) {
    out.push_back(cur);
    return;
  }
  for (int a = start; a < m; ++a) {
    cur.push_back(a);
    enumerate(m, p, a + 1, cur, out);
    cur.pop_back();
  }
}
} // namespace

const FormBasis &form_basis(int m, int p) {
  static std::mutex mu;
  static std::map<std::pair<int, int>, std::unique_ptr<FormBasis>> cache;
  if (m < 0 || p < 0 || p > m) throw DegreeError("form degree " + std::to_string(p) + " outside [0, " + std::to_string(m) + "]");
  std::lock_guard lock(mu);
  auto &slot = cache[{m, p}];
  if (!slot) {
    slot = std::make_unique<FormBasis>();
    slot->m = m;
    slot->p = p;
    FormKey cur;
    enumerate(m, p, 0, cur, slot->keys);
  }
  return *slot;
}

std::size_t FormBasis::index_of(const FormKey &key) const {
  if (static_cast<int>(key.size()) != p) throw DegreeError("component key has wrong length");
  auto it = std::lower_bound(keys.begin(), keys.end(), key);
  if (it == keys.end() || *it != key) throw DegreeError("component key is not a strictly increasing subset of the axes");
  return static_cast<std::size_t>(it - keys.begin());
}

int shuffle_sign(const FormKey &a, const FormKey &b) {
  // Count inversions of the concatenation a ++ b.
  int inversions = 0;
  for (int x : a) {
    for (int y : b) {
      if (x == y) return 0;
      if (x > y) ++inversions;
    }
  }
  return (inversions % 2 == 0) ? 1 : -1;
}

FormKey key_union(const FormKey &a, const FormKey &b) {
  FormKey out;
  out.reserve(a.size() + b.size());
  std::merge(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

} // namespace chernforge
