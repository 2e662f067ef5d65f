#include "gradedmt/samples.hh"

namespace gradedmt::samples {

Structure constant_predicate(ChainPtr chain, std::vector<std::string> domain,
                             const std::string& pred, Elem value) {
  Structure s(std::move(chain), std::move(domain));
  s.set_predicate(pred, {1, std::vector<Elem>(s.size(), value)});
  return s;
}

Structure complete_graph(ChainPtr chain, std::vector<std::string> vertices) {
  Structure s(std::move(chain), std::move(vertices));
  const int n = s.size();
  std::vector<Elem> r(n * n, s.chain().bottom());
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y)
      if (x != y) r[x * n + y] = s.chain().top();
  s.set_predicate("R", {2, std::move(r)});
  return s;
}

std::vector<std::string> numbered(const std::string& prefix, int n) {
  std::vector<std::string> out;
  for (int i = 0; i < n; ++i) out.push_back(prefix + std::to_string(i));
  return out;
}

}  // namespace gradedmt::samples
