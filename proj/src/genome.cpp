#include "snsmq/genome.hpp"

#include <algorithm>
#include <cmath>

namespace snsmq {

Genome Genome::parse(std::string_view text) {
  std::uint16_t bits = 0;
  unsigned count = 0;
  for (char c : text) {
    if (c == ' ' || c == '_') continue;
    if ((c != '0' && c != '1') || count == kBits) throw DomainError("bad genome string '" + std::string(text) + "'");
    bits = static_cast<std::uint16_t>((bits << 1) | (c == '1'));
    ++count;
  }
  if (count != kBits) throw DomainError("bad genome string '" + std::string(text) + "'");
  return Genome(bits);
}

std::string Genome::to_string() const {
  std::string s(kBits, '0');
  for (unsigned i = 0; i < kBits; ++i)
    if (locus(i)) s[i] = '1';
  return s;
}

StrategyParams decode(Genome g) {
  return StrategyParams{g.b_field() / 7.0, g.l_field() / 7.0, (g.q_field() + 1) / 8.0};
}

namespace {

unsigned lattice_index(double value, double scale, unsigned offset, const char* what) {
  const double k = value * scale - offset;
  const double r = std::round(k);
  if (!(r >= 0.0 && r <= 7.0) || (r + offset) / scale != value)
    throw DomainError(std::string(what) + " is not on the genome lattice");
  return static_cast<unsigned>(r);
}

}  // namespace

Genome encode(const StrategyParams& p) {
  return Genome::from_fields(lattice_index(p.b, 7.0, 0, "b"), lattice_index(p.l, 7.0, 0, "l"),
                             lattice_index(p.q, 8.0, 1, "q"));
}

Genome uniform_crossover(Genome p1, Genome p2, Rng& rng) {
  const auto take_p2 = static_cast<std::uint16_t>(rng() & Genome::kMask);
  return Genome(static_cast<std::uint16_t>((p1.bits() & ~take_p2) | (p2.bits() & take_p2)));
}

Genome mutate(Genome g, double m, Rng& rng) {
  std::uint16_t flips = 0;
  for (unsigned i = 0; i < Genome::kBits; ++i)
    if (rng.bernoulli(m)) flips |= static_cast<std::uint16_t>(1u << i);
  return Genome(static_cast<std::uint16_t>(g.bits() ^ flips));
}

std::vector<double> selection_probabilities(std::span<const double> fitness, double epsilon) {
  if (fitness.empty()) throw StructureError("selection needs at least one candidate");
  const double u_min = *std::min_element(fitness.begin(), fitness.end());
  const double share = epsilon / static_cast<double>(fitness.size());
  std::vector<double> w(fitness.size());
  double total = 0.0;
  for (std::size_t k = 0; k < fitness.size(); ++k) {
    const double d = fitness[k] - u_min;
    w[k] = d * d + share;
    total += w[k];
  }
  for (auto& x : w) x /= total;
  return w;
}

std::size_t select_parent(std::span<const double> fitness, double epsilon, Rng& rng) {
  if (fitness.empty()) throw StructureError("selection needs at least one candidate");
  const double u_min = *std::min_element(fitness.begin(), fitness.end());
  const double share = epsilon / static_cast<double>(fitness.size());
  double total = 0.0;
  for (double f : fitness) total += (f - u_min) * (f - u_min) + share;
  double x = rng.uniform() * total;
  for (std::size_t k = 0; k < fitness.size(); ++k) {
    x -= (fitness[k] - u_min) * (fitness[k] - u_min) + share;
    if (x < 0.0) return k;
  }
  return fitness.size() - 1;
}

}  // namespace snsmq
