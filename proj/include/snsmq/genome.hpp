#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "snsmq/game.hpp"
#include "snsmq/rng.hpp"

namespace snsmq {

/// 9-bit chromosome laid out [B:3][L:3][Q:3], most significant field first.
///
/// B and L bits k decode to rate k/7; Q bits k decode to quality (k+1)/8.
class Genome {
 public:
  static constexpr unsigned kBits = 9;
  static constexpr std::uint16_t kMask = (1u << kBits) - 1;
  static constexpr unsigned kCount = 1u << kBits;

  constexpr Genome() = default;
  constexpr explicit Genome(std::uint16_t bits) : bits_(bits & kMask) {}

  static constexpr Genome from_fields(unsigned b, unsigned l, unsigned q) {
    return Genome(static_cast<std::uint16_t>(((b & 7u) << 6) | ((l & 7u) << 3) | (q & 7u)));
  }

  /// Parses "011000111" (spaces allowed between groups).
  static Genome parse(std::string_view text);

  constexpr std::uint16_t bits() const { return bits_; }
  constexpr unsigned b_field() const { return (bits_ >> 6) & 7u; }
  constexpr unsigned l_field() const { return (bits_ >> 3) & 7u; }
  constexpr unsigned q_field() const { return bits_ & 7u; }

  /// Locus i counted from the most significant bit (0 = first B bit).
  constexpr bool locus(unsigned i) const { return (bits_ >> (kBits - 1 - i)) & 1u; }

  std::string to_string() const;

  friend constexpr bool operator==(Genome, Genome) = default;
  friend constexpr auto operator<=>(Genome, Genome) = default;

 private:
  std::uint16_t bits_ = 0;
};

StrategyParams decode(Genome g);

/// Inverse of decode. Throws DomainError for parameters off the 8x8x8 lattice.
Genome encode(const StrategyParams& params);

/// Each locus taken from p1 or p2 with probability 1/2.
Genome uniform_crossover(Genome p1, Genome p2, Rng& rng);

/// Each bit flipped independently with probability m.
Genome mutate(Genome g, double m, Rng& rng);

/// Squared-advantage roulette weights: (U_k - U_min)^2 + epsilon / K, where
/// K is the number of candidates, normalized to sum to one.
std::vector<double> selection_probabilities(std::span<const double> fitness, double epsilon);

/// Draws a candidate index according to selection_probabilities.
/// Throws StructureError when no candidates are given.
std::size_t select_parent(std::span<const double> fitness, double epsilon, Rng& rng);

}  // namespace snsmq
