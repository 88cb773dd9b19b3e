#ifndef KCC_TABULAR_HPP
#define KCC_TABULAR_HPP

#include <cstddef>
#include <span>
#include <vector>

namespace kcc {

// Hard cap on exact enumeration (table entries, and entries of pair tables).
inline constexpr std::size_t kEnumerationCap = std::size_t{1} << 24;

// Mixed-radix row-major codec for discrete states. Variable 0 is the most
// significant digit: for cardinalities (K_1..K_p) the state (x_1..x_p) maps
// to ((x_1 K_2 + x_2) K_3 + ...) so tables are portable across
// implementations that agree on this layout.
class StateCodec {
 public:
  StateCodec() = default;
  explicit StateCodec(std::vector<int> cardinalities);

  int num_vars() const { return static_cast<int>(cards_.size()); }
  int cardinality(int j) const { return cards_[static_cast<std::size_t>(j)]; }
  const std::vector<int>& cardinalities() const { return cards_; }
  std::size_t num_states() const { return num_states_; }

  // Stride of digit j in the packed index.
  std::size_t place(int j) const { return places_[static_cast<std::size_t>(j)]; }

  int digit(std::size_t state, int j) const {
    return static_cast<int>((state / place(j)) % static_cast<std::size_t>(cardinality(j)));
  }

  std::size_t with_digit(std::size_t state, int j, int value) const {
    return state + (static_cast<std::size_t>(value) - static_cast<std::size_t>(digit(state, j))) * place(j);
  }

  std::size_t encode(std::span<const int> x) const;
  void decode(std::size_t state, std::span<int> x) const;
  std::vector<int> decode(std::size_t state) const;

  bool operator==(const StateCodec& other) const { return cards_ == other.cards_; }

 private:
  std::vector<int> cards_;
  std::vector<std::size_t> places_;
  std::size_t num_states_ = 0;
};

// Exact probability table over the states of a StateCodec.
class TabularDistribution {
 public:
  TabularDistribution(std::vector<int> cardinalities, std::vector<double> probs);
  TabularDistribution(StateCodec codec, std::vector<double> probs);

  const StateCodec& codec() const { return codec_; }
  int num_vars() const { return codec_.num_vars(); }
  std::size_t num_states() const { return codec_.num_states(); }
  std::span<const double> probs() const { return probs_; }
  double prob(std::size_t state) const { return probs_[state]; }
  bool in_support(std::size_t state) const { return probs_[state] > 0.0; }
  std::size_t support_size() const;

 private:
  void validate() const;

  StateCodec codec_;
  std::vector<double> probs_;
};

// Renormalized law of X_j given the other coordinates of `state` (the digit
// at j itself is ignored). SupportError if the conditioning event has zero
// mass.
std::vector<double> conditional_law(const TabularDistribution& dist, int j, std::size_t state);
std::vector<double> conditional_law(const TabularDistribution& dist, int j, std::span<const int> x);

// rho * cases + (1 - rho) * controls, entrywise.
TabularDistribution mix(const TabularDistribution& controls, const TabularDistribution& cases,
                        double rho);

// Half the L1 distance between two tables on a common codec.
double tv_distance(const TabularDistribution& a, const TabularDistribution& b);

}  // namespace kcc

#endif
